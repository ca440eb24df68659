//! Finite-rank models of `K^0(X) ⊗ R`: Frobenius algebras with Adams
//! operations, split bundles and multiplicative characteristic classes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_group::GeneratorTable;
use crate::graded::{GradedPoly, GradedPolyJson, Ring};
use crate::scalar::{binomial, invert_rational, rat, rat_int, solve_scalar, Rational, Scalar};
use crate::series::Series;

/// Adams operations are tabulated for `1 ≤ r ≤ ADAMS_RANGE` on built-in models.
pub const ADAMS_RANGE: u32 = 12;

/// A commutative Frobenius algebra over `Q` with a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    name: String,
    labels: Vec<String>,
    /// `structure[i][j][k]`: coefficient of `e_k` in `e_i e_j`.
    structure: Vec<Vec<Vec<Rational>>>,
    unit: Vec<Rational>,
    chi: Vec<Rational>,
    /// `adams[r][i]`: coordinates of `Ψ^r(e_i)`.
    adams: BTreeMap<u32, Vec<Vec<Rational>>>,
    generators: BTreeMap<String, Vec<Rational>>,
}

/// An element of `A ⊗ R`, coordinates in the basis of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    coords: Vec<GradedPoly>,
}

impl Element {
    pub fn coords(&self) -> &[GradedPoly] {
        &self.coords
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.coords[0].ring()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(GradedPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&GradedPoly) -> GradedPoly) -> Element {
        Element {
            coords: self.coords.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&GradedPoly) -> Result<GradedPoly>) -> Result<Element> {
        Ok(Element {
            coords: self.coords.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn from_coords(coords: Vec<GradedPoly>) -> Element {
        assert!(!coords.is_empty(), "elements need at least one coordinate");
        Element { coords }
    }

    pub fn add(&self, other: &Element) -> Element {
        Element {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Element {
        self.map(|c| -c)
    }

    pub fn scale(&self, c: &GradedPoly) -> Element {
        self.map(|x| x * c)
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Element {
        self.map(|x| x.scale(c))
    }

    pub fn scale_rational(&self, c: &Rational) -> Element {
        self.map(|x| x.scale_rational(c))
    }

    /// Re-express the coefficients in another ring (by generator name).
    pub fn embed(&self, ring: &Arc<Ring>) -> Result<Element> {
        self.try_map(|c| c.embed(ring))
    }

    pub fn to_json(&self) -> Vec<GradedPolyJson> {
        self.coords.iter().map(GradedPoly::to_json).collect()
    }

    pub fn from_json(j: &[GradedPolyJson], ring: &Arc<Ring>) -> Result<Element> {
        if j.is_empty() {
            return Err(Error::Schema("element without coordinates".into()));
        }
        Ok(Element {
            coords: j
                .iter()
                .map(|c| GradedPoly::from_json_in(c, ring))
                .collect::<Result<_>>()?,
        })
    }
}

fn unit_vector(n: usize, i: usize) -> Vec<Rational> {
    (0..n)
        .map(|j| if i == j { Rational::one() } else { Rational::zero() })
        .collect()
}

impl Algebra {
    pub fn point() -> Algebra {
        let one = vec![Rational::one()];
        Algebra {
            name: "point".into(),
            labels: vec!["1".into()],
            structure: vec![vec![one.clone()]],
            unit: one.clone(),
            chi: one.clone(),
            adams: (1..=ADAMS_RANGE).map(|r| (r, vec![one.clone()])).collect(),
            generators: BTreeMap::new(),
        }
    }

    /// `K^0(CP^n) = Q[L]/(L-1)^{n+1}` on the basis `1, L, …, L^n`, where `L = O(1)`.
    pub fn proj(n: usize) -> Result<Algebra> {
        if n == 0 {
            return Err(Error::UnsupportedModel("proj(0); use point".into()));
        }
        let rank = n + 1;
        let reduce = |m: i64| proj_power(n, m);
        let structure = (0..rank)
            .map(|i| (0..rank).map(|j| reduce((i + j) as i64)).collect())
            .collect();
        let chi = (0..rank)
            .map(|k| binomial((n + k) as i64, n as i64))
            .collect();
        let adams = (1..=ADAMS_RANGE)
            .map(|r| (r, (0..rank).map(|k| reduce(r as i64 * k as i64)).collect()))
            .collect();
        let labels = (0..rank)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "L".to_string(),
                _ => format!("L^{k}"),
            })
            .collect();
        let mut generators = BTreeMap::new();
        generators.insert("L".to_string(), unit_vector(rank, 1));
        Ok(Algebra {
            name: format!("proj({n})"),
            labels,
            structure,
            unit: unit_vector(rank, 0),
            chi,
            adams,
            generators,
        })
    }

    /// `point`, `proj(n)`, or a product such as `proj(1)xproj(2)`.
    pub fn builtin(name: &str) -> Result<Algebra> {
        let parts: Vec<&str> = name.split('x').map(str::trim).collect();
        if parts.len() > 1 {
            let mut acc = Self::builtin(parts[0])?;
            for p in &parts[1..] {
                acc = acc.tensor(&Self::builtin(p)?);
            }
            return Ok(acc);
        }
        let name = name.trim();
        if name == "point" {
            return Ok(Self::point());
        }
        if let Some(inner) = name.strip_prefix("proj(").and_then(|s| s.strip_suffix(')')) {
            let n: usize = inner
                .trim()
                .parse()
                .map_err(|_| Error::UnsupportedModel(name.to_string()))?;
            return Self::proj(n);
        }
        Err(Error::UnsupportedModel(name.to_string()))
    }

    /// Tensor product; clashing generator names get suffixes `1`, `2`.
    pub fn tensor(&self, other: &Algebra) -> Algebra {
        let (n1, n2) = (self.rank(), other.rank());
        let idx = |i: usize, j: usize| i * n2 + j;
        let mut structure = vec![vec![vec![Rational::zero(); n1 * n2]; n1 * n2]; n1 * n2];
        for i in 0..n1 {
            for j in 0..n2 {
                for i2 in 0..n1 {
                    for j2 in 0..n2 {
                        let out = &mut structure[idx(i, j)][idx(i2, j2)];
                        for k in 0..n1 {
                            let a = &self.structure[i][i2][k];
                            if a.is_zero() {
                                continue;
                            }
                            for l in 0..n2 {
                                let b = &other.structure[j][j2][l];
                                if !b.is_zero() {
                                    out[idx(k, l)] += a * b;
                                }
                            }
                        }
                    }
                }
            }
        }
        let kron = |a: &[Rational], b: &[Rational]| -> Vec<Rational> {
            a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
        };
        let adams = self
            .adams
            .iter()
            .filter_map(|(r, m1)| {
                other.adams.get(r).map(|m2| {
                    let rows = (0..n1)
                        .flat_map(|i| (0..n2).map(move |j| (i, j)))
                        .map(|(i, j)| kron(&m1[i], &m2[j]))
                        .collect();
                    (*r, rows)
                })
            })
            .collect();
        let clash = self.generators.keys().any(|k| other.generators.contains_key(k));
        let rename = |name: &str, suffix: &str| {
            if clash {
                format!("{name}{suffix}")
            } else {
                name.to_string()
            }
        };
        let mut generators = BTreeMap::new();
        for (k, v) in &self.generators {
            generators.insert(rename(k, "1"), kron(v, &other.unit));
        }
        for (k, v) in &other.generators {
            generators.insert(rename(k, "2"), kron(&self.unit, v));
        }
        let label = |a: &str, b: &str, sa: &str, sb: &str| match (a, b) {
            ("1", "1") => "1".to_string(),
            (a, "1") => suffix_label(a, sa),
            ("1", b) => suffix_label(b, sb),
            (a, b) => format!("{}*{}", suffix_label(a, sa), suffix_label(b, sb)),
        };
        let (sa, sb) = if clash { ("1", "2") } else { ("", "") };
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| label(a, b, sa, sb)))
            .collect();
        Algebra {
            name: format!("{}x{}", self.name, other.name),
            labels,
            structure,
            unit: kron(&self.unit, &other.unit),
            chi: kron(&self.chi, &other.chi),
            adams,
            generators,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &String> {
        self.generators.keys()
    }

    pub fn chi_table(&self) -> &[Rational] {
        &self.chi
    }

    pub fn adams_table(&self, r: u32) -> Option<&Vec<Vec<Rational>>> {
        self.adams.get(&r)
    }

    pub fn max_adams(&self) -> u32 {
        self.adams.keys().copied().max().unwrap_or(1).max(1)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[i][j][k]
    }

    pub fn element(&self, coords: &[Rational], ring: &Arc<Ring>) -> Element {
        assert_eq!(coords.len(), self.rank(), "coordinate count");
        Element {
            coords: coords
                .iter()
                .map(|c| GradedPoly::from_rational(ring, c.clone()))
                .collect(),
        }
    }

    pub fn zero(&self, ring: &Arc<Ring>) -> Element {
        Element {
            coords: vec![GradedPoly::zero(ring); self.rank()],
        }
    }

    pub fn one(&self, ring: &Arc<Ring>) -> Element {
        self.element(&self.unit, ring)
    }

    pub fn constant(&self, c: &GradedPoly) -> Element {
        self.one(c.ring()).scale(c)
    }

    pub fn basis_element(&self, i: usize, ring: &Arc<Ring>) -> Element {
        self.element(&unit_vector(self.rank(), i), ring)
    }

    /// A named generator such as `L`, or `L1`, `L2` on products.
    pub fn named(&self, name: &str, ring: &Arc<Ring>) -> Result<Element> {
        self.generators
            .get(name)
            .map(|v| self.element(v, ring))
            .ok_or_else(|| Error::Unsupported(format!("model {} has no generator `{name}`", self.name)))
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        if x.coords.len() != self.rank() {
            return Err(Error::IncompatibleAlgebra(format!(
                "element with {} coordinates in a rank-{} model",
                x.coords.len(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let n = self.rank();
        let ring = a.ring().clone();
        let mut out = vec![GradedPoly::zero(&ring); n];
        for i in 0..n {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b.coords[j].is_zero() {
                    continue;
                }
                let p = &a.coords[i] * &b.coords[j];
                if p.is_zero() {
                    continue;
                }
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &p.scale_rational(c);
                    }
                }
            }
        }
        Element { coords: out }
    }

    pub fn pow(&self, x: &Element, e: i64) -> Result<Element> {
        let base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut acc = self.one(x.ring());
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// Inverse in `A ⊗ R`: invert the part with constant coefficients by a
    /// linear solve, then correct by a terminating geometric series.
    pub fn inv(&self, x: &Element) -> Result<Element> {
        let n = self.rank();
        let ring = x.ring().clone();
        let x0: Vec<Scalar> = x.coords.iter().map(GradedPoly::constant_term).collect();
        let mut m = vec![vec![Scalar::zero(); n]; n];
        for (i, xi) in x0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    let c = &self.structure[i][j][k];
                    if !c.is_zero() {
                        m[k][j] = &m[k][j] + &(xi * &Scalar::from_rational(c.clone()));
                    }
                }
            }
        }
        let mut rhs: Vec<Scalar> = self.unit.iter().map(|c| Scalar::from_rational(c.clone())).collect();
        let z = solve_scalar(&mut m, &mut rhs).ok_or_else(|| Error::NonUnit("element is not invertible".into()))?;
        let z = Element {
            coords: z.into_iter().map(|c| GradedPoly::constant(&ring, c)).collect(),
        };
        let one = self.one(&ring);
        let nu = one.sub(&self.mul(&z, x));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 0..self.nilpotency_bound(&ring) {
            power = self.mul(&power, &nu);
            if power.is_zero() {
                return Ok(self.mul(&acc, &z));
            }
            acc = acc.add(&power);
        }
        Err(Error::NonUnit("inverse correction does not terminate".into()))
    }

    fn nilpotency_bound(&self, ring: &Arc<Ring>) -> usize {
        (self.rank() + 1) * (ring.truncation() as usize + ring.aux_order() as usize + 2)
    }

    /// `exp(x)` for nilpotent `x`.
    pub fn exp_nilpotent(&self, x: &Element) -> Result<Element> {
        let ring = x.ring().clone();
        let mut acc = self.one(&ring);
        let mut term = acc.clone();
        for k in 1..=self.nilpotency_bound(&ring) {
            term = self.mul(&term, x).scale_rational(&rat(1, k as i64));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term);
        }
        Err(Error::ExpLogDomain("exponential of a non-nilpotent element".into()))
    }

    /// `Σ s_k x^k`; requires `x^{order+1} = 0` so the unknown tail is irrelevant.
    pub fn eval_series(&self, s: &Series, x: &Element) -> Result<Element> {
        if s.lowest() < 0 && (s.lowest()..0).any(|k| !s.coeff(k).is_zero()) {
            return Err(Error::CompositionDomain("series with negative powers".into()));
        }
        let order = s.order();
        if order < 0 || !self.pow(x, order + 1)?.is_zero() {
            return Err(Error::Precision(format!(
                "series of order {order} evaluated at an element that is not nilpotent enough"
            )));
        }
        let mut acc = self.zero(x.ring());
        for k in (0..=order).rev() {
            acc = self.mul(&acc, x).add(&self.constant(&s.coeff(k).embed(x.ring())?));
        }
        Ok(acc)
    }

    pub fn chi(&self, x: &Element) -> GradedPoly {
        let mut acc = GradedPoly::zero(x.ring());
        for (c, w) in x.coords.iter().zip(&self.chi) {
            if !w.is_zero() {
                acc = &acc + &c.scale_rational(w);
            }
        }
        acc
    }

    pub fn pairing(&self, a: &Element, b: &Element) -> GradedPoly {
        self.chi(&self.mul(a, b))
    }

    /// `G_ij = χ(e_i e_j)`.
    pub fn gram(&self) -> Vec<Vec<Rational>> {
        let n = self.rank();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        self.structure[i][j]
                            .iter()
                            .zip(&self.chi)
                            .map(|(c, w)| c * w)
                            .fold(Rational::zero(), |a, b| a + b)
                    })
                    .collect()
            })
            .collect()
    }

    /// Coordinates of the dual basis `φ^α` with `χ(e_α φ^β) = δ`.
    pub fn dual_basis(&self) -> Result<Vec<Vec<Rational>>> {
        invert_rational(&self.gram()).ok_or_else(|| Error::Duality(format!("Gram matrix of {} is singular", self.name)))
    }

    /// `Σ_α φ^α ⊗ φ_α` for the basis whose rows are `basis`, as a matrix in
    /// the standard basis.
    pub fn casimir(&self, basis: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
        let n = self.rank();
        if basis.len() != n {
            return Err(Error::Duality("basis has the wrong size".into()));
        }
        let g = self.gram();
        let gb: Vec<Vec<Rational>> = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| {
                        let mut s = Rational::zero();
                        for i in 0..n {
                            for j in 0..n {
                                s += &a[i] * &g[i][j] * &b[j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        let gi = invert_rational(&gb).ok_or_else(|| Error::Duality("basis is degenerate".into()))?;
        let duals: Vec<Vec<Rational>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|i| (0..n).fold(Rational::zero(), |s, b| s + &gi[a][b] * &basis[b][i]))
                    .collect()
            })
            .collect();
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |s, a| s + &duals[a][i] * &basis[a][j]))
                    .collect()
            })
            .collect())
    }

    /// `Ψ^r` using the stored table on the basis and `y ↦ y^r` on coefficients.
    pub fn adams(&self, r: u32, x: &Element) -> Result<Element> {
        if r == 1 {
            return Ok(x.clone());
        }
        let table = self
            .adams
            .get(&r)
            .ok_or_else(|| Error::AdamsRange(format!("Ψ^{r} is not tabulated for {}", self.name)))?;
        let ring = x.ring().clone();
        let mut out = vec![GradedPoly::zero(&ring); self.rank()];
        for (i, c) in x.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cr = c.adams(r)?;
            for (k, m) in table[i].iter().enumerate() {
                if !m.is_zero() {
                    out[k] = &out[k] + &cr.scale_rational(m);
                }
            }
        }
        Ok(Element { coords: out })
    }

    /// Check commutativity, associativity, the unit, `Ψ^1 = id` and
    /// multiplicativity of the stored Adams operations.
    pub fn validate(&self) -> Result<()> {
        let n = self.rank();
        let bad = |m: &str| Err(Error::Schema(format!("{}: {m}", self.name)));
        if self.structure.len() != n
            || self.structure.iter().any(|row| row.len() != n || row.iter().any(|v| v.len() != n))
            || self.chi.len() != n
            || self.unit.len() != n
        {
            return bad("table dimensions do not match the basis");
        }
        let q = Ring::rational();
        let e: Vec<Element> = (0..n).map(|i| self.basis_element(i, &q)).collect();
        let one = self.one(&q);
        for i in 0..n {
            if self.mul(&one, &e[i]) != e[i] {
                return bad("unit does not act as identity");
            }
            for j in 0..n {
                if self.structure[i][j] != self.structure[j][i] {
                    return bad("multiplication is not commutative");
                }
                for k in 0..n {
                    let l = self.mul(&self.mul(&e[i], &e[j]), &e[k]);
                    let r = self.mul(&e[i], &self.mul(&e[j], &e[k]));
                    if l != r {
                        return bad("multiplication is not associative");
                    }
                }
            }
        }
        for (&r, table) in &self.adams {
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return bad("Adams table has the wrong shape");
            }
            if r == 1 && (0..n).any(|i| table[i] != unit_vector(n, i)) {
                return bad("Ψ^1 is not the identity");
            }
            for i in 0..n {
                for j in 0..n {
                    let lhs = self.adams(r, &self.mul(&e[i], &e[j]))?;
                    let rhs = self.mul(&self.adams(r, &e[i])?, &self.adams(r, &e[j])?);
                    if lhs != rhs {
                        return bad("Adams operation is not multiplicative");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> AlgebraJson {
        let rj = |r: &Rational| GradedPoly::from_rational(&Ring::rational(), r.clone()).to_json();
        let vj = |v: &[Rational]| v.iter().map(rj).collect::<Vec<_>>();
        AlgebraJson {
            name: Some(self.name.clone()),
            basis: self.labels.clone(),
            structure: self
                .structure
                .iter()
                .map(|row| row.iter().map(|v| vj(v)).collect())
                .collect(),
            unit: Some(vj(&self.unit)),
            chi: vj(&self.chi),
            adams: self
                .adams
                .iter()
                .map(|(r, m)| (r.to_string(), m.iter().map(|v| vj(v)).collect()))
                .collect(),
            generators: self.generators.iter().map(|(k, v)| (k.clone(), vj(v))).collect(),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Algebra> {
        let pr = |p: &GradedPolyJson| -> Result<Rational> {
            let g = GradedPoly::from_json(p)?;
            if !g.is_constant() {
                return Err(Error::Schema("algebra tables must hold rational constants".into()));
            }
            g.constant_term()
                .as_rational()
                .cloned()
                .ok_or_else(|| Error::Schema("algebra tables must hold rational constants".into()))
        };
        let pv = |v: &[GradedPolyJson]| v.iter().map(pr).collect::<Result<Vec<_>>>();
        let n = j.basis.len();
        if n == 0 {
            return Err(Error::Schema("empty basis".into()));
        }
        let structure = j
            .structure
            .iter()
            .map(|row| row.iter().map(|v| pv(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut adams = BTreeMap::new();
        for (k, m) in &j.adams {
            let r: u32 = k
                .parse()
                .ok()
                .filter(|&r| r >= 1)
                .ok_or_else(|| Error::Schema(format!("Adams key `{k}`")))?;
            adams.insert(r, m.iter().map(|v| pv(v)).collect::<Result<Vec<_>>>()?);
        }
        adams.entry(1).or_insert_with(|| (0..n).map(|i| unit_vector(n, i)).collect());
        let a = Algebra {
            name: j.name.clone().unwrap_or_else(|| "custom".into()),
            labels: j.basis.clone(),
            structure,
            unit: match &j.unit {
                Some(u) => pv(u)?,
                None => unit_vector(n, 0),
            },
            chi: pv(&j.chi)?,
            adams,
            generators: j
                .generators
                .iter()
                .map(|(k, v)| Ok((k.clone(), pv(v)?)))
                .collect::<Result<_>>()?,
        };
        if a.generators.values().any(|v| v.len() != n) {
            return Err(Error::Schema("generator coordinates have the wrong length".into()));
        }
        a.validate()?;
        Ok(a)
    }
}

fn suffix_label(label: &str, suffix: &str) -> String {
    if suffix.is_empty() {
        return label.to_string();
    }
    match label.split_once('^') {
        Some((base, e)) => format!("{base}{suffix}^{e}"),
        None => format!("{label}{suffix}"),
    }
}

/// `L^m` in `Q[L]/(L-1)^{n+1}` on the basis `L^0..L^n`, for any integer `m`.
fn proj_power(n: usize, m: i64) -> Vec<Rational> {
    // L^m = Σ_j C(m, j) (L-1)^j, and (L-1)^j = Σ_i C(j, i) (-1)^{j-i} L^i.
    let mut out = vec![Rational::zero(); n + 1];
    for j in 0..=n {
        let cj = binomial(m, j as i64);
        if cj.is_zero() {
            continue;
        }
        for (i, slot) in out.iter_mut().enumerate().take(j + 1) {
            let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
            *slot += &cj * binomial(j as i64, i as i64) * rat_int(sign);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<String>,
    pub structure: Vec<Vec<Vec<GradedPolyJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<GradedPolyJson>>,
    pub chi: Vec<GradedPolyJson>,
    #[serde(default)]
    pub adams: BTreeMap<String, Vec<Vec<GradedPolyJson>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub generators: BTreeMap<String, Vec<GradedPolyJson>>,
}

/// One summand `sign · multiplicity · L` of a split bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleTerm {
    pub line: Element,
    pub multiplicity: u32,
    pub sign: i32,
}

/// A virtual bundle written as a signed sum of lines.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SplitBundle {
    pub terms: Vec<BundleTerm>,
}

impl SplitBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, line: Element, multiplicity: u32, sign: i32) -> Self {
        self.terms.push(BundleTerm {
            line,
            multiplicity,
            sign: sign.signum(),
        });
        self
    }

    pub fn lines(lines: &[Element]) -> Self {
        lines.iter().fold(Self::new(), |b, l| b.with(l.clone(), 1, 1))
    }

    /// Euler-sequence surrogate `(n+1)·L - 1` for the tangent bundle of `CP^n`.
    pub fn tangent_proj(alg: &Algebra, ring: &Arc<Ring>) -> Result<Self> {
        let n = alg.rank() as u32 - 1;
        Ok(Self::new()
            .with(alg.named("L", ring)?, n + 1, 1)
            .with(alg.one(ring), 1, -1))
    }

    pub fn rank(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.sign as i64 * t.multiplicity as i64)
            .sum()
    }

    pub fn direct_sum(&self, other: &SplitBundle) -> SplitBundle {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SplitBundle { terms }
    }

    pub fn class(&self, alg: &Algebra) -> Result<Element> {
        let ring = self.ring()?;
        Ok(self.terms.iter().fold(alg.zero(&ring), |acc, t| {
            acc.add(&t.line.scale_rational(&rat_int(t.sign as i64 * t.multiplicity as i64)))
        }))
    }

    /// `V*`, sending each line to its inverse.
    pub fn dual(&self, alg: &Algebra) -> Result<SplitBundle> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let inv = alg
                    .inv(&t.line)
                    .map_err(|_| Error::NonInvertibleLine(format!("{:?}", t.line.coords)))?;
                Ok(BundleTerm {
                    line: inv,
                    multiplicity: t.multiplicity,
                    sign: t.sign,
                })
            })
            .collect::<Result<_>>()?;
        Ok(SplitBundle { terms })
    }

    fn ring(&self) -> Result<Arc<Ring>> {
        self.terms
            .first()
            .map(|t| t.line.ring().clone())
            .ok_or_else(|| Error::Unsupported("empty bundle has no coefficient ring".into()))
    }
}

/// A multiplicative class `V ↦ t0^{rk V} exp(Σ_k (c_k/k)(Ψ^k(V*) - rk V))`,
/// whose value on a line `L` is the series `t/u(t)` at `t = 1 - L^{-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultClass {
    pub t0: GradedPoly,
    pub log_t0: Option<GradedPoly>,
    /// `c_0, c_1, …, c_N`.
    pub c: Vec<GradedPoly>,
    pub line_series: Series,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    LineProduct,
    AdamsExponential,
}

impl MultClass {
    pub fn from_table(t: &GeneratorTable) -> Result<MultClass> {
        Ok(MultClass {
            t0: t.t0.clone(),
            log_t0: t.log_t0.clone(),
            c: t.c.clone(),
            line_series: t.line_series()?,
        })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.t0.ring()
    }

    pub fn eval(&self, alg: &Algebra, v: &SplitBundle, mode: EvalMode) -> Result<Element> {
        let ring = self.ring().clone();
        let v = SplitBundle {
            terms: v
                .terms
                .iter()
                .map(|t| {
                    Ok(BundleTerm {
                        line: t.line.embed(&ring)?,
                        ..t.clone()
                    })
                })
                .collect::<Result<_>>()?,
        };
        match mode {
            EvalMode::LineProduct => {
                let mut acc = alg.one(&ring);
                for t in &v.terms {
                    let inv = alg
                        .inv(&t.line)
                        .map_err(|_| Error::NonInvertibleLine(format!("{:?}", t.line.coords)))?;
                    let x = alg.one(&ring).sub(&inv);
                    let val = alg.eval_series(&self.line_series, &x)?;
                    acc = alg.mul(&acc, &alg.pow(&val, t.sign as i64 * t.multiplicity as i64)?);
                }
                Ok(acc)
            }
            EvalMode::AdamsExponential => {
                let r = v.rank();
                let dual = if v.terms.is_empty() {
                    alg.zero(&ring)
                } else {
                    v.dual(alg)?.class(alg)?
                };
                let rank_el = alg.one(&ring).scale_rational(&rat_int(r));
                let mut x = alg.zero(&ring);
                for (k, ck) in self.c.iter().enumerate().skip(1) {
                    if ck.is_zero() {
                        continue;
                    }
                    let psi = alg.adams(k as u32, &dual)?.sub(&rank_el);
                    x = x.add(&psi.scale(&ck.scale_rational(&rat(1, k as i64))));
                }
                let scale = if r >= 0 {
                    self.t0.pow(r as u32)
                } else {
                    self.t0.inv()?.pow((-r) as u32)
                };
                Ok(alg.exp_nilpotent(&x)?.scale(&scale))
            }
        }
    }
}

/// Newton polynomial `N_r(e_1, …, e_r)` evaluated on exterior powers.
pub fn newton_adams(alg: &Algebra, lambdas: &[Element], r: usize) -> Result<Element> {
    if r == 0 || lambdas.len() < r {
        return Err(Error::InsufficientExteriorPowers {
            needed: r.max(1),
            got: lambdas.len(),
        });
    }
    let mut p: Vec<Element> = Vec::with_capacity(r);
    for k in 1..=r {
        let mut acc = lambdas[k - 1].scale_rational(&rat_int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let term = alg.mul(&lambdas[i - 1], &p[k - i - 1]);
            acc = if i % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
        }
        p.push(acc);
    }
    Ok(p.pop().expect("r ≥ 1"))
}

/// Elementary symmetric functions `e_1..e_m` of a list of lines.
pub fn exterior_powers(alg: &Algebra, lines: &[Element]) -> Vec<Element> {
    let Some(first) = lines.first() else {
        return Vec::new();
    };
    let ring = first.ring().clone();
    let mut e = vec![alg.one(&ring)];
    for l in lines {
        let mut next = e.clone();
        next.push(alg.zero(&ring));
        for k in 1..next.len() {
            next[k] = next[k].add(&alg.mul(&e[k - 1], l));
        }
        e = next;
    }
    e.remove(0);
    e
}

/// `χ(X; v)`.
pub fn pushforward_chi(alg: &Algebra, v: &Element) -> GradedPoly {
    alg.chi(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{generator_table, Genus};

    #[test]
    fn chi_tables() {
        let q = Ring::rational();
        assert_eq!(Algebra::point().chi(&Algebra::point().one(&q)), GradedPoly::one(&q));
        let p1 = Algebra::proj(1).unwrap();
        assert_eq!(p1.chi(&p1.named("L", &q).unwrap()), GradedPoly::from_int(&q, 2));
        let p2 = Algebra::proj(2).unwrap();
        assert_eq!(p2.chi(&p2.named("L", &q).unwrap()), GradedPoly::from_int(&q, 3));
        assert_eq!(p1.gram(), vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(3, 1)]]);
        assert!(matches!(Algebra::builtin("grassmannian"), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn negative_powers_reduce() {
        let q = Ring::rational();
        let p = Algebra::proj(3).unwrap();
        let l = p.named("L", &q).unwrap();
        let linv = p.inv(&l).unwrap();
        assert_eq!(p.mul(&l, &linv), p.one(&q));
        assert_eq!(p.element(&proj_power(3, -1), &q), linv);
        assert_eq!(p.chi(&p.pow(&l, -2).unwrap()), GradedPoly::zero(&q));
    }

    #[test]
    fn adams_on_proj_and_coefficients() {
        let h = Ring::hirzebruch(4);
        let y = GradedPoly::generator(&h, "y").unwrap();
        let p = Algebra::proj(1).unwrap();
        let l = p.named("L", &h).unwrap();
        assert_eq!(p.adams(2, &l).unwrap(), p.mul(&l, &l));
        assert_eq!(p.adams(2, &p.constant(&y)).unwrap(), p.constant(&y.pow(2)));
        assert!(matches!(p.adams(13, &l), Err(Error::AdamsRange(_))));
        p.validate().unwrap();
        Algebra::builtin("proj(1)xproj(2)").unwrap().validate().unwrap();
    }

    #[test]
    fn casimir_is_basis_independent() {
        let p = Algebra::proj(2).unwrap();
        let std: Vec<Vec<Rational>> = (0..3).map(|i| unit_vector(3, i)).collect();
        let alt: Vec<Vec<Rational>> = (0..3)
            .map(|k| {
                // (1 - L)^k
                (0..3)
                    .map(|i| if i <= k { binomial(k as i64, i as i64) * rat_int(if i % 2 == 0 { 1 } else { -1 }) } else { rat(0, 1) })
                    .collect()
            })
            .collect();
        assert_eq!(p.casimir(&std).unwrap(), p.casimir(&alt).unwrap());
        assert_eq!(p.casimir(&std).unwrap(), p.dual_basis().unwrap());
    }

    #[test]
    fn newton_identities() {
        let q = Ring::rational();
        let p = Algebra::builtin("proj(1)xproj(2)").unwrap();
        let l1 = p.named("L1", &q).unwrap();
        let l2 = p.named("L2", &q).unwrap();
        let lam = exterior_powers(&p, &[l1.clone(), l2.clone()]);
        let n2 = newton_adams(&p, &lam, 2).unwrap();
        assert_eq!(n2, p.mul(&l1, &l1).add(&p.mul(&l2, &l2)));
        assert!(matches!(
            newton_adams(&p, &lam, 3),
            Err(Error::InsufficientExteriorPowers { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn hirzebruch_class_on_lines() {
        let t = generator_table(Some(Genus::Hirzebruch), 4, 4).unwrap();
        let c = MultClass::from_table(&t).unwrap();
        let h = t.ring.clone();
        let y = GradedPoly::generator(&h, "y").unwrap();
        let p = Algebra::proj(2).unwrap();
        let l = p.named("L", &h).unwrap();
        let expected = p.one(&h).sub(&p.inv(&l).unwrap().scale(&y));
        for mode in [EvalMode::LineProduct, EvalMode::AdamsExponential] {
            let v = SplitBundle::lines(&[l.clone()]);
            assert_eq!(c.eval(&p, &v, mode).unwrap(), expected);
            let triv = SplitBundle::lines(&[p.one(&h)]);
            assert_eq!(c.eval(&p, &triv, mode).unwrap(), p.constant(&(&GradedPoly::one(&h) - &y)));
        }
    }

    #[test]
    fn chi_y_of_projective_spaces() {
        let t = generator_table(Some(Genus::Hirzebruch), 4, 4).unwrap();
        let c = MultClass::from_table(&t).unwrap();
        let h = t.ring.clone();
        let y = GradedPoly::generator(&h, "y").unwrap();
        for n in 1..=3 {
            let p = Algebra::proj(n).unwrap();
            let tx = SplitBundle::tangent_proj(&p, &h).unwrap();
            let v = c.eval(&p, &tx, EvalMode::AdamsExponential).unwrap();
            let expect = (0..=n as u32).fold(GradedPoly::zero(&h), |a, k| &a + &y.pow(k));
            assert_eq!(pushforward_chi(&p, &v), expect);
        }
    }

    #[test]
    fn json_round_trip() {
        let a = Algebra::builtin("proj(1)xproj(1)").unwrap();
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back = Algebra::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, a);
    }
}
