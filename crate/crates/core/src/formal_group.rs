//! Formal group laws over the rational cobordism ring and their
//! multiplicative K-theoretic orientations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedPoly, GradedPolyJson, Monomial, Ring};
use crate::scalar::{binomial, rat, rat_int};
use crate::series::Series;

/// A formal group law given by its logarithm `z(u)` and exponential `u(z)`,
/// both stored as series in `u` to the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalGroupLaw {
    log: Series,
    exp: Series,
}

impl FormalGroupLaw {
    pub fn from_log(log: Series) -> Result<Self> {
        if log.lowest() < 0 || !log.coeff(0).is_zero() {
            return Err(Error::Unsupported("logarithm must have zero constant term".into()));
        }
        if !log.coeff(1).constant_term().is_one() || log.coeff(1).num_terms() != 1 {
            return Err(Error::Unsupported("logarithm must have leading coefficient 1".into()));
        }
        let exp = log.revert()?;
        Ok(FormalGroupLaw { log, exp })
    }

    /// Pair a logarithm with an exponential without checking that they are
    /// inverse. Used to probe the group-law axioms on deliberately broken input.
    pub fn from_log_exp(log: Series, exp: Series) -> Self {
        FormalGroupLaw { log, exp }
    }

    /// `z(u) = u + Σ p_n u^{n+1}/(n+1)` over `Q[p_1..p_{order-1}]` truncated at weight `d`.
    pub fn mishchenko(order: u32, d: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Unsupported("order must be at least 2".into()));
        }
        let ring = Ring::cobordism(order - 1, d);
        let log = Series::from_fn("u", &ring, 0, order as i64, |n| match n {
            0 => GradedPoly::zero(&ring),
            1 => GradedPoly::one(&ring),
            _ => GradedPoly::generator(&ring, &format!("p{}", n - 1))
                .expect("generator in range")
                .scale_rational(&rat(1, n)),
        });
        Self::from_log(log)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.log.ring()
    }

    pub fn order(&self) -> i64 {
        self.log.order()
    }

    pub fn log(&self) -> &Series {
        &self.log
    }

    pub fn exp(&self) -> &Series {
        &self.exp
    }

    /// Apply a coefficient homomorphism to the logarithm.
    pub fn specialize(&self, target: &Arc<Ring>, phi: &HashMap<String, GradedPoly>) -> Result<Self> {
        let coeffs = self
            .log
            .coeffs()
            .iter()
            .map(|c| c.specialize(target, phi))
            .collect::<Result<Vec<_>>>()?;
        Self::from_log(Series::new("u", target, self.log.lowest(), coeffs))
    }

    /// `ι(u) = exp(-log u)`, so that `F(u, ι(u)) = 0`.
    pub fn inverse_series(&self) -> Result<Series> {
        self.exp.compose(&self.log.neg())
    }

    /// `F(x1, x2) = exp(log x1 + log x2)` as a polynomial of total degree ≤ order.
    pub fn group_law(&self) -> Result<GroupLaw> {
        let base = self.ring().clone();
        let n = self.order() as u32;
        let ring2 = base.extend_aux(&["x1", "x2"], n)?;
        let log2 = self.log.map_coeffs(|c| c.embed(&ring2).expect("base generators"));
        let log2 = Series::new("u", &ring2, log2.lowest(), log2.coeffs().to_vec());
        let exp2 = Series::new(
            "u",
            &ring2,
            self.exp.lowest(),
            self.exp
                .coeffs()
                .iter()
                .map(|c| c.embed(&ring2))
                .collect::<Result<Vec<_>>>()?,
        );
        let x1 = GradedPoly::generator(&ring2, "x1")?;
        let x2 = GradedPoly::generator(&ring2, "x2")?;
        let sum = &log2.eval_at(&x1)? + &log2.eval_at(&x2)?;
        let poly = exp2.eval_at(&sum)?;

        let nb = base.generators().len() as u16;
        let mut coeffs: BTreeMap<(u32, u32), GradedPoly> = BTreeMap::new();
        for (m, c) in poly.terms() {
            let (mut a, mut b) = (0, 0);
            let mut rest = Vec::new();
            for &(i, e) in m.entries() {
                if i == nb {
                    a = e;
                } else if i == nb + 1 {
                    b = e;
                } else {
                    rest.push((i, e));
                }
            }
            let term = GradedPoly::monomial(&base, Monomial::from_entries(rest), c.clone());
            let slot = coeffs.entry((a, b)).or_insert_with(|| GradedPoly::zero(&base));
            *slot = &*slot + &term;
        }
        Ok(GroupLaw {
            base,
            order: n,
            poly,
            coeffs,
        })
    }
}

/// The two-variable law `F(x1, x2) = Σ F_ab x1^a x2^b` truncated at `a + b ≤ order`.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    base: Arc<Ring>,
    order: u32,
    poly: GradedPoly,
    coeffs: BTreeMap<(u32, u32), GradedPoly>,
}

impl GroupLaw {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `F` as an element of the base ring extended by `x1, x2`.
    pub fn poly(&self) -> &GradedPoly {
        &self.poly
    }

    pub fn coefficient(&self, a: u32, b: u32) -> GradedPoly {
        self.coeffs
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| GradedPoly::zero(&self.base))
    }

    /// Substitute ring elements for `x1, x2`. The target ring must contain
    /// the base generators by name; its own truncation bounds the result.
    pub fn eval_poly(&self, x: &GradedPoly, y: &GradedPoly) -> Result<GradedPoly> {
        x.check_ring(y)?;
        let ring = x.ring();
        let n = self.order as usize;
        let powers = |p: &GradedPoly| {
            let mut v = vec![GradedPoly::one(ring)];
            for k in 1..=n {
                let next = &v[k - 1] * p;
                v.push(next);
            }
            v
        };
        let (xp, yp) = (powers(x), powers(y));
        let mut out = GradedPoly::zero(ring);
        for (&(a, b), c) in &self.coeffs {
            let c = c.embed(ring)?;
            out = &out + &(&(&c * &xp[a as usize]) * &yp[b as usize]);
        }
        Ok(out)
    }

    /// `F(X(t), Y(t))` for power series without constant term.
    pub fn eval_series(&self, x: &Series, y: &Series) -> Result<Series> {
        for s in [x, y] {
            if s.lowest() < 0 || (s.order() >= 0 && !s.coeff(0).is_zero()) {
                return Err(Error::CompositionDomain("arguments must vanish at the origin".into()));
            }
        }
        let v = [x, y]
            .iter()
            .map(|s| s.valuation().unwrap_or(s.order() + 1))
            .min()
            .unwrap_or(1)
            .max(1);
        let order = (v * (self.order as i64 + 1) - 1).min(x.order()).min(y.order());
        let x = x.truncate(order);
        let y = y.truncate(order);
        let ring = x.ring().clone();
        let n = self.order as usize;
        let mut xp = vec![Series::one(x.var(), &ring, order)];
        let mut yp = vec![Series::one(x.var(), &ring, order)];
        for k in 1..=n {
            let nx = xp[k - 1].mul(&x)?.truncate(order);
            let ny = yp[k - 1].mul(&y)?.truncate(order);
            xp.push(nx);
            yp.push(ny);
        }
        let mut out = Series::zero(x.var(), &ring, order);
        for (&(a, b), c) in &self.coeffs {
            let c = c.embed(&ring)?;
            let term = xp[a as usize].mul(&yp[b as usize])?.scale(&c).truncate(order);
            out = out.add(&term)?;
        }
        Ok(out.truncate(order))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Genus {
    Additive,
    ClassicalK,
    Hirzebruch,
}

impl FromStr for Genus {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "additive" => Ok(Genus::Additive),
            "classical_K" | "classical_k" | "classical-k" => Ok(Genus::ClassicalK),
            "hirzebruch" => Ok(Genus::Hirzebruch),
            other => Err(Error::UnknownGenus(other.to_string())),
        }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Genus::Additive => "additive",
            Genus::ClassicalK => "classical_K",
            Genus::Hirzebruch => "hirzebruch",
        })
    }
}

/// Target ring, images of `p_1..p_n`, and the unit scale of a genus.
pub struct GenusMap {
    pub target: Arc<Ring>,
    pub phi: HashMap<String, GradedPoly>,
    pub t0: GradedPoly,
}

pub fn genus_map(genus: Genus, n: u32, d: u32) -> GenusMap {
    let target = match genus {
        Genus::Hirzebruch => Ring::hirzebruch(d),
        _ => Ring::new(Vec::new(), d).expect("empty ring"),
    };
    let mut phi = HashMap::new();
    for k in 1..=n {
        let img = match genus {
            Genus::Additive => GradedPoly::zero(&target),
            Genus::ClassicalK => GradedPoly::one(&target),
            Genus::Hirzebruch => {
                let y = GradedPoly::generator(&target, "y").expect("y");
                (0..=k).fold(GradedPoly::zero(&target), |acc, p| &acc + &y.pow(p))
            }
        };
        phi.insert(format!("p{k}"), img);
    }
    let t0 = match genus {
        Genus::Hirzebruch => {
            &GradedPoly::one(&target) - &GradedPoly::generator(&target, "y").expect("y")
        }
        _ => GradedPoly::one(&target),
    };
    GenusMap { target, phi, t0 }
}

/// Specialize a cobordism-valued law; returns the law and the genus's unit scale.
pub fn specialize_genus(genus: Genus, fgl: &FormalGroupLaw) -> Result<(FormalGroupLaw, GradedPoly)> {
    let n = fgl.ring().generators().len() as u32;
    let m = genus_map(genus, n, fgl.ring().truncation());
    Ok((fgl.specialize(&m.target, &m.phi)?, m.t0))
}

/// `u(t)`: the inverse of `t = 1 - exp(-t0·z(u))`, a series in `t`.
pub fn orientation_series(fgl: &FormalGroupLaw, t0: &GradedPoly) -> Result<Series> {
    let t0 = t0.embed(fgl.ring())?;
    if !t0.is_unit() {
        return Err(Error::NonUnit(format!("unit scale {t0} is not invertible")));
    }
    let order = fgl.order();
    let ring = fgl.ring();
    let inner = fgl.log().scale(&-&t0);
    let e = Series::exp_t("u", ring, order).compose(&inner)?;
    let t_of_u = Series::one("u", ring, order).sub(&e)?;
    Ok(t_of_u.revert()?.with_var("t"))
}

/// The orientation data `b_k`, `a_k`, `c_k` of a multiplicative class.
///
/// * `u(t) = t/t0 + Σ_{k≥1} b_k t^{k+1}`
/// * `log(t/u(t)) = log t0 + Σ_{k≥1} a_k t^k`
/// * with `t = 1 - q^{-1}`: `Σ a_k t^k = c_0 + Σ_{k≥1} (c_k/k) q^{-k}`
///
/// so that on a bundle of rank `r` the class is
/// `t0^r · exp(Σ_k (c_k/k)(Ψ^k(V*) - r))` and `c_0 = -Σ_{k≥1} c_k/k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTable {
    pub ring: Arc<Ring>,
    pub t0: GradedPoly,
    pub log_t0: Option<GradedPoly>,
    pub b: Vec<GradedPoly>,
    pub a: Vec<GradedPoly>,
    pub c: Vec<GradedPoly>,
}

pub fn extract_generators(orientation: &Series, t0: &GradedPoly) -> Result<GeneratorTable> {
    let ring = orientation.ring().clone();
    let t0 = t0.embed(&ring)?;
    let n = orientation.order() - 1;
    if n < 0 || orientation.lowest() > 1 || (orientation.lowest() <= 0 && !orientation.coeff(0).is_zero()) {
        return Err(Error::InconsistentUnitScale("orientation must start at t^1".into()));
    }
    let lead = orientation.coeff(1);
    let t0inv = t0.inv()?;
    if lead != t0inv {
        return Err(Error::InconsistentUnitScale(format!(
            "leading coefficient {lead} differs from 1/t0 = {t0inv}"
        )));
    }
    let b: Vec<_> = (1..=n).map(|k| orientation.coeff(k + 1)).collect();
    let u_over_t = orientation.shift(-1).truncate(n);
    let u_over_t = Series::new("t", &ring, 0, (0..=n).map(|k| u_over_t.coeff(k)).collect());
    let ratio = u_over_t.recip()?.scale(&t0inv);
    let logs = ratio.log()?;
    let a: Vec<_> = (1..=n).map(|k| logs.coeff(k)).collect();
    let log_t0 = t0.log_unipotent().ok();

    let mut c = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let mut acc = GradedPoly::zero(&ring);
        for k in m.max(1)..=n {
            acc = &acc + &a[(k - 1) as usize].scale_rational(&binomial(k, m));
        }
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let scale = if m == 0 { rat_int(1) } else { rat_int(sign * m) };
        c.push(acc.scale_rational(&scale));
    }
    Ok(GeneratorTable {
        ring,
        t0,
        log_t0,
        b,
        a,
        c,
    })
}

impl GeneratorTable {
    /// Highest `k` with `b_k`, `a_k` and `c_k` available.
    pub fn order(&self) -> usize {
        self.b.len()
    }

    /// `u(t) = t/t0 + Σ b_k t^{k+1}`.
    pub fn reconstruct(&self) -> Result<Series> {
        let n = self.order() as i64;
        let t0inv = self.t0.inv()?;
        Ok(Series::from_fn("t", &self.ring, 0, n + 1, |k| match k {
            0 => GradedPoly::zero(&self.ring),
            1 => t0inv.clone(),
            _ => self.b[(k - 2) as usize].clone(),
        }))
    }

    /// `t/u(t) = t0·exp(Σ a_k t^k)` to order `n`.
    pub fn line_series(&self) -> Result<Series> {
        let n = self.order() as i64;
        let s = Series::from_fn("t", &self.ring, 0, n, |k| {
            if k == 0 {
                GradedPoly::zero(&self.ring)
            } else {
                self.a[(k - 1) as usize].clone()
            }
        });
        Ok(s.exp()?.scale(&self.t0))
    }

    /// `c_0 + Σ_{k≥1} c_k/k`, zero for every table.
    pub fn stable_defect(&self) -> GradedPoly {
        let mut acc = self.c[0].clone();
        for (k, ck) in self.c.iter().enumerate().skip(1) {
            acc = &acc + &ck.scale_rational(&rat(1, k as i64));
        }
        acc
    }

    pub fn specialize(&self, target: &Arc<Ring>, phi: &HashMap<String, GradedPoly>) -> Result<GeneratorTable> {
        let map = |v: &[GradedPoly]| v.iter().map(|x| x.specialize(target, phi)).collect::<Result<Vec<_>>>();
        let t0 = self.t0.specialize(target, phi)?;
        Ok(GeneratorTable {
            ring: target.clone(),
            log_t0: t0.log_unipotent().ok(),
            t0,
            b: map(&self.b)?,
            a: map(&self.a)?,
            c: map(&self.c)?,
        })
    }

    pub fn to_json(&self) -> GeneratorTableJson {
        let j = |v: &[GradedPoly]| v.iter().map(GradedPoly::to_json).collect();
        GeneratorTableJson {
            order: self.order(),
            unit_scale: self.t0.to_json(),
            log_unit_scale: self.log_t0.as_ref().map(GradedPoly::to_json),
            b: j(&self.b),
            a: j(&self.a),
            c: j(&self.c),
        }
    }

    pub fn from_json(j: &GeneratorTableJson) -> Result<GeneratorTable> {
        let ring = j.unit_scale.ring()?;
        let parse = |v: &[GradedPolyJson]| {
            v.iter()
                .map(|p| GradedPoly::from_json_in(p, &ring))
                .collect::<Result<Vec<_>>>()
        };
        let t = GeneratorTable {
            ring: ring.clone(),
            t0: GradedPoly::from_json_in(&j.unit_scale, &ring)?,
            log_t0: j
                .log_unit_scale
                .as_ref()
                .map(|p| GradedPoly::from_json_in(p, &ring))
                .transpose()?,
            b: parse(&j.b)?,
            a: parse(&j.a)?,
            c: parse(&j.c)?,
        };
        if t.b.len() != j.order || t.a.len() != j.order || t.c.len() != j.order + 1 {
            return Err(Error::Schema("generator table lengths do not match its order".into()));
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTableJson {
    pub order: usize,
    pub unit_scale: GradedPolyJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_unit_scale: Option<GradedPolyJson>,
    pub b: Vec<GradedPolyJson>,
    pub a: Vec<GradedPolyJson>,
    pub c: Vec<GradedPolyJson>,
}

/// Generator table through `k = order` for the universal law (no genus) or
/// a specialization. The logarithm is computed to order `order + 1`.
pub fn generator_table(genus: Option<Genus>, order: u32, d: u32) -> Result<GeneratorTable> {
    let fgl = FormalGroupLaw::mishchenko(order + 1, d)?;
    let (fgl, t0) = match genus {
        None => {
            let t0 = GradedPoly::one(fgl.ring());
            (fgl, t0)
        }
        Some(g) => specialize_genus(g, &fgl)?,
    };
    let u = orientation_series(&fgl, &t0)?;
    extract_generators(&u, &t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(r: &Arc<Ring>, name: &str) -> GradedPoly {
        GradedPoly::generator(r, name).unwrap()
    }

    #[test]
    fn low_order_coefficients() {
        let f = FormalGroupLaw::mishchenko(4, 4).unwrap();
        let r = f.ring().clone();
        let half_p1 = gen(&r, "p1").scale_rational(&rat(1, 2));
        assert_eq!(f.log().coeff(2), half_p1);
        assert_eq!(f.exp().coeff(2), -&half_p1);
        let law = f.group_law().unwrap();
        assert_eq!(law.coefficient(1, 1), -&gen(&r, "p1"));
        assert_eq!(law.coefficient(1, 0), GradedPoly::one(&r));
    }

    #[test]
    fn classical_law_is_multiplicative() {
        let f = FormalGroupLaw::mishchenko(5, 5).unwrap();
        let (k, t0) = specialize_genus(Genus::ClassicalK, &f).unwrap();
        let law = k.group_law().unwrap();
        let r = k.ring();
        assert_eq!(law.coefficient(1, 1), GradedPoly::from_int(r, -1));
        assert_eq!(law.coefficient(2, 1), GradedPoly::zero(r));
        let u = orientation_series(&k, &t0).unwrap();
        assert_eq!(u, Series::variable("t", r, 5));
        let inv = k.inverse_series().unwrap();
        for n in 1..=5 {
            assert_eq!(inv.coeff(n), GradedPoly::from_int(r, -1));
        }
    }

    #[test]
    fn additive_law() {
        let f = FormalGroupLaw::mishchenko(5, 5).unwrap();
        let (a, _) = specialize_genus(Genus::Additive, &f).unwrap();
        assert_eq!(a.log(), &Series::variable("u", a.ring(), 5));
        assert_eq!(a.inverse_series().unwrap(), Series::variable("u", a.ring(), 5).neg());
    }

    #[test]
    fn universal_order_two_table() {
        // k ≤ 1 only: c_1 then depends on a_1 alone.
        let t = generator_table(None, 1, 2).unwrap();
        let r = t.ring.clone();
        let one = GradedPoly::one(&r);
        let p1 = gen(&r, "p1");
        let half = rat(1, 2);
        assert_eq!(t.b[0], (&one - &p1).scale_rational(&half));
        assert_eq!(t.a[0], (&p1 - &one).scale_rational(&half));
        assert_eq!(t.c[1], (&one - &p1).scale_rational(&half));
        assert!(t.stable_defect().is_zero());
        assert_eq!(t.c[0], -&t.c[1]);
        let u = orientation_series(&FormalGroupLaw::mishchenko(2, 2).unwrap(), &one).unwrap();
        assert_eq!(t.reconstruct().unwrap(), u);
    }

    #[test]
    fn hirzebruch_table() {
        let t = generator_table(Some(Genus::Hirzebruch), 5, 5).unwrap();
        let y = gen(&t.ring, "y");
        for k in 1..=5u32 {
            assert_eq!(t.c[k as usize], -&y.pow(k));
        }
        assert!(t.stable_defect().is_zero());
        assert!(t.log_t0.is_some());
        assert!(matches!("elliptic".parse::<Genus>(), Err(Error::UnknownGenus(_))));
    }

    #[test]
    fn wrong_unit_scale_is_rejected() {
        let f = FormalGroupLaw::mishchenko(4, 4).unwrap();
        let (h, t0) = specialize_genus(Genus::Hirzebruch, &f).unwrap();
        let u = orientation_series(&h, &t0).unwrap();
        let one = GradedPoly::one(h.ring());
        assert!(matches!(
            extract_generators(&u, &one),
            Err(Error::InconsistentUnitScale(_))
        ));
    }
}
