//! Rational loops `f(q)` with coefficients in `A ⊗ R`, their residues, the
//! symplectic form, polarizations and polarization-changing kernels.
//!
//! Every loop is kept in partial-fraction form
//! `f = Σ_n L_n q^n + Σ_ζ Σ_j c_{ζ,j} / (1 - q/ζ)^j`.
//! Poles sit at roots of unity or at nonzero rationals; factors like
//! `1 - yq` with nilpotent `y` are expanded into the Laurent part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedPoly, GradedPolyJson, Ring};
use crate::kring::{Algebra, Element, MultClass, SplitBundle};
use crate::scalar::{binomial, rat, rat_int, Rational, Scalar};
use crate::series::Series;

/// Orientation of the residue pairing in the kernel map. With this value
/// the canonical kernel `1/(1 - x/q)` acts as the identity on the standard
/// negative space; the test suite pins it.
pub const CALIBRATION_SIGN: i64 = -1;

/// Largest root-of-unity order searched when factoring denominators.
const MAX_ROOT_ORDER: u32 = 12;

/// A pole location: a root of unity `exp(2πik/n)` with `gcd(k, n) = 1`, or
/// a rational number other than `0` and `±1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pole {
    Root { n: u32, k: u32 },
    Rational(Rational),
}

impl Pole {
    pub fn root(n: u32, k: i64) -> Pole {
        let n_i = n as i64;
        let k = k.rem_euclid(n_i);
        let g = k.gcd(&n_i).max(1);
        let (n, k) = if k == 0 { (1, 0) } else { ((n_i / g) as u32, (k / g) as u32) };
        Pole::Root { n, k }
    }

    pub fn one() -> Pole {
        Pole::root(1, 0)
    }

    pub fn from_scalar(v: &Scalar) -> Result<Pole> {
        if let Some(r) = v.as_rational() {
            if r.is_zero() {
                return Err(Error::UndeclaredPole("0 is not a finite pole location; use `zero`".into()));
            }
            if r.is_one() {
                return Ok(Pole::one());
            }
            if *r == -Rational::one() {
                return Ok(Pole::root(2, 1));
            }
            return Ok(Pole::Rational(r.clone()));
        }
        let (level, _) = v.canonical();
        for n in [level, 2 * level] {
            for k in 0..n {
                if Scalar::root_of_unity(n, k as i64) == *v {
                    return Ok(Pole::root(n, k as i64));
                }
            }
        }
        Err(Error::UndeclaredPole(format!("{} is neither a root of unity nor rational", v.render())))
    }

    pub fn value(&self) -> Scalar {
        match self {
            Pole::Root { n, k } => Scalar::root_of_unity(*n, *k as i64),
            Pole::Rational(r) => Scalar::from_rational(r.clone()),
        }
    }

    pub fn inverse(&self) -> Pole {
        match self {
            Pole::Root { n, k } => Pole::root(*n, -(*k as i64)),
            Pole::Rational(r) => Pole::Rational(r.recip()),
        }
    }

    /// `1`, `-1`, `zeta<n>^<k>`, or a rational.
    pub fn render(&self) -> String {
        match self {
            Pole::Root { n: 1, .. } => "1".into(),
            Pole::Root { n: 2, .. } => "-1".into(),
            Pole::Root { n, k } => format!("zeta{n}^{k}"),
            Pole::Rational(r) => crate::scalar::render_rational(r),
        }
    }

    pub fn parse(s: &str) -> Result<Pole> {
        let t = s.trim();
        if t == "i" {
            return Ok(Pole::root(4, 1));
        }
        if let Some(rest) = t.strip_prefix("zeta") {
            let (n, k) = rest.split_once('^').unwrap_or((rest, "1"));
            let n: u32 = n
                .parse()
                .map_err(|_| Error::UndeclaredPole(format!("bad root of unity `{t}`")))?;
            let k: i64 = k
                .parse()
                .map_err(|_| Error::UndeclaredPole(format!("bad root of unity `{t}`")))?;
            if n == 0 {
                return Err(Error::UndeclaredPole(t.to_string()));
            }
            return Ok(Pole::root(n, k));
        }
        let r = crate::scalar::parse_rational(t).map_err(|_| Error::UndeclaredPole(format!("`{t}`")))?;
        Pole::from_scalar(&Scalar::from_rational(r))
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Where a residue or expansion is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Zero,
    Infinity,
    At(Pole),
}

/// Local Laurent expansion with element coefficients, exact for every
/// stored index.
#[derive(Clone, Debug)]
struct Local {
    lowest: i64,
    coeffs: Vec<Element>,
}

impl Local {
    fn get(&self, n: i64) -> Option<&Element> {
        if n < self.lowest {
            return None;
        }
        self.coeffs.get((n - self.lowest) as usize)
    }
}

fn local_product(alg: &Algebra, a: &Local, b: &Local, lo: i64, hi: i64) -> BTreeMap<i64, Element> {
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let mut acc: Option<Element> = None;
        for (i, x) in a.coeffs.iter().enumerate() {
            let ia = a.lowest + i as i64;
            let Some(y) = b.get(n - ia) else { continue };
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = alg.mul(x, y);
            acc = Some(match acc {
                Some(s) => s.add(&p),
                None => p,
            });
        }
        if let Some(e) = acc {
            if !e.is_zero() {
                out.insert(n, e);
            }
        }
    }
    out
}

fn scalar_pow(z: &Scalar, e: i64) -> Scalar {
    z.pow(e).expect("pole locations are nonzero")
}

/// A rational loop in canonical partial-fraction form.
#[derive(Clone, Debug)]
pub struct RationalLoop {
    alg: Arc<Algebra>,
    ring: Arc<Ring>,
    laurent: BTreeMap<i64, Element>,
    /// `principal[ζ][j-1]` is the coefficient of `(1 - q/ζ)^{-j}`.
    principal: BTreeMap<Pole, Vec<Element>>,
}

impl PartialEq for RationalLoop {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg)
            && *self.ring == *other.ring
            && self.laurent == other.laurent
            && self.principal == other.principal
    }
}

impl RationalLoop {
    pub fn zero(alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Self {
        RationalLoop {
            alg: alg.clone(),
            ring: ring.clone(),
            laurent: BTreeMap::new(),
            principal: BTreeMap::new(),
        }
    }

    /// `c · q^n`.
    pub fn monomial(alg: &Arc<Algebra>, c: Element, n: i64) -> Self {
        let mut f = Self::zero(alg, c.ring());
        f.laurent.insert(n, c);
        f.normalize();
        f
    }

    pub fn constant(alg: &Arc<Algebra>, c: Element) -> Self {
        Self::monomial(alg, c, 0)
    }

    pub fn scalar(alg: &Arc<Algebra>, c: &GradedPoly) -> Self {
        Self::constant(alg, alg.constant(c))
    }

    pub fn one(alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Self {
        Self::constant(alg, alg.one(ring))
    }

    pub fn q(alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Self {
        Self::monomial(alg, alg.one(ring), 1)
    }

    /// `c / (1 - q/ζ)^j`.
    pub fn pole_term(alg: &Arc<Algebra>, c: Element, zeta: Pole, j: usize) -> Self {
        let ring = c.ring().clone();
        let mut f = Self::zero(alg, &ring);
        if j == 0 {
            f.laurent.insert(0, c);
        } else {
            let mut v = vec![alg.zero(&ring); j];
            v[j - 1] = c;
            f.principal.insert(zeta, v);
        }
        f.normalize();
        f
    }

    pub fn from_parts(
        alg: &Arc<Algebra>,
        ring: &Arc<Ring>,
        laurent: BTreeMap<i64, Element>,
        principal: BTreeMap<Pole, Vec<Element>>,
    ) -> Result<Self> {
        for e in laurent.values().chain(principal.values().flatten()) {
            alg.check_element(e)?;
        }
        let mut f = RationalLoop {
            alg: alg.clone(),
            ring: ring.clone(),
            laurent,
            principal,
        };
        f.normalize();
        Ok(f)
    }

    /// `N(q) / Π (1 - q/ζ)^m`.
    pub fn from_quotient(
        alg: &Arc<Algebra>,
        ring: &Arc<Ring>,
        numerator: BTreeMap<i64, Element>,
        poles: &[(Pole, u32)],
    ) -> Result<Self> {
        let mut f = Self::from_parts(alg, ring, numerator, BTreeMap::new())?;
        for (z, m) in poles {
            let p = Self::pole_term(alg, alg.one(ring), z.clone(), *m as usize);
            f = f.mul(&p)?;
        }
        Ok(f)
    }

    fn normalize(&mut self) {
        self.laurent.retain(|_, e| !e.is_zero());
        for v in self.principal.values_mut() {
            while v.last().is_some_and(Element::is_zero) {
                v.pop();
            }
        }
        self.principal.retain(|_, v| !v.is_empty());
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn laurent(&self) -> &BTreeMap<i64, Element> {
        &self.laurent
    }

    pub fn principal(&self) -> &BTreeMap<Pole, Vec<Element>> {
        &self.principal
    }

    pub fn is_zero(&self) -> bool {
        self.laurent.is_empty() && self.principal.is_empty()
    }

    /// No principal parts: an element of `K_+`.
    pub fn is_laurent(&self) -> bool {
        self.principal.is_empty()
    }

    pub fn laurent_part(&self) -> RationalLoop {
        RationalLoop {
            principal: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn principal_part(&self) -> RationalLoop {
        RationalLoop {
            laurent: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn poles(&self) -> impl Iterator<Item = (&Pole, usize)> {
        self.principal.iter().map(|(z, v)| (z, v.len()))
    }

    fn check(&self, other: &RationalLoop) -> Result<()> {
        if !(Arc::ptr_eq(&self.alg, &other.alg) || self.alg == other.alg) {
            return Err(Error::IncompatibleAlgebra(format!(
                "{} vs {}",
                self.alg.name(),
                other.alg.name()
            )));
        }
        if *self.ring != *other.ring {
            return Err(Error::IncompatibleRing("loops over different coefficient rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &RationalLoop) -> Result<RationalLoop> {
        self.check(other)?;
        let mut out = self.clone();
        for (n, e) in &other.laurent {
            let v = match out.laurent.get(n) {
                Some(x) => x.add(e),
                None => e.clone(),
            };
            out.laurent.insert(*n, v);
        }
        for (z, v) in &other.principal {
            let slot = out.principal.entry(z.clone()).or_default();
            for (j, e) in v.iter().enumerate() {
                if j < slot.len() {
                    slot[j] = slot[j].add(e);
                } else {
                    slot.push(e.clone());
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn neg(&self) -> RationalLoop {
        self.map_elements(Element::neg)
    }

    pub fn sub(&self, other: &RationalLoop) -> Result<RationalLoop> {
        self.add(&other.neg())
    }

    pub fn map_elements(&self, f: impl Fn(&Element) -> Element) -> RationalLoop {
        let mut out = self.clone();
        for e in out.laurent.values_mut() {
            *e = f(e);
        }
        for v in out.principal.values_mut() {
            for e in v.iter_mut() {
                *e = f(e);
            }
        }
        out.normalize();
        out
    }

    pub fn try_map_elements(&self, f: impl Fn(&Element) -> Result<Element>) -> Result<RationalLoop> {
        let mut out = self.clone();
        for e in out.laurent.values_mut() {
            *e = f(e)?;
        }
        for v in out.principal.values_mut() {
            for e in v.iter_mut() {
                *e = f(e)?;
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Multiply by an element constant in `q`.
    pub fn scale_element(&self, c: &Element) -> RationalLoop {
        let alg = self.alg.clone();
        self.map_elements(|e| alg.mul(e, c))
    }

    pub fn scale(&self, c: &GradedPoly) -> RationalLoop {
        self.map_elements(|e| e.scale(c))
    }

    /// Apply a coefficient homomorphism (e.g. `y ↦ 0`) within the same ring.
    pub fn map_coefficients(&self, f: impl Fn(&GradedPoly) -> Result<GradedPoly>) -> Result<RationalLoop> {
        self.try_map_elements(|e| e.try_map(&f))
    }

    fn max_mult(&self, z: &Pole) -> i64 {
        self.principal.get(z).map_or(0, |v| v.len() as i64)
    }

    /// Expansion at a point, through exponent `order`. At `ζ` the variable
    /// is `s = 1 - q/ζ`; at infinity it is `w = 1/q`.
    fn local(&self, at: &Point, order: i64) -> Local {
        let alg = &self.alg;
        let ring = &self.ring;
        let lowest = match at {
            Point::Zero => self.laurent.keys().next().copied().unwrap_or(0).min(0),
            Point::Infinity => -self.laurent.keys().next_back().copied().unwrap_or(0).max(0),
            Point::At(z) => -self.max_mult(z),
        };
        let len = (order - lowest + 1).max(0) as usize;
        let mut coeffs = vec![alg.zero(ring); len];
        let mut add = |n: i64, e: Element| {
            if n >= lowest && n <= order {
                let i = (n - lowest) as usize;
                coeffs[i] = coeffs[i].add(&e);
            }
        };
        match at {
            Point::Zero => {
                for (n, e) in &self.laurent {
                    add(*n, e.clone());
                }
                for (z, v) in &self.principal {
                    let zinv = z.value().inv().expect("nonzero");
                    for (j, c) in v.iter().enumerate() {
                        let j = j as i64 + 1;
                        for n in 0..=order {
                            let f = &Scalar::from_rational(binomial(j + n - 1, n)) * &scalar_pow(&zinv, n);
                            add(n, c.scale_scalar(&f));
                        }
                    }
                }
            }
            Point::Infinity => {
                for (n, e) in &self.laurent {
                    add(-*n, e.clone());
                }
                for (z, v) in &self.principal {
                    let zv = z.value();
                    for (j, c) in v.iter().enumerate() {
                        let j = j as i64 + 1;
                        for m in j..=order {
                            let f = &(&Scalar::from_rational(binomial(m - 1, m - j)) * &scalar_pow(&-&zv, j))
                                * &scalar_pow(&zv, m - j);
                            add(m, c.scale_scalar(&f));
                        }
                    }
                }
            }
            Point::At(z0) => {
                let z0v = z0.value();
                for (n, e) in &self.laurent {
                    let zn = scalar_pow(&z0v, *n);
                    for k in 0..=order {
                        let b = binomial(*n, k);
                        if b.is_zero() {
                            continue;
                        }
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        let f = &zn * &Scalar::from_rational(b * rat_int(sign));
                        add(k, e.scale_scalar(&f));
                    }
                }
                for (z, v) in &self.principal {
                    if z == z0 {
                        for (j, c) in v.iter().enumerate() {
                            add(-(j as i64) - 1, c.clone());
                        }
                        continue;
                    }
                    let rho = &z0v * &z.value().inv().expect("nonzero");
                    let one_minus = &Scalar::one() - &rho;
                    let omi = one_minus.inv().expect("distinct poles");
                    let ratio = &rho * &omi;
                    for (j, c) in v.iter().enumerate() {
                        let j = j as i64 + 1;
                        let base = scalar_pow(&omi, j);
                        for k in 0..=order {
                            let f = &(&base * &Scalar::from_rational(binomial(-j, k))) * &scalar_pow(&ratio, k);
                            add(k, c.scale_scalar(&f));
                        }
                    }
                }
            }
        }
        Local { lowest, coeffs }
    }

    pub fn mul(&self, other: &RationalLoop) -> Result<RationalLoop> {
        self.check(other)?;
        let alg = self.alg.clone();
        let mut out = Self::zero(&alg, &self.ring);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let poles: BTreeSet<Pole> = self.principal.keys().chain(other.principal.keys()).cloned().collect();
        for z in poles {
            let (mf, mg) = (self.max_mult(&z), other.max_mult(&z));
            let at = Point::At(z.clone());
            let a = self.local(&at, mg - 1);
            let b = other.local(&at, mf - 1);
            let prod = local_product(&alg, &a, &b, -(mf + mg), -1);
            let m = (mf + mg) as usize;
            let mut v = vec![alg.zero(&self.ring); m];
            for (n, e) in prod {
                v[(-n - 1) as usize] = e;
            }
            out.principal.insert(z, v);
        }
        let a0 = self.local(&Point::Zero, 0);
        let b0 = other.local(&Point::Zero, 0);
        let (la, lb) = (a0.lowest, b0.lowest);
        if la + lb < 0 {
            let a0 = self.local(&Point::Zero, -1 - lb);
            let b0 = other.local(&Point::Zero, -1 - la);
            for (n, e) in local_product(&alg, &a0, &b0, la + lb, -1) {
                out.laurent.insert(n, e);
            }
        }
        let ai = self.local(&Point::Infinity, 0);
        let bi = other.local(&Point::Infinity, 0);
        let (ia, ib) = (ai.lowest, bi.lowest);
        let ai = self.local(&Point::Infinity, -ib);
        let bi = other.local(&Point::Infinity, -ia);
        for (m, e) in local_product(&alg, &ai, &bi, ia + ib, 0) {
            out.laurent.insert(-m, e);
        }
        out.normalize();
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<RationalLoop> {
        let mut acc = Self::one(&self.alg, &self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// If every coefficient is a multiple of the unit, that multiple.
    fn scalar_coefficient(&self, e: &Element) -> Option<GradedPoly> {
        let unit = self.alg.one(&self.ring);
        let i = unit.coords().iter().position(|c| !c.is_zero())?;
        let u = unit.coords()[i].constant_term();
        let g = e.coords()[i].scale(&u.inv().ok()?);
        (self.alg.constant(&g) == *e).then_some(g)
    }

    /// `1/D` for a Laurent polynomial `D` with scalar coefficients whose
    /// reduction modulo nilpotents factors over roots of unity and rationals.
    pub fn recip(&self) -> Result<RationalLoop> {
        if !self.is_laurent() {
            return Err(Error::Unsupported("division by a loop with poles".into()));
        }
        let mut d: BTreeMap<i64, GradedPoly> = BTreeMap::new();
        for (n, e) in &self.laurent {
            let g = self
                .scalar_coefficient(e)
                .ok_or_else(|| Error::Unsupported("division by a non-scalar loop".into()))?;
            d.insert(*n, g);
        }
        let d0: BTreeMap<i64, Scalar> = d
            .iter()
            .map(|(n, g)| (*n, g.constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let (Some(&a), Some(&b)) = (d0.keys().next(), d0.keys().next_back()) else {
            return Err(Error::NonUnit("denominator is nilpotent".into()));
        };
        let mut poly: Vec<Scalar> = (a..=b)
            .map(|n| d0.get(&n).cloned().unwrap_or_else(Scalar::zero))
            .collect();
        let mut roots: Vec<Pole> = Vec::new();
        'outer: while poly.len() > 1 {
            for cand in root_candidates(&poly) {
                if eval_poly(&poly, &cand.value()).is_zero() {
                    poly = divide_one_minus(&poly, &cand.value());
                    roots.push(cand);
                    continue 'outer;
                }
            }
            return Err(Error::Unsupported(
                "denominator has roots outside roots of unity and rationals".into(),
            ));
        }
        let c = poly[0].inv()?;
        let alg = self.alg.clone();
        let ring = self.ring.clone();
        let mut inv0 = Self::monomial(&alg, alg.one(&ring).scale_scalar(&c), -a);
        for z in roots {
            inv0 = inv0.mul(&Self::pole_term(&alg, alg.one(&ring), z, 1))?;
        }
        // D = D0 + ν with ν nilpotent: 1/D = (1/D0) Σ (-ν/D0)^k.
        let mut nu = Self::zero(&alg, &ring);
        for (n, g) in &d {
            let rest = g - &GradedPoly::constant(&ring, g.constant_term());
            if !rest.is_zero() {
                nu = nu.add(&Self::monomial(&alg, alg.constant(&rest), *n))?;
            }
        }
        let x = nu.mul(&inv0)?.neg();
        let mut acc = Self::one(&alg, &ring);
        let mut power = acc.clone();
        let bound = (ring.truncation() + ring.aux_order() + 2) as usize;
        for _ in 0..bound {
            power = power.mul(&x)?;
            if power.is_zero() {
                return acc.mul(&inv0);
            }
            acc = acc.add(&power)?;
        }
        Err(Error::NonUnit("nilpotent correction does not terminate".into()))
    }

    pub fn div(&self, other: &RationalLoop) -> Result<RationalLoop> {
        self.mul(&other.recip()?)
    }

    /// `f(1/q)`.
    pub fn invert_q(&self) -> RationalLoop {
        let alg = self.alg.clone();
        let mut out = Self::zero(&alg, &self.ring);
        for (n, e) in &self.laurent {
            out.laurent.insert(-*n, e.clone());
        }
        // c (1 - 1/(qζ))^{-j} = c (s' - 1)^j s'^{-j} with s' = 1 - qζ.
        for (z, v) in &self.principal {
            let zi = z.inverse();
            let mut pp = vec![alg.zero(&self.ring); v.len()];
            for (j, c) in v.iter().enumerate() {
                let j = j as i64 + 1;
                for i in 0..=j {
                    let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                    let term = c.scale_rational(&(binomial(j, i) * rat_int(sign)));
                    if i == j {
                        let slot = out.laurent.entry(0).or_insert_with(|| alg.zero(&self.ring));
                        *slot = slot.add(&term);
                    } else {
                        let k = (j - i - 1) as usize;
                        pp[k] = pp[k].add(&term);
                    }
                }
            }
            out.principal.insert(zi, pp);
        }
        out.normalize();
        out
    }

    /// Value at `q = 0`.
    pub fn value_at_zero(&self) -> Result<Element> {
        if self.laurent.keys().any(|&n| n < 0) {
            return Err(Error::PoleAtBoundary("0".into()));
        }
        let mut acc = self.laurent.get(&0).cloned().unwrap_or_else(|| self.alg.zero(&self.ring));
        for v in self.principal.values() {
            for c in v {
                acc = acc.add(c);
            }
        }
        Ok(acc)
    }

    /// Value at `q = ∞`.
    pub fn value_at_infinity(&self) -> Result<Element> {
        if self.laurent.keys().any(|&n| n > 0) {
            return Err(Error::PoleAtBoundary("infinity".into()));
        }
        Ok(self.laurent.get(&0).cloned().unwrap_or_else(|| self.alg.zero(&self.ring)))
    }

    /// Residue of `f(q) dq`.
    pub fn residue(&self, at: &Point) -> Result<Element> {
        let zero = self.alg.zero(&self.ring);
        Ok(match at {
            Point::Zero => self.local(at, -1).get(-1).cloned().unwrap_or(zero),
            Point::Infinity => self.local(at, 1).get(1).cloned().unwrap_or(zero).neg(),
            Point::At(z) => {
                let c = self.local(at, -1).get(-1).cloned().unwrap_or(zero);
                c.scale_scalar(&-&z.value())
            }
        })
    }

    /// Sum of residues of `f dq` over `0`, `∞` and every pole.
    pub fn total_residue(&self) -> Result<Element> {
        let mut acc = self.residue(&Point::Zero)?.add(&self.residue(&Point::Infinity)?);
        for z in self.principal.keys() {
            acc = acc.add(&self.residue(&Point::At(z.clone()))?);
        }
        Ok(acc)
    }

    /// Laurent expansion under `q = ζ e^x`, one series per basis coordinate.
    pub fn expand_at(&self, zeta: &Pole, order: i64) -> Result<Vec<Series>> {
        let ring = &self.ring;
        let mult = self.max_mult(zeta);
        let work = order + 2 * mult + 2;
        let zv = zeta.value();
        let zero_series = Series::zero("x", ring, work);
        let mut pieces: Vec<(Element, Series)> = Vec::new();
        for (n, e) in &self.laurent {
            let zn = scalar_pow(&zv, *n);
            let s = Series::exp_t("x", ring, work)
                .compose(&Series::variable("x", ring, work).scale_rational(&rat_int(*n)))?
                .scale_scalar(&zn);
            pieces.push((e.clone(), s));
        }
        for (z, v) in &self.principal {
            let rho = &zv * &z.value().inv()?;
            let base = Series::one("x", ring, work).sub(&Series::exp_t("x", ring, work).scale_scalar(&rho))?;
            let inv = base.recip()?;
            let mut p = Series::one("x", ring, work);
            for c in v {
                p = p.mul(&inv)?;
                pieces.push((c.clone(), p.clone()));
            }
        }
        let rank = self.alg.rank();
        let mut out = vec![zero_series; rank];
        for (e, s) in pieces {
            for (i, c) in e.coords().iter().enumerate() {
                if !c.is_zero() {
                    out[i] = out[i].add(&s.scale(c))?;
                }
            }
        }
        out.into_iter()
            .map(|s| {
                if s.order() < order {
                    Err(Error::Precision("expansion lost precision".into()))
                } else {
                    Ok(s.truncate(order))
                }
            })
            .collect()
    }

    pub fn render(&self) -> String {
        self.render_in("q")
    }

    /// Render with `var` standing for the loop variable.
    pub fn render_in(&self, var: &str) -> String {
        let mut parts = Vec::new();
        let el = |e: &Element| {
            let nz: Vec<String> = e
                .coords()
                .iter()
                .zip(self.alg.labels())
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, l)| {
                    let cs = if c.num_terms() > 1 { format!("({c})") } else { c.to_string() };
                    if l == "1" {
                        cs
                    } else if cs == "1" {
                        l.clone()
                    } else {
                        format!("{cs}*{l}")
                    }
                })
                .collect();
            if nz.len() == 1 {
                nz[0].clone()
            } else {
                format!("({})", nz.join(" + "))
            }
        };
        for (n, e) in &self.laurent {
            parts.push(match n {
                0 => el(e),
                1 => format!("{}*{var}", el(e)),
                _ => format!("{}*{var}^{}", el(e), n),
            });
        }
        for (z, v) in &self.principal {
            for (j, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let den = if matches!(z, Pole::Root { n: 1, .. }) {
                    format!("(1 - {var})")
                } else {
                    format!("(1 - {var}/{})", z.render())
                };
                let den = if j == 0 { den } else { format!("{den}^{}", j + 1) };
                parts.push(format!("{}/{}", el(c), den));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> LoopJson {
        LoopJson {
            form: "partial_fraction".into(),
            numerator: self
                .laurent
                .iter()
                .map(|(n, e)| LaurentTermJson {
                    exponent: *n,
                    coeff: e.to_json(),
                })
                .collect(),
            poles: self
                .principal
                .iter()
                .map(|(z, v)| PoleJson {
                    location: z.render(),
                    multiplicity: v.len() as u32,
                    principal_part: Some(v.iter().map(Element::to_json).collect()),
                })
                .collect(),
        }
    }

    /// Read either form; `alg` and `ring` describe the coefficients.
    pub fn from_json(j: &LoopJson, alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Result<RationalLoop> {
        let mut num = BTreeMap::new();
        for t in &j.numerator {
            let e = Element::from_json(&t.coeff, ring)?;
            alg.check_element(&e).map_err(|e| Error::Schema(e.to_string()))?;
            if num.insert(t.exponent, e).is_some() {
                return Err(Error::Schema(format!("exponent {} repeated", t.exponent)));
            }
        }
        match j.form.as_str() {
            "partial_fraction" => {
                let mut principal = BTreeMap::new();
                for p in &j.poles {
                    let z = Pole::parse(&p.location)?;
                    let pp = p
                        .principal_part
                        .as_ref()
                        .ok_or_else(|| Error::Schema("partial-fraction pole without principal part".into()))?;
                    if pp.len() != p.multiplicity as usize {
                        return Err(Error::Schema("principal part length differs from multiplicity".into()));
                    }
                    let v = pp
                        .iter()
                        .map(|c| Element::from_json(c, ring))
                        .collect::<Result<Vec<_>>>()?;
                    if principal.insert(z, v).is_some() {
                        return Err(Error::Schema(format!("pole {} repeated", p.location)));
                    }
                }
                Self::from_parts(alg, ring, num, principal)
            }
            "quotient" => {
                let poles = j
                    .poles
                    .iter()
                    .map(|p| Ok((Pole::parse(&p.location)?, p.multiplicity)))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_quotient(alg, ring, num, &poles)
            }
            other => Err(Error::Schema(format!("unknown loop form `{other}`"))),
        }
    }
}

impl fmt::Display for RationalLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn eval_poly(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// `p(q) / (1 - q/ζ)`, assuming `p(ζ) = 0`.
fn divide_one_minus(p: &[Scalar], z: &Scalar) -> Vec<Scalar> {
    // p = (q - ζ) r, then p = (1 - q/ζ)(-ζ r).
    let n = p.len() - 1;
    let mut r = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for i in (1..=n).rev() {
        carry = &p[i] + &(&carry * z);
        r[i - 1] = carry.clone();
    }
    let mz = -z;
    r.iter().map(|c| c * &mz).collect()
}

fn root_candidates(p: &[Scalar]) -> Vec<Pole> {
    let mut out = Vec::new();
    for n in 1..=MAX_ROOT_ORDER {
        for k in 0..n {
            if (k as i64).gcd(&(n as i64)) == 1 || n == 1 {
                out.push(Pole::root(n, k as i64));
            }
        }
    }
    if p.iter().all(Scalar::is_rational) {
        let rs: Vec<Rational> = p.iter().map(|c| c.as_rational().cloned().expect("rational")).collect();
        let lcm = rs.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let ints: Vec<BigInt> = rs.iter().map(|r| (r * Rational::from(lcm.clone())).to_integer()).collect();
        let small = |b: &BigInt| b.abs().to_u64().filter(|&v| v <= 1_000_000);
        if let (Some(c0), Some(cn)) = (small(&ints[0]), small(&ints[ints.len() - 1])) {
            for a in divisors(c0) {
                for b in divisors(cn) {
                    for sign in [1i64, -1] {
                        let r = rat(sign * a as i64, b as i64);
                        if r.abs() != Rational::one() {
                            let pl = Pole::Rational(r);
                            if !out.contains(&pl) {
                                out.push(pl);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentTermJson {
    pub exponent: i64,
    pub coeff: Vec<GradedPolyJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleJson {
    pub location: String,
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal_part: Option<Vec<Vec<GradedPolyJson>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopJson {
    #[serde(default = "default_form")]
    pub form: String,
    pub numerator: Vec<LaurentTermJson>,
    #[serde(default)]
    pub poles: Vec<PoleJson>,
}

fn default_form() -> String {
    "quotient".into()
}

/// Twisted pairing `(a, b) = scale · χ(a b W)`, read on the `r`-th
/// component as `r Ψ^r(·)`.
#[derive(Clone, Debug, Default)]
pub struct PairingConfig {
    pub twist: Option<Element>,
    pub scale: Option<GradedPoly>,
    pub r: u32,
}

impl PairingConfig {
    pub fn standard() -> Self {
        PairingConfig {
            twist: None,
            scale: None,
            r: 1,
        }
    }
}

/// `Ω(f, g) = -[Res_0 + Res_∞] (f(q), g(1/q)) dq/q`.
pub fn omega(f: &RationalLoop, g: &RationalLoop, cfg: &PairingConfig) -> Result<GradedPoly> {
    f.check(g)?;
    let alg = f.alg.clone();
    let ring = f.ring.clone();
    let mut h = f.mul(&g.invert_q())?;
    if let Some(w) = &cfg.twist {
        alg.check_element(w)?;
        h = h.scale_element(&w.embed(&ring)?);
    }
    let h = h.mul(&RationalLoop::monomial(&alg, alg.one(&ring), -1))?;
    let res = h.residue(&Point::Zero)?.add(&h.residue(&Point::Infinity)?);
    let mut v = -&alg.chi(&res);
    if let Some(s) = &cfg.scale {
        v = &v * &s.embed(&ring)?;
    }
    let r = cfg.r.max(1);
    if r > 1 {
        v = v.adams(r)?.scale_rational(&rat_int(r as i64));
    }
    Ok(v)
}

/// A kernel `T(q, x) = N(q, x) / (1 - x/q)` with Laurent-polynomial numerator.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    pub name: String,
    /// `(exponent of q, exponent of x) ↦ coefficient`.
    pub numerator: BTreeMap<(i64, i64), GradedPoly>,
}

impl Kernel {
    pub fn canonical(ring: &Arc<Ring>) -> Kernel {
        let mut numerator = BTreeMap::new();
        numerator.insert((0, 0), GradedPoly::one(ring));
        Kernel {
            name: "canonical".into(),
            numerator,
        }
    }

    /// `(1/(1-y)) (1 - y x/q) / (1 - x/q)`.
    pub fn hirzebruch(ring: &Arc<Ring>) -> Result<Kernel> {
        let y = GradedPoly::generator(ring, "y")?;
        let s = (&GradedPoly::one(ring) - &y).inv()?;
        let mut numerator = BTreeMap::new();
        numerator.insert((0, 0), s.clone());
        numerator.insert((-1, 1), -&(&y * &s));
        Ok(Kernel {
            name: "hirzebruch".into(),
            numerator,
        })
    }

    pub fn by_name(name: &str, ring: &Arc<Ring>) -> Result<Kernel> {
        match name {
            "canonical" => Ok(Self::canonical(ring)),
            "hirzebruch" => Self::hirzebruch(ring),
            other => Err(Error::Unsupported(format!("unknown kernel `{other}`"))),
        }
    }
}

/// `f ↦ -[Res_0 + Res_∞]_q f(q) T(q, x) dq/q` with `x` near infinity.
///
/// With `x` outside every circle through the poles of `f`, the bracket is
/// the sum of residues of `f(q) N(q,x) dq / (q - x)` at the finite poles of
/// `f`, which is what is computed; [`CALIBRATION_SIGN`] fixes the overall
/// orientation. The result is returned as a loop in `q` standing for `x`.
pub fn tensor_polarization_map(kernel: &Kernel, f: &RationalLoop) -> Result<RationalLoop> {
    if !f.laurent.is_empty() {
        return Err(Error::Polarization("input is not in the standard negative space".into()));
    }
    let alg = f.alg.clone();
    let ring = f.ring.clone();
    let numer: BTreeMap<(i64, i64), GradedPoly> = kernel
        .numerator
        .iter()
        .map(|(k, v)| Ok((*k, v.embed(&ring)?)))
        .collect::<Result<_>>()?;
    let mut out = RationalLoop::zero(&alg, &ring);
    for (z, v) in &f.principal {
        let zv = z.value();
        let m = v.len() as i64;
        // N_k(x) = [s^k] N(ζ(1-s), x)
        let nk: Vec<RationalLoop> = (0..m)
            .map(|k| {
                let mut acc = RationalLoop::zero(&alg, &ring);
                for ((a, b), c) in &numer {
                    let bin = binomial(*a, k);
                    if bin.is_zero() {
                        continue;
                    }
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let f = &scalar_pow(&zv, *a) * &Scalar::from_rational(bin * rat_int(sign));
                    let term = RationalLoop::monomial(&alg, alg.constant(&c.scale(&f)), *b);
                    acc = acc.add(&term)?;
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        // ζ^k / (ζ - x)^{k+1} = ζ^{-1} (1 - x/ζ)^{-(k+1)}
        let zinv = zv.inv()?;
        let geo: Vec<RationalLoop> = (0..m)
            .map(|k| {
                RationalLoop::pole_term(
                    &alg,
                    alg.one(&ring).scale_scalar(&zinv),
                    z.clone(),
                    k as usize + 1,
                )
            })
            .collect();
        for (j, c) in v.iter().enumerate() {
            // residue at ζ of c s^{-(j+1)} G(s) (-ζ ds) = -ζ c [s^j] G
            let mut gj = RationalLoop::zero(&alg, &ring);
            for k1 in 0..=j {
                gj = gj.add(&nk[k1].mul(&geo[j - k1])?)?;
            }
            let coef = c.scale_scalar(&(&-&zv * &Scalar::from_int(CALIBRATION_SIGN)));
            out = out.add(&gj.scale_element(&coef))?;
        }
    }
    Ok(out)
}

/// A choice of negative space complementary to the Laurent polynomials.
#[derive(Clone, Debug)]
pub enum Polarization {
    /// `{f : f(0) finite, f(∞) = 0}`.
    Standard,
    /// `{f : f(0) finite, f(∞) = λ f(0)}`.
    Constraint(GradedPoly),
    /// The image of the standard negative space under a kernel.
    Tensor(Kernel),
}

impl Polarization {
    pub fn hirzebruch(ring: &Arc<Ring>) -> Result<Polarization> {
        Ok(Polarization::Constraint(GradedPoly::generator(ring, "y")?))
    }
}

/// Split `f = plus + minus` with `plus` a Laurent polynomial.
pub fn project(f: &RationalLoop, pol: &Polarization) -> Result<(RationalLoop, RationalLoop)> {
    let lp = f.laurent_part();
    let pp = f.principal_part();
    match pol {
        Polarization::Standard => Ok((lp, pp)),
        Polarization::Constraint(lambda) => {
            let lambda = lambda.embed(f.ring())?;
            let d = (&GradedPoly::one(f.ring()) - &lambda)
                .inv()
                .map_err(|_| Error::Polarization("1 - λ is not invertible".into()))?;
            let c = pp.value_at_zero()?.scale(&(&lambda * &d));
            let shift = RationalLoop::constant(&f.alg, c);
            Ok((lp.sub(&shift)?, pp.add(&shift)?))
        }
        Polarization::Tensor(k) => {
            let minus = if pp.is_zero() {
                pp.clone()
            } else {
                tensor_polarization_map(k, &pp)?
            };
            let plus = f.sub(&minus)?;
            if !plus.is_laurent() {
                return Err(Error::Polarization(format!(
                    "kernel `{}` does not induce a complement of the Laurent polynomials",
                    k.name
                )));
            }
            Ok((plus, minus))
        }
    }
}

/// Membership in the negative space of `pol`.
pub fn in_negative_space(f: &RationalLoop, pol: &Polarization) -> Result<bool> {
    let (plus, _) = project(f, pol)?;
    Ok(plus.is_zero())
}

/// `f(∞) = y · f(0)`, both finite.
pub fn hirzebruch_negative_space_check(f: &RationalLoop) -> Result<bool> {
    let f0 = f.value_at_zero()?;
    let finf = f.value_at_infinity()?;
    let y = GradedPoly::generator(f.ring(), "y")?;
    Ok(finf == f0.scale(&y))
}

/// `1 - q`, or `(1 - q)/(1 - yq)` expanded in the truncated ring.
pub fn dilaton_shift(name: &str, alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Result<RationalLoop> {
    let one = RationalLoop::one(alg, ring);
    let q = RationalLoop::q(alg, ring);
    let base = one.sub(&q)?;
    match name {
        "standard" => Ok(base),
        "hirzebruch" => {
            let y = GradedPoly::generator(ring, "y")?;
            base.div(&one.sub(&q.scale(&y))?)
        }
        other => Err(Error::Unsupported(format!("unknown dilaton shift `{other}`"))),
    }
}

/// Exponent `Σ_k (c_k/k)(Ψ^k(V) - rk V) / (1 - q^{-k})` of the twisted
/// multiplication operator, and its expansion under `q = e^x`.
pub fn tw_mult_operator(
    alg: &Arc<Algebra>,
    class: &MultClass,
    v: &SplitBundle,
    order: i64,
) -> Result<(RationalLoop, Vec<Series>)> {
    let ring = class.ring().clone();
    let mut exponent = RationalLoop::zero(alg, &ring);
    if !v.terms.is_empty() {
        let cls = v.class(alg)?.embed(&ring)?;
        for t in &v.terms {
            alg.inv(&t.line.embed(&ring)?)
                .map_err(|_| Error::NonInvertibleLine(format!("{:?}", t.line.coords())))?;
        }
        let rank = alg.one(&ring).scale_rational(&rat_int(v.rank()));
        for (k, ck) in class.c.iter().enumerate().skip(1) {
            if ck.is_zero() {
                continue;
            }
            let coef = alg
                .adams(k as u32, &cls)?
                .sub(&rank)
                .scale(&ck.scale_rational(&rat(1, k as i64)));
            if coef.is_zero() {
                continue;
            }
            // 1/(1 - q^{-k}) = 1 - (1/k) Σ_{ζ^k = 1} 1/(1 - q/ζ)
            let mut g = RationalLoop::one(alg, &ring);
            for j in 0..k {
                let term = RationalLoop::pole_term(
                    alg,
                    alg.one(&ring).scale_rational(&rat(-1, k as i64)),
                    Pole::root(k as u32, j as i64),
                    1,
                );
                g = g.add(&term)?;
            }
            exponent = exponent.add(&g.scale_element(&coef))?;
        }
    }
    let expansion = exponent.expand_at(&Pole::one(), order)?;
    Ok((exponent, expansion))
}

/// Laurent expansion of `f` under `q = ζ e^x`.
pub fn expand_at_root_of_unity(f: &RationalLoop, zeta: &Pole, order: i64) -> Result<Vec<Series>> {
    f.expand_at(zeta, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kring::Algebra;

    fn point() -> (Arc<Algebra>, Arc<Ring>) {
        (Arc::new(Algebra::point()), Ring::rational())
    }

    fn geo(alg: &Arc<Algebra>, ring: &Arc<Ring>, z: Pole, j: usize) -> RationalLoop {
        RationalLoop::pole_term(alg, alg.one(ring), z, j)
    }

    #[test]
    fn partial_fractions_and_residues() {
        let (a, r) = point();
        let f = RationalLoop::monomial(&a, a.one(&r), -1).mul(&geo(&a, &r, Pole::one(), 1)).unwrap();
        assert_eq!(f.laurent().get(&-1), Some(&a.one(&r)));
        assert_eq!(f.residue(&Point::Zero).unwrap(), a.one(&r));
        assert!(f.total_residue().unwrap().is_zero());
        let q = RationalLoop::q(&a, &r);
        assert!(q.residue(&Point::At(Pole::root(4, 1))).unwrap().is_zero());
    }

    #[test]
    fn omega_on_point() {
        let (a, r) = point();
        let f = geo(&a, &r, Pole::one(), 1);
        let one = RationalLoop::one(&a, &r);
        assert_eq!(omega(&f, &one, &PairingConfig::standard()).unwrap(), GradedPoly::from_int(&r, -1));
        let q2 = RationalLoop::q(&a, &r).pow(2).unwrap();
        assert!(omega(&q2, &RationalLoop::q(&a, &r), &PairingConfig::standard()).unwrap().is_zero());
    }

    #[test]
    fn projections() {
        let (a, r) = point();
        let f = RationalLoop::q(&a, &r).mul(&geo(&a, &r, Pole::one(), 1)).unwrap();
        let (plus, minus) = project(&f, &Polarization::Standard).unwrap();
        assert_eq!(plus, RationalLoop::one(&a, &r).neg());
        assert_eq!(minus, geo(&a, &r, Pole::one(), 1));

        let h = Ring::hirzebruch(4);
        let y = GradedPoly::generator(&h, "y").unwrap();
        let c = (&GradedPoly::one(&h) - &y).inv().unwrap();
        let g = geo(&a, &h, Pole::one(), 1);
        let (plus, minus) = project(&g, &Polarization::hirzebruch(&h).unwrap()).unwrap();
        let shift = RationalLoop::scalar(&a, &(&y * &c));
        assert_eq!(plus, shift.neg());
        assert_eq!(minus, g.add(&shift).unwrap());
        assert!(hirzebruch_negative_space_check(&minus).unwrap());
        assert!(!hirzebruch_negative_space_check(&g).unwrap());
    }

    #[test]
    fn canonical_kernel_is_identity() {
        let (a, r) = point();
        let k = Kernel::canonical(&r);
        for z in [Pole::one(), Pole::root(2, 1), Pole::root(4, 1)] {
            for j in 1..=3 {
                let f = geo(&a, &r, z.clone(), j);
                assert_eq!(tensor_polarization_map(&k, &f).unwrap(), f, "{z} {j}");
            }
        }
    }

    #[test]
    fn hirzebruch_kernel() {
        let a = Arc::new(Algebra::point());
        let h = Ring::hirzebruch(4);
        let y = GradedPoly::generator(&h, "y").unwrap();
        let c = &y * &(&GradedPoly::one(&h) - &y).inv().unwrap();
        let k = Kernel::hirzebruch(&h).unwrap();
        let f = geo(&a, &h, Pole::one(), 2);
        let expect = f.add(&RationalLoop::scalar(&a, &c)).unwrap();
        assert_eq!(tensor_polarization_map(&k, &f).unwrap(), expect);
    }

    #[test]
    fn inversion_and_division() {
        let (a, r) = point();
        let f = geo(&a, &r, Pole::root(3, 1), 2).add(&RationalLoop::q(&a, &r)).unwrap();
        assert_eq!(f.invert_q().invert_q(), f);
        let one = RationalLoop::one(&a, &r);
        let den = one.sub(&RationalLoop::q(&a, &r).pow(2).unwrap()).unwrap();
        let inv = one.div(&den).unwrap();
        assert_eq!(inv.mul(&den).unwrap(), one);
        let h = Ring::hirzebruch(3);
        let shift = dilaton_shift("hirzebruch", &a, &h).unwrap();
        let y0 = shift
            .map_coefficients(|c| {
                let mut phi = std::collections::HashMap::new();
                phi.insert("y".to_string(), GradedPoly::zero(&h));
                c.specialize(&h, &phi)
            })
            .unwrap();
        assert_eq!(y0, dilaton_shift("standard", &a, &h).unwrap());
    }

    #[test]
    fn bernoulli_expansion() {
        let (a, r) = point();
        let f = geo(&a, &r, Pole::one(), 1);
        let s = &f.expand_at(&Pole::one(), 2).unwrap()[0];
        assert_eq!(s.lowest(), -1);
        assert_eq!(s.coeff(-1), GradedPoly::from_int(&r, -1));
        assert_eq!(s.coeff(0), GradedPoly::from_rational(&r, rat(1, 2)));
        assert_eq!(s.coeff(1), GradedPoly::from_rational(&r, rat(-1, 12)));
    }

    #[test]
    fn json_round_trip() {
        let (a, r) = point();
        let f = geo(&a, &r, Pole::root(4, 1), 2).add(&RationalLoop::q(&a, &r)).unwrap();
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back = RationalLoop::from_json(&serde_json::from_str(&j).unwrap(), &a, &r).unwrap();
        assert_eq!(back, f);
    }
}
