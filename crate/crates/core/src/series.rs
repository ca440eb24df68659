//! Truncated Laurent series in one variable with [`GradedPoly`] coefficients.
//!
//! A series stores coefficients for exponents `lowest..=order`; everything
//! above `order` is unknown. Every operation computes the order it can
//! guarantee and never claims more.

use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{GradedPoly, GradedPolyJson, Ring};
use crate::scalar::{binomial, rat, rat_int, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct Series {
    var: String,
    ring: Arc<Ring>,
    lowest: i64,
    coeffs: Vec<GradedPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
}

pub fn series_arith(op: SeriesOp, a: &Series, b: &Series) -> Result<Series> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Div => a.div(b),
    }
}

impl Series {
    /// Coefficients for `lowest, lowest+1, …`; the order is implied by the length.
    pub fn new(var: &str, ring: &Arc<Ring>, lowest: i64, coeffs: Vec<GradedPoly>) -> Series {
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.embed(ring).expect("coefficient ring"))
            .collect();
        Series {
            var: var.to_string(),
            ring: ring.clone(),
            lowest,
            coeffs,
        }
    }

    pub fn from_fn(
        var: &str,
        ring: &Arc<Ring>,
        lowest: i64,
        order: i64,
        f: impl Fn(i64) -> GradedPoly,
    ) -> Series {
        let coeffs = (lowest..=order).map(f).collect();
        Series::new(var, ring, lowest, coeffs)
    }

    pub fn from_rationals(var: &str, ring: &Arc<Ring>, lowest: i64, coeffs: &[Rational]) -> Series {
        let coeffs = coeffs
            .iter()
            .map(|r| GradedPoly::from_rational(ring, r.clone()))
            .collect();
        Series::new(var, ring, lowest, coeffs)
    }

    /// Zero known up to and including `order`.
    pub fn zero(var: &str, ring: &Arc<Ring>, order: i64) -> Series {
        Series::from_fn(var, ring, 0, order, |_| GradedPoly::zero(ring))
    }

    pub fn constant(var: &str, c: GradedPoly, order: i64) -> Series {
        let ring = c.ring().clone();
        Series::from_fn(var, &ring, 0, order, |n| {
            if n == 0 {
                c.clone()
            } else {
                GradedPoly::zero(&ring)
            }
        })
    }

    pub fn one(var: &str, ring: &Arc<Ring>, order: i64) -> Series {
        Series::constant(var, GradedPoly::one(ring), order)
    }

    /// The variable itself, known to `order`.
    pub fn variable(var: &str, ring: &Arc<Ring>, order: i64) -> Series {
        Series::monomial(var, GradedPoly::one(ring), 1, order)
    }

    pub fn monomial(var: &str, c: GradedPoly, exponent: i64, order: i64) -> Series {
        let ring = c.ring().clone();
        Series::from_fn(var, &ring, exponent.min(order + 1), order, |n| {
            if n == exponent {
                c.clone()
            } else {
                GradedPoly::zero(&ring)
            }
        })
    }

    /// `e^t`.
    pub fn exp_t(var: &str, ring: &Arc<Ring>, order: i64) -> Series {
        let mut f = Rational::one();
        Series::from_rationals(
            var,
            ring,
            0,
            &(0..=order)
                .map(|n| {
                    if n > 0 {
                        f /= rat_int(n);
                    }
                    f.clone()
                })
                .collect::<Vec<_>>(),
        )
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    pub fn order(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[GradedPoly] {
        &self.coeffs
    }

    /// Coefficient of `var^n`; zero below `lowest`. Panics above the order.
    pub fn coeff(&self, n: i64) -> GradedPoly {
        assert!(n <= self.order(), "coefficient {n} beyond order {}", self.order());
        if n < self.lowest {
            GradedPoly::zero(&self.ring)
        } else {
            self.coeffs[(n - self.lowest) as usize].clone()
        }
    }

    fn coeff_ref(&self, n: i64) -> Option<&GradedPoly> {
        if n < self.lowest || n > self.order() {
            None
        } else {
            Some(&self.coeffs[(n - self.lowest) as usize])
        }
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lowest + i as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    fn check(&self, other: &Series) -> Result<()> {
        if self.var != other.var {
            return Err(Error::IncompatibleRing(format!(
                "series in `{}` and `{}`",
                self.var, other.var
            )));
        }
        if *self.ring != *other.ring {
            return Err(Error::IncompatibleRing("series coefficient rings differ".into()));
        }
        Ok(())
    }

    /// Keep exponents `≤ order`.
    pub fn truncate(&self, order: i64) -> Series {
        let mut s = self.clone();
        if order < s.order() {
            let keep = (order - s.lowest + 1).max(0) as usize;
            s.coeffs.truncate(keep);
        }
        s
    }

    /// Drop known-zero leading coefficients.
    pub fn normalized(&self) -> Series {
        let mut s = self.clone();
        let lead = s.coeffs.iter().take_while(|c| c.is_zero()).count();
        s.coeffs.drain(..lead);
        s.lowest += lead as i64;
        s
    }

    pub fn with_var(&self, var: &str) -> Series {
        let mut s = self.clone();
        s.var = var.to_string();
        s
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: i64) -> Series {
        let mut s = self.clone();
        s.lowest += k;
        s
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        let lo = self.lowest.min(other.lowest);
        let hi = self.order().min(other.order());
        Ok(Series::from_fn(&self.var, &self.ring, lo, hi, |n| {
            match (self.coeff_ref(n), other.coeff_ref(n)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => GradedPoly::zero(&self.ring),
            }
        }))
    }

    pub fn neg(&self) -> Series {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(|c| -c).collect();
        s
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &GradedPoly) -> Series {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(|x| x * c).collect();
        s
    }

    pub fn scale_rational(&self, r: &Rational) -> Series {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(|x| x.scale_rational(r)).collect();
        s
    }

    pub fn scale_scalar(&self, r: &Scalar) -> Series {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(|x| x.scale(r)).collect();
        s
    }

    pub fn map_coeffs(&self, f: impl Fn(&GradedPoly) -> GradedPoly) -> Series {
        let mut s = self.clone();
        s.coeffs = s.coeffs.iter().map(f).collect();
        s
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        let va = self.valuation().unwrap_or(self.order() + 1);
        let vb = other.valuation().unwrap_or(other.order() + 1);
        let order = (self.order() + vb).min(other.order() + va);
        let lo = self.lowest + other.lowest;
        let mut coeffs = Vec::new();
        for n in lo..=order {
            let mut acc = GradedPoly::zero(&self.ring);
            for i in va..=self.order() {
                let j = n - i;
                if j < vb {
                    break;
                }
                if let (Some(a), Some(b)) = (self.coeff_ref(i), other.coeff_ref(j)) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
            }
            coeffs.push(acc);
        }
        Ok(Series {
            var: self.var.clone(),
            ring: self.ring.clone(),
            lowest: lo,
            coeffs,
        })
    }

    /// Reciprocal of a series whose first nonzero coefficient is a unit.
    pub fn recip(&self) -> Result<Series> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::NonUnit("division by a series with no known nonzero coefficient".into()))?;
        let h0 = self.coeff(v);
        let h0inv = h0
            .inv()
            .map_err(|_| Error::NonUnit(format!("leading coefficient {h0} is not invertible")))?;
        let m = self.order() - v;
        let mut g: Vec<GradedPoly> = Vec::with_capacity(m as usize + 1);
        g.push(h0inv.clone());
        for n in 1..=m {
            let mut acc = GradedPoly::zero(&self.ring);
            for k in 1..=n {
                let hk = self.coeff(v + k);
                if !hk.is_zero() {
                    acc = &acc + &(&hk * &g[(n - k) as usize]);
                }
            }
            g.push(-&(&acc * &h0inv));
        }
        Ok(Series {
            var: self.var.clone(),
            ring: self.ring.clone(),
            lowest: -v,
            coeffs: g,
        })
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        self.mul(&other.recip()?)
    }

    pub fn pow(&self, e: u32) -> Result<Series> {
        let mut acc = Series::one(&self.var, &self.ring, self.order().max(0) + (e as i64) * self.lowest.max(0));
        if e == 0 {
            return Ok(acc.truncate(self.order().max(0)));
        }
        acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `self ∘ g`. `g` must be a power series whose constant term is nilpotent.
    pub fn compose(&self, g: &Series) -> Result<Series> {
        self.check(g)?;
        if self.lowest < 0 {
            return Err(Error::CompositionDomain("outer series has negative powers".into()));
        }
        if g.lowest < 0 && g.coeffs.iter().take((-g.lowest) as usize).any(|c| !c.is_zero()) {
            return Err(Error::CompositionDomain("inner series has negative powers".into()));
        }
        let g = if g.lowest < 0 { g.normalized_from(0) } else { g.clone() };
        let g0 = g.coeff_ref(0).cloned().unwrap_or_else(|| GradedPoly::zero(&self.ring));
        if !g0.is_nilpotent() {
            return Err(Error::CompositionDomain(format!(
                "inner series has unit constant term {}",
                g0.constant_term()
            )));
        }
        let of = self.order();
        let og = g.order();
        let order = if g0.is_zero() {
            let v = g.valuation().unwrap_or(og + 1).max(1);
            (v * (of + 1) - 1).min(og)
        } else {
            let mut k = 1;
            let mut p = g0.clone();
            while !p.is_zero() {
                p = &p * &g0;
                k += 1;
            }
            (of + 1 - k).min(og)
        };
        if order < 0 {
            return Err(Error::Precision("composition leaves no guaranteed coefficients".into()));
        }
        let g = g.truncate(order);
        let mut acc = Series::constant(&self.var, self.coeff(of), order);
        for n in (0..of).rev() {
            acc = acc.mul(&g)?.truncate(order);
            acc = acc.add(&Series::constant(&self.var, self.coeff(n), order))?;
        }
        Ok(acc.truncate(order))
    }

    fn normalized_from(&self, lo: i64) -> Series {
        let mut s = self.clone();
        while s.lowest < lo {
            s.coeffs.remove(0);
            s.lowest += 1;
        }
        s
    }

    /// Compositional inverse of `f = f_1 t + f_2 t² + …` with `f_1` a unit.
    pub fn revert(&self) -> Result<Series> {
        if self.lowest < 0 && self.coeffs.iter().take((-self.lowest) as usize).any(|c| !c.is_zero()) {
            return Err(Error::Reversion("series has negative powers".into()));
        }
        let f = self.normalized_from(0);
        let of = f.order();
        if of < 1 {
            return Err(Error::Reversion("need at least the linear coefficient".into()));
        }
        if !f.coeff(0).is_zero() {
            return Err(Error::Reversion("constant term must vanish".into()));
        }
        let f1inv = f
            .coeff(1)
            .inv()
            .map_err(|_| Error::Reversion(format!("linear coefficient {} is not a unit", f.coeff(1))))?;
        let zero = GradedPoly::zero(&self.ring);
        let mut g = vec![zero.clone(), f1inv.clone()];
        for n in 2..=of {
            let mut trial = g.clone();
            trial.push(zero.clone());
            let gs = Series::new(&self.var, &self.ring, 0, trial);
            let fg = f.truncate(n).compose(&gs)?;
            g.push(-&(&fg.coeff(n) * &f1inv));
        }
        let gs = Series::new(&self.var, &self.ring, 0, g);
        let check = f.compose(&gs)?;
        let id = Series::variable(&self.var, &self.ring, of);
        if check.truncate(of) != id {
            return Err(Error::Reversion("back-substitution check failed".into()));
        }
        Ok(gs)
    }

    pub fn exp(&self) -> Result<Series> {
        if self.lowest < 0 && self.coeffs.iter().take((-self.lowest) as usize).any(|c| !c.is_zero()) {
            return Err(Error::ExpLogDomain("exp of a series with negative powers".into()));
        }
        let f = self.normalized_from(0);
        let of = f.order();
        if of < 0 {
            return Ok(f);
        }
        let f0 = f.coeff(0);
        let e0 = f0
            .exp_nilpotent()
            .map_err(|_| Error::ExpLogDomain(format!("exp needs nilpotent constant term, got {f0}")))?;
        let mut e = vec![GradedPoly::one(&self.ring)];
        for n in 1..=of {
            let mut acc = GradedPoly::zero(&self.ring);
            for k in 1..=n {
                let hk = f.coeff(k);
                if !hk.is_zero() {
                    acc = &acc + &(&hk * &e[(n - k) as usize]).scale_rational(&rat_int(k));
                }
            }
            e.push(acc.scale_rational(&rat(1, n)));
        }
        Ok(Series::new(&self.var, &self.ring, 0, e).scale(&e0))
    }

    pub fn log(&self) -> Result<Series> {
        if self.lowest < 0 && self.coeffs.iter().take((-self.lowest) as usize).any(|c| !c.is_zero()) {
            return Err(Error::ExpLogDomain("log of a series with negative powers".into()));
        }
        let f = self.normalized_from(0);
        let of = f.order();
        if of < 0 {
            return Err(Error::ExpLogDomain("log of an empty series".into()));
        }
        let f0 = f.coeff(0);
        let l0 = f0
            .log_unipotent()
            .map_err(|_| Error::ExpLogDomain(format!("log needs constant term 1, got {f0}")))?;
        let g = f.scale(&f0.inv()?);
        let mut l = vec![l0];
        for n in 1..=of {
            let mut acc = GradedPoly::zero(&self.ring);
            for k in 1..n {
                let gk = g.coeff(n - k);
                if !gk.is_zero() && !l[k as usize].is_zero() {
                    acc = &acc + &(&l[k as usize] * &gk).scale_rational(&rat_int(k));
                }
            }
            l.push(&g.coeff(n) - &acc.scale_rational(&rat(1, n)));
        }
        Ok(Series::new(&self.var, &self.ring, 0, l))
    }

    pub fn derivative(&self) -> Series {
        let coeffs = (self.lowest..=self.order())
            .map(|n| self.coeff(n).scale_rational(&rat_int(n)))
            .collect::<Vec<_>>();
        let mut s = Series::new(&self.var, &self.ring, self.lowest - 1, coeffs);
        if self.lowest == 0 {
            s = s.normalized_from(0);
        }
        s
    }

    /// Substitute a nilpotent ring element for the variable. Fails unless
    /// `x^{order+1} = 0`, so that the unknown tail cannot contribute.
    pub fn eval_at(&self, x: &GradedPoly) -> Result<GradedPoly> {
        if self.lowest < 0 && self.coeffs.iter().take((-self.lowest) as usize).any(|c| !c.is_zero()) {
            return Err(Error::CompositionDomain("cannot evaluate negative powers".into()));
        }
        if !x.is_nilpotent() {
            return Err(Error::CompositionDomain(format!("{x} is not nilpotent")));
        }
        let order = self.order();
        if order < -1 || !x.pow((order + 1) as u32).is_zero() {
            return Err(Error::Precision(format!("series order {order} too low to evaluate at {x}")));
        }
        let mut acc = GradedPoly::zero(&self.ring);
        for n in (0..=order).rev() {
            acc = &(&acc * x) + &self.coeff(n);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            variable: self.var.clone(),
            lowest: self.lowest,
            order: self.order(),
            coefficients: self.coeffs.iter().map(GradedPoly::to_json).collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series> {
        if j.order - j.lowest + 1 != j.coefficients.len() as i64 {
            return Err(Error::Schema(format!(
                "series from {} to {} needs {} coefficients, found {}",
                j.lowest,
                j.order,
                j.order - j.lowest + 1,
                j.coefficients.len()
            )));
        }
        let ring = match j.coefficients.first() {
            Some(c) => c.ring()?,
            None => return Err(Error::Schema("series without coefficients".into())),
        };
        let coeffs = j
            .coefficients
            .iter()
            .map(|c| GradedPoly::from_json_in(c, &ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series {
            var: j.variable.clone(),
            ring,
            lowest: j.lowest,
            coeffs,
        })
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for n in self.lowest..=self.order() {
            let c = self.coeff(n);
            if c.is_zero() {
                continue;
            }
            let v = match n {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, n),
            };
            let cs = if c.num_terms() > 1 { format!("({c})") } else { c.to_string() };
            parts.push(match (v.is_empty(), cs.as_str()) {
                (true, _) => cs,
                (false, "1") => v,
                (false, "-1") => format!("-{v}"),
                _ => format!("{cs}*{v}"),
            });
        }
        parts.push(format!("O({}^{})", self.var, self.order() + 1));
        parts.join(" + ")
    }
}

/// Equal when variable, ring and order agree and every known coefficient matches.
impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        if self.var != other.var || *self.ring != *other.ring || self.order() != other.order() {
            return false;
        }
        let zero = GradedPoly::zero(&self.ring);
        (self.lowest.min(other.lowest)..=self.order()).all(|n| {
            self.coeff_ref(n).unwrap_or(&zero) == other.coeff_ref(n).unwrap_or(&zero)
        })
    }
}

impl Eq for Series {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub variable: String,
    pub lowest: i64,
    pub order: i64,
    pub coefficients: Vec<GradedPolyJson>,
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl BernoulliCache {
    pub fn new(n: usize) -> Self {
        let mut values = vec![Rational::one()];
        for m in 1..=n {
            let mut s = Rational::zero();
            for (k, b) in values.iter().enumerate() {
                s += binomial(m as i64 + 1, k as i64) * b;
            }
            values.push(-s / rat_int(m as i64 + 1));
        }
        BernoulliCache { values }
    }

    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn shared_cache() -> &'static RwLock<BernoulliCache> {
    static CACHE: OnceLock<RwLock<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(BernoulliCache::new(32)))
}

pub fn bernoulli(n: usize) -> Rational {
    {
        let c = shared_cache().read().expect("bernoulli cache");
        if n < c.values.len() {
            return c.values[n].clone();
        }
    }
    let fresh = BernoulliCache::new(n.max(2 * shared_cache().read().expect("bernoulli cache").values.len()));
    let v = fresh.values[n].clone();
    *shared_cache().write().expect("bernoulli cache") = fresh;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<Ring> {
        Ring::rational()
    }

    fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn geometric_inverse() {
        let r = q();
        let a = Series::from_rationals("t", &r, 0, &rats(&[(1, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]));
        let b = Series::from_fn("t", &r, 0, 6, |n| GradedPoly::from_int(&r, if n % 2 == 0 { 1 } else { -1 }));
        assert_eq!(a.mul(&b).unwrap(), Series::one("t", &r, 6));
        assert_eq!(a.recip().unwrap(), b);
    }

    #[test]
    fn division_in_hirzebruch_ring() {
        let h = Ring::hirzebruch(5);
        let y = GradedPoly::generator(&h, "y").unwrap();
        let den = Series::new("w", &h, 0, vec![GradedPoly::one(&h), -&y, GradedPoly::zero(&h), GradedPoly::zero(&h)]);
        let got = Series::one("w", &h, 3).div(&den).unwrap();
        assert_eq!(got, Series::from_fn("w", &h, 0, 3, |k| y.pow(k as u32)));
        let bad = Series::new("w", &h, 0, vec![GradedPoly::zero(&h), y.clone()]);
        assert!(matches!(Series::one("w", &h, 3).div(&bad), Err(Error::NonUnit(_))));
    }

    #[test]
    fn mercator_and_log() {
        let r = q();
        let one_minus = Series::from_rationals("u", &r, 0, &rats(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]));
        let l = one_minus.log().unwrap().neg();
        let merc = Series::from_fn("u", &r, 0, 8, |n| {
            if n == 0 {
                GradedPoly::zero(&r)
            } else {
                GradedPoly::from_rational(&r, rat(1, n))
            }
        });
        assert_eq!(l, merc);
    }

    #[test]
    fn exp_of_log_is_identity() {
        let r = q();
        let t = Series::variable("t", &r, 8);
        let log1p = t.add(&Series::one("t", &r, 8)).unwrap().log().unwrap();
        let e = Series::exp_t("t", &r, 8);
        assert_eq!(e.compose(&log1p).unwrap(), t.add(&Series::one("t", &r, 8)).unwrap());
        assert_eq!(e.compose(&Series::zero("t", &r, 8)).unwrap(), Series::one("t", &r, 8));
        assert!(matches!(e.compose(&Series::one("t", &r, 8)), Err(Error::CompositionDomain(_))));
    }

    #[test]
    fn classical_round_trip() {
        let r = q();
        let one = Series::one("u", &r, 8);
        let mlog = one.sub(&Series::variable("u", &r, 8)).unwrap().log().unwrap();
        let f = one.sub(&Series::exp_t("u", &r, 8).compose(&Series::variable("u", &r, 8).neg()).unwrap()).unwrap();
        let got = f.compose(&mlog.neg()).unwrap();
        assert_eq!(got, Series::variable("u", &r, 8));
    }

    #[test]
    fn catalan_reversion() {
        let r = q();
        let f = Series::from_rationals("t", &r, 0, &rats(&[(0, 1), (1, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]));
        let g = f.revert().unwrap();
        let cat = [0, 1, 1, 2, 5, 14, 42];
        for (n, c) in cat.iter().enumerate() {
            assert_eq!(g.coeff(n as i64), GradedPoly::from_int(&r, *c));
        }
        let id = Series::variable("t", &r, 5);
        assert_eq!(id.revert().unwrap(), id);
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(40), BernoulliCache::new(40).get(40).clone());
    }

    #[test]
    fn eval_requires_enough_order() {
        let h = Ring::hirzebruch(3);
        let y = GradedPoly::generator(&h, "y").unwrap();
        let e = Series::exp_t("t", &h, 3);
        assert_eq!(e.eval_at(&y).unwrap(), y.exp_nilpotent().unwrap());
        assert!(matches!(e.truncate(2).eval_at(&y), Err(Error::Precision(_))));
    }

    #[test]
    fn json_round_trip() {
        let h = Ring::hirzebruch(2);
        let s = Series::exp_t("t", &h, 4).shift(-2);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        let back = Series::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.order(), 2);
    }
}
