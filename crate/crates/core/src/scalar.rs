//! Exact scalars: arbitrary-precision rationals and elements of cyclotomic
//! fields `Q(ζ_n)`.
//!
//! Every coefficient in the engine is a [`Scalar`]. Almost all of them are
//! rational; the cyclotomic part only appears when loops have poles at
//! non-real roots of unity. A scalar is stored in the power basis
//! `1, ζ, …, ζ^{φ(n)-1}` of its level `n`, reduced modulo the cyclotomic
//! polynomial `Φ_n`. Values whose irrational coordinates vanish collapse to
//! level 1, so rational arithmetic never pays for the general case.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `num/den` with the denominator always present.
pub fn render_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 1,
        column: 1,
        message: format!("invalid rational `{s}`"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn binomial(n: i64, k: i64) -> Rational {
    // generalized binomial C(n, k) for integer n, k >= 0
    if k < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * rat_int(n - i) / rat_int(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

type CycloTable = RwLock<HashMap<u32, Arc<Vec<Rational>>>>;

fn cyclotomic_table() -> &'static CycloTable {
    static TABLE: OnceLock<CycloTable> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of `Φ_n`, lowest degree first (monic).
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<Rational>> {
    if let Some(p) = cyclotomic_table().read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![Rational::zero(); n as usize + 1];
    num[0] = -Rational::one();
    num[n as usize] = Rational::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_exact_div(&num, &phi_d);
        }
    }
    let p = Arc::new(num);
    cyclotomic_table().write().unwrap().insert(n, p.clone());
    p
}

fn poly_exact_div(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let qlen = rem.len() - dd;
    let mut quot = vec![Rational::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &c * dj;
            }
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// Reduce a coefficient vector modulo `Φ_n`.
fn reduce_mod(mut v: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if v.len() > deg {
        for d in (deg..v.len()).rev() {
            let c = std::mem::take(&mut v[d]);
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate().take(deg) {
                let idx = d - deg + j;
                v[idx] = &v[idx] - &c * pj;
            }
        }
        v.truncate(deg);
    }
    v.resize(deg, Rational::zero());
    v
}

/// An exact element of `Q(ζ_level)`.
#[derive(Clone, Debug)]
pub struct Scalar {
    level: u32,
    coords: Vec<Rational>,
}

impl Scalar {
    pub fn from_rational(r: Rational) -> Self {
        Scalar {
            level: 1,
            coords: vec![r],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_n^k` with `ζ_n = exp(2πi/n)`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Scalar::from_parts(n, v)
    }

    fn from_parts(level: u32, coords: Vec<Rational>) -> Self {
        let coords = reduce_mod(coords, level);
        let mut s = Scalar { level, coords };
        s.collapse();
        s
    }

    fn collapse(&mut self) {
        if self.level != 1 && self.coords.iter().skip(1).all(Zero::is_zero) {
            let c0 = self.coords[0].clone();
            self.level = 1;
            self.coords = vec![c0];
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.level == 1 && self.coords[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.level == 1).then(|| &self.coords[0])
    }

    pub fn is_rational(&self) -> bool {
        self.level == 1
    }

    fn lift(&self, n: u32) -> Vec<Rational> {
        if self.level == n {
            return self.coords.clone();
        }
        let step = (n / self.level) as usize;
        let mut v = vec![Rational::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            v[i * step] = c.clone();
        }
        reduce_mod(v, n)
    }

    fn common_level(&self, other: &Scalar) -> u32 {
        self.level.lcm(&other.level)
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NonUnit("division by zero scalar".into()));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Scalar::from_rational(r.recip()));
        }
        // solve (multiplication-by-self matrix) · v = e_0
        let n = self.level;
        let d = self.coords.len();
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let mut basis = vec![Rational::zero(); j + 1];
            basis[j] = Rational::one();
            let prod = (self * &Scalar::from_parts(n, basis)).lift(n);
            cols.push(prod);
        }
        let mut m: Vec<Vec<Rational>> = (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect();
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::one();
        let sol = solve_rational(&mut m, &mut rhs)
            .ok_or_else(|| Error::NonUnit("singular cyclotomic element".into()))?;
        Ok(Scalar::from_parts(n, sol))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// The smallest level `d` with `self ∈ Q(ζ_d)`, and the coordinates there.
    pub fn canonical(&self) -> (u32, Vec<Rational>) {
        if self.level == 1 {
            return (1, self.coords.clone());
        }
        let n = self.level;
        for d in 1..n {
            if n % d != 0 {
                continue;
            }
            let pd = euler_phi(d) as usize;
            // columns: lifts of ζ_d^i to level n
            let cols: Vec<Vec<Rational>> = (0..pd)
                .map(|i| Scalar::root_of_unity(d, i as i64).lift(n))
                .collect();
            let rows = self.coords.len();
            let mut m: Vec<Vec<Rational>> = (0..rows)
                .map(|r| (0..pd).map(|c| cols[c][r].clone()).collect())
                .collect();
            let mut rhs = self.coords.clone();
            if let Some(sol) = solve_least(&mut m, &mut rhs) {
                return (d, sol);
            }
        }
        (n, self.coords.clone())
    }

    pub fn render(&self) -> String {
        let (d, coords) = self.canonical();
        if d == 1 {
            return render_rational(&coords[0]);
        }
        let mut parts = Vec::new();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(render_rational(c));
            } else {
                parts.push(format!("{}*zeta{}^{}", render_rational(c), d, i));
            }
        }
        parts.join(" + ")
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for part in s.split(" + ") {
            let part = part.trim();
            if let Some((c, z)) = part.split_once("*zeta") {
                let (lvl, pow) = z.split_once('^').ok_or_else(|| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("invalid cyclotomic term `{part}`"),
                })?;
                let lvl: u32 = lvl.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("invalid level in `{part}`"),
                })?;
                let pow: i64 = pow.parse().map_err(|_| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("invalid exponent in `{part}`"),
                })?;
                let c = Scalar::from_rational(parse_rational(c)?);
                acc = &acc + &(&c * &Scalar::root_of_unity(lvl, pow));
            } else {
                acc = &acc + &Scalar::from_rational(parse_rational(part)?);
            }
        }
        Ok(acc)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Scalar {
        if self.level == 1 {
            return self.clone();
        }
        let n = self.level;
        let mut acc = Scalar::zero();
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                let t = &Scalar::from_rational(c.clone()) * &Scalar::root_of_unity(n, -(i as i64));
                acc = &acc + &t;
            }
        }
        acc
    }
}

/// Gaussian elimination for a square system; `None` if singular.
pub(crate) fn solve_rational(m: &mut [Vec<Rational>], rhs: &mut [Rational]) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let p = m[col][col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

/// Gaussian elimination over cyclotomic scalars; `None` if singular.
pub(crate) fn solve_scalar(m: &mut [Vec<Scalar>], rhs: &mut [Scalar]) -> Option<Vec<Scalar>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let pinv = m[col][col].inv().ok()?;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] * &pinv;
                for c in col..n {
                    let t = &f * &m[col][c];
                    m[r][c] = &m[r][c] - &t;
                }
                let t = &f * &rhs[col];
                rhs[r] = &rhs[r] - &t;
            }
        }
    }
    (0..n)
        .map(|i| m[i][i].inv().ok().map(|d| &rhs[i] * &d))
        .collect()
}

/// Inverse of a square rational matrix; `None` if singular.
pub fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut a = m.to_vec();
        let mut e: Vec<Rational> = (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
        cols.push(solve_rational(&mut a, &mut e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// Solve an overdetermined system exactly; `None` if inconsistent.
fn solve_least(m: &mut [Vec<Rational>], rhs: &mut [Rational]) -> Option<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let pv = m[r][c].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pv;
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] = &m[i][k] - &t;
                }
                let t = &f * &rhs[r];
                rhs[i] = &rhs[i] - &t;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if rhs.iter().skip(r).any(|x| !x.is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (row, col) in pivots {
        sol[col] = &rhs[row] / &m[row][col];
    }
    Some(sol)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coords == other.coords;
        }
        let n = self.common_level(other);
        self.lift(n) == other.lift(n)
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            write!(f, "{r}")
        } else {
            f.write_str(&self.render())
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.level == 1 && rhs.level == 1 {
            return Scalar::from_rational(&self.coords[0] + &rhs.coords[0]);
        }
        let n = self.common_level(rhs);
        let a = self.lift(n);
        let b = rhs.lift(n);
        let mut s = Scalar {
            level: n,
            coords: a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        };
        s.collapse();
        s
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            level: self.level,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.level == 1 && rhs.level == 1 {
            return Scalar::from_rational(&self.coords[0] * &rhs.coords[0]);
        }
        if self.level == 1 || rhs.level == 1 {
            let (r, s) = if self.level == 1 { (self, rhs) } else { (rhs, self) };
            let c = &r.coords[0];
            let mut out = Scalar {
                level: s.level,
                coords: s.coords.iter().map(|x| x * c).collect(),
            };
            out.collapse();
            return out;
        }
        let n = self.common_level(rhs);
        let a = self.lift(n);
        let b = rhs.lift(n);
        let mut prod = vec![Rational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] = &prod[i + j] + x * y;
                }
            }
        }
        Scalar::from_parts(n, prod)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let p4 = cyclotomic_poly(4);
        assert_eq!(*p4, vec![rat_int(1), rat_int(0), rat_int(1)]);
        let p6 = cyclotomic_poly(6);
        assert_eq!(*p6, vec![rat_int(1), rat_int(-1), rat_int(1)]);
        assert_eq!(cyclotomic_poly(12).len() - 1, 4);
    }

    #[test]
    fn gaussian_i() {
        let i = Scalar::root_of_unity(4, 1);
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert_eq!(i.pow(4).unwrap(), Scalar::one());
        let one_plus_i = &Scalar::one() + &i;
        let inv = one_plus_i.inv().unwrap();
        assert_eq!(&inv * &one_plus_i, Scalar::one());
        assert_eq!(i.conj(), -&i);
    }

    #[test]
    fn mixed_levels_and_canonical_form() {
        let z3 = Scalar::root_of_unity(3, 1);
        let z6 = Scalar::root_of_unity(6, 1);
        // ζ6 = -ζ3^2
        assert_eq!(z6, -&z3.pow(2).unwrap());
        let sum: Scalar = (0..5).fold(Scalar::zero(), |a, k| &a + &Scalar::root_of_unity(5, k));
        assert!(sum.is_zero());
        let x = &z6 * &Scalar::root_of_unity(4, 1);
        assert_eq!(x.level(), 12);
        let (d, _) = (&z6 * &Scalar::root_of_unity(2, 1)).canonical();
        assert_eq!(d, 3);
        assert_eq!(Scalar::parse(&x.render()).unwrap(), x);
    }

    #[test]
    fn rational_text() {
        assert_eq!(render_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(render_rational(&rat_int(3)), "3");
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(binomial(-1, 2), rat_int(1));
        assert_eq!(binomial(5, 2), rat_int(10));
    }
}
