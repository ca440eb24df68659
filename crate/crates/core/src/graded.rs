//! Weighted polynomial rings truncated by total weight.
//!
//! A [`Ring`] is a list of named generators with positive weights plus a
//! truncation order `D`; every stored monomial has `Σ exponent·weight ≤ D`.
//! Generators of weight 0 are auxiliary series variables. They are bounded
//! separately: their total degree may not exceed `aux_order`. Both cut-offs
//! are ideals, so truncation is a ring homomorphism.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat_int, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    generators: Vec<Generator>,
    truncation: u32,
    aux_order: u32,
}

impl Ring {
    pub fn new(generators: Vec<Generator>, truncation: u32) -> Result<Arc<Ring>> {
        Self::with_aux(generators, truncation, 0)
    }

    pub fn with_aux(generators: Vec<Generator>, truncation: u32, aux_order: u32) -> Result<Arc<Ring>> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(Error::IncompatibleRing(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(Arc::new(Ring {
            generators,
            truncation,
            aux_order,
        }))
    }

    /// `Q[p1, …, p_n]` with `p_k = [CP^k]` of weight `k`.
    pub fn cobordism(n: u32, truncation: u32) -> Arc<Ring> {
        let gens = (1..=n)
            .map(|k| Generator {
                name: format!("p{k}"),
                weight: k,
            })
            .collect();
        Ring::new(gens, truncation).expect("distinct names")
    }

    /// `Q[y]` truncated at `y^{D+1}`.
    pub fn hirzebruch(truncation: u32) -> Arc<Ring> {
        Ring::new(
            vec![Generator {
                name: "y".into(),
                weight: 1,
            }],
            truncation,
        )
        .expect("single generator")
    }

    pub fn rational() -> Arc<Ring> {
        Ring::new(Vec::new(), 0).expect("empty")
    }

    /// Same ring with extra weight-0 generators whose total degree is capped.
    pub fn extend_aux(&self, names: &[&str], cap: u32) -> Result<Arc<Ring>> {
        let mut gens = self.generators.clone();
        for n in names {
            gens.push(Generator {
                name: (*n).to_string(),
                weight: 0,
            });
        }
        Ring::with_aux(gens, self.truncation, cap.max(self.aux_order))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn aux_order(&self) -> u32 {
        self.aux_order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn weight(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .map(|&(i, e)| self.generators[i as usize].weight * e)
            .sum()
    }

    fn aux_degree(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .filter(|&&(i, _)| self.generators[i as usize].weight == 0)
            .map(|&(_, e)| e)
            .sum()
    }

    fn admits(&self, m: &Monomial) -> bool {
        self.weight(m) <= self.truncation && self.aux_degree(m) <= self.aux_order
    }
}

/// Sparse exponent vector: `(generator index, exponent)` sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(u16, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(i as u16, e)])
        }
    }

    /// From `(generator index, exponent)` pairs in any order; zero exponents dropped.
    pub fn from_entries(mut entries: Vec<(u16, u32)>) -> Self {
        entries.retain(|&(_, e)| e > 0);
        entries.sort_unstable();
        Monomial(entries)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(j, _)| j as usize == i)
            .map_or(0, |&(_, e)| e)
    }

    pub fn entries(&self) -> &[(u16, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    fn dense(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, e) in &self.0 {
            v[i as usize] = e;
        }
        v
    }
}

/// An element of a truncated weighted polynomial ring.
#[derive(Clone, Debug)]
pub struct GradedPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Neg,
    ScalarMul,
}

/// Checked ring operation. `Neg` ignores `b`; `ScalarMul` requires `b` to be
/// a constant.
pub fn poly_arith(op: PolyOp, a: &GradedPoly, b: &GradedPoly) -> Result<GradedPoly> {
    a.check_ring(b)?;
    Ok(match op {
        PolyOp::Add => a + b,
        PolyOp::Mul => a * b,
        PolyOp::Neg => -a,
        PolyOp::ScalarMul => {
            if !b.is_constant() {
                return Err(Error::IncompatibleRing("scalar operand is not constant".into()));
            }
            a.scale(&b.constant_term())
        }
    })
}

impl GradedPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        GradedPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        let mut p = GradedPoly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Scalar::one())
    }

    pub fn from_rational(ring: &Arc<Ring>, r: Rational) -> Self {
        Self::constant(ring, Scalar::from_rational(r))
    }

    pub fn from_int(ring: &Arc<Ring>, n: i64) -> Self {
        Self::from_rational(ring, rat_int(n))
    }

    pub fn generator(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::MissingAssignment(name.to_string()))?;
        Ok(Self::monomial(ring, Monomial::var(i, 1), Scalar::one()))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        let mut p = GradedPoly::zero(ring);
        if !c.is_zero() && ring.admits(&m) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = GradedPoly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() || !self.ring.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }

    /// A unit iff the constant term is nonzero (everything else is nilpotent).
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|m| self.ring.weight(m)).max().unwrap_or(0)
    }

    pub fn same_ring(&self, other: &GradedPoly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn check_ring(&self, other: &GradedPoly) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::IncompatibleRing(format!(
                "{:?} vs {:?}",
                self.ring.generators, other.ring.generators
            )))
        }
    }

    pub fn checked_add(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &GradedPoly) -> Result<GradedPoly> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Scalar) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero(&self.ring);
        }
        GradedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> GradedPoly {
        self.scale(&Scalar::from_rational(r.clone()))
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        let mut acc = GradedPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit: `c^{-1} Σ (-ν/c)^k` where `self = c + ν`.
    pub fn inv(&self) -> Result<GradedPoly> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit(format!("{self} has zero constant term")));
        }
        let cinv = c.inv()?;
        let mut nu = self.clone();
        nu.terms.remove(&Monomial::one());
        let x = -&nu.scale(&cinv);
        let mut acc = GradedPoly::one(&self.ring);
        let mut power = GradedPoly::one(&self.ring);
        loop {
            power = &power * &x;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&cinv))
    }

    /// `exp(x)` for nilpotent `x`.
    pub fn exp_nilpotent(&self) -> Result<GradedPoly> {
        if !self.is_nilpotent() {
            return Err(Error::ExpLogDomain(format!("exp of non-nilpotent {self}")));
        }
        let mut acc = GradedPoly::one(&self.ring);
        let mut term = GradedPoly::one(&self.ring);
        let mut k = 1i64;
        loop {
            term = (&term * self).scale_rational(&Rational::new(1.into(), k.into()));
            if term.is_zero() {
                break;
            }
            acc = &acc + &term;
            k += 1;
        }
        Ok(acc)
    }

    /// `log(x)` for `x = 1 + nilpotent`.
    pub fn log_unipotent(&self) -> Result<GradedPoly> {
        if !self.constant_term().is_one() {
            return Err(Error::ExpLogDomain(format!("log needs constant term 1, got {self}")));
        }
        let nu = self - &GradedPoly::one(&self.ring);
        let mut acc = GradedPoly::zero(&self.ring);
        let mut power = GradedPoly::one(&self.ring);
        let mut k = 1i64;
        loop {
            power = &power * &nu;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = &acc + &power.scale_rational(&Rational::new(sign.into(), k.into()));
            k += 1;
        }
        Ok(acc)
    }

    /// Ring homomorphism defined by images of the generators, truncated in
    /// the target ring. Generators that do not occur in `self` need no image.
    pub fn specialize(&self, target: &Arc<Ring>, phi: &HashMap<String, GradedPoly>) -> Result<GradedPoly> {
        for (name, img) in phi {
            if !img.ring.as_ref().eq(target.as_ref()) {
                return Err(Error::IncompatibleRing(format!("image of `{name}` lives in another ring")));
            }
            if let Some(i) = self.ring.index_of(name) {
                let w = self.ring.generators[i].weight;
                if w > 0 && img.max_weight() > w {
                    return Err(Error::WeightIncrease(name.clone()));
                }
            }
        }
        self.map_generators(target, |name| phi.get(name).cloned())
    }

    fn map_generators(
        &self,
        target: &Arc<Ring>,
        image: impl Fn(&str) -> Option<GradedPoly>,
    ) -> Result<GradedPoly> {
        let mut cache: HashMap<(u16, u32), GradedPoly> = HashMap::new();
        let mut out = GradedPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = GradedPoly::constant(target, c.clone());
            for &(i, e) in &m.0 {
                if t.is_zero() {
                    break;
                }
                let p = match cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let name = &self.ring.generators[i as usize].name;
                        let img = image(name).ok_or_else(|| Error::MissingAssignment(name.clone()))?;
                        let p = img.pow(e);
                        cache.insert((i, e), p.clone());
                        p
                    }
                };
                t = &t * &p;
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-express in a ring that has every generator used here (by name).
    pub fn embed(&self, target: &Arc<Ring>) -> Result<GradedPoly> {
        if self.ring.as_ref() == target.as_ref() {
            let mut p = self.clone();
            p.ring = target.clone();
            return Ok(p);
        }
        self.map_generators(target, |name| GradedPoly::generator(target, name).ok())
    }

    /// Adams operation on coefficients: `Ψ^r(y) = y^r`, rationals fixed.
    pub fn adams(&self, r: u32) -> Result<GradedPoly> {
        if r == 0 {
            return Err(Error::AdamsRange("r must be positive".into()));
        }
        if self.terms.values().any(|c| !c.is_rational()) {
            return Err(Error::AdamsRange("Adams operation on irrational coefficient".into()));
        }
        let ring = self.ring.clone();
        self.map_generators(&ring, |name| {
            if name == "y" {
                GradedPoly::generator(&ring, "y").ok().map(|y| y.pow(r))
            } else {
                None
            }
        })
        .map_err(|e| match e {
            Error::MissingAssignment(g) => Error::AdamsRange(format!("Ψ^{r} is not defined on `{g}`")),
            other => other,
        })
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> GradedPoly {
        GradedPoly::from_terms(&self.ring, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Terms in graded-lex order: total weight, auxiliary degree, then the
    /// dense exponent vector.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, &Scalar)> {
        let n = self.ring.generators.len();
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| ((self.ring.weight(m), self.ring.aux_degree(m), m.dense(n)), c))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|((_, _, d), c)| (d, c)).collect()
    }

    /// Compact text form, e.g. `1/2 - 1/2*p1`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(g, &e)| {
                    let name = &self.ring.generators[g].name;
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let (neg, mag) = match c.as_rational() {
                Some(r) if r < &Rational::zero() => (true, format!("{}", -r)),
                Some(r) => (false, format!("{r}")),
                None => (false, format!("({})", c.render())),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    pub fn to_json(&self) -> GradedPolyJson {
        GradedPolyJson {
            generators: self
                .ring
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    weight: g.weight,
                })
                .collect(),
            truncation: self.ring.truncation,
            aux_order: (self.ring.aux_order > 0).then_some(self.ring.aux_order),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(exponents, c)| TermJson {
                    exponents,
                    coeff: c.render(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &GradedPolyJson) -> Result<GradedPoly> {
        let ring = j.ring()?;
        Self::from_json_in(j, &ring)
    }

    /// Parse terms, reusing `ring` when the declared ring matches it.
    pub fn from_json_in(j: &GradedPolyJson, ring: &Arc<Ring>) -> Result<GradedPoly> {
        if *j.ring()? != **ring {
            return Err(Error::Schema("polynomial ring differs from the expected ring".into()));
        }
        let n = ring.generators.len();
        let mut p = GradedPoly::zero(ring);
        for t in &j.terms {
            if t.exponents.len() != n {
                return Err(Error::Schema(format!(
                    "exponent vector of length {} for {} generators",
                    t.exponents.len(),
                    n
                )));
            }
            let m = Monomial(
                t.exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i as u16, e))
                    .collect(),
            );
            if !ring.admits(&m) {
                return Err(Error::Schema("term exceeds truncation".into()));
            }
            let c = Scalar::parse(&t.coeff)?;
            if c.is_zero() {
                return Err(Error::Schema("zero coefficient stored".into()));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPolyJson {
    pub generators: Vec<GeneratorJson>,
    pub truncation: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_order: Option<u32>,
    pub terms: Vec<TermJson>,
}

impl GradedPolyJson {
    pub fn ring(&self) -> Result<Arc<Ring>> {
        Ring::with_aux(
            self.generators
                .iter()
                .map(|g| Generator {
                    name: g.name.clone(),
                    weight: g.weight,
                })
                .collect(),
            self.truncation,
            self.aux_order.unwrap_or(0),
        )
    }
}

impl PartialEq for GradedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for GradedPoly {}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn assert_same(a: &GradedPoly, b: &GradedPoly) {
    assert!(
        a.same_ring(b),
        "graded polynomial operands live in different rings"
    );
}

impl<'a> Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        assert_same(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        assert_same(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        GradedPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        assert_same(self, rhs);
        let ring = &self.ring;
        let mut out = GradedPoly::zero(ring);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let wa: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m, c, ring.weight(m), ring.aux_degree(m)))
            .collect();
        let wb: Vec<_> = rhs
            .terms
            .iter()
            .map(|(m, c)| (m, c, ring.weight(m), ring.aux_degree(m)))
            .collect();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for &(ma, ca, wta, aua) in &wa {
            for &(mb, cb, wtb, aub) in &wb {
                if wta + wtb > ring.truncation || aua + aub > ring.aux_order {
                    continue;
                }
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        let s = o.get() + &c;
                        *o.get_mut() = s;
                    }
                }
            }
        }
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(ring: &Arc<Ring>, name: &str) -> GradedPoly {
        GradedPoly::generator(ring, name).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let r = Ring::cobordism(2, 2);
        let one = GradedPoly::one(&r);
        let p1 = p(&r, "p1");
        let prod = &(&one + &p1) * &(&one - &p1);
        assert_eq!(prod, &one - &p1.pow(2));
    }

    #[test]
    fn truncation_kills_heavy_products() {
        let r = Ring::cobordism(2, 2);
        assert!((&p(&r, "p1") * &p(&r, "p2")).is_zero());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = GradedPoly::one(&Ring::cobordism(2, 2));
        let b = GradedPoly::one(&Ring::cobordism(2, 3));
        assert!(matches!(
            poly_arith(PolyOp::Add, &a, &b),
            Err(Error::IncompatibleRing(_))
        ));
    }

    #[test]
    fn specialization_examples() {
        let r = Ring::cobordism(4, 4);
        let h = Ring::hirzebruch(4);
        let y = p(&h, "y");
        let mut phi = HashMap::new();
        for n in 1..=4u32 {
            let mut v = GradedPoly::zero(&h);
            for k in 0..=n {
                v = &v + &y.pow(k);
            }
            phi.insert(format!("p{n}"), v);
        }
        let got = p(&r, "p2").specialize(&h, &phi).unwrap();
        assert_eq!(got, &(&GradedPoly::one(&h) + &y) + &y.pow(2));

        let zero_phi: HashMap<_, _> = (1..=4).map(|n| (format!("p{n}"), GradedPoly::zero(&h))).collect();
        let x = &GradedPoly::one(&r) + &p(&r, "p1");
        assert_eq!(x.specialize(&h, &zero_phi).unwrap(), GradedPoly::one(&h));

        let one_phi: HashMap<_, _> = (1..=4).map(|n| (format!("p{n}"), GradedPoly::one(&h))).collect();
        let b1 = (&GradedPoly::one(&r) - &p(&r, "p1")).scale_rational(&rat(1, 2));
        assert!(b1.specialize(&h, &one_phi).unwrap().is_zero());

        let missing: HashMap<String, GradedPoly> = HashMap::new();
        assert!(matches!(
            x.specialize(&h, &missing),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn inverse_exp_log() {
        let h = Ring::hirzebruch(6);
        let y = p(&h, "y");
        let one = GradedPoly::one(&h);
        let u = &one - &y;
        assert_eq!(&u * &u.inv().unwrap(), one);
        let l = y.scale_rational(&rat(3, 2));
        assert_eq!(l.exp_nilpotent().unwrap().log_unipotent().unwrap(), l);
        assert!(y.inv().is_err());
    }

    #[test]
    fn adams_on_y() {
        let h = Ring::hirzebruch(6);
        let y = p(&h, "y");
        assert_eq!(y.adams(2).unwrap(), y.pow(2));
        let r = Ring::cobordism(2, 2);
        assert!(matches!(p(&r, "p1").adams(2), Err(Error::AdamsRange(_))));
    }

    #[test]
    fn json_round_trip() {
        let r = Ring::cobordism(3, 3);
        let x = &(&GradedPoly::from_rational(&r, rat(-1, 2)) + &p(&r, "p1").pow(2)) + &p(&r, "p3");
        let j = x.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: GradedPolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(GradedPoly::from_json(&back).unwrap(), x);
        assert_eq!(j.terms[0].coeff, "-1/2");
        assert_eq!(x.render(), "-1/2 + p1^2 + p3");
    }

    #[test]
    fn aux_generators_are_capped() {
        let r = Ring::cobordism(2, 2).extend_aux(&["x1", "x2"], 3).unwrap();
        let x1 = p(&r, "x1");
        let x2 = p(&r, "x2");
        assert!(!(&x1.pow(2) * &x2).is_zero());
        assert!((&x1.pow(2) * &x2.pow(2)).is_zero());
    }
}
