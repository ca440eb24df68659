//! Oracle suites. Each case recomputes a value by an independent route
//! (hand formulas, brute-force reversion, binomial and Hodge tables,
//! closed-form residues) and compares canonical serializations.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_group::{
    genus_map, generator_table, orientation_series, specialize_genus, FormalGroupLaw, GeneratorTable, Genus,
};
use crate::graded::{GradedPoly, Ring};
use crate::kring::{exterior_powers, newton_adams, Algebra, Element, EvalMode, MultClass, SplitBundle};
use crate::loops::{
    hirzebruch_negative_space_check, omega, project, tensor_polarization_map, tw_mult_operator, Kernel,
    PairingConfig, Point, Pole, Polarization, RationalLoop,
};
use crate::scalar::{rat, rat_int, Rational, Scalar};
use crate::series::{bernoulli, Series};

pub const SUITES: [&str; 5] = ["fgl", "generators", "loopspace", "hirzebruch", "kring"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub case: String,
    pub oracle: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Deliberate defects used to check that the suites catch them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the cubic coefficient of the exponential.
    ExpSign,
}

impl std::str::FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Fault> {
        match s {
            "exp-sign" => Ok(Fault::ExpSign),
            other => Err(Error::Config(format!("unknown fault `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: u64,
    pub timings: bool,
    pub fault: Option<Fault>,
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<OracleReport>> {
    run_suite_with(
        name,
        &Options {
            seed,
            ..Options::default()
        },
    )
}

/// Run one suite or `all`. Reports are sorted by case id.
pub fn run_suite_with(name: &str, opts: &Options) -> Result<Vec<OracleReport>> {
    let names: Vec<&'static str> = match name {
        "all" => SUITES.to_vec(),
        n => match SUITES.iter().find(|s| **s == n) {
            Some(s) => vec![*s],
            None => return Err(Error::UnknownSuite(n.to_string())),
        },
    };
    let mut out: Vec<OracleReport> = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|&n| s.spawn(move || run_one(n, opts)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite thread"))
            .collect()
    });
    out.sort_by(|a, b| a.case.cmp(&b.case));
    Ok(out)
}

pub fn to_json_lines(reports: &[OracleReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&serde_json::to_string(r).expect("report serializes"));
        s.push('\n');
    }
    s
}

fn run_one(name: &'static str, opts: &Options) -> Vec<OracleReport> {
    let mut run = Run {
        suite: name,
        out: Vec::new(),
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed ^ fnv(name)),
    };
    match name {
        "fgl" => fgl_suite(&mut run),
        "generators" => generators_suite(&mut run),
        "loopspace" => loopspace_suite(&mut run),
        "hirzebruch" => hirzebruch_suite(&mut run),
        "kring" => kring_suite(&mut run),
        _ => unreachable!("checked by caller"),
    }
    run.out
}

fn fnv(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

const MAX_FIELD: usize = 4000;

fn clip(s: String) -> String {
    if s.len() <= MAX_FIELD {
        return s;
    }
    let mut cut = MAX_FIELD;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{}…(+{} bytes)", &s[..cut], s.len() - cut)
}

struct Run<'a> {
    suite: &'static str,
    out: Vec<OracleReport>,
    opts: &'a Options,
    rng: ChaCha8Rng,
}

impl Run<'_> {
    /// `f` returns `(expected, actual)` serializations.
    fn case(&mut self, id: &str, oracle: &str, f: impl FnOnce() -> Result<(String, String)>) {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let (expected, actual, ok) = match res {
            Ok(Ok((e, a))) => {
                let ok = e == a;
                (e, a, ok)
            }
            Ok(Err(e)) => ("<value>".into(), format!("error: {e}"), false),
            Err(p) => {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                ("<value>".into(), format!("panic: {msg}"), false)
            }
        };
        self.out.push(OracleReport {
            case: format!("{}/{}", self.suite, id),
            oracle: oracle.into(),
            expected: clip(expected),
            actual: clip(actual),
            status: if ok { Status::Pass } else { Status::Fail },
            runtime_ms: self.opts.timings.then(|| start.elapsed().as_millis() as u64),
        });
    }
}

fn yes(b: bool) -> String {
    b.to_string()
}

fn el(e: &Element) -> String {
    let parts: Vec<String> = e.coords().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn series_coeffs(s: &Series, from: i64, to: i64) -> String {
    let parts: Vec<String> = (from..=to).map(|n| s.coeff(n).to_string()).collect();
    parts.join("; ")
}

fn naive_coeffs(v: &[GradedPoly], from: usize, to: usize) -> String {
    let parts: Vec<String> = (from..=to).map(|n| v[n].to_string()).collect();
    parts.join("; ")
}

fn y_of(ring: &Arc<Ring>) -> GradedPoly {
    GradedPoly::generator(ring, "y").expect("ring has y")
}

/// `y ↦ 0` inside the same ring.
fn at_y0(ring: &Arc<Ring>) -> impl Fn(&GradedPoly) -> Result<GradedPoly> + '_ {
    move |c: &GradedPoly| {
        let mut phi = HashMap::new();
        phi.insert("y".to_string(), GradedPoly::zero(ring));
        c.specialize(ring, &phi)
    }
}

/// `1/(1-y)` as the finite geometric sum in the truncated ring.
fn geometric_y(ring: &Arc<Ring>) -> GradedPoly {
    let y = y_of(ring);
    (0..=ring.truncation()).fold(GradedPoly::zero(ring), |acc, j| &acc + &y.pow(j))
}

// Dense truncated power series for the brute-force oracles.

fn nzero(ring: &Arc<Ring>, n: usize) -> Vec<GradedPoly> {
    vec![GradedPoly::zero(ring); n + 1]
}

fn nmul(a: &[GradedPoly], b: &[GradedPoly], n: usize) -> Vec<GradedPoly> {
    let ring = a[0].ring().clone();
    let mut out = nzero(&ring, n);
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// `f(g)` by Horner's rule, `g(0) = 0`.
fn ncompose(f: &[GradedPoly], g: &[GradedPoly], n: usize) -> Vec<GradedPoly> {
    let ring = f[0].ring().clone();
    let mut acc = nzero(&ring, n);
    for k in (0..=n).rev() {
        acc = nmul(&acc, g, n);
        acc[0] = &acc[0] + &f[k];
    }
    acc
}

/// Back-substitution: fix the coefficients of `g` one degree at a time
/// until `f(g(t)) = t`.
fn nrevert(f: &[GradedPoly], n: usize) -> Result<Vec<GradedPoly>> {
    let ring = f[0].ring().clone();
    let f1inv = f[1].inv()?;
    let mut g = nzero(&ring, n);
    g[1] = f1inv.clone();
    for k in 2..=n {
        let h = ncompose(f, &g, n);
        g[k] = &g[k] - &(&h[k] * &f1inv);
    }
    Ok(g)
}

fn nexp(a: &[GradedPoly], n: usize) -> Vec<GradedPoly> {
    let ring = a[0].ring().clone();
    let mut out = nzero(&ring, n);
    let mut power = nzero(&ring, n);
    power[0] = GradedPoly::one(&ring);
    let mut fact = Rational::from_integer(1.into());
    for k in 0..=n {
        if k > 0 {
            power = nmul(&power, a, n);
            fact *= rat_int(k as i64);
        }
        for i in 0..=n {
            out[i] = &out[i] + &power[i].scale_rational(&fact.recip());
        }
    }
    out
}

/// Bernoulli numbers by the Akiyama–Tanigawa table, with `B_1 = -1/2`.
fn bernoulli_oracle(n: usize) -> Rational {
    let mut a: Vec<Rational> = (0..=n).map(|m| rat(1, m as i64 + 1)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        out.push(a[0].clone());
        for j in 0..(n - m) {
            a[j] = rat_int(j as i64 + 1) * (&a[j] - &a[j + 1]);
        }
    }
    if n == 1 {
        -out[1].clone()
    } else {
        out[n].clone()
    }
}

fn binom_u(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

fn random_element(rng: &mut ChaCha8Rng, alg: &Algebra, ring: &Arc<Ring>) -> Element {
    let coords: Vec<Rational> = (0..alg.rank()).map(|_| random_rational(rng)).collect();
    alg.element(&coords, ring)
}

fn random_pole(rng: &mut ChaCha8Rng) -> Pole {
    match rng.gen_range(0..8) {
        0 => Pole::one(),
        1 => Pole::root(2, 1),
        2 => Pole::root(4, 1),
        3 => Pole::root(4, 3),
        4 => Pole::root(3, 1),
        5 => Pole::root(6, 5),
        6 => Pole::Rational(rat(2, 1)),
        _ => Pole::Rational(rat(-1, 3)),
    }
}

fn random_loop(
    rng: &mut ChaCha8Rng,
    alg: &Arc<Algebra>,
    ring: &Arc<Ring>,
    laurent: bool,
    poles: bool,
) -> RationalLoop {
    let mut f = RationalLoop::zero(alg, ring);
    if laurent {
        for _ in 0..rng.gen_range(1..=3) {
            let n = rng.gen_range(-3..=3);
            let e = random_element(rng, alg, ring);
            f = f.add(&RationalLoop::monomial(alg, e, n)).expect("same algebra");
        }
    }
    if poles {
        for _ in 0..rng.gen_range(1..=3) {
            let z = random_pole(rng);
            let j = rng.gen_range(1..=3);
            let e = random_element(rng, alg, ring);
            f = f.add(&RationalLoop::pole_term(alg, e, z, j)).expect("same algebra");
        }
    }
    f
}

/// `1/(1 - q/ζ)^j` for `j ≤ 3` and `ζ ∈ {1, -1, i, -i}`.
pub fn minus_basis(alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Vec<RationalLoop> {
    let mut out = Vec::new();
    for z in [Pole::one(), Pole::root(2, 1), Pole::root(4, 1), Pole::root(4, 3)] {
        for j in 1..=3 {
            out.push(RationalLoop::pole_term(alg, alg.one(ring), z.clone(), j));
        }
    }
    out
}

fn fgl_suite(run: &mut Run) {
    let fault = run.opts.fault;
    let built = (|| -> Result<_> {
        let f = FormalGroupLaw::mishchenko(8, 8)?;
        let f = match fault {
            Some(Fault::ExpSign) => {
                let e = f.exp();
                let mut c = e.coeffs().to_vec();
                let i = (3 - e.lowest()) as usize;
                c[i] = -&c[i];
                FormalGroupLaw::from_log_exp(f.log().clone(), Series::new("u", e.ring(), e.lowest(), c))
            }
            None => f,
        };
        let law = f.group_law()?;
        Ok((f, law))
    })();
    let (fgl, law) = match built {
        Ok(v) => v,
        Err(e) => {
            run.case("construction", "Mishchenko logarithm", || Err(e));
            return;
        }
    };
    let ring = fgl.ring().clone();

    run.case("unit-axiom", "F(x,0) = x coefficientwise, order 8", || {
        let mut bad = Vec::new();
        for a in 0..=8u32 {
            let want = if a == 1 { GradedPoly::one(&ring) } else { GradedPoly::zero(&ring) };
            for (i, j) in [(a, 0), (0, a)] {
                if law.coefficient(i, j) != want {
                    bad.push(format!("F_{i}{j}"));
                }
            }
        }
        Ok(("[]".into(), format!("[{}]", bad.join(", "))))
    });
    run.case("commutativity-axiom", "F_ab = F_ba, order 8", || {
        let mut bad = Vec::new();
        for a in 0..=8u32 {
            for b in 0..=(8 - a) {
                if law.coefficient(a, b) != law.coefficient(b, a) {
                    bad.push(format!("F_{a}{b}"));
                }
            }
        }
        Ok(("[]".into(), format!("[{}]", bad.join(", "))))
    });
    run.case("associativity-axiom", "F(F(x1,x2),x3) - F(x1,F(x2,x3)) in Q[p1..p7][x1,x2,x3]", || {
        let r3 = ring.extend_aux(&["x1", "x2", "x3"], 8)?;
        let x: Vec<GradedPoly> = ["x1", "x2", "x3"]
            .iter()
            .map(|n| GradedPoly::generator(&r3, n))
            .collect::<Result<_>>()?;
        let l = law.eval_poly(&law.eval_poly(&x[0], &x[1])?, &x[2])?;
        let r = law.eval_poly(&x[0], &law.eval_poly(&x[1], &x[2])?)?;
        Ok(("0".into(), (&l - &r).to_string()))
    });
    run.case("exp-u2-coefficient", "degree-2 reversion by hand: -p1/2", || {
        let want = GradedPoly::generator(&ring, "p1")?.scale_rational(&rat(-1, 2));
        Ok((want.to_string(), fgl.exp().coeff(2).to_string()))
    });
    run.case("law-x1x2-coefficient", "exp(log x1 + log x2) at order 2 by hand: -p1", || {
        let want = -&GradedPoly::generator(&ring, "p1")?;
        Ok((want.to_string(), law.coefficient(1, 1).to_string()))
    });
    run.case("classical-inverse", "solve x + y - xy = 0: y = -x/(1-x)", || {
        let f = FormalGroupLaw::mishchenko(8, 8)?;
        let (k, _) = specialize_genus(Genus::ClassicalK, &f)?;
        let inv = k.inverse_series()?;
        let want: Vec<String> = (1..=8).map(|_| "-1".to_string()).collect();
        Ok((want.join("; "), series_coeffs(&inv, 1, 8)))
    });
    run.case("classical-log", "Σ u^(n+1)/(n+1) rearranged: -log(1-u)", || {
        let f = FormalGroupLaw::mishchenko(8, 8)?;
        let (k, _) = specialize_genus(Genus::ClassicalK, &f)?;
        let want: Vec<String> = (1..=8).map(|n| crate::scalar::render_rational(&rat(1, n))).collect();
        Ok((want.join("; "), series_coeffs(k.log(), 1, 8)))
    });

    let q = Ring::rational();
    run.case("series-mercator", "Σ u^n/n against -log(1-u), order 8", || {
        let s = Series::one("u", &q, 8).sub(&Series::variable("u", &q, 8))?.log()?.neg();
        let want: Vec<String> = (1..=8).map(|n| crate::scalar::render_rational(&rat(1, n))).collect();
        Ok((want.join("; "), series_coeffs(&s, 1, 8)))
    });
    run.case("series-classical-round-trip", "1 - e^(log(1-u)) = u", || {
        let inner = Series::one("u", &q, 8).sub(&Series::variable("u", &q, 8))?.log()?.neg();
        let outer = Series::one("u", &q, 8).sub(&Series::exp_t("u", &q, 8).compose(&Series::variable("u", &q, 8).neg())?)?;
        let c = outer.compose(&inner)?;
        Ok((Series::variable("u", &q, 8).render(), c.render()))
    });
    run.case("series-catalan-reversion", "brute-force back-substitution of u - u^2", || {
        let f = Series::from_rationals("u", &q, 0, &[rat_int(0), rat_int(1), rat_int(-1)]);
        let f = Series::new("u", &q, 0, (0..=8).map(|n| f.coeff(n.min(2)).scale_rational(&rat_int((n <= 2) as i64))).collect());
        let dense: Vec<GradedPoly> = (0..=8).map(|n| f.coeff(n)).collect();
        let g = nrevert(&dense, 8)?;
        Ok((naive_coeffs(&g, 0, 8), series_coeffs(&f.revert()?, 0, 8)))
    });
    run.case("series-catalan-numbers", "C(2n,n)/(n+1)", || {
        let f = Series::new(
            "u",
            &q,
            0,
            (0..=8).map(|n| GradedPoly::from_int(&q, [0, 1, -1].get(n).copied().unwrap_or(0))).collect(),
        );
        let want: Vec<String> = (1..=8u64).map(|n| (binom_u(2 * n - 2, n - 1) / n).to_string()).collect();
        Ok((want.join("; "), series_coeffs(&f.revert()?, 1, 8)))
    });
    run.case("series-revert-classical", "analytic inverse of 1 - e^(-u): Σ t^n/n", || {
        let f = Series::one("u", &q, 8).sub(&Series::exp_t("u", &q, 8).compose(&Series::variable("u", &q, 8).neg())?)?;
        let want: Vec<String> = (1..=8).map(|n| crate::scalar::render_rational(&rat(1, n))).collect();
        Ok((want.join("; "), series_coeffs(&f.revert()?, 1, 8)))
    });
}

fn generators_suite(run: &mut Run) {
    let table8 = generator_table(None, 8, 8);
    run.case("b₁ = (1−p₁)/2", "hand reversion at order 2", || {
        let t = table8.as_ref().map_err(Clone::clone)?;
        let p1 = GradedPoly::generator(&t.ring, "p1")?;
        let want = (&GradedPoly::one(&t.ring) - &p1).scale_rational(&rat(1, 2));
        Ok((want.to_string(), t.b[0].to_string()))
    });
    run.case("orientation-brute-force", "dense back-substitution of 1 - exp(-z(u)), order 6, D 6", || {
        let f = FormalGroupLaw::mishchenko(6, 6)?;
        let ring = f.ring().clone();
        let mut z = nzero(&ring, 6);
        z[1] = GradedPoly::one(&ring);
        for n in 1..=5i64 {
            z[n as usize + 1] = GradedPoly::generator(&ring, &format!("p{n}"))?.scale_rational(&rat(1, n + 1));
        }
        let neg: Vec<GradedPoly> = z.iter().map(|c| -c).collect();
        let e = nexp(&neg, 6);
        let mut t = nzero(&ring, 6);
        for i in 1..=6 {
            t[i] = -&e[i];
        }
        let u = nrevert(&t, 6)?;
        let actual = orientation_series(&f, &GradedPoly::one(&ring))?;
        Ok((naive_coeffs(&u, 1, 6), series_coeffs(&actual, 1, 6)))
    });
    let low = generator_table(None, 1, 4);
    run.case("a₁ = (p₁−1)/2", "log(t/u) = -b1 t + O(t^2) by hand", || {
        let t = low.as_ref().map_err(Clone::clone)?;
        let p1 = GradedPoly::generator(&t.ring, "p1")?;
        let want = (&p1 - &GradedPoly::one(&t.ring)).scale_rational(&rat(1, 2));
        Ok((want.to_string(), t.a[0].to_string()))
    });
    run.case("c₁ = (1−p₁)/2", "binomial re-expansion of a1 t with t = 1 - 1/q", || {
        let t = low.as_ref().map_err(Clone::clone)?;
        let p1 = GradedPoly::generator(&t.ring, "p1")?;
        let want = (&GradedPoly::one(&t.ring) - &p1).scale_rational(&rat(1, 2));
        Ok((want.to_string(), t.c[1].to_string()))
    });
    run.case("c₀ = −c₁", "weight-1 stable constraint", || {
        let t = low.as_ref().map_err(Clone::clone)?;
        Ok(((-&t.c[1]).to_string(), t.c[0].to_string()))
    });
    run.case("stable-defect", "c0 + Σ c_k/k = 0, order 8", || {
        let t = table8.as_ref().map_err(Clone::clone)?;
        Ok(("0".into(), t.stable_defect().to_string()))
    });
    run.case("reconstruct", "t/t0 + Σ b_k t^(k+1) reproduces u(t)", || {
        let f = FormalGroupLaw::mishchenko(9, 8)?;
        let u = orientation_series(&f, &GradedPoly::one(f.ring()))?;
        let t = table8.as_ref().map_err(Clone::clone)?;
        Ok((u.render(), t.reconstruct()?.render()))
    });
    run.case("classical-K-rows-vanish", "u = t identically", || {
        let t = generator_table(Some(Genus::ClassicalK), 8, 8)?;
        let nonzero = t.b.iter().chain(&t.a).chain(&t.c).filter(|c| !c.is_zero()).count();
        Ok(("0".into(), nonzero.to_string()))
    });
    run.case("classical-K-orientation", "u = t identically", || {
        let f = FormalGroupLaw::mishchenko(9, 8)?;
        let (k, t0) = specialize_genus(Genus::ClassicalK, &f)?;
        let u = orientation_series(&k, &t0)?;
        Ok((Series::variable("t", k.ring(), 9).render(), u.render()))
    });
    run.case("classical-K-sends-b1-to-zero", "p_n ↦ 1 applied to (1-p1)/2 by hand", || {
        let ring = Ring::cobordism(2, 4);
        let p1 = GradedPoly::generator(&ring, "p1")?;
        let b1 = (&GradedPoly::one(&ring) - &p1).scale_rational(&rat(1, 2));
        let m = genus_map(Genus::ClassicalK, 2, 4);
        Ok(("0".into(), b1.specialize(&m.target, &m.phi)?.to_string()))
    });
    run.case("table-json-round-trip", "serialize and parse, order 8", || {
        let t = table8.as_ref().map_err(Clone::clone)?;
        let s = serde_json::to_string(&t.to_json())?;
        let back = GeneratorTable::from_json(&serde_json::from_str(&s)?)?;
        Ok((yes(true), yes(back == *t)))
    });
}

fn hirzebruch_suite(run: &mut Run) {
    let table = generator_table(Some(Genus::Hirzebruch), 8, 8);
    run.case("orientation = (1−q⁻¹)/(1−yq⁻¹)", "t/(1 - y + y t) by geometric expansion, order 8, D 8", || {
        let f = FormalGroupLaw::mishchenko(9, 8)?;
        let (h, t0) = specialize_genus(Genus::Hirzebruch, &f)?;
        let u = orientation_series(&h, &t0)?;
        let ring = h.ring().clone();
        let y = y_of(&ring);
        let g = geometric_y(&ring);
        // t/(1-y+yt) = Σ_k (-y)^k t^{k+1} / (1-y)^{k+1}
        let want: Vec<GradedPoly> = (0..=8)
            .map(|n| {
                if n == 0 {
                    GradedPoly::zero(&ring)
                } else {
                    let k = n as u32 - 1;
                    &(-&y).pow(k) * &g.pow(k + 1)
                }
            })
            .collect();
        Ok((naive_coeffs(&want, 0, 8), series_coeffs(&u, 0, 8)))
    });
    for k in 1..=8usize {
        let t = table.as_ref().map_err(Clone::clone);
        run.case(&format!("c{k} = -y^{k}"), "Mercator expansion of log(1 - y/q)", move || {
            let t = t?;
            Ok(((-&y_of(&t.ring).pow(k as u32)).to_string(), t.c[k].to_string()))
        });
    }
    run.case("φ(p₂) = 1+y+y²", "(n+1)[u^(n+1)] of the closed-form log, D 4", || {
        let m = genus_map(Genus::Hirzebruch, 3, 4);
        let ring = m.target.clone();
        let y = y_of(&ring);
        // [u^3] Σ u^m (1-y^m)/(m(1-y)) = (1-y^3)/(3(1-y))
        let want = (&(&GradedPoly::one(&ring) - &y.pow(3)) * &geometric_y(&ring)).scale_rational(&rat(1, 3));
        Ok((want.scale_rational(&rat_int(3)).to_string(), m.phi["p2"].to_string()))
    });
    run.case("normalized-log", "Σ u^n (1-y^n)/(n(1-y))", || {
        let f = FormalGroupLaw::mishchenko(8, 8)?;
        let (h, _) = specialize_genus(Genus::Hirzebruch, &f)?;
        let ring = h.ring().clone();
        let y = y_of(&ring);
        let g = geometric_y(&ring);
        let want: Vec<GradedPoly> = (0..=8i64)
            .map(|n| {
                if n == 0 {
                    GradedPoly::zero(&ring)
                } else {
                    (&(&GradedPoly::one(&ring) - &y.pow(n as u32)) * &g).scale_rational(&rat(1, n))
                }
            })
            .collect();
        Ok((naive_coeffs(&want, 0, 8), series_coeffs(h.log(), 0, 8)))
    });
    run.case("log(1−yq⁻¹)", "Mercator: -Σ y^k w^k / k with w = 1/q", || {
        let ring = Ring::hirzebruch(8);
        let y = y_of(&ring);
        let s = Series::one("w", &ring, 8).sub(&Series::variable("w", &ring, 8).scale(&y))?.log()?;
        let want: Vec<GradedPoly> = (1..=8i64).map(|k| (-&y.pow(k as u32)).scale_rational(&rat(1, k))).collect();
        let want: Vec<String> = want.iter().map(|c| c.to_string()).collect();
        Ok((want.join("; "), series_coeffs(&s, 1, 8)))
    });

    // Formal-group inversion of the dilaton shift.
    let pieces = (|| -> Result<_> {
        let f = FormalGroupLaw::mishchenko(9, 8)?;
        let (h, t0) = specialize_genus(Genus::Hirzebruch, &f)?;
        let u = orientation_series(&h, &t0)?.truncate(8);
        let ring = h.ring().clone();
        // u(1 - q) with q = 1/(1-t): -t/(1-y-t) = -Σ t^k/(1-y)^k
        let g = geometric_y(&ring);
        let shifted = Series::new(
            "t",
            &ring,
            0,
            (0..=8u32)
                .map(|k| if k == 0 { GradedPoly::zero(&ring) } else { -&g.pow(k) })
                .collect(),
        );
        Ok((h, u, shifted))
    })();
    let p2 = pieces.as_ref().map_err(Clone::clone).cloned();
    run.case("inverse-of-orientation", "ι(u(t)) against the expansion of (1-q)/(1-yq), order 8", move || {
        let (h, u, shifted) = p2?;
        let inv = h.inverse_series()?.with_var("u").truncate(8);
        let composed = inv.compose(&u.with_var("u"))?.truncate(8);
        Ok((series_coeffs(&shifted, 0, 8), series_coeffs(&composed, 0, 8)))
    });
    run.case("F(u(1−q⁻¹), u(1−q)) = 0", "group law on the two orientations, order 8", move || {
        let (h, u, shifted) = pieces?;
        let law = h.group_law()?;
        let v = law.eval_series(&u, &shifted)?;
        let shown = if v.is_zero() { "0".to_string() } else { v.render() };
        Ok(("0 (order 8)".to_string(), format!("{shown} (order {})", v.order().min(8))))
    });

    let alg = Arc::new(Algebra::point());
    let ring = Ring::hirzebruch(8);
    let y = y_of(&ring);
    let shift_c = &y * &geometric_y(&ring);
    let kernel = Kernel::hirzebruch(&ring);
    for (i, f) in minus_basis(&alg, &ring).into_iter().enumerate() {
        let kernel = kernel.clone();
        let shift_c = shift_c.clone();
        let alg = alg.clone();
        run.case(&format!("polarization-basis-{i:02}"), "f + y/(1-y) f(0) and f(∞) = y f(0)", move || {
            let k = kernel?;
            let img = tensor_polarization_map(&k, &f)?;
            let want = f.add(&RationalLoop::constant(&alg, f.value_at_zero()?.scale(&shift_c)))?;
            let ok = hirzebruch_negative_space_check(&img)?;
            Ok((format!("{want} | true"), format!("{img} | {ok}")))
        });
    }
    run.case("constraint-projection", "constant adjustment enforcing f(∞) = y f(0)", || {
        let f = RationalLoop::pole_term(&alg, alg.one(&ring), Pole::one(), 1);
        let (plus, minus) = project(&f, &Polarization::hirzebruch(&ring)?)?;
        let c = RationalLoop::scalar(&alg, &shift_c);
        Ok((
            format!("{} | {}", c.neg(), f.add(&c)?),
            format!("{plus} | {minus}"),
        ))
    });
    run.case("negative-space-check", "f(∞) = y/(1-y), f(0) = 1/(1-y)", || {
        let f = RationalLoop::pole_term(&alg, alg.one(&ring), Pole::one(), 1)
            .add(&RationalLoop::scalar(&alg, &shift_c))?;
        Ok((yes(true), yes(hirzebruch_negative_space_check(&f)?)))
    });
    run.case("y=0-kernel", "hirzebruch kernel at y = 0 is the canonical one", || {
        let k = Kernel::hirzebruch(&ring)?;
        let spec = at_y0(&ring);
        let mut n: Vec<String> = Vec::new();
        for (key, c) in &k.numerator {
            let c = spec(c)?;
            if !c.is_zero() {
                n.push(format!("{key:?}:{c}"));
            }
        }
        let canon: Vec<String> = Kernel::canonical(&ring).numerator.iter().map(|(k, c)| format!("{k:?}:{c}")).collect();
        Ok((canon.join(","), n.join(",")))
    });
    run.case("y=0-polarization-map", "twelve basis images at y = 0 equal the inputs", || {
        let k = Kernel::hirzebruch(&ring)?;
        let mut bad = 0;
        for f in minus_basis(&alg, &ring) {
            if tensor_polarization_map(&k, &f)?.map_coefficients(at_y0(&ring))? != f {
                bad += 1;
            }
        }
        Ok(("0".into(), bad.to_string()))
    });
    run.case("y=0-projection", "constraint projection at y = 0 is the standard one", || {
        let f = crate::parse::parse_loop("q^2 + 3/(1-q)^2 - q^-1/(1+q)", &alg, &ring)?;
        let (p, m) = project(&f, &Polarization::hirzebruch(&ring)?)?;
        let (ps, ms) = project(&f, &Polarization::Standard)?;
        let spec = at_y0(&ring);
        Ok((format!("{ps} | {ms}"), format!("{} | {}", p.map_coefficients(&spec)?, m.map_coefficients(&spec)?)))
    });
    run.case("y=0-dilaton", "(1-q)/(1-yq) at y = 0 is 1 - q", || {
        let h = crate::loops::dilaton_shift("hirzebruch", &alg, &ring)?;
        let s = crate::loops::dilaton_shift("standard", &alg, &ring)?;
        Ok((s.to_string(), h.map_coefficients(at_y0(&ring))?.to_string()))
    });
    run.case("y=0-orientation", "t/(1-y+yt) at y = 0 is t", || {
        let t = table.as_ref().map_err(Clone::clone)?;
        let u = t.reconstruct()?;
        let spec = at_y0(&t.ring);
        let u0 = u.map_coeffs(|c| spec(c).expect("specialize"));
        Ok((Series::variable("t", &t.ring, u.order()).render(), u0.render()))
    });
    run.case("y=0-twisted-pairing", "scale 1/(1-y), twist C_y(T) agrees with the plain pairing at y = 0", || {
        let p1 = Arc::new(Algebra::proj(1)?);
        let t = generator_table(Some(Genus::Hirzebruch), 2, 8)?;
        let cls = MultClass::from_table(&t)?;
        let w = cls.eval(&p1, &SplitBundle::tangent_proj(&p1, &t.ring)?, EvalMode::LineProduct)?;
        let cfg = PairingConfig {
            twist: Some(w),
            scale: Some(geometric_y(&t.ring)),
            r: 1,
        };
        let f = crate::parse::parse_loop("L/(1-q)^2 + q", &p1, &t.ring)?;
        let g = crate::parse::parse_loop("1/(1+q) - L*q^-1", &p1, &t.ring)?;
        let twisted = at_y0(&t.ring)(&omega(&f, &g, &cfg)?)?;
        Ok((omega(&f, &g, &PairingConfig::standard())?.to_string(), twisted.to_string()))
    });
    for n in 1..=3usize {
        run.case(&format!("chi_-y(CP^{n})"), "Hodge numbers χ(Ω^p) = (-1)^p and φ_y(p_n)", move || {
            let a = Algebra::proj(n)?;
            let t = generator_table(Some(Genus::Hirzebruch), n as u32, 6)?;
            let cls = MultClass::from_table(&t)?;
            let v = cls.eval(&a, &SplitBundle::tangent_proj(&a, &t.ring)?, EvalMode::LineProduct)?;
            let y = y_of(&t.ring);
            let hodge = (0..=n as u32).fold(GradedPoly::zero(&t.ring), |acc, p| &acc + &y.pow(p));
            let m = genus_map(Genus::Hirzebruch, n as u32, 6);
            let phi = m.phi[&format!("p{n}")].clone();
            Ok((format!("{hodge} | {hodge}"), format!("{} | {phi}", a.chi(&v))))
        });
    }
    run.case("dilaton-expansion", "(1-e^x)/(1-y e^x) by series arithmetic, D 6", || {
        let r6 = Ring::hirzebruch(6);
        let h = crate::loops::dilaton_shift("hirzebruch", &alg, &r6)?;
        let s = h.expand_at(&Pole::one(), 6)?.remove(0);
        let y = y_of(&r6);
        let ex = Series::exp_t("x", &r6, 6);
        let num = Series::one("x", &r6, 6).sub(&ex)?;
        let den = Series::one("x", &r6, 6).sub(&ex.scale(&y))?;
        Ok((series_coeffs(&num.div(&den)?, 0, 6), series_coeffs(&s, 0, 6)))
    });
    run.case("tw-mult-hirzebruch-line", "-Σ (y^k/k)(α^k - 1) q^k/(q^k - 1) built by division", || {
        let p1 = Arc::new(Algebra::proj(1)?);
        let d = 4;
        let t = generator_table(Some(Genus::Hirzebruch), d, d)?;
        let r = t.ring.clone();
        let cls = MultClass::from_table(&t)?;
        let l = p1.named("L", &r)?;
        let (exponent, _) = tw_mult_operator(&p1, &cls, &SplitBundle::lines(&[l.clone()]), 2)?;
        let y = y_of(&r);
        let mut want = RationalLoop::zero(&p1, &r);
        let one = RationalLoop::one(&p1, &r);
        let q = RationalLoop::q(&p1, &r);
        for k in 1..=d {
            let qk = q.pow(k)?;
            let geo = qk.div(&qk.sub(&one)?)?;
            let coef = p1
                .pow(&l, k as i64)?
                .sub(&p1.one(&r))
                .scale(&(-&y.pow(k)).scale_rational(&rat(1, k as i64)));
            want = want.add(&geo.scale_element(&coef))?;
        }
        Ok((want.to_string(), exponent.to_string()))
    });
}

fn loopspace_suite(run: &mut Run) {
    let alg = Arc::new(Algebra::point());
    let ring = Ring::rational();
    let one = RationalLoop::one(&alg, &ring);
    let geo1 = RationalLoop::pole_term(&alg, alg.one(&ring), Pole::one(), 1);

    run.case("residue-zero-1/(q(1-q))", "partial fractions 1/q + 1/(1-q)", || {
        let f = RationalLoop::monomial(&alg, alg.one(&ring), -1).mul(&geo1)?;
        let pf = RationalLoop::monomial(&alg, alg.one(&ring), -1).add(&geo1)?;
        Ok((format!("{} | {}", el(&alg.one(&ring)), pf), format!("{} | {}", el(&f.residue(&Point::Zero)?), f)))
    });
    run.case("omega(1/(1-q), 1)", "partial fractions: -[Res_0 + Res_∞] (1/q + 1/(1-q)) dq", || {
        Ok(("-1".into(), omega(&geo1, &one, &PairingConfig::standard())?.to_string()))
    });
    run.case("project-q/(1-q)", "q/(1-q) = -1 + 1/(1-q)", || {
        let f = crate::parse::parse_loop("q/(1-q)", &alg, &ring)?;
        let (p, m) = project(&f, &Polarization::Standard)?;
        Ok((format!("{} | {}", one.neg(), geo1), format!("{p} | {m}")))
    });
    let canon = Kernel::canonical(&ring);
    for (i, f) in minus_basis(&alg, &ring).into_iter().enumerate() {
        let canon = canon.clone();
        run.case(&format!("canonical-kernel-basis-{i:02}"), "identity on the standard negative space", move || {
            Ok((f.to_string(), tensor_polarization_map(&canon, &f)?.to_string()))
        });
    }
    run.case("canonical-kernel-double-pole", "1/(1-q)^2 maps to 1/(1-x)^2", || {
        let f = RationalLoop::pole_term(&alg, alg.one(&ring), Pole::one(), 2);
        Ok((f.to_string(), tensor_polarization_map(&canon, &f)?.to_string()))
    });

    let p1 = Arc::new(Algebra::proj(1).expect("proj(1)"));
    let mut bad_total = Vec::new();
    let mut bad_closed = Vec::new();
    for i in 0..100 {
        let (a, r) = if i % 2 == 0 { (&alg, &ring) } else { (&p1, &ring) };
        let f = random_loop(&mut run.rng, a, r, true, true);
        let g = random_loop(&mut run.rng, a, r, true, i % 3 != 0);
        let h = f.mul(&g).expect("product");
        if !h.total_residue().map(|e| e.is_zero()).unwrap_or(false) {
            bad_total.push(i);
        }
        // closed forms: Res_0 = L_{-1}, Res_ζ = -ζ c_1, Res_∞ = -L_{-1} + Σ ζ c_1
        let l1 = h.laurent().get(&-1).cloned().unwrap_or_else(|| a.zero(r));
        let mut inf = l1.neg();
        let mut ok = h.residue(&Point::Zero).ok() == Some(l1.clone());
        for (z, v) in h.principal() {
            let c = v[0].scale_scalar(&z.value());
            ok &= h.residue(&Point::At(z.clone())).ok() == Some(c.neg());
            inf = inf.add(&c);
        }
        ok &= h.residue(&Point::Infinity).ok() == Some(inf);
        if !ok {
            bad_closed.push(i);
        }
    }
    run.case("total-residue-zero", "residue theorem on 100 seeded products", || Ok(("[]".into(), format!("{bad_total:?}"))));
    run.case("residue-closed-forms", "Res_0 = L_-1, Res_ζ = -ζ c_1, Res_∞ = -L_-1 + Σ ζ c_1", || {
        Ok(("[]".into(), format!("{bad_closed:?}")))
    });

    let mut plus_bad = Vec::new();
    let mut minus_bad = Vec::new();
    let mut anti_bad = Vec::new();
    for i in 0..50 {
        let (a, r) = if i % 2 == 0 { (&p1, &ring) } else { (&alg, &ring) };
        let f = random_loop(&mut run.rng, a, r, true, false);
        let g = random_loop(&mut run.rng, a, r, true, false);
        if !omega(&f, &g, &PairingConfig::standard()).map(|v| v.is_zero()).unwrap_or(false) {
            plus_bad.push(i);
        }
        let f = random_loop(&mut run.rng, a, r, false, true);
        let g = random_loop(&mut run.rng, a, r, false, true);
        if !omega(&f, &g, &PairingConfig::standard()).map(|v| v.is_zero()).unwrap_or(false) {
            minus_bad.push(i);
        }
        let f = random_loop(&mut run.rng, a, r, true, true);
        let g = random_loop(&mut run.rng, a, r, true, true);
        let cfg = PairingConfig::standard();
        match (omega(&f, &g, &cfg), omega(&g, &f, &cfg)) {
            (Ok(x), Ok(y)) if x == -&y => {}
            _ => anti_bad.push(i),
        }
    }
    run.case("isotropy-plus", "Ω vanishes on 50 pairs of Laurent polynomials", || Ok(("[]".into(), format!("{plus_bad:?}"))));
    run.case("isotropy-minus", "Ω vanishes on 50 pairs from the standard negative space", || {
        Ok(("[]".into(), format!("{minus_bad:?}")))
    });
    run.case("antisymmetry", "Ω(f,g) = -Ω(g,f) on 50 pairs", || Ok(("[]".into(), format!("{anti_bad:?}"))));

    let mut inv_bad = Vec::new();
    let mut json_bad = Vec::new();
    let mut div_bad = Vec::new();
    for i in 0..30 {
        let f = random_loop(&mut run.rng, &p1, &ring, true, true);
        if f.invert_q().invert_q() != f {
            inv_bad.push(i);
        }
        let back = serde_json::to_string(&f.to_json())
            .ok()
            .and_then(|s| serde_json::from_str(&s).ok())
            .and_then(|j| RationalLoop::from_json(&j, &p1, &ring).ok());
        if back.as_ref() != Some(&f) {
            json_bad.push(i);
        }
        let k = run.rng.gen_range(1..=4);
        let c = run.rng.gen_range(1..=3);
        let src = format!("{c} - q^{k}");
        let g = crate::parse::parse_loop(&src, &p1, &ring).expect("valid expression");
        let k_ok = g.recip().and_then(|gi| f.mul(&g)?.mul(&gi)).map(|h| h == f);
        let rational_root = c > 1 && k > 1;
        if !(k_ok.as_ref().is_ok_and(|b| *b) || (rational_root && k_ok.is_err())) {
            div_bad.push(i);
        }
    }
    run.case("inversion-involution", "f(1/(1/q)) = f on 30 loops", || Ok(("[]".into(), format!("{inv_bad:?}"))));
    run.case("loop-json-round-trip", "serialize and parse 30 loops", || Ok(("[]".into(), format!("{json_bad:?}"))));
    run.case("rational-identity", "(f g)/g = f for g = c - q^k", || Ok(("[]".into(), format!("{div_bad:?}"))));

    run.case("bernoulli(2)", "Akiyama–Tanigawa table", || {
        Ok((crate::scalar::render_rational(&bernoulli_oracle(2)), crate::scalar::render_rational(&bernoulli(2))))
    });
    run.case("bernoulli(3)", "Akiyama–Tanigawa table", || {
        Ok((crate::scalar::render_rational(&bernoulli_oracle(3)), crate::scalar::render_rational(&bernoulli(3))))
    });
    run.case("bernoulli-generating-function", "x/(1-e^x) = -Σ B_n x^n/n!, through x^10", || {
        let s = geo1.expand_at(&Pole::one(), 9)?.remove(0).shift(1);
        let mut fact = rat_int(1);
        let mut want = Vec::new();
        for n in 0..=10i64 {
            if n > 0 {
                fact *= rat_int(n);
            }
            want.push(crate::scalar::render_rational(&(-bernoulli_oracle(n as usize) / &fact)));
        }
        Ok((want.join("; "), series_coeffs(&s, 0, 10)))
    });
    run.case("expansion-1/(1-q)-at-1", "-1/x + 1/2 - x/12 from x/(e^x - 1)", || {
        let s = geo1.expand_at(&Pole::one(), 1)?.remove(0);
        Ok(("-1; 1/2; -1/12".into(), series_coeffs(&s, -1, 1)))
    });
    run.case("expansion-at-minus-one", "1/(1-q) at q = -e^x: 1/(1+e^x) = 1/2 - x/4 + x^3/48", || {
        let s = geo1.expand_at(&Pole::root(2, 1), 3)?.remove(0);
        Ok(("1/2; -1/4; 0; 1/48".into(), series_coeffs(&s, 0, 3)))
    });
    run.case("tw-mult-classical-K", "all c_k vanish", || {
        let t = generator_table(Some(Genus::ClassicalK), 4, 4)?;
        let cls = MultClass::from_table(&t)?;
        let l = p1.named("L", &t.ring)?;
        let (e, s) = tw_mult_operator(&p1, &cls, &SplitBundle::lines(&[l.clone(), l]), 4)?;
        Ok(("0 | true".into(), format!("{e} | {}", s.iter().all(Series::is_zero))))
    });
    run.case("tw-mult-rank-zero", "Ψ^k(1 - 1) - 0 = 0", || {
        let t = generator_table(None, 3, 3)?;
        let cls = MultClass::from_table(&t)?;
        let v = SplitBundle::new().with(p1.one(&t.ring), 1, 1).with(p1.one(&t.ring), 1, -1);
        let (e, s) = tw_mult_operator(&p1, &cls, &v, 3)?;
        Ok(("0 | true".into(), format!("{e} | {}", s.iter().all(Series::is_zero))))
    });
    run.case("pole-at-root-of-unity-parse", "1/(1+q^2) has poles exactly at ±i", || {
        let f = crate::parse::parse_loop("1/(1+q^2)", &alg, &ring)?;
        let poles: Vec<String> = f.poles().map(|(z, m)| format!("{z}:{m}")).collect();
        let half = Scalar::from_rational(rat(1, 2));
        let want = RationalLoop::pole_term(&alg, alg.one(&ring).scale_scalar(&half), Pole::root(4, 1), 1)
            .add(&RationalLoop::pole_term(&alg, alg.one(&ring).scale_scalar(&half), Pole::root(4, 3), 1))?;
        Ok((format!("zeta4^1:1, zeta4^3:1 | {want}"), format!("{} | {f}", poles.join(", "))))
    });
}

fn kring_suite(run: &mut Run) {
    let q = Ring::rational();
    for n in 1..=3usize {
        let q = q.clone();
        run.case(&format!("chi-O(k)-CP^{n}"), "binomial C(n+k, n) for 0 ≤ k ≤ 4", move || {
            let a = Algebra::proj(n)?;
            let l = a.named("L", &q)?;
            let mut want = Vec::new();
            let mut got = Vec::new();
            for k in 0..=4u64 {
                want.push(binom_u(n as u64 + k, n as u64).to_string());
                got.push(a.chi(&a.pow(&l, k as i64)?).to_string());
            }
            Ok((want.join(", "), got.join(", ")))
        });
    }
    run.case("proj(1) χ(L) = 2", "Riemann–Roch h^0(O(1)) = 2", || {
        let a = Algebra::proj(1)?;
        Ok(("2".into(), a.chi(&a.named("L", &q)?).to_string()))
    });
    run.case("proj(2) χ(L) = 3", "binomial C(3, 2)", || {
        let a = Algebra::proj(2)?;
        Ok(("3".into(), a.chi(&a.named("L", &q)?).to_string()))
    });
    run.case("gram-proj(1)", "χ(L^(a+b)) from the binomial table", || {
        let a = Algebra::proj(1)?;
        let want = format!("{:?}", [[1, 2], [2, 3]]);
        let g: Vec<Vec<String>> = a.gram().iter().map(|r| r.iter().map(crate::scalar::render_rational).collect()).collect();
        Ok((want.replace(' ', ""), format!("{g:?}").replace('"', "").replace(' ', "")))
    });
    run.case("dual-basis-delta", "(e_i, e^j) = δ_ij on proj(1), proj(2), proj(3)", || {
        let mut bad = 0;
        for n in 1..=3 {
            let a = Algebra::proj(n)?;
            let d = a.dual_basis()?;
            for i in 0..a.rank() {
                for (j, dj) in d.iter().enumerate() {
                    let v = a.pairing(&a.basis_element(i, &q), &a.element(dj, &q));
                    let want = if i == j { GradedPoly::one(&q) } else { GradedPoly::zero(&q) };
                    if v != want {
                        bad += 1;
                    }
                }
            }
        }
        Ok(("0".into(), bad.to_string()))
    });
    run.case("casimir-basis-independence", "bases {1, L} and {2 - L, 1 + 3L} on proj(1)", || {
        let a = Algebra::proj(1)?;
        let c1 = a.casimir(&[vec![rat_int(1), rat_int(0)], vec![rat_int(0), rat_int(1)]])?;
        let c2 = a.casimir(&[vec![rat_int(2), rat_int(-1)], vec![rat_int(1), rat_int(3)]])?;
        Ok((format!("{c1:?}"), format!("{c2:?}")))
    });
    run.case("proj(1) Ψ²(L)", "L^2 = 2L - 1 in Z[L]/((L-1)^2)", || {
        let a = Algebra::proj(1)?;
        let l = a.named("L", &q)?;
        let want = l.scale_rational(&rat_int(2)).sub(&a.one(&q));
        Ok((el(&want), el(&a.adams(2, &l)?)))
    });
    let t11 = Algebra::builtin("proj(1)xproj(1)");
    let tt = t11.as_ref().map_err(Clone::clone).cloned();
    let q2 = q.clone();
    run.case("newton-rank-2", "N_2(e1, e2) = e1^2 - 2 e2 = L1^2 + L2^2", move || {
        let a = tt?;
        let (l1, l2) = (a.named("L1", &q2)?, a.named("L2", &q2)?);
        let ext = exterior_powers(&a, &[l1.clone(), l2.clone()]);
        let want = a.mul(&l1, &l1).add(&a.mul(&l2, &l2));
        Ok((el(&want), el(&newton_adams(&a, &ext, 2)?)))
    });
    let tt = t11.as_ref().map_err(Clone::clone).cloned();
    let q2 = q.clone();
    run.case("newton-rank-3-r-3", "brute-force Σ L_i^3", move || {
        let a = tt?;
        let (l1, l2) = (a.named("L1", &q2)?, a.named("L2", &q2)?);
        let lines = [l1.clone(), l2.clone(), a.mul(&l1, &l2)];
        let want = lines.iter().fold(a.zero(&q2), |acc, l| acc.add(&a.mul(&a.mul(l, l), l)));
        Ok((el(&want), el(&newton_adams(&a, &exterior_powers(&a, &lines), 3)?)))
    });
    let tt = t11.as_ref().map_err(Clone::clone).cloned();
    let q2 = q.clone();
    run.case("newton-vs-table-adams", "rank ≤ 4, r ≤ 4", move || {
        let a = tt?;
        let (l1, l2) = (a.named("L1", &q2)?, a.named("L2", &q2)?);
        let pool = [l1.clone(), l2.clone(), a.mul(&l1, &l2), a.inv(&l1)?];
        let mut bad = Vec::new();
        for m in 1..=4 {
            let lines = &pool[..m];
            let mut ext = exterior_powers(&a, lines);
            ext.resize(4, a.zero(&q2));
            let class = lines.iter().fold(a.zero(&q2), |acc, l| acc.add(l));
            for r in 1..=4 {
                if newton_adams(&a, &ext, r)? != a.adams(r as u32, &class)? {
                    bad.push((m, r));
                }
            }
        }
        Ok(("[]".into(), format!("{bad:?}")))
    });
    run.case("line-product-vs-adams-exponential", "universal class, split rank ≤ 3, weight 6", || {
        let mut bad = Vec::new();
        for (name, n) in [("proj(3)", 3u32), ("proj(1)xproj(1)", 2)] {
            let a = Algebra::builtin(name)?;
            let t = generator_table(None, n, 6)?;
            let cls = MultClass::from_table(&t)?;
            let r = &t.ring;
            let gens: Vec<Element> = a.generator_names().map(|g| a.named(g, r)).collect::<Result<_>>()?;
            let l = gens[0].clone();
            let m = gens.last().cloned().unwrap_or_else(|| l.clone());
            let bundles = vec![
                SplitBundle::lines(&[l.clone()]),
                SplitBundle::lines(&[l.clone(), m.clone()]),
                SplitBundle::lines(&[a.inv(&l)?, a.mul(&l, &m), a.pow(&m, 2)?]),
                SplitBundle::new().with(a.pow(&l, 2)?, 1, 1).with(a.one(r), 1, -1),
            ];
            for (i, v) in bundles.iter().enumerate() {
                let x = cls.eval(&a, v, EvalMode::LineProduct)?;
                let y = cls.eval(&a, v, EvalMode::AdamsExponential)?;
                if x != y {
                    bad.push(format!("{name}#{i}"));
                }
            }
        }
        Ok(("[]".into(), format!("{bad:?}")))
    });
    run.case("C_y(L) = 1 - y/L", "Hirzebruch class on a line by hand", || {
        let a = Algebra::proj(2)?;
        let t = generator_table(Some(Genus::Hirzebruch), 2, 6)?;
        let cls = MultClass::from_table(&t)?;
        let l = a.named("L", &t.ring)?;
        let got = cls.eval(&a, &SplitBundle::lines(&[l.clone()]), EvalMode::LineProduct)?;
        let want = a.one(&t.ring).sub(&a.inv(&l)?.scale(&y_of(&t.ring)));
        Ok((el(&want), el(&got)))
    });
    run.case("algebra-json-round-trip", "proj(2) and proj(1)xproj(1)", || {
        let mut ok = true;
        for name in ["proj(2)", "proj(1)xproj(1)"] {
            let a = Algebra::builtin(name)?;
            let s = serde_json::to_string(&a.to_json())?;
            ok &= Algebra::from_json(&serde_json::from_str(&s)?)? == a;
        }
        Ok((yes(true), yes(ok)))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_agree_with_known_values() {
        assert_eq!(bernoulli_oracle(1), rat(-1, 2));
        assert_eq!(bernoulli_oracle(2), rat(1, 6));
        assert_eq!(bernoulli_oracle(4), rat(-1, 30));
        assert_eq!(binom_u(5, 2), 10);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 0), Err(Error::UnknownSuite(_))));
    }
}
