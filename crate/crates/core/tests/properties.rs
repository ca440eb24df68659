use std::sync::Arc;

use cobloop::graded::{GradedPoly, Ring};
use cobloop::kring::{Algebra, Element};
use cobloop::loops::{omega, project, PairingConfig, Pole, Polarization, RationalLoop};
use cobloop::scalar::{rat, Rational};
use cobloop::series::Series;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Random element of Q[p1, p2, p3] truncated at weight 4.
fn poly() -> impl Strategy<Value = GradedPoly> {
    prop::collection::vec(small_rat(), 6).prop_map(|c| {
        let r = ring();
        let p: Vec<GradedPoly> = ["p1", "p2", "p3"].iter().map(|n| GradedPoly::generator(&r, n).unwrap()).collect();
        let mons = [
            GradedPoly::one(&r),
            p[0].clone(),
            p[1].clone(),
            &p[0] * &p[0],
            p[2].clone(),
            &p[0] * &p[1],
        ];
        mons.iter().zip(&c).fold(GradedPoly::zero(&r), |acc, (m, c)| &acc + &m.scale_rational(c))
    })
}

fn ring() -> Arc<Ring> {
    thread_local!(static R: Arc<Ring> = Ring::cobordism(3, 4));
    R.with(Arc::clone)
}

fn series(lowest: i64) -> impl Strategy<Value = Series> {
    prop::collection::vec(small_rat(), 7).prop_map(move |c| Series::from_rationals("t", &Ring::rational(), lowest, &c))
}

fn pole() -> impl Strategy<Value = Pole> {
    prop_oneof![
        Just(Pole::one()),
        Just(Pole::root(2, 1)),
        Just(Pole::root(4, 1)),
        Just(Pole::root(3, 2)),
        Just(Pole::from_scalar(&cobloop::scalar::Scalar::from(2i64)).unwrap()),
    ]
}

fn p1_alg() -> Arc<Algebra> {
    thread_local!(static A: Arc<Algebra> = Arc::new(Algebra::proj(1).unwrap()));
    A.with(Arc::clone)
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(small_rat(), 2).prop_map(|c| p1_alg().element(&c, &Ring::rational()))
}

fn loop_parts(plus: bool, minus: bool) -> impl Strategy<Value = RationalLoop> {
    let laurent = prop::collection::vec((element(), -2i64..=2), 0..=2);
    let principal = prop::collection::vec((element(), pole(), 1usize..=2), 0..=2);
    (laurent, principal).prop_map(move |(l, p)| {
        let a = p1_alg();
        let r = Ring::rational();
        let mut f = RationalLoop::zero(&a, &r);
        if plus {
            for (e, n) in l {
                f = f.add(&RationalLoop::monomial(&a, e, n)).unwrap();
            }
        }
        if minus {
            for (e, z, j) in p {
                f = f.add(&RationalLoop::pole_term(&a, e, z, j)).unwrap();
            }
        }
        f
    })
}

fn any_loop() -> impl Strategy<Value = RationalLoop> {
    loop_parts(true, true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn adams_is_a_ring_map(a in element(), b in element(), r in 1u32..=4) {
        let k = p1_alg();
        let ad = |x: &Element| k.adams(r, x).unwrap();
        prop_assert_eq!(ad(&k.mul(&a, &b)), k.mul(&ad(&a), &ad(&b)));
        prop_assert_eq!(ad(&a.add(&b)), ad(&a).add(&ad(&b)));
    }

    #[test]
    fn exp_log_inverse(f in series(1)) {
        let e = f.exp().unwrap();
        prop_assert_eq!(e.log().unwrap().truncate(f.order()), f.truncate(e.order().min(f.order())));
    }

    #[test]
    fn revert_composes_to_identity(mut c in prop::collection::vec(small_rat(), 6), lead in 1i64..=3) {
        c[0] = rat(lead, 1);
        let f = Series::from_rationals("t", &Ring::rational(), 1, &c);
        let g = f.revert().unwrap();
        let id = f.compose(&g.with_var("t")).unwrap();
        prop_assert_eq!(id.normalized(), Series::variable("t", &Ring::rational(), id.order()).normalized());
    }

    #[test]
    fn loop_ring_laws(f in any_loop(), g in any_loop(), h in any_loop()) {
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
        prop_assert_eq!(
            f.mul(&g.add(&h).unwrap()).unwrap(),
            f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn invert_q_is_an_involution(f in any_loop()) {
        prop_assert_eq!(f.invert_q().invert_q(), f);
    }

    #[test]
    fn residues_sum_to_zero(f in any_loop(), g in any_loop()) {
        prop_assert!(f.mul(&g).unwrap().total_residue().unwrap().is_zero());
    }

    #[test]
    fn omega_is_antisymmetric(f in any_loop(), g in any_loop()) {
        let cfg = PairingConfig::standard();
        prop_assert_eq!(omega(&f, &g, &cfg).unwrap(), -&omega(&g, &f, &cfg).unwrap());
    }

    #[test]
    fn projection_splits(f in any_loop()) {
        let (p, m) = project(&f, &Polarization::Standard).unwrap();
        prop_assert_eq!(p.add(&m).unwrap(), f);
        prop_assert!(p.is_laurent());
        prop_assert!(m.laurent().is_empty());
    }

    #[test]
    fn loop_json_round_trip(f in any_loop()) {
        let a = p1_alg();
        let s = serde_json::to_string(&f.to_json()).unwrap();
        let g = RationalLoop::from_json(&serde_json::from_str(&s).unwrap(), &a, &Ring::rational()).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn poly_json_round_trip(a in poly()) {
        let s = serde_json::to_string(&a.to_json()).unwrap();
        prop_assert_eq!(GradedPoly::from_json_in(&serde_json::from_str(&s).unwrap(), &ring()).unwrap(), a);
    }
}
