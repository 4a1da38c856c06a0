mod common;

use common::{fiber_check, non_torsion_sample, q, witness, RANK_ONE_PARAMETERS};
use proptest::prelude::*;
use rootnum::curve::{curve_et, in_a_t, PointOrder, TORSION_CAP};
use rootnum::exactq::Rational;
use rootnum::search::solutions_stream;
use rootnum::triangles::{
    extra_torsion_report, g_orbit, order8_point, phi, phi1, phi2, t1_family, triple_to_conic, TriangleTriple,
};

fn identities_hold(triple: &TriangleTriple) -> bool {
    let one = Rational::from_integer(1.into());
    let (a, b, c, t) = (&triple.a, &triple.b, &triple.c, &triple.t);
    &one + a * a == b * b && t * t + a * a == c * c
}

#[test]
fn phi_factors_through_the_conic() {
    let mut checked = 0;
    for t in RANK_ONE_PARAMETERS {
        let t = q(t);
        for p in non_torsion_sample(&t, 4) {
            let conic = phi1(&p, &t).unwrap();
            assert!(conic.in_open_part(&t), "{p}");
            let direct = phi(&p, &t).unwrap();
            assert!(identities_hold(&direct));
            assert_eq!(phi2(&conic, &t).unwrap(), direct);
            checked += 1;
        }
    }
    assert!(checked >= 200, "{checked}");
}

#[test]
fn eight_to_one_fibers() {
    let mut configurations = 0;
    for t in RANK_ONE_PARAMETERS {
        let t = q(t);
        let model = curve_et(&t).unwrap();
        let w = witness(&t);
        for k in 1..=3 {
            let p = model.multiply_small(k, &w).unwrap();
            fiber_check(&t, &p).unwrap();
            configurations += 1;
        }
    }
    assert!(configurations >= 20);
}

#[test]
fn conic_round_trip_up_to_the_orbit() {
    for t in RANK_ONE_PARAMETERS {
        let t = q(t);
        for p in non_torsion_sample(&t, 2) {
            let conic = phi1(&p, &t).unwrap().normalized();
            let triple = phi2(&conic, &t).unwrap();
            let canonical = triple_to_conic(&triple).unwrap();
            assert!(canonical.in_open_part(&t));
            assert_eq!(phi2(&canonical, &t).unwrap(), triple);
            let orbit = g_orbit(&canonical).unwrap();
            assert!(orbit.contains(&conic), "{conic} not in orbit of {canonical}");
        }
    }
}

#[test]
fn order_eight_points() {
    for r in ["2", "3", "1/2", "1/3", "5", "2/7", "-3", "-4/9", "7/5"] {
        let r = q(r);
        let (t, p) = order8_point(&r).unwrap();
        let model = curve_et(&t).unwrap();
        assert_eq!(model.point_order(&p, TORSION_CAP).unwrap(), PointOrder::Finite(8), "r = {r}");
        let double = model.double(&p).unwrap();
        assert!(in_a_t(&double, &t).unwrap());
        assert_eq!(model.point_order(&double, TORSION_CAP).unwrap(), PointOrder::Finite(4));
        let triple = phi(&p, &t).unwrap();
        assert_eq!(&triple.a * &triple.a, t);
        assert!(triple.is_similar_pair());
        let report = extra_torsion_report(&t).unwrap();
        assert!(report.consistent());
        assert_eq!(report.verdicts(), [true; 5]);
    }
}

#[test]
fn extra_torsion_matches_squares_on_a_grid() {
    for n in 1i64..=40 {
        for d in 1i64..=40 {
            let t = Rational::new(n.into(), d.into());
            if t == Rational::from_integer(1.into()) {
                continue;
            }
            let report = extra_torsion_report(&t).unwrap();
            assert!(report.consistent(), "t = {t}: {:?}", report.verdicts());
        }
    }
}

#[test]
fn streams_of_solutions() {
    for t in RANK_ONE_PARAMETERS {
        let t = q(t);
        let triples = solutions_stream(&t, &witness(&t), 4).unwrap();
        assert_eq!(triples.len(), 4);
        for (i, a) in triples.iter().enumerate() {
            assert!(identities_hold(a));
            assert!(triples[..i].iter().all(|b| b != a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn t1_family_solves_the_system(n in 1i64..500, extra in 1i64..500) {
        let r = Rational::new(n.into(), (n + extra).into());
        let triple = t1_family(&r).unwrap();
        prop_assert!(identities_hold(&triple));
        prop_assert_eq!(&triple.b, &triple.c);
        prop_assert_eq!(triple_to_conic(&triple).unwrap().r, r);
    }

    #[test]
    fn order8_parametrization(n in -300i64..300, d in 1i64..300) {
        let r = Rational::new(n.into(), d.into());
        let one = Rational::from_integer(1.into());
        prop_assume!(n != 0 && r != one && r != -one.clone());
        let (t, p) = order8_point(&r).unwrap();
        let model = curve_et(&t).unwrap();
        prop_assert_eq!(model.point_order(&p, TORSION_CAP).unwrap(), PointOrder::Finite(8));
        let triple = phi(&p, &t).unwrap();
        prop_assert_eq!(&triple.a * &triple.a, t);
    }
}
