mod common;

use std::collections::BTreeSet;

use common::q;
use num_bigint::BigInt;
use proptest::prelude::*;
use rootnum::exactq::{factorize, Rational, Sign};
use rootnum::experiments::scan_parameters;
use rootnum::localroot::{
    local_root_odd, local_root_two, local_root_two_cases, reduction_type_odd, LocalData, Place, ReductionType,
};
use rootnum::rootnumber::{prime_set_pt, root_number_closed, root_number_local_product, RootNumberReport};

fn check_local_data(local: &LocalData) {
    match (&local.place, local.reduction) {
        (Place::Infinity, None) => assert_eq!(local.w, Sign::Minus),
        (Place::Prime(_), Some(reduction)) => {
            if let Some(forced) = reduction.forced_root_number() {
                assert_eq!(local.w, forced, "{local:?}");
            }
        }
        other => panic!("malformed local data {other:?}"),
    }
}

/// Every local factor from the reduction types agrees with the closed
/// conditions at the same place, and each global route agrees.
fn check_parameter(t: &Rational) {
    let (u, v) = (t.numer(), t.denom());
    let (w_local, locals) = root_number_local_product(t).unwrap();
    let mut places = BTreeSet::new();
    for local in &locals {
        check_local_data(local);
        if let Place::Prime(p) = &local.place {
            places.insert(p.clone());
            if *p == BigInt::from(2) {
                assert_eq!(local.w, local_root_two(t).unwrap(), "W_2 at t = {t}");
            } else {
                assert_eq!(local.w, local_root_odd(t, p).unwrap(), "W_{p} at t = {t}");
                assert_eq!(local.reduction, Some(reduction_type_odd(u, v, p).unwrap()));
                assert_ne!(local.reduction, Some(ReductionType::Additive));
            }
        }
    }
    // odd primes outside the discriminant have W_p = +1 by the closed conditions too
    for p in factorize(&(u * v * (u * u - v * v))).unwrap().primes() {
        assert!(places.contains(p), "bad prime {p} missing at t = {t}");
    }
    assert_eq!(root_number_closed(t).unwrap(), w_local, "t = {t}");
    let p_set = prime_set_pt(t).unwrap();
    assert_eq!(w_local, -Sign::parity(p_set.len()));
    assert_eq!(p_set, prime_set_pt(&-t).unwrap());
}

#[test]
fn full_sweep_up_to_100() {
    for t in scan_parameters(100) {
        check_parameter(&t);
    }
}

#[test]
fn two_adic_walk_covers_every_branch() {
    let mut seen = BTreeSet::new();
    for t in scan_parameters(40) {
        let (w, trace) = local_root_two_cases(t.numer(), t.denom()).unwrap();
        assert_eq!(w, local_root_two(&t).unwrap(), "t = {t}");
        seen.insert(format!("{:?}", trace.branch));
    }
    assert_eq!(seen.len(), 6, "{seen:?}");
}

#[test]
fn fixtures() {
    let r7 = RootNumberReport::compute(&q("7")).unwrap();
    assert_eq!((r7.w_closed, r7.w_local), (Sign::Minus, Sign::Minus));
    assert_eq!(r7.p_set.to_string(), "{2, 7}");
    let r6 = RootNumberReport::compute(&q("6")).unwrap();
    assert_eq!((r6.w_closed, r6.w_local), (Sign::Plus, Sign::Plus));
    assert_eq!(r6.p_set.to_string(), "{2, 3, 5}");
    assert_eq!(root_number_closed(&q("2")).unwrap(), Sign::Plus);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routes_agree_for_large_parameters(u in -2_000_000i64..2_000_000, v in 1i64..2_000_000) {
        let t = Rational::new(u.into(), v.into());
        let one = Rational::from_integer(1.into());
        prop_assume!(u != 0 && t != one && t != -one);
        check_parameter(&t);
    }
}
