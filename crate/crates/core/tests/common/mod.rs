#![allow(dead_code)]

use std::collections::HashMap;

use rootnum::curve::{curve_et, in_a_t, torsion_a_t, CurvePoint};
use rootnum::exactq::{parse_rational, Rational};
use rootnum::search::{rank_witness, SearchBound};
use rootnum::triangles::{phi, TriangleTriple};

pub fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

/// Parameters with a point of infinite order inside a small search box.
pub const RANK_ONE_PARAMETERS: [&str; 7] = ["7", "10", "11", "12", "14", "5/7", "5/2"];

pub fn witness(t: &Rational) -> CurvePoint {
    rank_witness(t, SearchBound::new(2, 60).unwrap())
        .unwrap()
        .witness()
        .cloned()
        .unwrap_or_else(|| panic!("no witness for t = {t}"))
}

/// `k W + T` for `k` in `1..=k_max` and every `T` in A_t.
pub fn non_torsion_sample(t: &Rational, k_max: i64) -> Vec<CurvePoint> {
    let model = curve_et(t).unwrap();
    let w = witness(t);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let kw = model.multiply_small(k, &w).unwrap();
        for torsion in torsion_a_t(t).unwrap() {
            out.push(model.add(&kw, &torsion).unwrap());
        }
    }
    out
}

/// The sixteen points `+-P + T` must avoid A_t and their images under phi
/// must be two triples, each hit exactly eight times.
pub fn fiber_check(t: &Rational, p: &CurvePoint) -> Result<(), String> {
    let model = curve_et(t).unwrap();
    let neg = model.negate(p).unwrap();
    let mut counts: HashMap<TriangleTriple, usize> = HashMap::new();
    for base in [p, &neg] {
        for torsion in torsion_a_t(t).unwrap() {
            let point = model.add(base, &torsion).unwrap();
            if in_a_t(&point, t).unwrap() {
                return Err(format!("{point} lies in A_{t}"));
            }
            let triple = phi(&point, t).map_err(|e| e.to_string())?;
            *counts.entry(triple).or_default() += 1;
        }
    }
    let mut sizes: Vec<usize> = counts.values().copied().collect();
    sizes.sort();
    if sizes == [8, 8] {
        Ok(())
    } else {
        Err(format!("t = {t}, P = {p}: fiber sizes {sizes:?}"))
    }
}
