//! Height-bounded search for rational points on E_t.
//!
//! Points are enumerated on the integral model E_{u,v}, where every affine
//! rational point has `x = m/e^2`, `y = n/e^3` with `gcd(m, e) = 1`. Then
//! `n^2 = m (m + u^2 e^2)(m + v^2 e^2)` is tested exactly. Hits are pulled
//! back to E_t by `(x, y) -> (x/v^2, y/v^3)`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::curve::{curve_et, from_integral_model, require_nondegenerate, CurvePoint, PointOrder, TORSION_CAP};
use crate::error::{Error, Result};
use crate::exactq::{isqrt_exact, Rational};
use crate::triangles::{phi, TriangleTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBound {
    /// Bound on `e` where `x = m/e^2`.
    pub max_den: u64,
    /// Bound on `|m| / e^2`.
    pub max_num: u64,
}

impl SearchBound {
    pub fn new(max_den: u64, max_num: u64) -> Result<Self> {
        if max_den == 0 || max_num == 0 {
            return Err(Error::domain("search bounds must be at least 1"));
        }
        Ok(SearchBound { max_den, max_num })
    }
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound { max_den: 8, max_num: 100 }
    }
}

/// `m` values per work item in the parallel search.
const CHUNK: i64 = 1 << 14;

/// An integral-model hit `x = m/e^2`, `y = +-n/e^3` with `n >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Hit {
    e: u64,
    m: i64,
    n: BigInt,
}

struct Candidates {
    u2: i128,
    v2: i128,
}

impl Candidates {
    /// `m (m + u^2 e^2)(m + v^2 e^2)` if it is a square, else `None`.
    fn root(&self, m: i64, e: u64) -> Option<BigInt> {
        let e2 = (e as i128) * (e as i128);
        let m = m as i128;
        let fast = self
            .u2
            .checked_mul(e2)
            .and_then(|a| a.checked_add(m))
            .zip(self.v2.checked_mul(e2).and_then(|b| b.checked_add(m)))
            .and_then(|(a, b)| m.checked_mul(a).and_then(|ma| ma.checked_mul(b)));
        match fast {
            Some(value) => {
                if value < 0 {
                    return None;
                }
                let r = (value as u128).isqrt();
                (r * r == value as u128).then(|| BigInt::from(r))
            }
            None => {
                let (m, e2) = (BigInt::from(m), BigInt::from(e2));
                let value = &m * (&m + BigInt::from(self.u2) * &e2) * (&m + BigInt::from(self.v2) * &e2);
                isqrt_exact(&value)
            }
        }
    }

    fn scan(&self, e: u64, range: std::ops::RangeInclusive<i64>) -> Vec<Hit> {
        let e_big = e as i64;
        range
            .filter(|m| m.gcd(&e_big) == 1)
            .filter_map(|m| self.root(m, e).map(|n| Hit { e, m, n }))
            .collect()
    }
}

fn work_items(bound: SearchBound) -> Result<Vec<(u64, i64, i64)>> {
    let mut items = Vec::new();
    for e in 1..=bound.max_den {
        let limit = (bound.max_num as i128) * (e as i128) * (e as i128);
        let limit = i64::try_from(limit).map_err(|_| Error::domain("search bound too large"))?;
        let mut lo = -limit;
        while lo <= limit {
            let hi = lo.saturating_add(CHUNK - 1).min(limit);
            items.push((e, lo, hi));
            lo = hi + 1;
        }
    }
    Ok(items)
}

fn expand(hits: Vec<Hit>, v: &BigInt) -> Vec<CurvePoint> {
    let mut points = vec![CurvePoint::Infinity];
    for hit in hits {
        let e = BigInt::from(hit.e);
        let x = Rational::new(BigInt::from(hit.m), &e * &e);
        let y = Rational::new(hit.n.clone(), &e * &e * &e);
        points.push(from_integral_model(&CurvePoint::affine(x.clone(), y.clone()), v));
        if !hit.n.is_zero() {
            points.push(from_integral_model(&CurvePoint::affine(x, -y), v));
        }
    }
    points
}

fn sort_hits(hits: &mut [Hit]) {
    hits.sort_by_key(|a| (a.e, a.m.unsigned_abs(), a.m));
}

/// All points of E_t with integral-model coordinates `x = m/e^2`,
/// `gcd(m, e) = 1`, `e <= max_den`, `|m| <= max_num e^2`, together with O.
///
/// Ordered by `(e, |m|, m)`, with `y > 0` before `y < 0`.
pub fn find_points(t: &Rational, bound: SearchBound) -> Result<Vec<CurvePoint>> {
    find_points_parallel(t, bound, 1)
}

/// [`find_points`] with the `m` ranges split across `jobs` threads. The
/// output does not depend on `jobs`.
pub fn find_points_parallel(t: &Rational, bound: SearchBound, jobs: usize) -> Result<Vec<CurvePoint>> {
    require_nondegenerate(t)?;
    let (u, v) = (t.numer(), t.denom());
    let small = |n: &BigInt| -> Result<i128> {
        let sq = n * n;
        i128::try_from(sq).map_err(|_| Error::domain(format!("t = {t} too large for point search")))
    };
    let candidates = Candidates { u2: small(u)?, v2: small(v)? };
    let items = work_items(bound)?;
    let mut hits: Vec<Hit> = if jobs <= 1 {
        items.iter().flat_map(|&(e, lo, hi)| candidates.scan(e, lo..=hi)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::internal(format!("thread pool: {e}")))?;
        pool.install(|| {
            items
                .par_iter()
                .map(|&(e, lo, hi)| candidates.scan(e, lo..=hi))
                .collect::<Vec<_>>()
                .into_iter()
                .flatten()
                .collect()
        })
    };
    sort_hits(&mut hits);
    Ok(expand(hits, v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    /// A point of infinite order: E_t(Q) has positive rank.
    Found(CurvePoint),
    /// Nothing of infinite order within the bound. This is not a proof of rank 0.
    NoneFound { bound: SearchBound },
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&CurvePoint> {
        match self {
            WitnessSearch::Found(p) => Some(p),
            WitnessSearch::NoneFound { .. } => None,
        }
    }
}

/// The first point of [`find_points`] whose order exceeds 8.
///
/// Torsion of E_t is Z/2 x Z/4 or Z/2 x Z/8, so `8P != O` means infinite order.
pub fn rank_witness(t: &Rational, bound: SearchBound) -> Result<WitnessSearch> {
    let model = curve_et(t)?;
    for p in find_points(t, bound)? {
        if model.point_order(&p, TORSION_CAP)? == PointOrder::ExceedsCap {
            return Ok(WitnessSearch::Found(p));
        }
    }
    Ok(WitnessSearch::NoneFound { bound })
}

/// `phi(k W)` for `k = 1, 2, ...`, skipping multiples in A_t and repeated
/// triples, until `n` distinct triples are collected.
pub fn solutions_stream(t: &Rational, witness: &CurvePoint, n: usize) -> Result<Vec<TriangleTriple>> {
    let model = curve_et(t)?;
    if !model.contains(witness) {
        return Err(Error::NotOnCurve(witness.to_string()));
    }
    if model.point_order(witness, TORSION_CAP)? != PointOrder::ExceedsCap {
        return Err(Error::domain(format!("{witness} is a torsion point")));
    }
    if !t.is_positive() || t.is_one() {
        return Err(Error::domain(format!("triangles need t > 0, t != 1; got {t}")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    let mut multiple = witness.clone();
    while out.len() < n {
        match phi(&multiple, t) {
            Ok(triple) => {
                if seen.insert(triple.clone()) {
                    out.push(triple);
                }
            }
            Err(Error::DegeneratePoint(_)) => {}
            Err(e) => return Err(e),
        }
        multiple = model.add(&multiple, witness)?;
    }
    Ok(out)
}
