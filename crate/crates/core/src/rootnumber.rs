//! The global root number W(E_t), by a closed formula and as a product of
//! local root numbers, together with the prime set P_t whose parity it
//! reflects: `W(E_t) = -(-1)^|P_t|`.
//!
//! Under the parity conjecture (W(E) = (-1)^rank), `W(E_t) = -1` means E_t
//! has odd, hence positive, rank. Nothing in this module asserts a rank; the
//! conditional reading is left to callers and reports.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::curve::{curve_euv, require_nondegenerate};
use crate::error::Result;
use crate::exactq::{factorize, fraction_string, residue, Rational, Sign};
use crate::localroot::{
    local_root_two, local_root_two_cases, reduction_type_odd_on, LocalData, Place,
};

/// The primes P_t: odd `p` with `ord_p(t) != 0`, `p = 1 mod 4` with
/// `ord_p(t^2 - 1) > 0`, and 2 unless `ord_2(t) = +-2` or `ord_2(t^2 - 1) = 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSetPt {
    pub primes: BTreeSet<BigInt>,
}

impl PrimeSetPt {
    pub fn includes_two(&self) -> bool {
        self.primes.contains(&BigInt::from(2))
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

impl fmt::Display for PrimeSetPt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Odd primes of `u*v` and primes `= 1 mod 4` of `u^2 - v^2`, for `t = u/v`.
fn odd_prime_contributions(t: &Rational) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let (u, v) = (t.numer(), t.denom());
    let mut of_t = Vec::new();
    for n in [u, v] {
        if n.abs().is_one() {
            continue;
        }
        of_t.extend(factorize(n)?.pairs.into_iter().map(|(p, _)| p).filter(|p| p != &BigInt::from(2)));
    }
    let difference = u * u - v * v;
    let of_shift = factorize(&difference)?
        .pairs
        .into_iter()
        .map(|(p, _)| p)
        .filter(|p| residue(p, 4) == 1)
        .collect();
    Ok((of_t, of_shift))
}

pub fn prime_set_pt(t: &Rational) -> Result<PrimeSetPt> {
    require_nondegenerate(t)?;
    let (of_t, of_shift) = odd_prime_contributions(t)?;
    let mut primes: BTreeSet<BigInt> = of_t.into_iter().chain(of_shift).collect();
    if local_root_two(t)? == Sign::Minus {
        primes.insert(BigInt::from(2));
    }
    Ok(PrimeSetPt { primes })
}

/// `W(E_t) = -w_2(t) * prod_{p odd, ord_p(t) != 0} (-1) * prod_{p = 1 (4), ord_p(t^2-1) > 0} (-1)`.
pub fn root_number_closed(t: &Rational) -> Result<Sign> {
    require_nondegenerate(t)?;
    let w2 = local_root_two(t)?;
    let (of_t, of_shift) = odd_prime_contributions(t)?;
    Ok(-w2 * Sign::parity(of_t.len()) * Sign::parity(of_shift.len()))
}

/// `W_inf * prod_p W_p`, with each local factor read off the reduction type
/// of an integral model: E_{u,v} at odd primes dividing its discriminant and
/// the 2-adic case analysis at 2. Primes of good reduction contribute +1 and
/// are not listed.
pub fn root_number_local_product(t: &Rational) -> Result<(Sign, Vec<LocalData>)> {
    require_nondegenerate(t)?;
    let (u, v) = (t.numer(), t.denom());
    let model = curve_euv(u, v)?;
    let delta = model.discriminant();
    let mut bad_primes: BTreeSet<BigInt> = BTreeSet::new();
    for n in [delta.numer(), delta.denom()] {
        bad_primes.extend(factorize(n)?.pairs.into_iter().map(|(p, _)| p));
    }
    let mut locals = vec![LocalData::infinity()];
    for p in bad_primes {
        if p == BigInt::from(2) {
            let (w, trace) = local_root_two_cases(u, v)?;
            locals.push(LocalData {
                place: Place::Prime(p),
                reduction: Some(trace.reduction),
                w,
            });
        } else {
            let reduction = reduction_type_odd_on(&model, u, v, &delta, &p)?;
            locals.push(LocalData::from_reduction(p, reduction)?);
        }
    }
    let w = locals.iter().map(|l| l.w).product();
    Ok((w, locals))
}

/// True iff `|P_t|` is even, i.e. `W(E_t) = -1`.
///
/// Conditional reading: assuming the parity conjecture, membership implies
/// E_t(Q) is infinite. This function decides only the parity of `|P_t|`.
pub fn in_t(t: &Rational) -> Result<bool> {
    Ok(prime_set_pt(t)?.len() % 2 == 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootNumberReport {
    pub t: Rational,
    pub w_closed: Sign,
    pub w_local: Sign,
    pub p_set: PrimeSetPt,
    pub locals: Vec<LocalData>,
    pub w2_flag: Sign,
}

impl RootNumberReport {
    pub fn compute(t: &Rational) -> Result<Self> {
        let w_closed = root_number_closed(t)?;
        let (w_local, locals) = root_number_local_product(t)?;
        Ok(RootNumberReport {
            t: t.clone(),
            w_closed,
            w_local,
            p_set: prime_set_pt(t)?,
            locals,
            w2_flag: local_root_two(t)?,
        })
    }

    pub fn in_t(&self) -> bool {
        self.p_set.len().is_multiple_of(2)
    }

    pub fn agree(&self) -> bool {
        self.w_closed == self.w_local && self.w_closed == -Sign::parity(self.p_set.len())
    }

    /// Table of places followed by both global values.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "t = {} ({})", self.t, fraction_string(&self.t));
        let _ = writeln!(out, "{:<8} {:<24} {:>4}", "place", "reduction", "W_p");
        for local in &self.locals {
            let reduction = local.reduction.map_or_else(|| "-".to_string(), |r| r.to_string());
            let _ = writeln!(out, "{:<8} {:<24} {:>4}", local.place.to_string(), reduction, local.w.to_string());
        }
        let _ = writeln!(out, "w_2(t) = {}", self.w2_flag);
        let _ = writeln!(out, "P_t = {} (|P_t| = {})", self.p_set, self.p_set.len());
        let _ = writeln!(out, "W (closed form)    = {}", self.w_closed);
        let _ = writeln!(out, "W (local product)  = {}", self.w_local);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::{int, rat};
    use crate::localroot::ReductionType;

    fn set(ps: &[i64]) -> BTreeSet<BigInt> {
        ps.iter().map(|&p| BigInt::from(p)).collect()
    }

    #[test]
    fn prime_sets() {
        assert_eq!(prime_set_pt(&int(7)).unwrap().primes, set(&[2, 7]));
        assert_eq!(prime_set_pt(&int(6)).unwrap().primes, set(&[2, 3, 5]));
        assert_eq!(prime_set_pt(&int(3)).unwrap().primes, set(&[3]));
        assert_eq!(prime_set_pt(&rat(1, 7)).unwrap().primes, set(&[2, 7]));
        assert!(prime_set_pt(&int(6)).unwrap().includes_two());
        assert!(!prime_set_pt(&int(3)).unwrap().includes_two());
        assert!(prime_set_pt(&int(-1)).is_err());
    }

    #[test]
    fn closed_form() {
        assert_eq!(root_number_closed(&int(7)).unwrap(), Sign::Minus);
        assert_eq!(root_number_closed(&int(6)).unwrap(), Sign::Plus);
        assert_eq!(root_number_closed(&int(2)).unwrap(), Sign::Plus);
    }

    #[test]
    fn local_products() {
        let (w, locals) = root_number_local_product(&int(2)).unwrap();
        assert_eq!(w, Sign::Plus);
        let signs: Vec<_> = locals.iter().map(|l| (l.place.to_string(), l.w)).collect();
        assert_eq!(signs, vec![("inf".into(), Sign::Minus), ("2".into(), Sign::Minus), ("3".into(), Sign::Plus)]);
        assert_eq!(locals[2].reduction, Some(ReductionType::NonsplitMultiplicative));

        let (w, locals) = root_number_local_product(&int(6)).unwrap();
        assert_eq!(w, Sign::Plus);
        let signs: Vec<_> = locals.iter().map(|l| (l.place.to_string(), l.w)).collect();
        assert_eq!(
            signs,
            vec![
                ("inf".into(), Sign::Minus),
                ("2".into(), Sign::Minus),
                ("3".into(), Sign::Minus),
                ("5".into(), Sign::Minus),
                ("7".into(), Sign::Plus)
            ]
        );

        let (w, locals) = root_number_local_product(&int(7)).unwrap();
        assert_eq!(w, Sign::Minus);
        let signs: Vec<_> = locals.iter().map(|l| (l.place.to_string(), l.w)).collect();
        assert_eq!(
            signs,
            vec![
                ("inf".into(), Sign::Minus),
                ("2".into(), Sign::Minus),
                ("3".into(), Sign::Plus),
                ("7".into(), Sign::Minus)
            ]
        );
    }

    #[test]
    fn membership() {
        assert!(in_t(&int(7)).unwrap());
        assert!(!in_t(&int(6)).unwrap());
        assert!(in_t(&rat(1, 7)).unwrap());
    }

    #[test]
    fn report_renders_both_values() {
        let report = RootNumberReport::compute(&int(7)).unwrap();
        assert!(report.agree());
        assert!(report.in_t());
        let text = report.render();
        assert!(text.contains("P_t = {2, 7}"));
        assert!(text.contains("W (closed form)    = -1"));
        assert!(text.contains("W (local product)  = -1"));
    }
}
