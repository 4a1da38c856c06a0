//! Reduction types and local root numbers of E_t.
//!
//! Each local sign is available two ways: from closed conditions on the
//! valuations of `t` and `t^2 - 1` ([`local_root_odd`], [`local_root_two`]),
//! and from the reduction type of an explicit integral model
//! ([`reduction_type_odd`], [`local_root_two_cases`]).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::{curve_euv, curve_ewv, require_nondegenerate, WeierstrassModel};
use crate::error::{Error, Result};
use crate::exactq::{is_prime, legendre, ord_p, ord_p_int, residue, Rational, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionType {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionType::Good => "good",
            ReductionType::SplitMultiplicative => "split multiplicative",
            ReductionType::NonsplitMultiplicative => "nonsplit multiplicative",
            ReductionType::Additive => "additive",
        })
    }
}

impl ReductionType {
    /// The local root number forced by the reduction type, when it is.
    /// Additive reduction needs finer data.
    pub fn forced_root_number(self) -> Option<Sign> {
        match self {
            ReductionType::Good | ReductionType::NonsplitMultiplicative => Some(Sign::Plus),
            ReductionType::SplitMultiplicative => Some(Sign::Minus),
            ReductionType::Additive => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(BigInt),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Local data at one place. `reduction` is `None` exactly at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    pub place: Place,
    pub reduction: Option<ReductionType>,
    pub w: Sign,
}

impl LocalData {
    pub fn infinity() -> Self {
        LocalData {
            place: Place::Infinity,
            reduction: None,
            w: local_root_infinity(),
        }
    }

    /// Local data at a prime whose reduction type determines the sign.
    pub fn from_reduction(p: BigInt, reduction: ReductionType) -> Result<Self> {
        let w = reduction.forced_root_number().ok_or_else(|| {
            Error::internal(format!("additive reduction at {p} does not determine W_p"))
        })?;
        Ok(LocalData {
            place: Place::Prime(p),
            reduction: Some(reduction),
            w,
        })
    }
}

fn require_odd_prime(p: &BigInt) -> Result<()> {
    let ok = p.is_positive() && p.is_odd() && p.to_biguint().is_some_and(|n| is_prime(&n));
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not an odd prime")))
    }
}

/// Reduction type of `E_{u,v}` at an odd prime.
///
/// At a bad prime the singular point of the reduction is a repeated root of
/// `x(x+u^2)(x+v^2)` mod p. Translating it to the origin and testing the new
/// `b2` for being a square mod p decides split versus nonsplit.
pub fn reduction_type_odd(u: &BigInt, v: &BigInt, p: &BigInt) -> Result<ReductionType> {
    require_odd_prime(p)?;
    let model = curve_euv(u, v)?;
    reduction_type_odd_on(&model, u, v, &model.discriminant(), p)
}

/// [`reduction_type_odd`] for a prebuilt E_{u,v} and its discriminant; `p`
/// must already be known to be an odd prime.
pub(crate) fn reduction_type_odd_on(
    model: &WeierstrassModel,
    u: &BigInt,
    v: &BigInt,
    delta: &Rational,
    p: &BigInt,
) -> Result<ReductionType> {
    if !delta.numer().is_multiple_of(p) {
        return Ok(ReductionType::Good);
    }
    let a2 = model.a2.to_integer();
    let a4 = model.a4.to_integer();
    let derivative = |x: &BigInt| BigInt::from(3) * x * x + BigInt::from(2) * &a2 * x + &a4;
    let roots = [BigInt::zero(), -(u * u), -(v * v)];
    let node = roots
        .iter()
        .find(|r| derivative(r).is_multiple_of(p))
        .ok_or_else(|| Error::internal(format!("no repeated root mod {p} although {p} | discriminant")))?;
    // x -> x + node keeps a1 = a3 = 0 and moves a2 to a2 + 3 node
    let shifted_b2 = BigInt::from(4) * (&a2 + BigInt::from(3) * node);
    match legendre(&shifted_b2, p)? {
        1 => Ok(ReductionType::SplitMultiplicative),
        -1 => Ok(ReductionType::NonsplitMultiplicative),
        _ => Err(Error::internal(format!(
            "additive reduction of E_{{{u},{v}}} at odd prime {p}; impossible for coprime u, v"
        ))),
    }
}

/// W_p(E_t) at an odd prime from the closed conditions.
pub fn local_root_odd(t: &Rational, p: &BigInt) -> Result<Sign> {
    require_nondegenerate(t)?;
    require_odd_prime(p)?;
    if ord_p(t, p)? != 0 {
        return Ok(Sign::Minus);
    }
    let t2_minus_1 = t * t - Rational::one();
    if residue(p, 4) == 1 && ord_p(&t2_minus_1, p)? > 0 {
        return Ok(Sign::Minus);
    }
    Ok(Sign::Plus)
}

/// The symbol w_2(t): +1 iff `ord_2(t) = +-2` or `ord_2(t^2 - 1) = 3`.
pub fn local_root_two(t: &Rational) -> Result<Sign> {
    require_nondegenerate(t)?;
    let two = BigInt::from(2);
    let v_t = ord_p(t, &two)?;
    let v_shift = ord_p(&(t * t - Rational::one()), &two)?;
    Ok(if v_t.abs() == 2 || v_shift == 3 {
        Sign::Plus
    } else {
        Sign::Minus
    })
}

pub fn local_root_infinity() -> Sign {
    Sign::Minus
}

/// Which branch of the 2-adic case analysis decided W_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoAdicBranch {
    /// `ord_2(uv) >= 2`, `w` odd: E'_{w,v} has good reduction.
    CaseIGood,
    /// `ord_2(uv) >= 2`, `w` even: split multiplicative.
    CaseISplit,
    /// `ord_2(uv) <= 1`, even leg with `ord_2 = 1`; `ord_2(Delta) = 8`.
    CaseIIEvenLeg,
    /// Both odd, `ord_2(u^2 - v^2) = 3`; `ord_2(Delta) = 10`.
    CaseIIDifference3,
    /// Both odd, `ord_2(u^2 - v^2) = 4`; `ord_2(Delta) = 12`.
    CaseIIDifference4,
    /// Both odd, `ord_2(u^2 - v^2) > 4`; `ord_2(Delta) > 12`.
    CaseIIDifferenceAbove4,
}

impl TwoAdicBranch {
    pub fn is_case_one(self) -> bool {
        matches!(self, TwoAdicBranch::CaseIGood | TwoAdicBranch::CaseISplit)
    }

    /// Position within its case: 1-2 in Case I, 1-4 in Case II.
    pub fn bullet(self) -> u8 {
        match self {
            TwoAdicBranch::CaseIGood | TwoAdicBranch::CaseIIEvenLeg => 1,
            TwoAdicBranch::CaseISplit | TwoAdicBranch::CaseIIDifference3 => 2,
            TwoAdicBranch::CaseIIDifference4 => 3,
            TwoAdicBranch::CaseIIDifferenceAbove4 => 4,
        }
    }
}

/// Intermediate quantities of the 2-adic computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseTrace {
    pub branch: TwoAdicBranch,
    /// True if `u` and `v` were exchanged so that `v` is odd.
    pub swapped: bool,
    pub u: BigInt,
    pub v: BigInt,
    /// `u = 4w` in Case I.
    pub w: Option<BigInt>,
    pub reduction: ReductionType,
    /// `ord_2` of the discriminant of the model used (E'_{w,v} or E_{u,v}).
    pub ord2_delta: u64,
    pub ord2_c4: Option<u64>,
    pub ord2_c6: Option<u64>,
    /// `c4 / 16` and `c6 / 64` in Case II.
    pub c4_prime: Option<BigInt>,
    pub c6_prime: Option<BigInt>,
    pub ord2_u2_minus_v2: Option<u64>,
    /// `(2 c6' + c4') mod 32`.
    pub two_c6_plus_c4_mod_32: Option<u64>,
    pub c6_prime_mod_4: Option<u64>,
}

fn ord2(n: &BigInt) -> u64 {
    ord_p_int(n, &BigInt::from(2)) as u64
}

/// W_2(E_{u/v}) recomputed by walking the case analysis on explicit models:
/// E'_{w,v} when `ord_2(uv) >= 2`, the minimal model E_{u,v} otherwise.
pub fn local_root_two_cases(u: &BigInt, v: &BigInt) -> Result<(Sign, CaseTrace)> {
    // validates coprimality and t not in {0, +-1}
    curve_euv(u, v)?;
    let swapped = v.is_even();
    let (u, v) = if swapped { (v.clone(), u.clone()) } else { (u.clone(), v.clone()) };
    debug_assert!(v.is_odd());
    let ord2_u = ord2(&u);

    if ord2_u >= 2 {
        let w = &u / BigInt::from(4);
        let model = curve_ewv(&w, &v)?;
        let delta = model.discriminant().to_integer();
        let ord2_delta = ord2(&delta);
        let (branch, reduction, sign) = if ord2_delta == 0 {
            (TwoAdicBranch::CaseIGood, ReductionType::Good, Sign::Plus)
        } else {
            let a1 = model.a1.to_integer();
            let a2 = model.a2.to_integer();
            let a3 = model.a3.to_integer();
            let a4 = model.a4.to_integer();
            let a6 = model.a6.to_integer();
            if !(a3.is_even() && a4.is_even() && a6.is_even()) {
                return Err(Error::internal("E'_{w,v} mod 2 is not singular at (0,0)"));
            }
            if a1.is_even() {
                return Err(Error::internal("E'_{w,v} has b2 = 0 mod 2"));
            }
            // tangent cone y^2 + a1 xy - a2 x^2 splits over F_2 iff a2 is even
            if a2.is_even() {
                (TwoAdicBranch::CaseISplit, ReductionType::SplitMultiplicative, Sign::Minus)
            } else {
                return Err(Error::internal("E'_{w,v} has nonsplit reduction at 2"));
            }
        };
        let expected = if w.is_odd() { TwoAdicBranch::CaseIGood } else { TwoAdicBranch::CaseISplit };
        if branch != expected {
            return Err(Error::internal(format!("Case I: w = {w} but branch {branch:?}")));
        }
        let trace = CaseTrace {
            branch,
            swapped,
            u,
            v,
            w: Some(w),
            reduction,
            ord2_delta,
            ord2_c4: None,
            ord2_c6: None,
            c4_prime: None,
            c6_prime: None,
            ord2_u2_minus_v2: None,
            two_c6_plus_c4_mod_32: None,
            c6_prime_mod_4: None,
        };
        return Ok((sign, trace));
    }

    let model = curve_euv(&u, &v)?;
    let inv = model.invariants();
    let c4 = inv.c4.to_integer();
    let c6 = inv.c6.to_integer();
    let delta = inv.delta.to_integer();
    let (ord2_c4, ord2_c6) = (ord2(&c4), ord2(&c6));
    if ord2_c4 != 4 || ord2_c6 != 6 {
        return Err(Error::internal(format!(
            "Case II expects ord_2(c4) = 4, ord_2(c6) = 6; got {ord2_c4}, {ord2_c6}"
        )));
    }
    let c4_prime = &c4 / BigInt::from(16);
    let c6_prime = &c6 / BigInt::from(64);
    let two_c6_plus_c4 = residue(&(BigInt::from(2) * &c6_prime + &c4_prime), 32);
    let c6_mod_4 = residue(&c6_prime, 4);
    let difference = &u * &u - &v * &v;
    let ord2_diff = ord2(&difference);

    let (branch, sign) = if ord2_u == 1 {
        if two_c6_plus_c4 != 7 {
            return Err(Error::internal(format!(
                "even leg: 2c6' + c4' = {two_c6_plus_c4} mod 32, expected 7"
            )));
        }
        (TwoAdicBranch::CaseIIEvenLeg, Sign::Minus)
    } else {
        if c6_mod_4 != 1 {
            return Err(Error::internal(format!("odd legs: c6' = {c6_mod_4} mod 4, expected 1")));
        }
        match ord2_diff {
            3 => (TwoAdicBranch::CaseIIDifference3, Sign::Plus),
            4 => (TwoAdicBranch::CaseIIDifference4, Sign::Minus),
            k if k > 4 => (TwoAdicBranch::CaseIIDifferenceAbove4, Sign::Minus),
            k => {
                return Err(Error::internal(format!(
                    "u, v odd but ord_2(u^2 - v^2) = {k} < 3"
                )))
            }
        }
    };
    let trace = CaseTrace {
        branch,
        swapped,
        u,
        v,
        w: None,
        // minimal at 2 with 2 | Delta and 2 | c4
        reduction: ReductionType::Additive,
        ord2_delta: ord2(&delta),
        ord2_c4: Some(ord2_c4),
        ord2_c6: Some(ord2_c6),
        c4_prime: Some(c4_prime),
        c6_prime: Some(c6_prime),
        ord2_u2_minus_v2: Some(ord2_diff),
        two_c6_plus_c4_mod_32: Some(two_c6_plus_c4),
        c6_prime_mod_4: Some(c6_mod_4),
    };
    Ok((sign, trace))
}
