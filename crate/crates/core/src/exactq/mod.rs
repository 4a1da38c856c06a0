//! Exact integer and rational arithmetic: valuations, squareness, quadratic
//! residues and factorization.
//!
//! [`Rational`] is `num_rational::BigRational`, which reduces on every
//! construction, so `gcd(|num|, den) = 1` and `den >= 1` always hold and zero
//! is `0/1`.

mod factor;
mod prime;

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

pub use factor::{
    factorize, factorize_with_budget, set_default_budget, FactorBudget, Factorization,
    DEFAULT_FACTOR_BUDGET,
};
pub use prime::{is_prime, is_prime_u64};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// A sign in {-1, +1}; used for root numbers and factorization signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `(-1)^n`.
    pub fn parity(n: usize) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl std::iter::Product for Sign {
    fn product<I: Iterator<Item = Sign>>(iter: I) -> Sign {
        iter.fold(Sign::Plus, Mul::mul)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.value())
    }
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"` with an optional leading minus on `a`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("expected a rational \"a\" or \"a/b\", got {text:?}"));
    let digits = |s: &str, allow_minus: bool| {
        let body = if allow_minus { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Renders `num/den` even for integers (CSV form).
pub fn fraction_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn require_prime(p: &BigInt) -> Result<BigUint> {
    match p.to_biguint() {
        Some(n) if is_prime(&n) => Ok(n),
        _ => Err(Error::domain(format!("{p} is not prime"))),
    }
}

/// Multiplicity of `p` in a nonzero integer; `p` assumed prime.
pub fn ord_p_int(n: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        n = q;
        k += 1;
    }
}

/// The p-adic valuation: the `n` with `x = p^n * a/b` and `p` dividing
/// neither `a` nor `b`.
pub fn ord_p(x: &Rational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::domain("ord_p(0) is undefined"));
    }
    require_prime(p)?;
    Ok(ord_p_int(x.numer(), p) as i64 - ord_p_int(x.denom(), p) as i64)
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational square, if any.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    let n = isqrt_exact(x.numer())?;
    let d = isqrt_exact(x.denom())?;
    Some(Rational::new(n, d))
}

/// True iff `x = q^2` for some rational `q`.
pub fn is_square(x: &Rational) -> bool {
    sqrt_exact(x).is_some()
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    let two = BigInt::from(2);
    if p.is_even() {
        return Err(Error::domain(format!("legendre needs an odd prime, got {p}")));
    }
    require_prime(p)?;
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e = (p - BigInt::one()) / &two;
    let v = r.modpow(&e, p);
    if v.is_one() {
        Ok(1)
    } else if v == p - BigInt::one() {
        Ok(-1)
    } else {
        Err(Error::internal(format!("Euler criterion gave {v} mod {p}")))
    }
}

/// Residue of `n` modulo `m` in `[0, m)`, as u64.
pub fn residue(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits")
}
