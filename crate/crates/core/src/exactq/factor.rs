//! Integer factorization: trial division, then Brent's variant of Pollard rho.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::{is_prime, is_prime_u64, mul_mod};
use super::Sign;
use crate::error::{Error, Result};

/// Odd trial divisors are tried up to this bound before switching to rho.
const TRIAL_LIMIT: u64 = 1 << 12;

/// Default number of rho iterations, summed over every composite split
/// during one factorization. Comfortably above what Brent's method needs
/// for any 64-bit composite (on the order of 2^16 per split).
pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 24;

static DEFAULT_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_FACTOR_BUDGET);

/// Bound on the work spent splitting composites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl FactorBudget {
    pub fn new(rho_iterations: u64) -> Self {
        FactorBudget { rho_iterations }
    }

    /// The process-wide budget used by every operation that factors
    /// internally. See [`set_default_budget`].
    pub fn current() -> Self {
        FactorBudget::new(DEFAULT_BUDGET.load(Ordering::Relaxed))
    }
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget::new(DEFAULT_FACTOR_BUDGET)
    }
}

/// Replaces the process-wide factorization budget.
pub fn set_default_budget(budget: FactorBudget) {
    DEFAULT_BUDGET.store(budget.rho_iterations, Ordering::Relaxed);
}

/// `sign * prod(p^e)` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: Sign,
    pub pairs: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> + '_ {
        self.pairs.iter().map(|(p, _)| p)
    }

    pub fn reconstruct(&self) -> BigInt {
        let magnitude = self
            .pairs
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
        match self.sign {
            Sign::Plus => magnitude,
            Sign::Minus => -magnitude,
        }
    }
}

struct Splitter {
    remaining: u64,
    budget: u64,
}

impl Splitter {
    fn spend(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }

    /// A nontrivial factor of the odd composite `n`, or `None` when the
    /// budget runs out.
    fn rho_u64(&mut self, n: u64) -> Option<u64> {
        const BATCH: u64 = 128;
        let step = |x: u64, c: u64| (mul_mod(x, x, n) + c) % n;
        for c in 1..n {
            let (mut x, mut y, mut ys) = (0u64, 2u64, 2u64);
            let mut g = 1u64;
            let mut q = 1u64;
            let mut r = 1u64;
            while g == 1 {
                x = y;
                if !self.spend(r) {
                    return None;
                }
                for _ in 0..r {
                    y = step(y, c);
                }
                let mut k = 0;
                while k < r && g == 1 {
                    ys = y;
                    let m = BATCH.min(r - k);
                    if !self.spend(m) {
                        return None;
                    }
                    for _ in 0..m {
                        y = step(y, c);
                        q = mul_mod(q, x.abs_diff(y), n);
                    }
                    g = q.gcd(&n);
                    k += m;
                }
                r *= 2;
            }
            if g == n {
                loop {
                    if !self.spend(1) {
                        return None;
                    }
                    ys = step(ys, c);
                    g = x.abs_diff(ys).gcd(&n);
                    if g > 1 {
                        break;
                    }
                }
            }
            if g != n {
                return Some(g);
            }
        }
        None
    }

    fn rho_big(&mut self, n: &BigUint) -> Option<BigUint> {
        const BATCH: u64 = 128;
        let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        let mut c = BigUint::one();
        loop {
            let step = |x: &BigUint| (x * x + &c) % n;
            let mut x = BigUint::zero();
            let mut y = BigUint::from(2u32);
            let mut ys = y.clone();
            let mut g = BigUint::one();
            let mut q = BigUint::one();
            let mut r = 1u64;
            while g.is_one() {
                x = y.clone();
                if !self.spend(r) {
                    return None;
                }
                for _ in 0..r {
                    y = step(&y);
                }
                let mut k = 0;
                while k < r && g.is_one() {
                    ys = y.clone();
                    let m = BATCH.min(r - k);
                    if !self.spend(m) {
                        return None;
                    }
                    for _ in 0..m {
                        y = step(&y);
                        q = (q * abs_diff(&x, &y)) % n;
                    }
                    g = q.gcd(n);
                    k += m;
                }
                r *= 2;
            }
            if &g == n {
                loop {
                    if !self.spend(1) {
                        return None;
                    }
                    ys = step(&ys);
                    g = abs_diff(&x, &ys).gcd(n);
                    if !g.is_one() {
                        break;
                    }
                }
            }
            if &g != n {
                return Some(g);
            }
            c += 1u32;
        }
    }
}

fn is_prime_natural(n: &BigUint) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None => is_prime(n),
    }
}

/// Complete factorization of a nonzero integer under the current default budget.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    factorize_with_budget(n, FactorBudget::current())
}

/// Complete factorization of a nonzero integer.
///
/// Never returns a partial answer: if the rho stage runs out of budget the
/// result is [`Error::FactorizationIncomplete`].
pub fn factorize_with_budget(n: &BigInt, budget: FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::domain("cannot factorize 0"));
    }
    let sign = if n.sign() == BigSign::Minus { Sign::Minus } else { Sign::Plus };
    let mut rest = n.abs().to_biguint().expect("absolute value is nonnegative");
    let mut exponents: BTreeMap<BigUint, u32> = BTreeMap::new();

    let mut strip = |rest: &mut BigUint, d: u64| {
        let d_big = BigUint::from(d);
        while (&*rest % &d_big).is_zero() {
            *rest /= &d_big;
            *exponents.entry(d_big.clone()).or_insert(0) += 1;
        }
    };
    strip(&mut rest, 2);
    let mut d = 3u64;
    while d <= TRIAL_LIMIT && BigUint::from(d * d) <= rest {
        strip(&mut rest, d);
        d += 2;
    }

    let mut splitter = Splitter {
        remaining: budget.rho_iterations,
        budget: budget.rho_iterations,
    };
    let mut pending = Vec::new();
    if !rest.is_one() {
        pending.push(rest);
    }
    while let Some(m) = pending.pop() {
        // after trial division, anything below TRIAL_LIMIT^2 has no small factor
        let below_square = m.to_u64().is_some_and(|v| v < TRIAL_LIMIT * TRIAL_LIMIT);
        if below_square || is_prime_natural(&m) {
            *exponents.entry(m).or_insert(0) += 1;
            continue;
        }
        let factor = match m.to_u64() {
            Some(small) => splitter.rho_u64(small).map(BigUint::from),
            None => splitter.rho_big(&m),
        };
        match factor {
            Some(f) => {
                let cofactor = &m / &f;
                pending.push(f);
                pending.push(cofactor);
            }
            None => {
                return Err(Error::FactorizationIncomplete {
                    n: n.clone(),
                    cofactor: BigInt::from(m),
                    budget: splitter.budget,
                })
            }
        }
    }

    let pairs = exponents
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e))
        .collect();
    Ok(Factorization { sign, pairs })
}
