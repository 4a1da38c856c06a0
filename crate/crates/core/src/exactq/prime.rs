//! Miller-Rabin primality.
//!
//! Below 2^64 the test uses the first twelve primes as witnesses, which is
//! deterministic for every n < 3.18 * 10^23. Above 2^64 it adds
//! [`EXTRA_ROUNDS`] pseudo-random witnesses drawn from a fixed-seed ChaCha
//! stream, so a composite slips through with probability at most 4^-32.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Random witnesses used on top of [`WITNESSES`] for inputs of 65 bits or more.
pub const EXTRA_ROUNDS: usize = 20;

const WITNESS_SEED: u64 = 0x5eed_0fe7;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_probable_prime(n: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let n_minus_one = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Primality of an arbitrary-size natural number.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    for &a in &WITNESSES {
        if !strong_probable_prime(n, &BigUint::from(a), &d, s) {
            return false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    let lo = BigUint::from(2u32);
    for _ in 0..EXTRA_ROUNDS {
        let a = rng.gen_biguint_range(&lo, &n_minus_one);
        if a.is_zero() || !strong_probable_prime(n, &a, &d, s) {
            return false;
        }
    }
    true
}
