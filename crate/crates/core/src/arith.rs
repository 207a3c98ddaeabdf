//! Exact integer kernel: primality, factorization, modular exponentiation.
//!
//! Everything here works on machine integers. Products of two residues below
//! 2^64 are formed in `u128`, so no intermediate ever overflows.

use std::fmt;

use crate::error::{Error, Result};

/// Upper bound (exclusive) on the integers `d` accepted by [`factor_squarefree`].
pub const SQUAREFREE_BOUND: u64 = 1 << 40;

const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Deterministic Miller-Rabin witnesses, sufficient for every n < 2^64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// An odd squarefree integer `3 <= value < 2^40` together with its prime factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OddSquarefree {
    value: u64,
    factors: Vec<u64>,
}

impl OddSquarefree {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Distinct prime factors in increasing order.
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1
    }
}

impl fmt::Display for OddSquarefree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl TryFrom<u64> for OddSquarefree {
    type Error = Error;

    fn try_from(n: u64) -> Result<Self> {
        factor_squarefree(n)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// Extended Euclid on signed values: returns `(g, x, y)` with `a*x + b*y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Returns `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: u128) -> Option<u128> {
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod modulus`, with the result in `[0, modulus)`. Negative bases
/// are reduced to their canonical residue first.
pub fn modpow(base: i64, exp: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    if modulus == 1 {
        return Ok(0);
    }
    let b = (base as i128).rem_euclid(modulus as i128) as u64;
    Ok(pow_mod(b, exp, modulus))
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic primality test for `1 < n < 2^64`.
pub fn is_prime(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("is_prime expects n > 1, got {n}")));
    }
    Ok(is_prime_unchecked(n))
}

pub(crate) fn is_prime_unchecked(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
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

/// Brent's variant of Pollard rho. `n` must be odd, composite and free of
/// tiny factors; returns a non-trivial divisor.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let m = 128u64;
        let mut ys = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Full factorization of `n >= 1` as sorted `(prime, exponent)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some(entry) => entry.1 += 1,
        None => out.push((p, 1)),
    };
    while n % 2 == 0 && n > 0 {
        push(2, &mut out);
        n /= 2;
    }
    let mut p = 3u64;
    while p < TRIAL_DIVISION_LIMIT && p * p <= n {
        while n % p == 0 {
            push(p, &mut out);
            n /= p;
        }
        p += 2;
    }
    let mut stack = vec![];
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if is_prime_unchecked(m) {
            push(m, &mut out);
        } else {
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out
}

/// Factors an odd squarefree `3 <= n < 2^40`.
pub fn factor_squarefree(n: u64) -> Result<OddSquarefree> {
    if n % 2 == 0 || !(3..SQUAREFREE_BOUND).contains(&n) {
        return Err(Error::InvalidInput(format!("expected an odd integer in [3, 2^40), got {n}")));
    }
    let factors = factor(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Err(Error::NotSquarefree(n as i64));
    }
    Ok(OddSquarefree { value: n, factors: factors.into_iter().map(|(p, _)| p).collect() })
}

/// True when `|m|` has no repeated prime factor. `m = 0` is not squarefree.
pub fn is_squarefree(m: i64) -> bool {
    m != 0 && factor(m.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}
