//! Quadratic and quartic residue symbols.
//!
//! Every symbol here takes values in {+1, -1}. The degenerate cases (a shared
//! factor with the modulus, a quartic symbol of a non-residue) are errors.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime_unchecked, pow_mod};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum SymbolValue {
    Plus,
    Minus,
}

impl SymbolValue {
    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::Plus => 1,
            SymbolValue::Minus => -1,
        }
    }

    fn from_sign(positive: bool) -> Self {
        if positive {
            SymbolValue::Plus
        } else {
            SymbolValue::Minus
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;

    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_sign(self == rhs)
    }
}

impl From<SymbolValue> for i8 {
    fn from(v: SymbolValue) -> i8 {
        v.as_i8()
    }
}

impl TryFrom<i8> for SymbolValue {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(SymbolValue::Plus),
            -1 => Ok(SymbolValue::Minus),
            other => Err(format!("symbol value must be +1 or -1, got {other}")),
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolValue::Plus => "+1",
            SymbolValue::Minus => "-1",
        })
    }
}

/// Jacobi symbol `(a/n)` for odd `n >= 3` coprime to `a`, by binary reciprocity.
pub fn jacobi(a: i64, n: u64) -> Result<SymbolValue> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n));
    }
    let original = a;
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    if gcd(a, n) != 1 {
        return Err(Error::NonCoprime { a: original, n });
    }
    let mut n = n;
    let mut positive = true;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2/n) = -1 exactly when n = 3, 5 (mod 8)
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            positive = !positive;
        }
        if a % 4 == 3 && n % 4 == 3 {
            positive = !positive;
        }
        (a, n) = (n % a, a);
    }
    debug_assert_eq!(n, 1);
    Ok(SymbolValue::from_sign(positive))
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || !is_prime_unchecked(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    Ok(())
}

/// Quartic residue symbol `(a/p)_4` for a prime `p = 1 (mod 4)` and a quadratic
/// residue `a`, via Euler's criterion `a^((p-1)/4) mod p`.
pub fn quartic_residue(a: i64, p: u64) -> Result<SymbolValue> {
    check_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::BadPrimeClass { p, residue: 1, modulus: 4 });
    }
    if jacobi(a, p)? == SymbolValue::Minus {
        return Err(Error::NotQuadraticResidue { a, p });
    }
    let r = (a as i128).rem_euclid(p as i128) as u64;
    match pow_mod(r, (p - 1) / 4, p) {
        1 => Ok(SymbolValue::Plus),
        x if x == p - 1 => Ok(SymbolValue::Minus),
        // a quadratic residue has a^((p-1)/2) = 1, so its quarter power is a square root of 1
        x => unreachable!("{a}^((p-1)/4) = {x} mod {p}"),
    }
}

/// The rational quartic symbol `(p/2)_4 = (-1)^((p-1)/8)` for primes `p = 1 (mod 8)`.
pub fn quartic_2_reciprocal(p: u64) -> Result<SymbolValue> {
    check_prime(p)?;
    if p % 8 != 1 {
        return Err(Error::BadPrimeClass { p, residue: 1, modulus: 8 });
    }
    Ok(SymbolValue::from_sign(((p - 1) / 8) % 2 == 0))
}
