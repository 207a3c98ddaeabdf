//! Bounded solvers for the three representation problems behind the residue
//! criteria:
//!
//! * `p = u^2 - 2v^2` with `u = 1 (mod 8)`,
//! * Kaplan's parametrization `2q = k^2 X^2 + 2lXY + 2mY^2`, `p = l^2 - 2k^2 m`,
//! * the Legendre equation `pX^2 + qY^2 = Z^2` under the coprimality and
//!   parity normalization.
//!
//! Every search is exhaustive up to an explicit bound and deterministic. The
//! `validate_*` functions recheck a witness from scratch and do not share code
//! with the solvers.

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, gcd, is_prime_unchecked, pow_mod};
use crate::error::{Error, Result};
use crate::symbols::{jacobi, quartic_residue, SymbolValue};

/// Search limits shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Cap on the largest free variable: `u` for the Pell representation, `Z`
    /// for the Legendre equation.
    pub max_value: u64,
    /// Largest `k` tried by the Kaplan search.
    pub kaplan_k_max: u64,
    /// Largest `Y` tried for each `k` by the Kaplan search.
    pub kaplan_y_max: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_value: 1_000_000, kaplan_k_max: 99, kaplan_y_max: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PellRepresentation {
    pub p: u64,
    pub u: u64,
    pub v: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KaplanParams {
    pub p: u64,
    pub q: u64,
    pub k: i64,
    pub l: i64,
    pub m: i64,
    pub x: i64,
    pub y: i64,
}

impl KaplanParams {
    /// The odd modulus `|k^2 X + lY|` fed to the `(-2/.)` criterion.
    ///
    /// Its square is `pY^2 + 2k^2 q`, which is odd for every valid witness.
    pub fn criterion_modulus(&self) -> u64 {
        let k2 = self.k as i128 * self.k as i128;
        (k2 * self.x as i128 + self.l as i128 * self.y as i128).unsigned_abs() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LegendreSolution {
    pub p: u64,
    pub q: u64,
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

fn require_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime_unchecked(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// The automorph of `u^2 - 2v^2`, multiplication by `3 + 2 sqrt(2)`.
fn automorph(u: i128, v: i128) -> (i128, i128) {
    (3 * u + 4 * v, 2 * u + 3 * v)
}

/// Finds `p = u^2 - 2v^2` with `u, v > 0` and `u = 1 (mod 8)`, minimizing `u`
/// over all representations with `u <= bounds.max_value`.
///
/// Every solution lies in the orbit of a base solution `0 <= v0 <= sqrt(p/2)`
/// under the automorph, so the search walks those orbits up to the bound.
pub fn solve_pell_rep(p: u64, bounds: &SearchBounds) -> Result<PellRepresentation> {
    require_prime(p)?;
    if p % 8 != 1 {
        return Err(Error::BadPrimeClass { p, residue: 1, modulus: 8 });
    }
    let limit = bounds.max_value as i128;
    let mut best: Option<(u64, u64)> = None;
    for v0 in 0..=(p / 2).isqrt() {
        let Some(u0) = exact_sqrt(p as u128 + 2 * (v0 as u128).pow(2)) else {
            continue;
        };
        for sign in [1i128, -1] {
            let (mut u, mut v) = (u0 as i128, sign * v0 as i128);
            // the orbit may dip once before it grows
            for step in 0.. {
                if u.abs() > limit && step > 1 {
                    break;
                }
                let (au, av) = (u.unsigned_abs() as u64, v.unsigned_abs() as u64);
                if au % 8 == 1 && av > 0 && au as i128 <= limit && best.is_none_or(|(bu, _)| au < bu) {
                    best = Some((au, av));
                }
                (u, v) = automorph(u, v);
            }
        }
    }
    best.map(|(u, v)| PellRepresentation { p, u, v })
        .ok_or(Error::NoRepresentationInBound { p, bound: bounds.max_value })
}

/// Finds Kaplan parameters for primes `p = q = 3 (mod 8)` with `(p/q) = +1`.
///
/// Normalization: least odd `k`, then least `Y >= 1`, then least `|m|` (ties to
/// the smaller `l >= 0`), then the root `X = (s - lY)/k^2` before
/// `X = (-s - lY)/k^2`, where `s^2 = pY^2 + 2k^2 q`.
pub fn solve_kaplan(p: u64, q: u64, bounds: &SearchBounds) -> Result<KaplanParams> {
    require_prime(p)?;
    require_prime(q)?;
    if p % 8 != 3 || q % 8 != 3 {
        return Err(Error::PrecondViolated(format!("({p}, {q}) are not both 3 mod 8")));
    }
    if jacobi(p as i64, q)? != SymbolValue::Plus {
        return Err(Error::PrecondViolated(format!("({p}/{q}) = -1")));
    }
    let (pi, qi) = (p as i128, q as i128);
    for k in (1..=bounds.kaplan_k_max as i128).step_by(2) {
        let k2 = k * k;
        // l >= 0 with l^2 = p (mod 2k^2), ordered by |m|; the window covers every
        // residue class on both sides of sqrt(p)
        let mut ls: Vec<(i128, i128)> = (0..=(p as i128).isqrt() + 4 * k2)
            .filter(|l| (l * l - pi).rem_euclid(2 * k2) == 0)
            .map(|l| (l, (l * l - pi) / (2 * k2)))
            .collect();
        ls.sort_by_key(|&(l, m)| (m.abs(), l));
        if ls.is_empty() {
            continue;
        }
        for y in 1..=bounds.kaplan_y_max as i128 {
            let Some(s) = exact_sqrt((pi * y * y + 2 * k2 * qi) as u128) else {
                continue;
            };
            let s = s as i128;
            for &(l, m) in &ls {
                for num in [s - l * y, -s - l * y] {
                    if num % k2 == 0 {
                        return Ok(KaplanParams {
                            p,
                            q,
                            k: k as i64,
                            l: l as i64,
                            m: m as i64,
                            x: (num / k2) as i64,
                            y: y as i64,
                        });
                    }
                }
            }
        }
    }
    Err(Error::NoSolutionInBound { p, q, bound: bounds.kaplan_y_max })
}

/// Square root of a quadratic residue `a` modulo a prime `p = 5 (mod 8)`.
fn sqrt_mod_5_8(a: u64, p: u64) -> u64 {
    let mul = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let two_a = mul(2, a);
    let v = pow_mod(two_a, (p - 5) / 8, p);
    let i = mul(two_a, mul(v, v));
    let r = mul(mul(a, v), (i + p - 1) % p);
    debug_assert_eq!(mul(r, r), a % p);
    r
}

fn check_legendre_hypotheses(p: u64, q: u64) -> Result<()> {
    require_prime(p)?;
    require_prime(q)?;
    if p % 8 != 5 || q % 8 != 3 {
        return Err(Error::PrecondViolated(format!("need p = 5 and q = 3 mod 8, got ({p}, {q})")));
    }
    if jacobi(p as i64, q)? != SymbolValue::Plus {
        return Err(Error::PrecondViolated(format!("({p}/{q}) = -1")));
    }
    if quartic_residue(-(q as i64), p)? != SymbolValue::Plus {
        return Err(Error::PrecondViolated(format!("(-{q}/{p})_4 = -1")));
    }
    Ok(())
}

fn admissible(p: u64, q: u64, x: u64, y: u64, z: u64) -> bool {
    x % 2 == 1
        && y % 2 == 0
        && z % 4 == 1
        && gcd(x, y) == 1
        && gcd(y, z) == 1
        && gcd(z, x) == 1
        && y % p != 0
        && z % p != 0
        && x % q != 0
        && z % q != 0
}

/// Calls `visit` on every admissible solution with `Z <= z_max`, in order of
/// increasing `Z` then `Y`. Stops early when `visit` returns false.
fn scan_legendre(p: u64, q: u64, z_max: u64, mut visit: impl FnMut(LegendreSolution) -> bool) {
    // Z^2 = qY^2 (mod p) forces Y = +-Z/w (mod p) with w^2 = q
    let w = sqrt_mod_5_8(q % p, p);
    let w_inv = pow_mod(w, p - 2, p);
    let step = 2 * p as u128;
    for z in (5..=z_max).step_by(4) {
        let z2 = z as u128 * z as u128;
        let base = (z % p) as u128 * w_inv as u128 % p as u128;
        let mut ys: Vec<u128> = Vec::new();
        for r in [base, (p as u128 - base) % p as u128] {
            // the even representative of r modulo 2p
            let mut y = if r % 2 == 0 { r } else { r + p as u128 };
            while q as u128 * y * y < z2 {
                if y > 0 {
                    ys.push(y);
                }
                y += step;
            }
        }
        ys.sort_unstable();
        ys.dedup();
        for y in ys {
            let rest = z2 - q as u128 * y * y;
            if rest % p as u128 != 0 {
                continue;
            }
            let Some(x) = exact_sqrt(rest / p as u128) else {
                continue;
            };
            let sol = LegendreSolution { p, q, x: x as u64, y: y as u64, z };
            if admissible(p, q, sol.x, sol.y, z) && !visit(sol) {
                return;
            }
        }
    }
}

/// The admissible solution of `pX^2 + qY^2 = Z^2` with the least `Z` (then the
/// least `Y`), searching `Z <= bounds.max_value`.
pub fn solve_legendre(p: u64, q: u64, bounds: &SearchBounds) -> Result<LegendreSolution> {
    check_legendre_hypotheses(p, q)?;
    let mut found = None;
    scan_legendre(p, q, bounds.max_value, |sol| {
        found = Some(sol);
        false
    });
    found.ok_or(Error::NoSolutionInBound { p, q, bound: bounds.max_value })
}

/// All admissible solutions with `Z <= z_max`, ordered by `(Z, Y)`.
pub fn legendre_solutions(p: u64, q: u64, z_max: u64) -> Result<Vec<LegendreSolution>> {
    check_legendre_hypotheses(p, q)?;
    let mut out = Vec::new();
    scan_legendre(p, q, z_max, |sol| {
        out.push(sol);
        true
    });
    Ok(out)
}

/// `+1` when `(Z/p)_4 != (2X/Z)`, i.e. when the criterion fires.
pub fn williams_criterion(sol: &LegendreSolution) -> Result<SymbolValue> {
    validate_legendre(sol)?;
    let quartic = quartic_residue((sol.z % sol.p) as i64, sol.p)?;
    let two_x = i64::try_from(2 * sol.x as u128)
        .map_err(|_| Error::InvalidInput(format!("2X = {} overflows", 2 * sol.x as u128)))?;
    let quadratic = jacobi(two_x, sol.z)?;
    Ok(if quartic != quadratic { SymbolValue::Plus } else { SymbolValue::Minus })
}

fn invalid(msg: String) -> Error {
    Error::InvalidWitness(msg)
}

pub fn validate_pell(rep: &PellRepresentation) -> Result<()> {
    let (u, v) = (rep.u as i128, rep.v as i128);
    if rep.u == 0 || rep.v == 0 {
        return Err(invalid(format!("u, v must be positive: {rep:?}")));
    }
    if u * u - 2 * v * v != rep.p as i128 {
        return Err(invalid(format!("{}^2 - 2*{}^2 != {}", rep.u, rep.v, rep.p)));
    }
    if rep.u % 8 != 1 {
        return Err(invalid(format!("u = {} is not 1 mod 8", rep.u)));
    }
    Ok(())
}

pub fn validate_kaplan(w: &KaplanParams) -> Result<()> {
    let [k, l, m, x, y] = [w.k, w.l, w.m, w.x, w.y].map(|t| t as i128);
    if 2 * w.q as i128 != k * k * x * x + 2 * l * x * y + 2 * m * y * y {
        return Err(invalid(format!("2q != k^2X^2 + 2lXY + 2mY^2 for {w:?}")));
    }
    if w.p as i128 != l * l - 2 * k * k * m {
        return Err(invalid(format!("p != l^2 - 2k^2 m for {w:?}")));
    }
    Ok(())
}

pub fn validate_legendre(s: &LegendreSolution) -> Result<()> {
    let sq = |t: u64| t as u128 * t as u128;
    if s.p as u128 * sq(s.x) + s.q as u128 * sq(s.y) != sq(s.z) {
        return Err(invalid(format!("pX^2 + qY^2 != Z^2 for {s:?}")));
    }
    if !admissible(s.p, s.q, s.x, s.y, s.z) {
        return Err(invalid(format!("coprimality or parity conditions fail for {s:?}")));
    }
    Ok(())
}
