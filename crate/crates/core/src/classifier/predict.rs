use std::fmt;

use serde::{Deserialize, Serialize};

use super::{classify, exponent_r_with, Family};
use crate::arith::OddSquarefree;
use crate::error::{Error, Result};
use crate::qforms::{ClassGroupOracle, Enumeration};
use crate::symbols::{quartic_2_reciprocal, quartic_residue, SymbolValue};

/// Largest layer index accepted by [`predict`]; keeps every order inside `u64`.
pub const MAX_LAYER: u32 = 48;

/// `L` is the tower over `Q(sqrt(d), i)`, `K` the one over `Q(sqrt(-d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tower {
    L,
    K,
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tower::L => "L",
            Tower::K => "K",
        })
    }
}

/// Cyclic factors of a 2-group, ascending. `exact = false` means only the
/// qualitative statement in `note` is known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupShape {
    pub divisors: Vec<u64>,
    pub exact: bool,
    pub note: Option<String>,
}

impl GroupShape {
    fn exact(divisors: Vec<u64>) -> Self {
        GroupShape { divisors, exact: true, note: None }
    }

    /// `log2` of the group order, when known.
    pub fn order_log2(&self) -> Option<u32> {
        self.exact.then(|| self.divisors.iter().map(|d| d.trailing_zeros()).sum())
    }
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exact {
            return f.write_str(self.note.as_deref().unwrap_or("unknown"));
        }
        let parts: Vec<String> = self.divisors.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RSource {
    Oracle,
    Corollary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub d: u64,
    pub tower: Tower,
    pub n: u32,
    pub shape: GroupShape,
    pub r: Option<u32>,
    pub r_source: Option<RSource>,
    pub theorem: String,
}

/// `(lambda, mu, nu)` with `log2 |Cl_2(layer n)| = lambda n + mu 2^n + nu` for `n >= valid_from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IwasawaInvariants {
    pub lambda: u32,
    pub mu: u32,
    pub nu: i64,
    pub valid_from: u32,
}

impl IwasawaInvariants {
    /// `e_n = lambda n + mu 2^n + nu`.
    pub fn exponent_at(&self, n: u32) -> i64 {
        self.lambda as i64 * n as i64 + (self.mu as i64) * (1i64 << n) + self.nu
    }
}

fn pow2(e: u32) -> Result<u64> {
    1u64.checked_shl(e).ok_or_else(|| Error::InvalidInput(format!("2^{e} does not fit in 64 bits")))
}

/// The 2-class group of layer `n` of `tower` over `d`, with `r` from the class group oracle.
pub fn predict(d: &OddSquarefree, n: u32, tower: Tower) -> Result<Prediction> {
    predict_with(d, n, tower, &Enumeration)
}

pub fn predict_with(d: &OddSquarefree, n: u32, tower: Tower, oracle: &dyn ClassGroupOracle) -> Result<Prediction> {
    if !(1..=MAX_LAYER).contains(&n) {
        return Err(Error::InvalidInput(format!("layer index must be in 1..={MAX_LAYER}, got {n}")));
    }
    let tag = classify(d)?;
    match (tag.family, tower) {
        (Family::C7, Tower::L) => {
            return Ok(Prediction {
                d: d.value(),
                tower,
                n,
                shape: GroupShape {
                    divisors: Vec::new(),
                    exact: false,
                    note: Some("cyclic non-trivial, order not determined".into()),
                },
                r: None,
                r_source: None,
                theorem: "L_{n,d} for prime d = 7 (mod 16): Cl_2 cyclic non-trivial".into(),
            });
        }
        (Family::C7 | Family::Unclassified, _) => return Err(Error::UnsupportedFamily(d.value())),
        _ => {}
    }
    let r = exponent_r_with(&tag, oracle)?;
    let big = |shift: u32| pow2((n + r).saturating_sub(shift));
    let (shape, theorem) = match (tag.family, tower) {
        (Family::B, Tower::L) => (
            GroupShape::exact(vec![big(1)?]),
            "L_{n,d} = Q(zeta_{2^(n+2)}, sqrt(d)), d = pq, p = -q = 5 (mod 8): Z/2^(n+r-1), 2^r = 2 h_2(-pq)",
        ),
        (Family::B, Tower::K) => (
            GroupShape::exact(vec![big(1)?]),
            "K_{n,d} over Q(sqrt(-d)), d = pq, p = -q = 5 (mod 8): Z/2^(n+r-1), 2^r = 2 h_2(-pq)",
        ),
        // genus theory gives r >= 3 here, so the second factor is never trivial
        (_, Tower::L) => (
            GroupShape::exact([2, big(2)?].into_iter().filter(|&x| x > 1).collect()),
            "L_{n,d} = Q(zeta_{2^(n+2)}, sqrt(d)), d in A1/A2: Z/2 x Z/2^(n+r-2), 2^r = h_2(-2d)",
        ),
        (_, Tower::K) => (
            GroupShape::exact(vec![2, big(1)?]),
            "K_{n,d} over Q(sqrt(-d)), d in A1/A2: Z/2 x Z/2^(n+r-1), 2^r = h_2(-2d)",
        ),
    };
    Ok(Prediction {
        d: d.value(),
        tower,
        n,
        shape,
        r: Some(r),
        r_source: Some(RSource::Oracle),
        theorem: theorem.to_string(),
    })
}

/// Iwasawa invariants of `tower` over `d`, valid from the first layer on.
pub fn iwasawa_invariants(d: &OddSquarefree, tower: Tower) -> Result<IwasawaInvariants> {
    iwasawa_invariants_with(d, tower, &Enumeration)
}

pub fn iwasawa_invariants_with(
    d: &OddSquarefree,
    tower: Tower,
    oracle: &dyn ClassGroupOracle,
) -> Result<IwasawaInvariants> {
    let tag = classify(d)?;
    if !tag.family.has_exponent() {
        return Err(Error::UnsupportedFamily(d.value()));
    }
    let r = exponent_r_with(&tag, oracle)? as i64;
    let nu = match (tag.family, tower) {
        (Family::A1 | Family::A2, Tower::K) => r,
        _ => r - 1,
    };
    Ok(IwasawaInvariants { lambda: 1, mu: 0, nu, valid_from: 1 })
}

/// `2a + b - 1`, where `a` counts the primes of `d` that are `7` or `9 (mod 16)`
/// and `b` those that are `3` or `5 (mod 8)`. Any other prime factor falls
/// outside the formula.
pub fn lambda_minus(d: &OddSquarefree) -> Result<u32> {
    let (mut a, mut b) = (0u32, 0u32);
    for &p in d.factors() {
        if matches!(p % 16, 7 | 9) {
            a += 1;
        } else if matches!(p % 8, 3 | 5) {
            b += 1;
        } else {
            return Err(Error::HypothesisNotMet { d: d.value(), prime: p });
        }
    }
    Ok(2 * a + b - 1)
}

/// Whether the class number of the maximal real subfield of every layer of the
/// `L` tower is odd.
pub fn plus_part_odd(d: &OddSquarefree) -> bool {
    match *d.factors() {
        [p, q] => p % 4 == 3 && q % 4 == 3 && (p % 8 == 3 || q % 8 == 3),
        [p] if p % 4 == 3 || p % 8 == 5 => true,
        [p] if p % 8 == 1 => {
            let s = quartic_residue(2, p).expect("2 is a square mod p = 1 (mod 8)");
            let t = quartic_2_reciprocal(p).expect("p = 1 (mod 8)");
            s * t == SymbolValue::Minus
        }
        _ => false,
    }
}

/// Whether `Cl_2(L_{n,d})` is cyclic and non-trivial: `d` prime `= 7 (mod 16)`,
/// or `d = pq` with `p = 5`, `q = 3 (mod 8)`.
pub fn is_cyclic_tower(d: &OddSquarefree) -> bool {
    match *d.factors() {
        [p] => p % 16 == 7,
        [a, b] => matches!((a % 8, b % 8), (5, 3) | (3, 5)),
        _ => false,
    }
}

/// Greenberg's conjecture for the real layers is known in the cyclic cases.
/// This is a reported flag, nothing is verified.
pub fn greenberg_holds(d: &OddSquarefree) -> bool {
    is_cyclic_tower(d)
}
