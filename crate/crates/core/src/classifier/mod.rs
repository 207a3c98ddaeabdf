//! Families of `d`, the exponent `r`, and the layer-by-layer predictions.
//!
//! For `d` in one of the families below, the 2-class group of the `n`-th layer
//! of either tower is pinned down by a single integer `r`:
//!
//! | family | `d`                                         | `2^r`          |
//! |--------|---------------------------------------------|----------------|
//! | A1     | prime, `d = 9 (mod 16)`, `(2/d)_4 = +1`     | `h_2(-2d)`     |
//! | A2     | `pq`, `p = q = 3 (mod 8)`, `(p/q) = +1`     | `h_2(-2d)`     |
//! | B      | `pq`, `p = 5`, `q = 3 (mod 8)`              | `2 h_2(-pq)`   |
//!
//! Primes `d = 7 (mod 16)` (tag C7) give a cyclic tower of unknown order.
//!
//! `r` is read off the class group oracle; the residue-symbol criteria give an
//! independent value (or lower bound) that [`cross_check`] compares against it.

mod crosscheck;
mod predict;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::OddSquarefree;
use crate::diophantine::{
    solve_kaplan, solve_legendre, solve_pell_rep, williams_criterion, KaplanParams, LegendreSolution,
    PellRepresentation, SearchBounds,
};
use crate::error::{Error, Result};
use crate::qforms::{discriminant_of, ClassGroupOracle, Enumeration};
use crate::symbols::{jacobi, quartic_residue, SymbolValue};

pub use crosscheck::{
    cross_check, cross_check_with, CrossCheckEntry, CrossCheckOptions, CrossCheckReport, RDefinitionTally, Violation,
};
pub use predict::{
    greenberg_holds, is_cyclic_tower, iwasawa_invariants, iwasawa_invariants_with, lambda_minus, plus_part_odd,
    predict, predict_with, GroupShape, IwasawaInvariants, Prediction, RSource, Tower, MAX_LAYER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A1,
    A2,
    B,
    C7,
    #[serde(rename = "UNCLASSIFIED")]
    Unclassified,
}

impl Family {
    /// True for the families with an exact order formula.
    pub fn has_exponent(self) -> bool {
        matches!(self, Family::A1 | Family::A2 | Family::B)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::B => "B",
            Family::C7 => "C7",
            Family::Unclassified => "UNCLASSIFIED",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Family::A1),
            "A2" => Ok(Family::A2),
            "B" => Ok(Family::B),
            "C7" => Ok(Family::C7),
            "UNCLASSIFIED" => Ok(Family::Unclassified),
            _ => Err(Error::InvalidInput(format!("unknown family {s:?}"))),
        }
    }
}

/// A residue symbol evaluated along the way, e.g. `"(p/q)" = +1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub symbol: String,
    pub value: SymbolValue,
}

impl Witness {
    fn new(symbol: impl Into<String>, value: SymbolValue) -> Self {
        Witness { symbol: symbol.into(), value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyTag {
    pub d: u64,
    pub family: Family,
    /// For A2 ordered so that `(p/q) = +1`; for B ordered as `(p = 5, q = 3 mod 8)`.
    pub primes: Vec<u64>,
    pub witnesses: Vec<Witness>,
}

impl FamilyTag {
    pub fn p(&self) -> Option<u64> {
        self.primes.first().copied()
    }

    pub fn q(&self) -> Option<u64> {
        self.primes.get(1).copied()
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        if self.family == Family::Unclassified {
            return Ok(());
        }
        for (name, p) in ["p", "q"].iter().zip(&self.primes) {
            write!(f, " {name}={p}")?;
        }
        for w in &self.witnesses {
            write!(f, " {}={}", w.symbol, w.value)?;
        }
        Ok(())
    }
}

/// Places `d` in exactly one family.
pub fn classify(d: &OddSquarefree) -> Result<FamilyTag> {
    let mut tag = FamilyTag { d: d.value(), family: Family::Unclassified, primes: Vec::new(), witnesses: Vec::new() };
    match *d.factors() {
        [p] if p % 16 == 9 => {
            let s = quartic_residue(2, p)?;
            if s == SymbolValue::Plus {
                tag.family = Family::A1;
                tag.primes = vec![p];
                tag.witnesses.push(Witness::new("(2/p)_4", s));
            }
        }
        [p] if p % 16 == 7 => {
            tag.family = Family::C7;
            tag.primes = vec![p];
        }
        [a, b] if a % 8 == 3 && b % 8 == 3 => {
            // (a/b)(b/a) = -1, so exactly one order has (p/q) = +1
            let (p, q) = if jacobi(a as i64, b)? == SymbolValue::Plus { (a, b) } else { (b, a) };
            tag.family = Family::A2;
            tag.primes = vec![p, q];
            tag.witnesses.push(Witness::new("(p/q)", SymbolValue::Plus));
        }
        [a, b] if (a % 8 == 5 && b % 8 == 3) || (a % 8 == 3 && b % 8 == 5) => {
            let (p, q) = if a % 8 == 5 { (a, b) } else { (b, a) };
            tag.family = Family::B;
            tag.primes = vec![p, q];
            tag.witnesses.push(Witness::new("(p/q)", jacobi(p as i64, q)?));
        }
        _ => {}
    }
    Ok(tag)
}

fn require_exponent_family(tag: &FamilyTag) -> Result<()> {
    if !tag.family.has_exponent() {
        return Err(Error::PrecondViolated(format!("{} has no exponent r (family {})", tag.d, tag.family)));
    }
    Ok(())
}

/// `r` from the class group oracle: `log2 h_2(-2d)` for A1/A2 and
/// `1 + log2 h_2(-pq)` for B.
pub fn exponent_r_oracle(tag: &FamilyTag) -> Result<u32> {
    exponent_r_with(tag, &Enumeration)
}

pub fn exponent_r_with(tag: &FamilyTag, oracle: &dyn ClassGroupOracle) -> Result<u32> {
    require_exponent_family(tag)?;
    let d = tag.d as i64;
    Ok(match tag.family {
        Family::B => 1 + oracle.class_group(&discriminant_of(-d)?)?.log2_h2(),
        _ => oracle.class_group(&discriminant_of(-2 * d)?)?.log2_h2(),
    })
}

/// What the residue criteria say about `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "r", rename_all = "snake_case")]
pub enum CorollaryR {
    Exact(u32),
    AtLeast(u32),
}

impl CorollaryR {
    /// Whether an exact value of `r` is consistent with this verdict.
    pub fn admits(self, r: u32) -> bool {
        match self {
            CorollaryR::Exact(e) => r == e,
            CorollaryR::AtLeast(b) => r >= b,
        }
    }
}

impl fmt::Display for CorollaryR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorollaryR::Exact(r) => write!(f, "{r}"),
            CorollaryR::AtLeast(r) => write!(f, ">={r}"),
        }
    }
}

/// The solved representation a criterion was evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RepresentationWitness {
    Pell(PellRepresentation),
    Kaplan(KaplanParams),
    Legendre(LegendreSolution),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryOutcome {
    pub r: CorollaryR,
    /// Symbols evaluated on the way to the verdict, in order.
    pub trace: Vec<Witness>,
    pub witness: Option<RepresentationWitness>,
}

/// `r` (or a lower bound for it) from residue symbols and solved
/// representations alone, without any class group computation.
pub fn exponent_r_corollary(tag: &FamilyTag) -> Result<CorollaryOutcome> {
    exponent_r_corollary_with(tag, &SearchBounds::default())
}

pub fn exponent_r_corollary_with(tag: &FamilyTag, bounds: &SearchBounds) -> Result<CorollaryOutcome> {
    require_exponent_family(tag)?;
    let mut trace = Vec::new();
    let verdict =
        |fires: bool, exact: u32| if fires { CorollaryR::Exact(exact) } else { CorollaryR::AtLeast(exact + 1) };
    match (tag.family, tag.primes.as_slice()) {
        (Family::A1, &[p]) => {
            let rep = solve_pell_rep(p, bounds)?;
            let s = quartic_residue(rep.u as i64, p)?;
            trace.push(Witness::new("(u/p)_4", s));
            Ok(CorollaryOutcome {
                r: verdict(s == SymbolValue::Minus, 3),
                trace,
                witness: Some(RepresentationWitness::Pell(rep)),
            })
        }
        (Family::A2, &[p, q]) => {
            let w = solve_kaplan(p, q, bounds)?;
            let s = jacobi(-2, w.criterion_modulus())?;
            trace.push(Witness::new("(-2/|k^2X+lY|)", s));
            Ok(CorollaryOutcome {
                r: verdict(s == SymbolValue::Minus, 3),
                trace,
                witness: Some(RepresentationWitness::Kaplan(w)),
            })
        }
        (Family::B, &[p, q]) => {
            let pq = jacobi(p as i64, q)?;
            trace.push(Witness::new("(p/q)", pq));
            if pq == SymbolValue::Minus {
                return Ok(CorollaryOutcome { r: CorollaryR::Exact(2), trace, witness: None });
            }
            let qp4 = quartic_residue(q as i64, p)?;
            trace.push(Witness::new("(q/p)_4", qp4));
            if qp4 == SymbolValue::Plus {
                return Ok(CorollaryOutcome { r: CorollaryR::Exact(3), trace, witness: None });
            }
            let mqp4 = quartic_residue(-(q as i64), p)?;
            trace.push(Witness::new("(-q/p)_4", mqp4));
            if mqp4 == SymbolValue::Minus {
                // (-1/p)_4 = -1 for p = 5 (mod 8), so this branch is never taken
                return Ok(CorollaryOutcome { r: CorollaryR::AtLeast(4), trace, witness: None });
            }
            let sol = solve_legendre(p, q, bounds)?;
            let fires = williams_criterion(&sol)?;
            trace.push(Witness::new("(Z/p)_4!=(2X/Z)", fires));
            Ok(CorollaryOutcome {
                r: verdict(fires == SymbolValue::Plus, 4),
                trace,
                witness: Some(RepresentationWitness::Legendre(sol)),
            })
        }
        _ => unreachable!("malformed tag {tag:?}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor_squarefree;

    fn tag(d: u64) -> FamilyTag {
        classify(&factor_squarefree(d).unwrap()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(tag(89).family, Family::A1);
        let t = tag(209);
        assert_eq!((t.family, t.primes.clone()), (Family::A2, vec![11, 19]));
        assert_eq!(t.to_string(), "A2 p=11 q=19 (p/q)=+1");
        let t = tag(247);
        assert_eq!((t.family, t.primes.clone()), (Family::B, vec![13, 19]));
        assert_eq!(t.to_string(), "B p=13 q=19 (p/q)=-1");
        assert_eq!(tag(7).family, Family::C7);
        assert_eq!(tag(21).family, Family::Unclassified);
        assert_eq!(tag(21).to_string(), "UNCLASSIFIED");
        assert_eq!(tag(41).family, Family::Unclassified);
        assert_eq!(tag(15).primes, vec![5, 3]);
        assert_eq!(tag(3 * 5 * 11).family, Family::Unclassified);
    }

    #[test]
    fn oracle_r_examples() {
        assert_eq!(exponent_r_oracle(&tag(89)).unwrap(), 3);
        assert_eq!(exponent_r_oracle(&tag(247)).unwrap(), 2);
        assert_eq!(exponent_r_oracle(&tag(407)).unwrap(), 5);
        assert_eq!(exponent_r_oracle(&tag(55)).unwrap(), 3);
        assert_eq!(exponent_r_oracle(&tag(95)).unwrap(), 4);
        assert!(matches!(exponent_r_oracle(&tag(7)), Err(Error::PrecondViolated(_))));
    }

    #[test]
    fn corollary_r_examples() {
        let out = exponent_r_corollary(&tag(89)).unwrap();
        assert_eq!(out.r, CorollaryR::Exact(3));
        assert_eq!(out.witness, Some(RepresentationWitness::Pell(PellRepresentation { p: 89, u: 17, v: 10 })));
        assert_eq!(exponent_r_corollary(&tag(209)).unwrap().r, CorollaryR::Exact(3));
        assert_eq!(exponent_r_corollary(&tag(55)).unwrap().r, CorollaryR::Exact(3));
        assert_eq!(exponent_r_corollary(&tag(247)).unwrap().r, CorollaryR::Exact(2));
        assert_eq!(exponent_r_corollary(&tag(95)).unwrap().r, CorollaryR::Exact(4));
        assert_eq!(exponent_r_corollary(&tag(407)).unwrap().r, CorollaryR::AtLeast(5));
        assert!(matches!(exponent_r_corollary(&tag(21)), Err(Error::PrecondViolated(_))));
    }

    #[test]
    fn corollary_admits() {
        assert!(CorollaryR::Exact(3).admits(3));
        assert!(!CorollaryR::Exact(3).admits(4));
        assert!(CorollaryR::AtLeast(5).admits(7));
        assert!(!CorollaryR::AtLeast(5).admits(4));
    }

    #[test]
    fn family_parse_roundtrip() {
        for f in [Family::A1, Family::A2, Family::B, Family::C7, Family::Unclassified] {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("A3".parse::<Family>().is_err());
    }
}
