//! Consistency suites behind `ztwo verify`.

use rayon::prelude::*;
use ztwo_core::arith::{is_prime, modpow};
use ztwo_core::classifier::{cross_check_with, CrossCheckOptions, Family};
use ztwo_core::diophantine::SearchBounds;
use ztwo_core::qforms::{genus_two_rank, Discriminant};
use ztwo_core::symbols::{jacobi, quartic_residue};
use ztwo_core::{ClassGroupOracle, SymbolValue};

use crate::records::VerifyRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Corollary,
    Oracle,
    Williams,
    Symbols,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Corollary, Suite::Oracle, Suite::Williams, Suite::Symbols];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Corollary => "corollary",
            Suite::Oracle => "oracle",
            Suite::Williams => "williams",
            Suite::Symbols => "symbols",
        }
    }
}

/// Largest `Z` examined when testing that the Williams criterion does not
/// depend on the chosen solution.
pub const WILLIAMS_Z_MAX: u64 = 2_000;

pub fn run(suite: Suite, max: u64, bounds: &SearchBounds, oracle: &dyn ClassGroupOracle) -> VerifyRecord {
    match suite {
        Suite::Corollary | Suite::Williams => {
            let options = CrossCheckOptions {
                family: (suite == Suite::Williams).then_some(Family::B),
                bounds: *bounds,
                williams_z_max: (suite == Suite::Williams).then_some(WILLIAMS_Z_MAX),
            };
            let report = cross_check_with(max, &options, oracle);
            let violations = report.violations.iter().map(|v| format!("d={}: {}", v.d, v.message)).collect();
            VerifyRecord::new(suite.name(), max, report.entries.len() as u64, violations)
        }
        Suite::Oracle => {
            let ds: Vec<Discriminant> = (3..=max as i64).filter_map(|n| Discriminant::fundamental(-n).ok()).collect();
            let violations: Vec<String> = ds
                .par_iter()
                .filter_map(|d| match oracle.class_group(d) {
                    Ok(g) if g.two_rank == genus_two_rank(d) && g.divisors.iter().product::<u64>() == g.h => None,
                    Ok(g) => Some(format!("D={d}: two_rank {} vs genus {}", g.two_rank, genus_two_rank(d))),
                    Err(e) => Some(format!("D={d}: {e}")),
                })
                .collect();
            VerifyRecord::new(suite.name(), max, ds.len() as u64, violations)
        }
        Suite::Symbols => {
            let primes: Vec<u64> = (3..=max.max(3)).filter(|&p| is_prime(p).unwrap_or(false)).collect();
            let violations: Vec<String> = primes.par_iter().filter_map(|&p| check_symbols_mod(p)).collect();
            VerifyRecord::new(suite.name(), max, primes.len() as u64, violations)
        }
    }
}

fn check_symbols_mod(p: u64) -> Option<String> {
    let mut fourth = vec![false; p as usize];
    if p % 4 == 1 {
        for x in 1..p {
            fourth[modpow(x as i64, 4, p).ok()? as usize] = true;
        }
    }
    for a in 1..p {
        let j = jacobi(a as i64, p).ok()?;
        if (modpow(a as i64, (p - 1) / 2, p).ok()? == 1) != (j == SymbolValue::Plus) {
            return Some(format!("({a}/{p}) disagrees with Euler's criterion"));
        }
        if p % 4 == 1 && j == SymbolValue::Plus {
            let q = quartic_residue(a as i64, p).ok()?;
            if (q == SymbolValue::Plus) != fourth[a as usize] {
                return Some(format!("({a}/{p})_4 disagrees with the fourth-power table"));
            }
        }
    }
    None
}
