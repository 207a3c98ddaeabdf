use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::predict::{lambda_minus, plus_part_odd};
use super::{classify, exponent_r_corollary_with, exponent_r_with, CorollaryR, Family, FamilyTag};
use crate::arith::{factor_squarefree, OddSquarefree};
use crate::diophantine::{legendre_solutions, williams_criterion, SearchBounds};
use crate::error::Result;
use crate::qforms::{discriminant_of, ClassGroupOracle, Enumeration};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckOptions {
    /// Restrict the run to one family.
    pub family: Option<Family>,
    pub bounds: SearchBounds,
    /// When set, every admissible Legendre solution with `Z` up to this bound is
    /// tested and the Williams criterion must agree on all of them.
    pub williams_z_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckEntry {
    pub d: u64,
    pub family: Family,
    pub primes: Vec<u64>,
    pub r_oracle: Option<u32>,
    pub r_corollary: Option<CorollaryR>,
    /// `log2 h_2(-d)` for the A-families, the alternative reading of `2^r`.
    pub log2_h2_minus_d: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub d: u64,
    pub message: String,
}

/// How often the corollary verdict is consistent with `2^r = h_2(-2d)` versus
/// `2^r = h_2(-d)`, over the A-family entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RDefinitionTally {
    pub total: usize,
    pub supports_minus_2d: usize,
    pub supports_minus_d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub d_max: u64,
    pub entries: Vec<CrossCheckEntry>,
    pub violations: Vec<Violation>,
    pub r_definition: RDefinitionTally,
}

impl CrossCheckReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the residue-symbol value of `r` with the class group oracle for
/// every classified `d <= d_max`.
pub fn cross_check(d_max: u64, options: &CrossCheckOptions) -> CrossCheckReport {
    cross_check_with(d_max, options, &Enumeration)
}

pub fn cross_check_with(d_max: u64, options: &CrossCheckOptions, oracle: &dyn ClassGroupOracle) -> CrossCheckReport {
    let odd: Vec<u64> = (3..=d_max).step_by(2).collect();
    let results: Vec<(CrossCheckEntry, Vec<String>)> = odd
        .par_iter()
        .filter_map(|&d| {
            let sf = factor_squarefree(d).ok()?;
            let tag = classify(&sf).ok()?;
            if !tag.family.has_exponent() || options.family.is_some_and(|f| f != tag.family) {
                return None;
            }
            Some(check_one(&tag, &sf, options, oracle))
        })
        .collect();

    let mut report = CrossCheckReport {
        d_max,
        entries: Vec::new(),
        violations: Vec::new(),
        r_definition: RDefinitionTally::default(),
    };
    for (entry, problems) in results {
        if let (Some(c), Some(r2d), Some(rd)) = (entry.r_corollary, entry.r_oracle, entry.log2_h2_minus_d) {
            report.r_definition.total += 1;
            report.r_definition.supports_minus_2d += c.admits(r2d) as usize;
            report.r_definition.supports_minus_d += c.admits(rd) as usize;
        }
        report.violations.extend(problems.into_iter().map(|message| Violation { d: entry.d, message }));
        report.entries.push(entry);
    }
    report
}

fn check_one(
    tag: &FamilyTag,
    sf: &OddSquarefree,
    options: &CrossCheckOptions,
    oracle: &dyn ClassGroupOracle,
) -> (CrossCheckEntry, Vec<String>) {
    let mut problems = Vec::new();
    let mut entry = CrossCheckEntry {
        d: tag.d,
        family: tag.family,
        primes: tag.primes.clone(),
        r_oracle: None,
        r_corollary: None,
        log2_h2_minus_d: None,
    };

    match oracle_side(tag, oracle) {
        Ok((r, alt, problem)) => {
            entry.r_oracle = Some(r);
            entry.log2_h2_minus_d = alt;
            problems.extend(problem);
        }
        Err(e) => problems.push(format!("oracle: {e}")),
    }
    match exponent_r_corollary_with(tag, &options.bounds) {
        Ok(c) => entry.r_corollary = Some(c.r),
        Err(e) => problems.push(format!("corollary: {e}")),
    }

    if let (Some(r), Some(c)) = (entry.r_oracle, entry.r_corollary) {
        if !c.admits(r) {
            problems.push(format!("corollary gives r {c}, oracle gives r = {r}"));
        }
    }
    match lambda_minus(sf) {
        Ok(1) => {}
        other => problems.push(format!("lambda_minus = {other:?}, expected 1")),
    }
    if matches!(tag.family, Family::A1 | Family::A2) && !plus_part_odd(sf) {
        problems.push("plus part has even class number".into());
    }
    if let (Family::B, Some(z_max), &[p, q]) = (tag.family, options.williams_z_max, tag.primes.as_slice()) {
        if let Ok(sols) = legendre_solutions(p, q, z_max) {
            let values: Vec<_> = sols.iter().filter_map(|s| williams_criterion(s).ok()).collect();
            if values.len() != sols.len() || values.windows(2).any(|w| w[0] != w[1]) {
                problems.push(format!(
                    "Williams criterion not constant over the {} solutions with Z <= {z_max}",
                    sols.len()
                ));
            }
        }
    }
    (entry, problems)
}

/// Oracle `r`, the alternative `log2 h_2(-d)` for A-families, and a structural
/// problem if one was found.
fn oracle_side(tag: &FamilyTag, oracle: &dyn ClassGroupOracle) -> Result<(u32, Option<u32>, Option<String>)> {
    let r = exponent_r_with(tag, oracle)?;
    let minus_d = oracle.class_group(&discriminant_of(-(tag.d as i64))?)?;
    if tag.family == Family::B {
        let problem =
            (minus_d.two_rank != 1).then(|| format!("Cl(-{}) has 2-rank {}, expected 1", tag.d, minus_d.two_rank));
        Ok((r, None, problem))
    } else {
        let problem = (r < 3).then(|| format!("oracle r = {r} < 3"));
        Ok((r, Some(minus_d.log2_h2()), problem))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_range_is_clean() {
        let report = cross_check(250, &CrossCheckOptions::default());
        assert!(report.is_clean(), "{:?}", report.violations);
        let ds: Vec<u64> = report.entries.iter().map(|e| e.d).collect();
        for d in [15, 33, 55, 57, 89, 209, 247] {
            assert!(ds.contains(&d), "{d} missing from {ds:?}");
        }
        assert!(ds.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn family_filter() {
        let opts = CrossCheckOptions { family: Some(Family::B), ..Default::default() };
        let report = cross_check(100, &opts);
        let rows: Vec<(u64, Option<u32>)> = report.entries.iter().map(|e| (e.d, e.r_oracle)).collect();
        assert_eq!(rows, vec![(15, Some(2)), (39, Some(3)), (55, Some(3)), (87, Some(2)), (95, Some(4))]);
    }

    #[test]
    fn empty_range() {
        let report = cross_check(3, &CrossCheckOptions::default());
        assert!(report.entries.is_empty() && report.is_clean());
    }

    #[test]
    fn tally_prefers_minus_2d() {
        let report = cross_check(3000, &CrossCheckOptions::default());
        let t = report.r_definition;
        assert!(t.total > 0);
        assert_eq!(t.supports_minus_2d, t.total);
        assert!(t.supports_minus_d < t.total);
    }

    #[test]
    fn williams_is_solution_independent() {
        let opts = CrossCheckOptions { family: Some(Family::B), williams_z_max: Some(3000), ..Default::default() };
        let report = cross_check(3000, &opts);
        assert!(report.is_clean(), "{:?}", report.violations);
    }
}
