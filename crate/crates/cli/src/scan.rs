//! Range scans: one row per odd squarefree `d`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use ztwo_core::arith::factor_squarefree;
use ztwo_core::classifier::{
    classify, exponent_r_corollary_with, iwasawa_invariants_with, predict_with, Family, Tower,
};
use ztwo_core::diophantine::SearchBounds;
use ztwo_core::ClassGroupOracle;

/// Largest `d` a scan accepts.
pub const SCAN_MAX: u64 = 1_000_000;

/// Oracle-derived cells hold a value, or the marker `"skipped"` when the
/// oracle could not be run for this row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell<T> {
    Skipped(Skipped),
    Value(T),
}

/// Serializes as the string `"skipped"` and deserializes only from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Skipped {
    #[serde(rename = "skipped")]
    Skipped,
}

fn skipped<T>() -> Cell<T> {
    Cell::Skipped(Skipped::Skipped)
}

/// Column order is part of the output format:
/// `d,tag,p,q,r_oracle,r_corollary,shape_L_n1,shape_K_n1,lambda,nu_L,nu_K`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub d: u64,
    pub tag: Family,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub r_oracle: Option<Cell<u32>>,
    pub r_corollary: Option<String>,
    pub shape_L_n1: Option<Cell<String>>,
    pub shape_K_n1: Option<Cell<String>>,
    pub lambda: Option<Cell<u32>>,
    pub nu_L: Option<Cell<i64>>,
    pub nu_K: Option<Cell<i64>>,
}

pub const CSV_HEADER: [&str; 11] =
    ["d", "tag", "p", "q", "r_oracle", "r_corollary", "shape_L_n1", "shape_K_n1", "lambda", "nu_L", "nu_K"];

/// Rows for every odd squarefree `d` in `[min, max]`, ordered by `d`.
pub fn scan(
    min: u64,
    max: u64,
    family: Option<Family>,
    bounds: &SearchBounds,
    oracle: &dyn ClassGroupOracle,
) -> Vec<ScanRow> {
    let ds: Vec<u64> = (min.max(3)..=max).filter(|d| d % 2 == 1).collect();
    ds.par_iter()
        .filter_map(|&d| {
            let s = factor_squarefree(d).ok()?;
            let tag = classify(&s).ok()?;
            if family.is_some_and(|f| f != tag.family) {
                return None;
            }
            let mut row = ScanRow {
                d,
                tag: tag.family,
                p: tag.p(),
                q: tag.q(),
                r_oracle: None,
                r_corollary: None,
                shape_L_n1: None,
                shape_K_n1: None,
                lambda: None,
                nu_L: None,
                nu_K: None,
            };
            match tag.family {
                Family::C7 => {
                    row.shape_L_n1 = Some(match predict_with(&s, 1, Tower::L, oracle) {
                        Ok(p) => Cell::Value(p.shape.to_string()),
                        Err(_) => skipped(),
                    });
                }
                f if f.has_exponent() => {
                    let shape = |tower| match predict_with(&s, 1, tower, oracle) {
                        Ok(p) => Cell::Value(p.shape.to_string()),
                        Err(_) => skipped(),
                    };
                    row.shape_L_n1 = Some(shape(Tower::L));
                    row.shape_K_n1 = Some(shape(Tower::K));
                    match predict_with(&s, 1, Tower::L, oracle) {
                        Ok(p) => row.r_oracle = p.r.map(Cell::Value),
                        Err(_) => row.r_oracle = Some(skipped()),
                    }
                    row.r_corollary = Some(match exponent_r_corollary_with(&tag, bounds) {
                        Ok(c) => c.r.to_string(),
                        Err(_) => "skipped".into(),
                    });
                    match (iwasawa_invariants_with(&s, Tower::L, oracle), iwasawa_invariants_with(&s, Tower::K, oracle))
                    {
                        (Ok(l), Ok(k)) => {
                            row.lambda = Some(Cell::Value(l.lambda));
                            row.nu_L = Some(Cell::Value(l.nu));
                            row.nu_K = Some(Cell::Value(k.nu));
                        }
                        _ => {
                            row.lambda = Some(skipped());
                            row.nu_L = Some(skipped());
                            row.nu_K = Some(skipped());
                        }
                    }
                }
                _ => {}
            }
            Some(row)
        })
        .collect()
}

/// A scan row as emitted by `--format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonScanRow {
    pub schema: String,
    #[serde(flatten)]
    pub row: ScanRow,
}

impl JsonScanRow {
    pub fn new(row: &ScanRow) -> Self {
        JsonScanRow { schema: crate::SCHEMA.into(), row: row.clone() }
    }
}
