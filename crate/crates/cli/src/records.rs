//! JSON output records. Every record carries `"schema": "ztwo/1"`.

use serde::{Deserialize, Serialize};
use ztwo_core::classifier::{
    CorollaryOutcome, CorollaryR, Family, FamilyTag, Prediction, RSource, RepresentationWitness, Tower, Witness,
};
use ztwo_core::ClassGroupStructure;

use crate::SCHEMA;

fn schema() -> String {
    SCHEMA.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyRecord {
    pub schema: String,
    pub d: u64,
    pub tag: Family,
    pub primes: Vec<u64>,
    pub witnesses: Vec<Witness>,
}

impl From<&FamilyTag> for ClassifyRecord {
    fn from(t: &FamilyTag) -> Self {
        ClassifyRecord {
            schema: schema(),
            d: t.d,
            tag: t.family,
            primes: t.primes.clone(),
            witnesses: t.witnesses.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub schema: String,
    pub d: u64,
    pub tower: Tower,
    pub n: u32,
    pub shape: Vec<u64>,
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub r: Option<u32>,
    pub r_source: Option<RSource>,
    pub theorem: String,
}

impl From<&Prediction> for PredictionRecord {
    fn from(p: &Prediction) -> Self {
        PredictionRecord {
            schema: schema(),
            d: p.d,
            tower: p.tower,
            n: p.n,
            shape: p.shape.divisors.clone(),
            exact: p.shape.exact,
            note: p.shape.note.clone(),
            r: p.r,
            r_source: p.r_source,
            theorem: p.theorem.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupRecord {
    pub schema: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub h: u64,
    pub divisors: Vec<u64>,
    pub h2: u64,
    pub two_rank: u32,
}

impl From<&ClassGroupStructure> for ClassGroupRecord {
    fn from(g: &ClassGroupStructure) -> Self {
        ClassGroupRecord {
            schema: schema(),
            d: g.discriminant,
            h: g.h,
            divisors: g.divisors.clone(),
            h2: g.h2,
            two_rank: g.two_rank,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub schema: String,
    pub d: u64,
    pub tag: Family,
    pub primes: Vec<u64>,
    pub r_corollary: CorollaryR,
    pub trace: Vec<Witness>,
    pub witness: Option<RepresentationWitness>,
}

impl WitnessRecord {
    pub fn new(tag: &FamilyTag, outcome: &CorollaryOutcome) -> Self {
        WitnessRecord {
            schema: schema(),
            d: tag.d,
            tag: tag.family,
            primes: tag.primes.clone(),
            r_corollary: outcome.r,
            trace: outcome.trace.clone(),
            witness: outcome.witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub schema: String,
    pub suite: String,
    pub max: u64,
    pub checked: u64,
    pub violations: Vec<String>,
}

impl VerifyRecord {
    pub fn new(suite: &str, max: u64, checked: u64, violations: Vec<String>) -> Self {
        VerifyRecord { schema: schema(), suite: suite.into(), max, checked, violations }
    }
}
