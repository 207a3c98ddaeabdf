//! Append-only JSON-lines cache of class group structures.
//!
//! One record per line. Lines that fail to parse, or whose contents are not a
//! consistent class group record, are skipped with a warning on stderr.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use ztwo_core::qforms::{class_group, genus_two_rank, ClassGroupOracle, ClassGroupStructure, Discriminant};
use ztwo_core::Result;

use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub schema: String,
    #[serde(rename = "D")]
    pub d: i64,
    pub h: u64,
    pub divisors: Vec<u64>,
    /// Seconds since the Unix epoch.
    pub computed_at: u64,
}

impl CacheRecord {
    pub fn new(g: &ClassGroupStructure) -> Self {
        let computed_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |t| t.as_secs());
        CacheRecord { schema: SCHEMA.into(), d: g.discriminant, h: g.h, divisors: g.divisors.clone(), computed_at }
    }

    /// Rebuilds the structure, rejecting records that cannot be a class group.
    pub fn structure(&self) -> std::result::Result<ClassGroupStructure, String> {
        let disc = Discriminant::fundamental(self.d).map_err(|e| e.to_string())?;
        if self.divisors.iter().product::<u64>() != self.h
            || self.divisors.iter().any(|&x| x < 2)
            || self.divisors.windows(2).any(|w| w[1] % w[0] != 0)
        {
            return Err(format!("divisors {:?} do not form a chain of product {}", self.divisors, self.h));
        }
        let g = ClassGroupStructure::from_divisors(self.d, self.divisors.clone());
        let genus = genus_two_rank(&disc);
        if g.two_rank != genus {
            return Err(format!("2-rank {} disagrees with genus theory ({genus})", g.two_rank));
        }
        Ok(g)
    }
}

/// A class group oracle backed by an in-memory map and, optionally, a cache file.
///
/// All appends go through one mutex-guarded handle, so concurrent workers never
/// interleave partial lines.
pub struct CachedOracle {
    path: Option<PathBuf>,
    known: Mutex<HashMap<i64, ClassGroupStructure>>,
    writer: Mutex<Option<File>>,
    warnings: Mutex<Vec<String>>,
}

impl CachedOracle {
    /// An oracle without persistence.
    pub fn in_memory() -> Self {
        CachedOracle { path: None, known: Mutex::default(), writer: Mutex::new(None), warnings: Mutex::default() }
    }

    /// Loads `path` if it exists; new records are appended to it.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut known = HashMap::new();
        let mut warnings = Vec::new();
        match File::open(&path) {
            Ok(f) => {
                for (i, line) in BufReader::new(f).lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let parsed = serde_json::from_str::<CacheRecord>(&line)
                        .map_err(|e| e.to_string())
                        .and_then(|r| r.structure());
                    match parsed {
                        Ok(g) => {
                            known.insert(g.discriminant, g);
                        }
                        Err(e) => {
                            warnings.push(format!("{}:{}: skipping corrupt cache line ({e})", path.display(), i + 1))
                        }
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        for w in &warnings {
            eprintln!("warning: {w}");
        }
        let file = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(CachedOracle {
            path: Some(path),
            known: Mutex::new(known),
            writer: Mutex::new(Some(file)),
            warnings: Mutex::new(warnings),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.known.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn warnings(&self) -> Vec<String> {
        self.warnings.lock().unwrap().clone()
    }

    fn append(&self, g: &ClassGroupStructure) {
        let mut guard = self.writer.lock().unwrap();
        let Some(file) = guard.as_mut() else { return };
        let line = serde_json::to_string(&CacheRecord::new(g)).expect("record serializes");
        if let Err(e) = writeln!(file, "{line}").and_then(|_| file.flush()) {
            let msg = format!("cache write failed, continuing without persistence: {e}");
            eprintln!("warning: {msg}");
            self.warnings.lock().unwrap().push(msg);
            *guard = None;
        }
    }
}

impl ClassGroupOracle for CachedOracle {
    fn class_group(&self, d: &Discriminant) -> Result<ClassGroupStructure> {
        if let Some(g) = self.known.lock().unwrap().get(&d.value()) {
            return Ok(g.clone());
        }
        let g = class_group(d)?;
        // two workers may race on the same D; only the first one records it
        let fresh = self.known.lock().unwrap().insert(d.value(), g.clone()).is_none();
        if fresh {
            self.append(&g);
        }
        Ok(g)
    }
}
