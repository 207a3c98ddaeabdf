//! Library side of the `ztwo` command: the class group cache, JSON records,
//! range scans and verification suites.

pub mod cache;
pub mod records;
pub mod scan;
pub mod verify;

/// Version tag written into every JSON record.
pub const SCHEMA: &str = "ztwo/1";
