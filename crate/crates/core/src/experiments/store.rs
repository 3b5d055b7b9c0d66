//! Per-instance record persistence and the CSV ledger.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{InstanceResult, RunRecord, SkippedRun};
use crate::error::{Error, Result};
use crate::io::write_atomic;

#[derive(Serialize, Deserialize)]
struct Stored {
    fingerprint: String,
    #[serde(flatten)]
    result: InstanceResult,
}

/// Directory of one JSON file per instance, tagged with the configuration
/// fingerprint. Files from another configuration are ignored and overwritten.
#[derive(Debug, Clone)]
pub struct RecordStore {
    dir: PathBuf,
    fingerprint: String,
}

impl RecordStore {
    pub fn open(dir: &Path, fingerprint: &str) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(RecordStore {
            dir: dir.to_path_buf(),
            fingerprint: fingerprint.to_string(),
        })
    }

    fn path(&self, (a, t, r): (usize, usize, usize)) -> PathBuf {
        self.dir.join(format!("a{a:02}_t{t:04}_r{r:04}.json"))
    }

    pub fn load(&self, key: (usize, usize, usize)) -> Option<InstanceResult> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let stored: Stored = serde_json::from_str(&text).ok()?;
        (stored.fingerprint == self.fingerprint && stored.result.key() == key).then_some(stored.result)
    }

    pub fn save(&self, result: &InstanceResult) -> Result<()> {
        let stored = Stored {
            fingerprint: self.fingerprint.clone(),
            result: result.clone(),
        };
        write_atomic(&self.path(result.key()), serde_json::to_string(&stored)?.as_bytes())
    }

    pub fn len(&self) -> usize {
        fs::read_dir(&self.dir).map(|d| d.count()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    write_atomic(path, &bytes)
}

pub(super) fn write_ledger(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_csv(path, records)
}

pub(super) fn write_skipped(path: &Path, skipped: &[SkippedRun]) -> Result<()> {
    write_csv(path, skipped)
}

pub fn read_ledger(path: &Path) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}
