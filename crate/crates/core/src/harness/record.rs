use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::transfer::LpaReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One row of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub instance_id: String,
    pub n: usize,
    pub method: String,
    pub order: String,
    pub normalized: bool,
    pub objective: String,
    pub t_star: Option<f64>,
    pub ratio: Option<f64>,
    pub pgs: Option<f64>,
    pub sigma: Option<f64>,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub divisions: usize,
    pub wall_time_ms: u64,
    /// Method-specific values as `key=value;...`.
    pub params: String,
    pub config_hash: String,
    pub version: String,
    /// Empty on success.
    pub error: String,
    #[serde(skip)]
    pub lpa: Option<LpaReport>,
}

impl ResultRecord {
    pub fn is_error(&self) -> bool {
        !self.error.is_empty()
    }

    /// Value of `key` in the params column.
    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.split(';').find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            if k == key {
                v.parse().ok()
            } else {
                None
            }
        })
    }
}

/// Writes through a temporary file and renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn records_to_csv(records: &[ResultRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn write_records(path: &Path, records: &[ResultRecord]) -> Result<()> {
    write_atomic(path, &records_to_csv(records)?)
}

pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Writes `results.csv` and, when present, `lpa_reports.json` into `dir`.
pub fn write_outputs(dir: &Path, records: &[ResultRecord]) -> Result<Vec<PathBuf>> {
    let mut written = vec![dir.join("results.csv")];
    write_records(&written[0], records)?;
    let lpa: Vec<serde_json::Value> = records
        .iter()
        .filter_map(|r| {
            r.lpa.map(|rep| serde_json::json!({ "instance_id": r.instance_id, "report": rep }))
        })
        .collect();
    if !lpa.is_empty() {
        let path = dir.join("lpa_reports.json");
        write_atomic(&path, &serde_json::to_vec_pretty(&lpa)?)?;
        written.push(path);
    }
    Ok(written)
}
