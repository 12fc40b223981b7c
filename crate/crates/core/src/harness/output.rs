use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::pipeline::RunOutput;
use super::report::{AcceptanceReport, Table};
use crate::error::{Error, Result};

/// Machine-readable summary: the echoed config and the acceptance report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: RunConfig,
    pub report: AcceptanceReport,
}

pub fn summary_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("summary-{hash}.json"))
}

fn write_csv(path: &Path, t: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(&t.columns).map_err(|e| Error::Io(e.to_string()))?;
    for row in &t.rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `summary-<hash>.json`, `acceptance-<hash>.txt` and one `<table>-<hash>.csv` per table
/// into `dir`, creating it if needed. Returns the written paths.
pub fn emit_outputs(cfg: &RunConfig, out: &RunOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let hash = &out.report.config_hash;
    let mut written = Vec::new();
    let summary = Summary { config: cfg.clone(), report: out.report.clone() };
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    let p = summary_path(dir, hash);
    fs::write(&p, json + "\n")?;
    written.push(p);
    let p = dir.join(format!("acceptance-{hash}.txt"));
    fs::write(&p, out.report.text_table())?;
    written.push(p);
    for t in &out.tables {
        let p = dir.join(format!("{}-{hash}.csv", t.name));
        write_csv(&p, t)?;
        written.push(p);
    }
    Ok(written)
}

pub fn read_summary(path: &Path) -> Result<Summary> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
