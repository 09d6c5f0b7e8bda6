//! Text formats: diagnostics CSV, curvature JSON, threshold-scan CSV.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::curvature::{McReport, ScanRow};
use crate::dynamics::{Diagnostics, SimState, Sink};
use crate::io::snapshot::Snapshot;
use crate::Result;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CONFIG_ECHO_FILE: &str = "config.resolved";
pub const SCAN_HEADER: &str = "l,m,mc_nu,gamma_term,gamma_threshold";
/// Threshold column entry for zonal directions.
pub const DEGENERATE: &str = "degenerate";

/// 17 significant digits, enough to recover every `f64` exactly.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_number(v: f64) -> String {
    if v.is_finite() {
        format_f64(v)
    } else {
        "null".to_string()
    }
}

pub fn diagnostics_header() -> String {
    Diagnostics::COLUMNS.join(",")
}

pub fn diagnostics_row(d: &Diagnostics) -> String {
    d.values().iter().map(|&v| format_f64(v)).collect::<Vec<_>>().join(",")
}

/// Name of the snapshot written at `step`.
pub fn snapshot_name(step: usize) -> String {
    format!("snapshot_{step:08}.gqgs")
}

/// One-line JSON object with the report fields.
pub fn mc_report_json(r: &McReport) -> String {
    let fields = [
        ("mc_nu", json_number(r.mc_nu)),
        ("gamma_term", json_number(r.gamma_term)),
        ("mc_A", json_number(r.mc_a)),
        ("cocycle_sq", json_number(r.cocycle_sq)),
        ("extension_term", json_number(r.extension_term)),
        ("mc_hat", json_number(r.mc_hat)),
        ("gamma_threshold", r.gamma_threshold.map_or("null".to_string(), json_number)),
    ];
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\": {v}")).collect();
    format!("{{{}}}", body.join(", "))
}

pub fn scan_row(r: &ScanRow) -> String {
    let threshold = r.gamma_threshold.map_or(DEGENERATE.to_string(), format_f64);
    format!("{},{},{},{},{}", r.l, r.m, format_f64(r.mc_nu), format_f64(r.gamma_term), threshold)
}

pub fn write_scan(rows: &[ScanRow], mut w: impl Write) -> Result<()> {
    writeln!(w, "{SCAN_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", scan_row(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `diagnostics.csv` and numbered snapshots into a directory.
#[derive(Debug)]
pub struct DirectorySink {
    dir: PathBuf,
    csv: BufWriter<File>,
    rows: usize,
    snapshots: Vec<PathBuf>,
}

impl DirectorySink {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut csv = BufWriter::new(File::create(dir.join(DIAGNOSTICS_FILE))?);
        writeln!(csv, "{}", diagnostics_header())?;
        Ok(Self { dir: dir.to_path_buf(), csv, rows: 0, snapshots: Vec::new() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn snapshots(&self) -> &[PathBuf] {
        &self.snapshots
    }
}

impl Sink for DirectorySink {
    fn diagnostics(&mut self, _step: usize, diag: &Diagnostics) -> Result<()> {
        writeln!(self.csv, "{}", diagnostics_row(diag))?;
        self.rows += 1;
        Ok(())
    }

    fn snapshot(&mut self, step: usize, state: &SimState) -> Result<()> {
        let path = self.dir.join(snapshot_name(step));
        Snapshot::new(state.t, state.q.clone()).save(&path)?;
        self.snapshots.push(path);
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        self.csv.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 17.6, 6.02214076e23] {
            let s = format_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }

    #[test]
    fn report_json_keys_in_order() {
        let r = McReport {
            mc_nu: -1.0,
            gamma_term: 2.0,
            mc_a: 0.5,
            cocycle_sq: 0.0,
            extension_term: 0.25,
            mc_hat: 0.25,
            gamma_threshold: None,
        };
        let s = mc_report_json(&r);
        let keys: Vec<&str> = s.split('"').skip(1).step_by(2).collect();
        assert_eq!(keys, ["mc_nu", "gamma_term", "mc_A", "cocycle_sq", "extension_term", "mc_hat", "gamma_threshold"]);
        assert!(s.ends_with("\"gamma_threshold\": null}"));
    }

    #[test]
    fn scan_row_format() {
        let row = ScanRow { l: 3, m: 0, mc_nu: 0.0, gamma_term: 0.0, gamma_threshold: None };
        assert!(scan_row(&row).ends_with(",degenerate"));
        assert_eq!(scan_row(&row).split(',').count(), SCAN_HEADER.split(',').count());
    }
}
