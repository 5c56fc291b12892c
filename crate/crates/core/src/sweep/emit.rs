//! CSV and JSON writers for sweep results.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SweepResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 10] = ["N", "M", "n", "L", "snr_db", "rate", "quantity", "value", "std_err", "error"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown output format '{other}' (expected csv or json)"))),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &result.rows {
        w.write_record([
            r.n_rx.to_string(),
            r.n_tx.to_string(),
            r.n_avail.to_string(),
            r.blocklen.to_string(),
            num(r.snr_db),
            opt(r.rate),
            r.quantity.clone(),
            opt(r.value),
            opt(r.std_err),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, result).map_err(|e| Error::Io(e.into()))
}

/// Writes `result` to `destination`.
pub fn emit(result: &SweepResult, format: OutputFormat, destination: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(destination)?);
    match format {
        OutputFormat::Csv => write_csv(result, &mut out)?,
        OutputFormat::Json => {
            write_json(result, &mut out)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads back a JSON document written by [`emit`].
pub fn read_json(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{preset, run_sweep};

    #[test]
    fn csv_header_and_shape() {
        let res = run_sweep(&preset("fig2").unwrap()).unwrap();
        let mut buf = Vec::new();
        write_csv(&res, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "N,M,n,L,snr_db,rate,quantity,value,std_err,error");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&first[..4], &["4", "6", "12", "12"]);
        assert_eq!(first[6], "cbar");
        assert_eq!(first[8], "");
        assert_eq!(text.lines().count(), 1 + res.rows.len());
        // round-trip exactness of printed values
        let v: f64 = first[7].parse().unwrap();
        assert_eq!(v.to_bits(), res.rows[0].value.unwrap().to_bits());
    }

    #[test]
    fn json_round_trip() {
        let res = run_sweep(&preset("fig3").unwrap()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        emit(&res, OutputFormat::Json, &p).unwrap();
        let back = read_json(&p).unwrap();
        assert_eq!(back, res);
        let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert!(raw["provenance"]["config_hash"].as_str().unwrap().len() == 64);
        assert!(raw["rows"].is_array());
    }

    #[test]
    fn unwritable_destination() {
        let res = run_sweep(&preset("fig2").unwrap()).unwrap();
        let err = emit(&res, OutputFormat::Csv, Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}
