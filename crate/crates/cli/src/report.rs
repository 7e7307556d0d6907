//! Report assembly and emission: per-check records, the JSON document, the
//! spectra CSV, and the human-readable console lines. Nothing here depends
//! on wall-clock time, so identical runs produce identical bytes.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use tau2_core::report::Check;

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One executed (or skipped) check, tagged with the suite that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub id: String,
    pub detail: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl CheckRecord {
    pub fn from_check(suite: &str, label: Option<&str>, check: Check) -> Self {
        let detail = match label {
            Some(l) if !check.detail.is_empty() => format!("{l}; {}", check.detail),
            Some(l) => l.to_string(),
            None => check.detail,
        };
        CheckRecord {
            suite: suite.to_string(),
            id: check.id,
            detail,
            status: if check.pass { Status::Pass } else { Status::Fail },
            residual: Some(check.residual),
            threshold: Some(check.threshold),
        }
    }

    pub fn skip(suite: &str, id: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            id: id.into(),
            detail: detail.into(),
            status: Status::Skip,
            residual: None,
            threshold: None,
        }
    }

    pub fn error(suite: &str, id: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckRecord {
            suite: suite.to_string(),
            id: id.into(),
            detail: detail.into(),
            status: Status::Fail,
            residual: None,
            threshold: None,
        }
    }
}

/// One eigenvalue of one charge sector of one transfer family.
#[derive(Debug, Clone, Serialize)]
pub struct SpectraRow {
    pub family: String,
    pub r: i64,
    #[serde(rename = "Q")]
    pub q: i64,
    pub spectral_re: f64,
    pub spectral_im: f64,
    pub eig_re: f64,
    pub eig_im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SetupSummary {
    pub base: usize,
    pub ext: usize,
    pub sign: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSummary {
    pub sites: usize,
    pub r: i64,
    pub r_prime: i64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

/// The complete machine-readable outcome of one run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub setup: SetupSummary,
    pub chain: ChainSummary,
    pub suites: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(cfg: &Config, suites: Vec<String>, checks: Vec<CheckRecord>) -> Self {
        let mut summary = Summary { total: checks.len(), ..Default::default() };
        for c in &checks {
            match c.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skip => summary.skipped += 1,
            }
        }
        Report {
            schema: 1,
            seed: cfg.seed,
            setup: SetupSummary {
                base: cfg.base,
                ext: cfg.ext,
                sign: cfg.sign.as_str().to_string(),
            },
            chain: ChainSummary {
                sites: cfg.sites,
                r: cfg.r,
                r_prime: cfg.r_prime,
            },
            suites,
            checks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).context("serializing report")?;
        text.push('\n');
        Ok(text)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)
            .with_context(|| format!("writing JSON report to {}", path.display()))
    }

    /// Print one line per check plus a summary line.
    pub fn print_console(&self, out: &mut impl Write) -> Result<()> {
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            match (c.residual, c.threshold) {
                (Some(res), Some(thr)) => writeln!(
                    out,
                    "[{tag}] {}: {} (residual {res:.3e}, threshold {thr:.3e}) {}",
                    c.suite, c.id, c.detail
                )?,
                _ => writeln!(out, "[{tag}] {}: {} {}", c.suite, c.id, c.detail)?,
            }
        }
        writeln!(
            out,
            "summary: {} passed, {} failed, {} skipped ({} total)",
            self.summary.passed, self.summary.failed, self.summary.skipped, self.summary.total
        )?;
        Ok(())
    }
}

/// Serialize spectra rows as CSV with a fixed column order.
pub fn spectra_csv(rows: &[SpectraRow]) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["family", "r", "Q", "spectral_re", "spectral_im", "eig_re", "eig_im"])?;
    for row in rows {
        wtr.write_record([
            row.family.clone(),
            row.r.to_string(),
            row.q.to_string(),
            format!("{:?}", row.spectral_re),
            format!("{:?}", row.spectral_im),
            format!("{:?}", row.eig_re),
            format!("{:?}", row.eig_im),
        ])?;
    }
    let bytes = wtr.into_inner().context("finalizing CSV")?;
    Ok(String::from_utf8(bytes).context("CSV is not UTF-8")?)
}

pub fn write_spectra_csv(rows: &[SpectraRow], path: &Path) -> Result<()> {
    std::fs::write(path, spectra_csv(rows)?)
        .with_context(|| format!("writing spectra CSV to {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_stable() {
        let rows = vec![SpectraRow {
            family: "t2".into(),
            r: 1,
            q: 2,
            spectral_re: 0.3,
            spectral_im: 0.1,
            eig_re: -1.25,
            eig_im: 0.5,
        }];
        let text = spectra_csv(&rows).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "family,r,Q,spectral_re,spectral_im,eig_re,eig_im"
        );
        assert_eq!(lines.next().unwrap(), "t2,1,2,0.3,0.1,-1.25,0.5");
    }

    #[test]
    fn record_mapping() {
        let rec = CheckRecord::from_check(
            "yb",
            Some("Q=1"),
            Check::new("yb/demo", "two sites", 1e-12, 1e-10),
        );
        assert_eq!(rec.status, Status::Pass);
        assert_eq!(rec.detail, "Q=1; two sites");
        let rec = CheckRecord::from_check("yb", None, Check::new("yb/demo", "x", 1.0, 1e-10));
        assert_eq!(rec.status, Status::Fail);
        let rec = CheckRecord::skip("pairing", "pairing/skip", "odd regime has no pairing");
        assert_eq!(rec.status, Status::Skip);
        assert!(rec.residual.is_none());
    }
}
