//! Per-N avoidance profiles over a parameterized run of windows.
//!
//! Outcomes are recorded for every N without assuming monotonicity; the
//! reported minimum is simply the first exhausted N in the range.

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use super::{search_family, Certificate, SearchConfig};
use crate::detector::DetectorError;
use crate::pattern::Family;
use crate::window::WindowFamily;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepOptions {
    pub stop_at_first_exhausted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdRow {
    pub n: u64,
    pub window: String,
    pub window_size: usize,
    pub outcome: String,
    pub nodes: u64,
    #[serde(skip)]
    pub seconds: f64,
    pub certificate: Option<Certificate>,
    pub certificate_path: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub family: Family,
    pub r: usize,
    pub windows: String,
    pub rows: Vec<ThresholdRow>,
    pub minimal_exhausted: Option<u64>,
}

impl ThresholdReport {
    /// Writes each row's certificate as `<stem>-N<n>.json` under `dir` and
    /// records the paths.
    pub fn write_certificates(&mut self, dir: &Path, stem: &str) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for row in &mut self.rows {
            if let Some(cert) = &row.certificate {
                let path = dir.join(format!("{stem}-N{}.json", row.n));
                std::fs::write(&path, cert.to_json())?;
                row.certificate_path = Some(path.display().to_string());
            }
        }
        Ok(())
    }

    /// Columns: N, window-size, outcome, nodes, seconds, certificate-path.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,window-size,outcome,nodes,seconds,certificate-path\n");
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{:.6},{}",
                row.n,
                row.window_size,
                row.outcome,
                row.nodes,
                row.seconds,
                row.certificate_path.as_deref().unwrap_or("")
            )
            .unwrap();
        }
        out
    }
}

pub fn threshold_sweep(
    family: &Family,
    r: usize,
    windows: &WindowFamily,
    config: &SearchConfig,
    options: &SweepOptions,
) -> Result<ThresholdReport, DetectorError> {
    let mut rows = Vec::new();
    let mut minimal_exhausted = None;
    for n in windows.parameters() {
        let window = Arc::new(windows.window(n)?);
        let result = search_family(family, window.clone(), r, config)?;
        let exhausted = result.outcome.is_exhausted();
        rows.push(ThresholdRow {
            n,
            window: window.to_string(),
            window_size: window.len(),
            outcome: result.outcome.label().to_string(),
            nodes: result.nodes,
            seconds: result.seconds,
            certificate: Certificate::from_result(&result),
            certificate_path: None,
        });
        if exhausted && minimal_exhausted.is_none() {
            minimal_exhausted = Some(n);
            if options.stop_at_first_exhausted {
                break;
            }
        }
    }
    Ok(ThresholdReport {
        family: family.clone(),
        r,
        windows: windows.to_string(),
        rows,
        minimal_exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::builtin_family;

    #[test]
    fn schur_two_color_threshold() {
        let report = threshold_sweep(
            &builtin_family("schur").unwrap(),
            2,
            &"int:1..6".parse().unwrap(),
            &SearchConfig::default(),
            &SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(report.minimal_exhausted, Some(5));
        assert_eq!(report.rows.len(), 6);
        assert!(report.rows.iter().all(|r| r.certificate.is_some()));
        let csv = report.to_csv();
        assert!(csv.starts_with("N,window-size,outcome,nodes,seconds,certificate-path\n"));
        assert_eq!(csv.lines().count(), 7);
    }

    #[test]
    fn sweep_can_stop_early() {
        let report = threshold_sweep(
            &builtin_family("vdw(2)").unwrap(),
            2,
            &"int:7..12".parse().unwrap(),
            &SearchConfig::default(),
            &SweepOptions {
                stop_at_first_exhausted: true,
            },
        )
        .unwrap();
        assert_eq!(report.minimal_exhausted, Some(9));
        assert_eq!(report.rows.last().unwrap().n, 9);
    }
}
