//! Visibility sweeps over a noise family.

use std::fmt::Write as _;

use gme_core::correlation::extract_tensor;
use gme_core::criteria::{detect_tensor, CriterionParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::family::Family;
use crate::format::{fmt_sig, to_json_pretty};

pub const CSV_HEADER: &str = "x,T,K,J,min_margin,gme_K,gme_J";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CliError::Usage(format!("unknown format {other:?} (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub steps: usize,
}

impl ScanGrid {
    pub fn new(x_min: f64, x_max: f64, steps: usize) -> Result<Self> {
        if !(0.0 <= x_min && x_min < x_max && x_max <= 1.0) {
            return Err(CliError::Usage(format!(
                "invalid range [{x_min}, {x_max}]: need 0 <= x-min < x-max <= 1"
            )));
        }
        if steps < 2 {
            return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
        }
        Ok(Self { x_min, x_max, steps })
    }

    /// `steps` evenly spaced points including both endpoints.
    pub fn points(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.x_max
                } else {
                    self.x_min + (self.x_max - self.x_min) * k as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub x: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "J")]
    pub j: Option<f64>,
    /// Smallest `W - ||F||_tr` over the bipartitions.
    pub min_margin: f64,
    #[serde(rename = "gme_K")]
    pub gme_k: bool,
    #[serde(rename = "gme_J")]
    pub gme_j: Option<bool>,
}

/// Evaluates the family at every grid point; rows come back in `x` order.
pub fn run_scan(family: &Family, params: &CriterionParams, grid: &ScanGrid, use_pi: bool) -> Result<Vec<ScanRow>> {
    if use_pi {
        crate::require_permutation_invariant(family)?;
    }
    grid.points()
        .into_par_iter()
        .map(|x| {
            let tensor = extract_tensor(&family.state_at(x)?);
            let report = detect_tensor(&tensor, params, use_pi)?;
            Ok(ScanRow {
                x,
                t: report.aggregate,
                k: report.k_threshold,
                j: report.j_threshold,
                min_margin: report.min_margin(),
                gme_k: report.gme_detected,
                gme_j: report.gme_detected_pi,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_sig(r.x),
            fmt_sig(r.t),
            fmt_sig(r.k),
            opt(r.j.map(fmt_sig)),
            fmt_sig(r.min_margin),
            r.gme_k,
            opt(r.gme_j.map(|b| b.to_string())),
        )
        .expect("write to string");
    }
    out
}

#[derive(Serialize)]
struct ScanDocument<'a> {
    family: String,
    dims: &'a [usize],
    params: &'a CriterionParams,
    rows: &'a [ScanRow],
}

pub fn to_json(family: &Family, params: &CriterionParams, rows: &[ScanRow]) -> String {
    to_json_pretty(&ScanDocument {
        family: family.kind.to_string(),
        dims: family.dims().as_slice(),
        params,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_endpoints() {
        let g = ScanGrid::new(0.0, 1.0, 11).unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[10], 1.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!((pts[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(ScanGrid::new(0.5, 0.2, 5).is_err());
        assert!(ScanGrid::new(0.5, 0.5, 5).is_err());
        assert!(ScanGrid::new(-0.1, 0.5, 5).is_err());
        assert!(ScanGrid::new(0.0, 1.1, 5).is_err());
        assert!(ScanGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn csv_schema() {
        let rows = vec![ScanRow { x: 0.5, t: 2.0, k: 3.0, j: None, min_margin: 1.0, gme_k: false, gme_j: None }];
        assert_eq!(to_csv(&rows), "x,T,K,J,min_margin,gme_K,gme_J\n0.5,2,3,,1,false,\n");
    }
}
