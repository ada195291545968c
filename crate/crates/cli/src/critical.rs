//! Critical visibility: the smallest `x` at which a verdict fires.

use gme_core::correlation::extract_tensor;
use gme_core::criteria::{aggregate_t, bipartition_check, j_threshold, k_threshold, CriterionParams};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::family::Family;
use crate::target::Target;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalResult {
    pub target: String,
    /// `None` when the verdict never fires on `[0, 1]`.
    pub critical: Option<f64>,
    pub tol: f64,
    /// Verdict at `critical - tol` (clamped to `[0, 1]`); false for a valid bracket.
    pub verdict_below: Option<bool>,
    /// Verdict at `critical + tol` (clamped to `[0, 1]`); true for a valid bracket.
    pub verdict_above: Option<bool>,
    /// Threshold over the verdict quantity at `x = 1`, valid because the
    /// quantity is linear in `x` for white-noise families.
    pub closed_form: Option<f64>,
}

fn verdict_at(family: &Family, target: &Target, params: &CriterionParams, x: f64) -> Result<bool> {
    let tensor = extract_tensor(&family.state_at(x.clamp(0.0, 1.0))?);
    target.verdict(&tensor, params)
}

/// Bisection on `[0, 1]` assuming the verdict is monotone in `x`.
pub fn find_critical(family: &Family, target: &Target, params: &CriterionParams, tol: f64) -> Result<CriticalResult> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    if *target == Target::GmeJ {
        crate::require_permutation_invariant(family)?;
    }
    let closed_form = closed_form(family, target, params)?;
    let mut result = CriticalResult {
        target: target.to_string(),
        critical: None,
        tol,
        verdict_below: None,
        verdict_above: None,
        closed_form,
    };
    if !verdict_at(family, target, params, 1.0)? {
        return Ok(result);
    }
    let critical = if verdict_at(family, target, params, 0.0)? {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if verdict_at(family, target, params, mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    result.critical = Some(critical);
    result.verdict_below = Some(verdict_at(family, target, params, critical - tol)?);
    result.verdict_above = Some(verdict_at(family, target, params, critical + tol)?);
    Ok(result)
}

/// `threshold / value(1)`, or `None` if the verdict never fires.
fn closed_form(family: &Family, target: &Target, params: &CriterionParams) -> Result<Option<f64>> {
    let tensor = extract_tensor(&family.state_at(1.0)?);
    let dims = family.dims();
    let (threshold, value) = match target {
        Target::GmeK => (k_threshold(dims, params)?, aggregate_t(&tensor, params)?),
        Target::GmeJ => (j_threshold(dims, params)?, aggregate_t(&tensor, params)?),
        Target::Bipartition(b) => {
            let rec = bipartition_check(&tensor, b, params)?;
            (rec.threshold, rec.trace_norm)
        }
    };
    Ok((value > threshold).then(|| threshold / value))
}
