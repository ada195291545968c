use std::fmt;
use std::str::FromStr;

use gme_core::criteria::{bipartition_check, detect_tensor, CriterionParams};
use gme_core::{Bipartition, CorrelationTensor};

use crate::error::{CliError, Result};

/// Which verdict a critical-visibility search looks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// `T > K`.
    GmeK,
    /// `T > J` (permutation-invariant states).
    GmeJ,
    /// `||F|| > W` on one bipartition.
    Bipartition(Bipartition),
}

impl Target {
    pub fn verdict(&self, tensor: &CorrelationTensor, params: &CriterionParams) -> Result<bool> {
        Ok(match self {
            Target::GmeK => detect_tensor(tensor, params, false)?.gme_detected,
            Target::GmeJ => detect_tensor(tensor, params, true)?.gme_detected_pi == Some(true),
            Target::Bipartition(b) => bipartition_check(tensor, b, params)?.excluded,
        })
    }
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gme-K" | "gme-k" => Ok(Target::GmeK),
            "gme-J" | "gme-j" => Ok(Target::GmeJ),
            spec if spec.contains('|') => spec
                .parse()
                .map(Target::Bipartition)
                .map_err(|e| CliError::Usage(format!("bad --target: {e}"))),
            other => Err(CliError::Usage(format!(
                "bad --target {other:?} (expected gme-K, gme-J or a bipartition such as 1|234)"
            ))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::GmeK => f.write_str("gme-K"),
            Target::GmeJ => f.write_str("gme-J"),
            Target::Bipartition(b) => write!(f, "{b}"),
        }
    }
}
