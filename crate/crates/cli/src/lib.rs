//! Library behind the `gme` command: noise families, scans, critical
//! visibilities and reproduction of the worked examples.

pub mod critical;
pub mod error;
pub mod family;
pub mod format;
pub mod reproduce;
pub mod scan;
pub mod target;

use gme_core::criteria::PI_TOL;
use gme_core::states::is_permutation_invariant;

pub use critical::{find_critical, CriticalResult};
pub use error::{CliError, Result};
pub use family::{Family, FamilyKind, FamilySpec};
pub use scan::{run_scan, OutputFormat, ScanGrid, ScanRow};
pub use target::Target;

/// White noise preserves permutation invariance, so checking the base state suffices.
pub(crate) fn require_permutation_invariant(family: &Family) -> Result<()> {
    if is_permutation_invariant(&family.base, PI_TOL)? {
        Ok(())
    } else {
        Err(CliError::Core(gme_core::Error::Precondition(
            "the permutation-invariant threshold J requires a permutation-invariant state".into(),
        )))
    }
}
