//! Genuine multipartite entanglement detection from correlation tensors in
//! the generalized Pauli (Weyl) basis.
//!
//! ```
//! use gme_core::{criteria, states, CriterionParams};
//!
//! let rho = states::white_noise_mix(&states::w_state(), 0.6).unwrap();
//! let report = criteria::detect(&rho, &CriterionParams::new(0.1, 2.0).unwrap(), false).unwrap();
//! assert!(report.gme_detected);
//! ```

pub mod correlation;
pub mod criteria;
pub mod error;
pub mod gpops;
pub mod statefile;
pub mod states;

pub use correlation::{Bipartition, CorrelationTensor, FMatrix};
pub use criteria::{BipartitionRecord, CriterionParams, CriterionReport};
pub use error::{Error, Result};
pub use gpops::{WeylIndex, WeylOp};
pub use states::{DensityMatrix, SystemDims, Violation};
