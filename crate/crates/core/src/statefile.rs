//! JSON density-matrix files:
//! `{"dims": [d1, ..., dn], "matrix": [[[re, im], ...], ...]}`, row-major in
//! the computational basis.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::states::{DensityMatrix, SystemDims};

/// Files failing validation at this tolerance are rejected.
pub const FILE_TOL: f64 = 1e-8;

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dims: SystemDims,
    matrix: Vec<Vec<[f64; 2]>>,
}

pub fn from_json_str(s: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(s)?;
    let total = file.dims.total();
    if file.matrix.len() != total || file.matrix.iter().any(|row| row.len() != total) {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} need a {total}x{total} matrix",
            file.dims.as_slice()
        )));
    }
    let matrix = DMatrix::from_fn(total, total, |r, c| {
        let [re, im] = file.matrix[r][c];
        Complex64::new(re, im)
    });
    DensityMatrix::with_tolerance(file.dims, matrix, FILE_TOL)
}

pub fn to_json_string(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let file = StateFile {
        dims: rho.dims().clone(),
        matrix: m.row_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect(),
    };
    serde_json::to_string(&file).expect("state serializes")
}

pub fn read_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    from_json_str(&fs::read_to_string(path)?)
}

pub fn write_state(path: impl AsRef<Path>, rho: &DensityMatrix) -> Result<()> {
    fs::write(path, to_json_string(rho))?;
    Ok(())
}
