//! Generalized Pauli (Weyl) operators on a single `d`-dimensional space.
//!
//! The operator with flat index `mu = d*i + j` is
//! `A_mu = sum_m omega^(i*m) |m><m+j mod d|`, with `omega = exp(2*pi*i/d)`.
//! `i` controls the clock phase and `j` the cyclic shift; `A_0` is the identity.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used by [`check_algebra`].
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Position of one operator inside the `d*d` Weyl basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeylIndex {
    d: usize,
    i: usize,
    j: usize,
}

impl WeylIndex {
    pub fn new(d: usize, i: usize, j: usize) -> Result<Self> {
        check_dim(d)?;
        if i >= d || j >= d {
            return Err(Error::InvalidIndex { d, i, j });
        }
        Ok(Self { d, i, j })
    }

    /// Splits a flat index by division with remainder.
    pub fn from_mu(d: usize, mu: usize) -> Result<Self> {
        check_dim(d)?;
        if mu >= d * d {
            return Err(Error::InvalidIndex { d, i: mu / d, j: mu % d });
        }
        Ok(Self { d, i: mu / d, j: mu % d })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn mu(&self) -> usize {
        self.d * self.i + self.j
    }

    pub fn is_identity(&self) -> bool {
        self.i == 0 && self.j == 0
    }

    /// Column holding the single nonzero entry of row `m`.
    #[inline]
    pub fn column_of(&self, m: usize) -> usize {
        (m + self.j) % self.d
    }

    /// Exponent `k` such that the nonzero entry of row `m` is `omega^k`.
    #[inline]
    pub fn phase_exponent(&self, m: usize) -> usize {
        (self.i * m) % self.d
    }

    /// Value of the nonzero entry in row `m`.
    pub fn phase(&self, m: usize) -> Complex64 {
        root_power(self.d, self.phase_exponent(m))
    }
}

/// A Weyl operator together with its dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylOp {
    pub index: WeylIndex,
    pub matrix: DMatrix<Complex64>,
}

impl WeylOp {
    pub fn from_index(index: WeylIndex) -> Self {
        let d = index.d;
        let mut matrix = DMatrix::zeros(d, d);
        for m in 0..d {
            matrix[(m, index.column_of(m))] = index.phase(m);
        }
        Self { index, matrix }
    }

    pub fn mu(&self) -> usize {
        self.index.mu()
    }

    pub fn dagger(&self) -> DMatrix<Complex64> {
        self.matrix.adjoint()
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// `omega^k` for the primitive root `omega = exp(2*pi*i/d)`.
///
/// The exponent is reduced mod `d` and evaluated directly from the angle, so
/// `root_power(d, d)` is exactly 1 rather than the product of `d` rounded factors.
pub fn root_power(d: usize, k: usize) -> Complex64 {
    let k = k % d;
    if (4 * k) % d != 0 {
        return Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
    }
    // Quarter turns are exact.
    match 4 * k / d {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub fn primitive_root(d: usize) -> Result<Complex64> {
    check_dim(d)?;
    Ok(root_power(d, 1))
}

pub fn weyl_op(d: usize, i: usize, j: usize) -> Result<WeylOp> {
    Ok(WeylOp::from_index(WeylIndex::new(d, i, j)?))
}

/// All `d*d` operators, ordered by flat index.
pub fn weyl_basis(d: usize) -> Result<Vec<WeylOp>> {
    check_dim(d)?;
    (0..d * d)
        .map(|mu| WeylIndex::from_mu(d, mu).map(WeylOp::from_index))
        .collect()
}

/// Largest deviation, over all index pairs, from the product, adjoint and
/// trace-orthogonality relations of the basis.
pub fn algebra_deviation(d: usize) -> Result<f64> {
    let basis = weyl_basis(d)?;
    let at = |i: usize, j: usize| &basis[d * (i % d) + (j % d)].matrix;
    let mut worst = 0.0f64;

    for a in &basis {
        let (i, j) = (a.index.i, a.index.j);

        // A_{ij}^dagger = omega^{ij} A_{-i,-j}
        let expected = at(d - i, d - j) * root_power(d, i * j);
        worst = worst.max(max_abs_diff(&a.dagger(), &expected));

        for b in &basis {
            let (k, l) = (b.index.i, b.index.j);

            // A_{ij} A_{kl} = omega^{jk} A_{i+k, j+l}
            let expected = at(i + k, j + l) * root_power(d, j * k);
            worst = worst.max(max_abs_diff(&(&a.matrix * &b.matrix), &expected));

            // tr(A_{ij} A_{kl}^dagger) = d delta_ik delta_jl
            let tr = (&a.matrix * b.dagger()).trace();
            let want = if a.index == b.index { d as f64 } else { 0.0 };
            worst = worst.max((tr - Complex64::new(want, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// True when every algebraic relation of the basis holds within [`ALGEBRA_TOL`].
pub fn check_algebra(d: usize) -> Result<bool> {
    Ok(algebra_deviation(d)? <= ALGEBRA_TOL)
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
