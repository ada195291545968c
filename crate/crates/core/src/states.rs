//! Density matrices on `d_1 x ... x d_n` qudit systems.
//!
//! Computational basis states `|k_1 ... k_n>` are ordered row-major with the
//! last party varying fastest, the usual Kronecker-product convention.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::correlation::Bipartition;
use crate::error::{Error, Result};

/// Tolerance used by constructors and [`DensityMatrix::new`].
pub const STATE_TOL: f64 = 1e-10;

/// Local dimensions of an n-party system.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemDims(Vec<usize>);

impl SystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidParameter("a system needs at least one party".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self(dims))
    }

    /// `n` parties of equal dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Total Hilbert-space dimension.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// Dimensions of the listed parties, in the listed order.
    pub fn select(&self, parties: &[usize]) -> Vec<usize> {
        parties.iter().map(|&p| self.0[p]).collect()
    }

    /// Row-major strides of the computational basis (last party stride 1).
    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.0)
    }
}

impl std::ops::Index<usize> for SystemDims {
    type Output = usize;

    fn index(&self, s: usize) -> &usize {
        &self.0[s]
    }
}

impl TryFrom<Vec<usize>> for SystemDims {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SystemDims> for Vec<usize> {
    fn from(d: SystemDims) -> Self {
        d.0
    }
}

pub(crate) fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    strides
}

/// A way in which a matrix fails to be a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NonFinite,
    NotHermitian { max_deviation: f64 },
    TraceNotOne { re: f64, im: f64 },
    NotPositive { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite => write!(f, "matrix has non-finite entries"),
            Violation::NotHermitian { max_deviation } => {
                write!(f, "not Hermitian (max |rho - rho^dagger| = {max_deviation:e})")
            }
            Violation::TraceNotOne { re, im } => write!(f, "trace is {re}{im:+}i, expected 1"),
            Violation::NotPositive { min_eigenvalue } => {
                write!(f, "not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: SystemDims,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Builds a state, rejecting matrices that fail [`validate`] at [`STATE_TOL`].
    pub fn new(dims: SystemDims, matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(dims, matrix, STATE_TOL)
    }

    pub fn with_tolerance(dims: SystemDims, matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let rho = Self::from_raw(dims, matrix)?;
        let violations = validate(&rho, tol);
        if violations.is_empty() {
            Ok(rho)
        } else {
            Err(Error::InvalidState(violations))
        }
    }

    /// Wraps a matrix after checking only its shape. Use [`validate`] to
    /// check the remaining invariants.
    pub fn from_raw(dims: SystemDims, matrix: DMatrix<Complex64>) -> Result<Self> {
        let total = dims.total();
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} need a {total}x{total} matrix, got {}x{}",
                dims.as_slice(),
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// Projector onto the normalized vector `psi`.
    pub fn from_pure(dims: SystemDims, psi: &[Complex64]) -> Result<Self> {
        let psi = DVector::from_column_slice(psi);
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "state vector of length {} for total dimension {}",
                psi.len(),
                dims.total()
            )));
        }
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter("state vector must be nonzero and finite".into()));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(Self { dims, matrix: &psi * psi.adjoint() })
    }

    /// `I / D`.
    pub fn maximally_mixed(dims: SystemDims) -> Self {
        let total = dims.total();
        let matrix = DMatrix::identity(total, total) * Complex64::new(1.0 / total as f64, 0.0);
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.dims.n()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(rho rho^dagger) = sum |rho_ab|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Lists every density-matrix invariant `rho` violates at tolerance `tol`.
pub fn validate(rho: &DensityMatrix, tol: f64) -> Vec<Violation> {
    let m = &rho.matrix;
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return vec![Violation::NonFinite];
    }
    let mut out = Vec::new();

    let herm_dev = m
        .iter()
        .zip(m.adjoint().iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if herm_dev > tol {
        out.push(Violation::NotHermitian { max_deviation: herm_dev });
    }

    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
        out.push(Violation::TraceNotOne { re: tr.re, im: tr.im });
    }

    let hermitian_part = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let min_eig = hermitian_part.symmetric_eigenvalues().min();
    if min_eig < -tol {
        out.push(Violation::NotPositive { min_eigenvalue: min_eig });
    }
    out
}

/// Three-qubit W state `(|001> + |010> + |100>) / sqrt(3)`.
pub fn w_state() -> DensityMatrix {
    let dims = SystemDims::uniform(3, 2).expect("valid dims");
    let mut psi = vec![Complex64::new(0.0, 0.0); 8];
    for k in [0b001, 0b010, 0b100] {
        psi[k] = Complex64::new(1.0, 0.0);
    }
    DensityMatrix::from_pure(dims, &psi).expect("valid W state")
}

/// `n`-qudit GHZ state `sum_k |k...k> / sqrt(d)`.
pub fn ghz_state(n: usize, d: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("GHZ state needs n >= 2, got {n}")));
    }
    let dims = SystemDims::uniform(n, d)?;
    // |k...k> sits at k * (1 + d + ... + d^{n-1}).
    let step: usize = dims.strides().iter().sum();
    let mut psi = vec![Complex64::new(0.0, 0.0); dims.total()];
    for k in 0..d {
        psi[k * step] = Complex64::new(1.0, 0.0);
    }
    DensityMatrix::from_pure(dims, &psi)
}

/// `x rho + (1 - x) I / D`.
pub fn white_noise_mix(rho: &DensityMatrix, x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("visibility {x} outside [0, 1]")));
    }
    let total = rho.dims.total();
    let noise = 1.0 / total as f64;
    let mut matrix = rho.matrix.map(|z| z * x);
    for a in 0..total {
        matrix[(a, a)] += Complex64::new((1.0 - x) * noise, 0.0);
    }
    Ok(DensityMatrix { dims: rho.dims.clone(), matrix })
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Reorders tensor factors: factor `i` of `rho` moves to global position `order[i]`.
pub fn permute_parties(rho: &DensityMatrix, order: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n();
    if order.len() != n || !distinct_in_range(order, n) {
        return Err(Error::InvalidParty(format!("{order:?} is not a permutation of 0..{n}")));
    }
    let local = rho.dims.as_slice();
    let mut global = vec![0; n];
    for (i, &p) in order.iter().enumerate() {
        global[p] = local[i];
    }
    let global = SystemDims::new(global)?;
    let map = index_map(&global, order, &strides_of(local));
    let matrix = DMatrix::from_fn(map.len(), map.len(), |r, c| rho.matrix[(map[r], map[c])]);
    Ok(DensityMatrix { dims: global, matrix })
}

/// For each global basis index, the index of the same basis state with the
/// factors arranged so that factor `i` holds global party `order[i]`.
fn index_map(global: &SystemDims, order: &[usize], local_strides: &[usize]) -> Vec<usize> {
    let g = global.as_slice();
    let gs = global.strides();
    (0..global.total())
        .map(|idx| {
            order
                .iter()
                .zip(local_strides)
                .map(|(&p, &stride)| (idx / gs[p]) % g[p] * stride)
                .sum()
        })
        .collect()
}

/// Reduced state on `keep`, with factors in the listed order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n();
    if keep.is_empty() || !distinct_in_range(keep, n) {
        return Err(Error::InvalidParty(format!("cannot keep parties {keep:?} of {n}")));
    }
    let dims = rho.dims.as_slice();
    let strides = rho.dims.strides();
    let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();

    let kept_dims = SystemDims::new(rho.dims.select(keep))?;
    let traced_dims: Vec<usize> = traced.iter().map(|&p| dims[p]).collect();
    let (kd, td) = (kept_dims.total(), traced_dims.iter().product::<usize>());
    let (ks, ts) = (kept_dims.strides(), strides_of(&traced_dims));

    // global[t][k] = global basis index of (kept digits of k, traced digits of t)
    let compose = |k: usize, t: usize| -> usize {
        let kept: usize = keep
            .iter()
            .enumerate()
            .map(|(i, &p)| (k / ks[i]) % dims[p] * strides[p])
            .sum();
        let rest: usize = traced
            .iter()
            .enumerate()
            .map(|(i, &p)| (t / ts[i]) % dims[p] * strides[p])
            .sum();
        kept + rest
    };
    let global: Vec<Vec<usize>> = (0..td).map(|t| (0..kd).map(|k| compose(k, t)).collect()).collect();

    let matrix = DMatrix::from_fn(kd, kd, |a, b| {
        global.iter().map(|row| rho.matrix[(row[a], row[b])]).sum()
    });
    Ok(DensityMatrix { dims: kept_dims, matrix })
}

pub(crate) fn distinct_in_range(parties: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    parties.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// Uncorrelated state with `left` on the bipartition's left parties and
/// `right` on its right parties, each factor in the bipartition's listed order.
pub fn product_state(
    left: &DensityMatrix,
    right: &DensityMatrix,
    bipartition: &Bipartition,
) -> Result<DensityMatrix> {
    if left.n() != bipartition.left().len() || right.n() != bipartition.right().len() {
        return Err(Error::DimensionMismatch(format!(
            "factors with {} and {} parties for bipartition {bipartition}",
            left.n(),
            right.n()
        )));
    }
    let mut local = left.dims.as_slice().to_vec();
    local.extend_from_slice(right.dims.as_slice());
    let joint = DensityMatrix {
        dims: SystemDims::new(local)?,
        matrix: kron(&left.matrix, &right.matrix),
    };
    let order: Vec<usize> = bipartition.left().iter().chain(bipartition.right()).copied().collect();
    permute_parties(&joint, &order)
}

/// Reproducible rank-`rank` state `G G^dagger / tr(G G^dagger)` from a
/// `D x rank` complex Gaussian matrix seeded by `seed`.
pub fn random_density(dims: &SystemDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let total = dims.total();
    if rank == 0 || rank > total {
        return Err(Error::InvalidParameter(format!("rank {rank} outside 1..={total}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(total, rank, |_, _| {
        Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    Ok(DensityMatrix { dims: dims.clone(), matrix: gg / Complex64::new(tr, 0.0) })
}

/// Whether `rho` commutes with every permutation of its (equal-dimension)
/// parties, checked on the adjacent transpositions that generate them.
pub fn is_permutation_invariant(rho: &DensityMatrix, tol: f64) -> Result<bool> {
    if !rho.dims.is_uniform() {
        return Err(Error::Unsupported(format!(
            "permutation invariance needs equal local dimensions, got {:?}",
            rho.dims.as_slice()
        )));
    }
    let n = rho.n();
    let strides = rho.dims.strides();
    for s in 0..n.saturating_sub(1) {
        let mut order: Vec<usize> = (0..n).collect();
        order.swap(s, s + 1);
        let map = index_map(&rho.dims, &order, &strides);
        let total = map.len();
        for r in 0..total {
            for c in 0..total {
                if (rho.matrix[(map[r], map[c])] - rho.matrix[(r, c)]).norm() > tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        crate::gpops::max_abs_diff(a, b)
    }

    #[test]
    fn dims_reject_bad_input() {
        assert!(SystemDims::new(vec![]).is_err());
        assert!(matches!(SystemDims::new(vec![2, 1]), Err(Error::InvalidDimension(1))));
        let d = SystemDims::new(vec![2, 3, 4]).unwrap();
        assert_eq!(d.total(), 24);
        assert_eq!(d.strides(), vec![12, 4, 1]);
        assert!(!d.is_uniform());
    }

    #[test]
    fn w_state_entries() {
        let w = w_state();
        let m = w.matrix();
        for k in [1, 2, 4] {
            assert_abs_diff_eq!(m[(k, k)].re, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(m[(1, 2)].re, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.purity(), 1.0, epsilon = 1e-14);
        assert!(validate(&w, STATE_TOL).is_empty());
    }

    #[test]
    fn ghz_entries() {
        let g = ghz_state(4, 2).unwrap();
        for (r, row) in g.matrix().row_iter().enumerate() {
            for (col, z) in row.iter().enumerate() {
                let corner = (r == 0 || r == 15) && (col == 0 || col == 15);
                let want = if corner { 0.5 } else { 0.0 };
                assert_abs_diff_eq!(z.re, want, epsilon = 1e-15);
                assert_eq!(z.im, 0.0);
            }
        }

        let bell = ghz_state(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DensityMatrix::from_pure(
            SystemDims::uniform(2, 2).unwrap(),
            &[c(h), c(0.0), c(0.0), c(h)],
        )
        .unwrap();
        assert!(max_diff(bell.matrix(), expected.matrix()) < 1e-15);

        let g3 = ghz_state(3, 3).unwrap();
        for k in [0, 13, 26] {
            assert_abs_diff_eq!(g3.matrix()[(k, k)].re, 1.0 / 3.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(g3.matrix().trace().re, 1.0, epsilon = 1e-14);

        assert!(ghz_state(1, 2).is_err());
        assert!(ghz_state(3, 1).is_err());
    }

    #[test]
    fn noise_mixture() {
        let w = w_state();
        let mm = white_noise_mix(&w, 0.0).unwrap();
        assert!(max_diff(mm.matrix(), DensityMatrix::maximally_mixed(w.dims().clone()).matrix()) < 1e-16);
        assert_eq!(white_noise_mix(&w, 1.0).unwrap(), w);

        let half = white_noise_mix(&w, 0.5).unwrap();
        assert_abs_diff_eq!(half.matrix()[(1, 1)].re, 1.0 / 16.0 + 1.0 / 6.0, epsilon = 1e-15);

        assert!(white_noise_mix(&w, 1.5).is_err());
        assert!(white_noise_mix(&w, -0.1).is_err());
    }

    #[test]
    fn noise_is_affine_exactly() {
        let g = ghz_state(4, 2).unwrap();
        let one = white_noise_mix(&g, 1.0).unwrap();
        let zero = white_noise_mix(&g, 0.0).unwrap();
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let mixed = white_noise_mix(&g, x).unwrap();
            let affine = one.matrix().map(|z| z * x) + zero.matrix().map(|z| z * (1.0 - x));
            assert_eq!(mixed.matrix(), &affine);
        }
    }

    #[test]
    fn validate_flags_violations() {
        let dims = SystemDims::new(vec![2, 2]).unwrap();
        assert!(validate(&DensityMatrix::maximally_mixed(dims), 1e-10).is_empty());

        let bad = DensityMatrix::from_raw(
            SystemDims::new(vec![2]).unwrap(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![c(2.0), c(-1.0)])),
        )
        .unwrap();
        let v = validate(&bad, 1e-10);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::NotPositive { .. }));

        let bad = DensityMatrix::from_raw(
            SystemDims::new(vec![2]).unwrap(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(-1.0)])),
        )
        .unwrap();
        let v = validate(&bad, 1e-10);
        assert!(v.iter().any(|x| matches!(x, Violation::TraceNotOne { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::NotPositive { .. })));

        let mut m = DMatrix::identity(2, 2) * c(0.5);
        m[(0, 1)] = c(0.3);
        let v = validate(&DensityMatrix::from_raw(SystemDims::new(vec![2]).unwrap(), m).unwrap(), 1e-10);
        assert!(matches!(v[0], Violation::NotHermitian { .. }));

        assert!(DensityMatrix::from_raw(SystemDims::new(vec![2]).unwrap(), DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn product_of_maximally_mixed() {
        let bip = Bipartition::new(3, vec![0]).unwrap();
        let left = DensityMatrix::maximally_mixed(SystemDims::new(vec![2]).unwrap());
        let right = DensityMatrix::maximally_mixed(SystemDims::new(vec![2, 2]).unwrap());
        let p = product_state(&left, &right, &bip).unwrap();
        let mm = DensityMatrix::maximally_mixed(SystemDims::uniform(3, 2).unwrap());
        assert!(max_diff(p.matrix(), mm.matrix()) < 1e-16);
    }

    #[test]
    fn product_places_factors_at_global_positions() {
        // parties {1,4} | {2,3} (0-based {0,3} | {1,2}), both factors Bell states
        let bip: Bipartition = "14|23".parse().unwrap();
        let bell = ghz_state(2, 2).unwrap();
        let p = product_state(&bell, &bell, &bip).unwrap();
        assert_eq!(p.dims().as_slice(), &[2, 2, 2, 2]);
        assert_abs_diff_eq!(p.purity(), 1.0, epsilon = 1e-14);

        let outer = partial_trace(&p, &[0, 3]).unwrap();
        assert!(max_diff(outer.matrix(), bell.matrix()) < 1e-14);
        let inner = partial_trace(&p, &[1, 2]).unwrap();
        assert!(max_diff(inner.matrix(), bell.matrix()) < 1e-14);
        // the adjacent pair 1,2 is not a Bell pair
        let adjacent = partial_trace(&p, &[0, 1]).unwrap();
        assert_abs_diff_eq!(adjacent.purity(), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn product_then_partial_trace_recovers_factors() {
        let bip: Bipartition = "24|13".parse().unwrap();
        let left = random_density(&SystemDims::new(vec![2, 3]).unwrap(), 2, 7).unwrap();
        let right = random_density(&SystemDims::new(vec![2, 2]).unwrap(), 3, 8).unwrap();
        let p = product_state(&left, &right, &bip).unwrap();
        assert_eq!(p.dims().as_slice(), &[2, 2, 2, 3]);
        assert!(validate(&p, STATE_TOL).is_empty());
        let l = partial_trace(&p, &[1, 3]).unwrap();
        let r = partial_trace(&p, &[0, 2]).unwrap();
        assert!(max_diff(l.matrix(), left.matrix()) < 1e-12);
        assert!(max_diff(r.matrix(), right.matrix()) < 1e-12);
    }

    #[test]
    fn product_rejects_mismatch() {
        let bip = Bipartition::new(3, vec![0]).unwrap();
        let two = DensityMatrix::maximally_mixed(SystemDims::new(vec![2, 2]).unwrap());
        assert!(matches!(product_state(&two, &two, &bip), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn permute_roundtrip() {
        let rho = random_density(&SystemDims::new(vec![2, 3, 2]).unwrap(), 3, 1).unwrap();
        let p = permute_parties(&rho, &[2, 0, 1]).unwrap();
        assert_eq!(p.dims().as_slice(), &[3, 2, 2]);
        // inverse of [2,0,1] is [1,2,0]
        let back = permute_parties(&p, &[1, 2, 0]).unwrap();
        assert!(max_diff(back.matrix(), rho.matrix()) < 1e-16);
        assert!(permute_parties(&rho, &[0, 0, 1]).is_err());
    }

    #[test]
    fn random_states() {
        let dims = SystemDims::new(vec![2, 3]).unwrap();
        let pure = random_density(&dims, 1, 5).unwrap();
        assert_abs_diff_eq!(pure.purity(), 1.0, epsilon = 1e-10);
        let a = random_density(&dims, 6, 42).unwrap();
        let b = random_density(&dims, 6, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_density(&dims, 6, 43).unwrap());
        for seed in 0..20 {
            for rank in 1..=6 {
                assert!(validate(&random_density(&dims, rank, seed).unwrap(), STATE_TOL).is_empty());
            }
        }
        assert!(random_density(&dims, 0, 1).is_err());
        assert!(random_density(&dims, 7, 1).is_err());
    }

    #[test]
    fn permutation_invariance() {
        for x in [0.0, 0.3, 1.0] {
            let g = white_noise_mix(&ghz_state(4, 2).unwrap(), x).unwrap();
            assert!(is_permutation_invariant(&g, 1e-12).unwrap());
            let w = white_noise_mix(&w_state(), x).unwrap();
            assert!(is_permutation_invariant(&w, 1e-12).unwrap());
        }
        let dims = SystemDims::uniform(2, 2).unwrap();
        let ket01 = DensityMatrix::from_pure(dims, &[c(0.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert!(!is_permutation_invariant(&ket01, 1e-12).unwrap());

        let mixed_dims = DensityMatrix::maximally_mixed(SystemDims::new(vec![2, 3]).unwrap());
        assert!(matches!(is_permutation_invariant(&mixed_dims, 1e-12), Err(Error::Unsupported(_))));
    }
}
