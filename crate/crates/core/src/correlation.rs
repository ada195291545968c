//! Correlation tensors in the tensor-product Weyl basis and their
//! bipartite matricizations.
//!
//! A state expands as `rho = (1/D) sum_mu t_mu A_{mu_1} (x) ... (x) A_{mu_n}`
//! with `t_mu = tr(rho (A_{mu_1} (x) ... (x) A_{mu_n})^dagger)`.
//!
//! Parties are 0-based in the API and 1-based when a [`Bipartition`] is
//! displayed or parsed (`"14|23"`).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gpops::{root_power, WeylIndex};
use crate::states::{distinct_in_range, strides_of, DensityMatrix, SystemDims};

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    dims: SystemDims,
    /// Row-major over `(mu_1, ..., mu_n)`, last party fastest.
    coeffs: Vec<Complex64>,
    strides: Vec<usize>,
}

impl CorrelationTensor {
    pub fn from_coeffs(dims: SystemDims, coeffs: Vec<Complex64>) -> Result<Self> {
        let local: Vec<usize> = dims.as_slice().iter().map(|d| d * d).collect();
        let len: usize = local.iter().product();
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a tensor of {len}",
                coeffs.len()
            )));
        }
        Ok(Self { strides: strides_of(&local), dims, coeffs })
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at multi-index `mu`. Panics if `mu` is out of range.
    pub fn get(&self, mu: &[usize]) -> Complex64 {
        assert_eq!(mu.len(), self.dims.n(), "multi-index length");
        let flat = mu
            .iter()
            .zip(&self.strides)
            .zip(self.dims.as_slice())
            .map(|((&m, &s), &d)| {
                assert!(m < d * d, "index {m} out of range for d={d}");
                m * s
            })
            .sum::<usize>();
        self.coeffs[flat]
    }

    fn flat(&self, mu: &[usize]) -> usize {
        mu.iter().zip(&self.strides).map(|(m, s)| m * s).sum()
    }

    fn multi_index(&self, flat: usize) -> Vec<usize> {
        self.strides
            .iter()
            .zip(self.dims.as_slice())
            .map(|(&s, &d)| (flat / s) % (d * d))
            .collect()
    }

    fn check_parties(&self, parties: &[usize]) -> Result<()> {
        let n = self.dims.n();
        if parties.is_empty() {
            return Err(Error::InvalidParty("empty party list".into()));
        }
        if !distinct_in_range(parties, n) {
            return Err(Error::InvalidParty(format!(
                "{parties:?} has repeated or out-of-range parties for n={n}"
            )));
        }
        Ok(())
    }
}

/// Digits of every basis state, one row per party.
fn basis_digits(dims: &SystemDims) -> Vec<Vec<usize>> {
    let strides = dims.strides();
    dims.as_slice()
        .iter()
        .zip(&strides)
        .map(|(&d, &s)| (0..dims.total()).map(|r| (r / s) % d).collect())
        .collect()
}

/// `t_mu = tr(rho B_mu^dagger)` for every multi-index.
///
/// `B_mu` has a single nonzero entry per row, so each coefficient is a sum of
/// `D` products: `sum_r rho[r, col(r)] * conj(phase(r))`.
pub fn extract_tensor(rho: &DensityMatrix) -> CorrelationTensor {
    let dims = rho.dims().clone();
    let local: Vec<usize> = dims.as_slice().iter().map(|d| d * d).collect();
    let len: usize = local.iter().product();
    let tensor_strides = strides_of(&local);
    let state_strides = dims.strides();
    let digits = basis_digits(&dims);
    let m = rho.matrix();

    let coeffs = (0..len)
        .into_par_iter()
        .map(|flat| {
            let ops: Vec<WeylIndex> = dims
                .as_slice()
                .iter()
                .zip(&tensor_strides)
                .map(|(&d, &s)| WeylIndex::from_mu(d, (flat / s) % (d * d)).expect("in range"))
                .collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..dims.total() {
                let mut col = 0;
                let mut phase = Complex64::new(1.0, 0.0);
                for (s, op) in ops.iter().enumerate() {
                    let digit = digits[s][r];
                    col += op.column_of(digit) * state_strides[s];
                    phase *= root_power(op.d(), op.phase_exponent(digit));
                }
                acc += m[(r, col)] * phase.conj();
            }
            acc
        })
        .collect();

    CorrelationTensor { dims, coeffs, strides: tensor_strides }
}

/// `rho = (1/D) sum_mu t_mu B_mu`.
pub fn reconstruct(tensor: &CorrelationTensor) -> DensityMatrix {
    let dims = tensor.dims.clone();
    let total = dims.total();
    let state_strides = dims.strides();
    let digits = basis_digits(&dims);
    let scale = 1.0 / total as f64;

    let mut matrix = DMatrix::zeros(total, total);
    for (flat, &t) in tensor.coeffs.iter().enumerate() {
        if t == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ops: Vec<WeylIndex> = tensor
            .multi_index(flat)
            .into_iter()
            .zip(dims.as_slice())
            .map(|(mu, &d)| WeylIndex::from_mu(d, mu).expect("in range"))
            .collect();
        for r in 0..total {
            let mut col = 0;
            let mut phase = Complex64::new(scale, 0.0);
            for (s, op) in ops.iter().enumerate() {
                let digit = digits[s][r];
                col += op.column_of(digit) * state_strides[s];
                phase *= root_power(op.d(), op.phase_exponent(digit));
            }
            matrix[(r, col)] += t * phase;
        }
    }
    DensityMatrix::from_raw(dims, matrix).expect("shape matches dims")
}

/// Enumerates the non-identity local indices of `parties`, last party fastest.
fn nonidentity_indices(dims: &SystemDims, parties: &[usize]) -> Vec<Vec<usize>> {
    let ranges: Vec<usize> = parties.iter().map(|&p| dims[p] * dims[p] - 1).collect();
    let count: usize = ranges.iter().product();
    let strides = strides_of(&ranges);
    (0..count)
        .map(|k| ranges.iter().zip(&strides).map(|(&r, &s)| (k / s) % r + 1).collect())
        .collect()
}

/// Coefficients `t` with non-identity indices at `part` and identity elsewhere.
pub fn t_vector(tensor: &CorrelationTensor, part: &[usize]) -> Result<DVector<Complex64>> {
    tensor.check_parties(part)?;
    let mut mu = vec![0; tensor.dims.n()];
    let entries: Vec<Complex64> = nonidentity_indices(&tensor.dims, part)
        .into_iter()
        .map(|local| {
            for (&p, &u) in part.iter().zip(&local) {
                mu[p] = u;
            }
            tensor.coeffs[tensor.flat(&mu)]
        })
        .collect();
    Ok(DVector::from_vec(entries))
}

/// Matricization with rows indexed by `left` and columns by `right`; parties
/// in neither list sit at the identity index.
pub fn s_matrix(tensor: &CorrelationTensor, left: &[usize], right: &[usize]) -> Result<DMatrix<Complex64>> {
    tensor.check_parties(left)?;
    tensor.check_parties(right)?;
    if left.iter().any(|p| right.contains(p)) {
        return Err(Error::InvalidParty(format!("{left:?} and {right:?} overlap")));
    }
    let rows = nonidentity_indices(&tensor.dims, left);
    let cols = nonidentity_indices(&tensor.dims, right);
    let mut mu = vec![0; tensor.dims.n()];
    let mut out = DMatrix::zeros(rows.len(), cols.len());
    for (r, ru) in rows.iter().enumerate() {
        for (&p, &u) in left.iter().zip(ru) {
            mu[p] = u;
        }
        for (c, cu) in cols.iter().enumerate() {
            for (&p, &u) in right.iter().zip(cu) {
                mu[p] = u;
            }
            out[(r, c)] = tensor.coeffs[tensor.flat(&mu)];
        }
    }
    Ok(out)
}

/// Split of parties `0..n` into a left group of at most `n/2` parties and its
/// complement. The first right party is the one paired with the left group in
/// the alpha block of [`f_matrix`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// Left group as given, right group the ascending complement.
    pub fn new(n: usize, left: Vec<usize>) -> Result<Self> {
        let right = (0..n).filter(|p| !left.contains(p)).collect();
        Self::with_order(left, right)
    }

    pub fn with_order(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let n = left.len() + right.len();
        let all: Vec<usize> = left.iter().chain(&right).copied().collect();
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidParty("both sides of a bipartition must be nonempty".into()));
        }
        if !distinct_in_range(&all, n) {
            return Err(Error::InvalidParty(format!(
                "{left:?}|{right:?} does not partition 0..{n}"
            )));
        }
        if left.len() > n / 2 {
            return Err(Error::InvalidParty(format!(
                "left group of {} parties exceeds n/2 = {}",
                left.len(),
                n / 2
            )));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn n(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// First right party.
    pub fn lead(&self) -> usize {
        self.right[0]
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.n() <= 9;
        let side = |parties: &[usize]| {
            let names: Vec<String> = parties.iter().map(|p| (p + 1).to_string()).collect();
            names.join(if compact { "" } else { "," })
        };
        write!(f, "{}|{}", side(&self.left), side(&self.right))
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    /// Parses `"1|234"` or `"1,10|2,...,9"` (1-based parties).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParty(format!("cannot parse bipartition {s:?}"));
        let (l, r) = s.trim().split_once('|').ok_or_else(bad)?;
        let side = |part: &str| -> Result<Vec<usize>> {
            let tokens: Vec<String> = if part.contains(',') {
                part.split(',').map(|t| t.trim().to_string()).collect()
            } else {
                part.chars().map(String::from).collect()
            };
            tokens
                .iter()
                .map(|t| match t.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(bad()),
                })
                .collect()
        };
        Self::with_order(side(l)?, side(r)?)
    }
}

impl Serialize for Bipartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Every bipartition with a left group of `1..=n/2` parties, grouped by size,
/// lexicographic within a size.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 3 {
        return Err(Error::Unsupported(format!("the criteria need n >= 3 parties, got {n}")));
    }
    let mut out = Vec::new();
    for size in 1..=n / 2 {
        for_each_subset(n, size, &mut |subset| {
            out.push(Bipartition::new(n, subset.to_vec()).expect("valid subset"));
        });
    }
    Ok(out)
}

fn for_each_subset(n: usize, size: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for p in start..n {
            cur.push(p);
            rec(p + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::with_capacity(size), f);
}

/// The stacked matrix `[alpha * S0; beta * S]` for one bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct FMatrix {
    pub bipartition: Bipartition,
    pub alpha: f64,
    pub beta: f64,
    pub matrix: DMatrix<Complex64>,
    /// Rows in each of the two blocks.
    pub block_rows: usize,
    /// Nonzero columns of the top block; the rest is the zero padding.
    pub lead_cols: usize,
}

impl FMatrix {
    pub fn top(&self) -> DMatrix<Complex64> {
        self.matrix.rows(0, self.block_rows).into_owned()
    }

    pub fn bottom(&self) -> DMatrix<Complex64> {
        self.matrix.rows(self.block_rows, self.block_rows).into_owned()
    }
}

pub fn f_matrix(tensor: &CorrelationTensor, bipartition: &Bipartition, alpha: f64, beta: f64) -> Result<FMatrix> {
    if bipartition.n() != tensor.dims.n() {
        return Err(Error::DimensionMismatch(format!(
            "bipartition {bipartition} of {} parties for a {}-party tensor",
            bipartition.n(),
            tensor.dims.n()
        )));
    }
    let s0 = s_matrix(tensor, bipartition.left(), &[bipartition.lead()])?;
    let s = s_matrix(tensor, bipartition.left(), bipartition.right())?;
    let (rows, cols, lead_cols) = (s.nrows(), s.ncols(), s0.ncols());

    let a = Complex64::new(alpha, 0.0);
    let b = Complex64::new(beta, 0.0);
    let mut matrix = DMatrix::zeros(2 * rows, cols);
    matrix.view_mut((0, 0), (rows, lead_cols)).copy_from(&(s0 * a));
    matrix.view_mut((rows, 0), (rows, cols)).copy_from(&(s * b));
    Ok(FMatrix {
        bipartition: bipartition.clone(),
        alpha,
        beta,
        matrix,
        block_rows: rows,
        lead_cols,
    })
}
