//! Trace-norm separability and GME criteria.
//!
//! For a bipartition `L | R` with lead party `r0 = R[0]`, a state separable
//! across the split satisfies `||F||_tr <= W`, where
//!
//! ```text
//! W = sqrt(B(L)) * (|alpha| sqrt(d_r0 - 1) + |beta| sqrt(B(R)))
//! B(P) = d_p - 1                                          if |P| = 1
//!      = (prod d_p * (|P| - 1 - sum d_p^-2) + 1) / (|P| - 1)  otherwise
//! ```
//!
//! `B(P)` bounds the squared norm of the full correlation vector of `P`.
//! Averaging `||F||_tr` over every bipartition with `|L| <= n/2` gives the
//! aggregate `T`; a state with `T > K = max W` is genuinely multipartite
//! entangled, and for permutation-invariant states `T > J = mean W` suffices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{enumerate_bipartitions, extract_tensor, f_matrix, Bipartition, CorrelationTensor};
use crate::error::{Error, Result};
use crate::states::{is_permutation_invariant, DensityMatrix, SystemDims};

/// Margin applied to every strict inequality verdict; ties are not detections.
pub const VERDICT_TOL: f64 = 1e-12;

/// Tolerance used to confirm permutation invariance before applying `J`.
pub const PI_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionParams {
    pub alpha: f64,
    pub beta: f64,
}

impl CriterionParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha={alpha}, beta={beta} must be finite")));
        }
        if alpha == 0.0 && beta == 0.0 {
            return Err(Error::InvalidParameter("alpha and beta cannot both be zero".into()));
        }
        Ok(Self { alpha, beta })
    }
}

impl Default for CriterionParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }
}

/// Sum of singular values.
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().sum()
}

/// Bound on the squared norm of the full correlation vector of a group of
/// parties with local dimensions `dims`.
pub fn correlation_norm_bound(dims: &[usize]) -> f64 {
    match dims {
        [] => 0.0,
        [d] => *d as f64 - 1.0,
        _ => {
            let m = dims.len() as f64;
            let prod: f64 = dims.iter().map(|&d| d as f64).product();
            let inv_sq: f64 = dims.iter().map(|&d| 1.0 / (d as f64 * d as f64)).sum();
            (prod * (m - 1.0 - inv_sq) + 1.0) / (m - 1.0)
        }
    }
}

fn check_supported(bipartition: &Bipartition, dims: &SystemDims) -> Result<()> {
    let n = dims.n();
    if n < 3 {
        return Err(Error::Unsupported(format!("the criteria need n >= 3 parties, got {n}")));
    }
    if bipartition.n() != n {
        return Err(Error::DimensionMismatch(format!("bipartition {bipartition} for {n} parties")));
    }
    Ok(())
}

/// Separability threshold `W` for one bipartition.
pub fn threshold_w(bipartition: &Bipartition, dims: &SystemDims, params: &CriterionParams) -> Result<f64> {
    check_supported(bipartition, dims)?;
    let left = correlation_norm_bound(&dims.select(bipartition.left()));
    let right = correlation_norm_bound(&dims.select(bipartition.right()));
    let lead = dims[bipartition.lead()] as f64 - 1.0;
    Ok(left.sqrt() * (params.alpha.abs() * lead.sqrt() + params.beta.abs() * right.sqrt()))
}

/// Outcome of the separability test on one bipartition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartitionRecord {
    pub bipartition: Bipartition,
    pub trace_norm: f64,
    pub threshold: f64,
    /// `||F||_tr > W`: the state is not separable across this bipartition.
    pub excluded: bool,
}

impl BipartitionRecord {
    /// `W - ||F||_tr`; negative when the bipartition is excluded.
    pub fn margin(&self) -> f64 {
        self.threshold - self.trace_norm
    }
}

pub fn bipartition_check(
    tensor: &CorrelationTensor,
    bipartition: &Bipartition,
    params: &CriterionParams,
) -> Result<BipartitionRecord> {
    let threshold = threshold_w(bipartition, tensor.dims(), params)?;
    let f = f_matrix(tensor, bipartition, params.alpha, params.beta)?;
    let norm = trace_norm(&f.matrix);
    Ok(BipartitionRecord {
        bipartition: bipartition.clone(),
        trace_norm: norm,
        threshold,
        excluded: norm > threshold + VERDICT_TOL,
    })
}

fn all_records(tensor: &CorrelationTensor, params: &CriterionParams) -> Result<Vec<BipartitionRecord>> {
    enumerate_bipartitions(tensor.dims().n())?
        .par_iter()
        .map(|b| bipartition_check(tensor, b, params))
        .collect()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    sum / count as f64
}

/// Average of `||F||_tr` over all enumerated bipartitions.
pub fn aggregate_t(tensor: &CorrelationTensor, params: &CriterionParams) -> Result<f64> {
    Ok(mean(all_records(tensor, params)?.iter().map(|r| r.trace_norm)))
}

fn thresholds(dims: &SystemDims, params: &CriterionParams) -> Result<Vec<f64>> {
    enumerate_bipartitions(dims.n())?
        .iter()
        .map(|b| threshold_w(b, dims, params))
        .collect()
}

/// Largest `W` over all enumerated bipartitions.
pub fn k_threshold(dims: &SystemDims, params: &CriterionParams) -> Result<f64> {
    Ok(thresholds(dims, params)?.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Mean `W` over all enumerated bipartitions, for permutation-invariant states.
pub fn j_threshold(dims: &SystemDims, params: &CriterionParams) -> Result<f64> {
    if !dims.is_uniform() {
        return Err(Error::Unsupported(format!(
            "J needs equal local dimensions, got {:?}",
            dims.as_slice()
        )));
    }
    Ok(mean(thresholds(dims, params)?.into_iter()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub params: CriterionParams,
    pub dims: SystemDims,
    /// One record per bipartition, in enumeration order.
    pub records: Vec<BipartitionRecord>,
    /// Aggregate `T`.
    pub aggregate: f64,
    /// `K`, the largest threshold.
    pub k_threshold: f64,
    /// `J`, present only when the permutation-invariant test was requested.
    pub j_threshold: Option<f64>,
    pub gme_detected: bool,
    pub gme_detected_pi: Option<bool>,
    /// Bipartitions across which the state is certainly not separable.
    pub nonseparable: Vec<Bipartition>,
}

impl CriterionReport {
    /// Smallest `W - ||F||_tr` over all bipartitions.
    pub fn min_margin(&self) -> f64 {
        self.records.iter().map(BipartitionRecord::margin).fold(f64::INFINITY, f64::min)
    }

    pub fn record(&self, bipartition: &Bipartition) -> Option<&BipartitionRecord> {
        self.records.iter().find(|r| &r.bipartition == bipartition)
    }
}

/// Runs every criterion on a precomputed tensor. `use_pi` adds `J` without
/// checking permutation invariance; [`detect`] performs that check.
pub fn detect_tensor(tensor: &CorrelationTensor, params: &CriterionParams, use_pi: bool) -> Result<CriterionReport> {
    let dims = tensor.dims().clone();
    let records = all_records(tensor, params)?;
    let aggregate = mean(records.iter().map(|r| r.trace_norm));
    let k = records.iter().map(|r| r.threshold).fold(f64::NEG_INFINITY, f64::max);
    let j = if use_pi { Some(j_threshold(&dims, params)?) } else { None };
    let nonseparable = records.iter().filter(|r| r.excluded).map(|r| r.bipartition.clone()).collect();
    Ok(CriterionReport {
        params: *params,
        dims,
        aggregate,
        k_threshold: k,
        j_threshold: j,
        gme_detected: aggregate > k + VERDICT_TOL,
        gme_detected_pi: j.map(|j| aggregate > j + VERDICT_TOL),
        nonseparable,
        records,
    })
}

pub fn detect(rho: &DensityMatrix, params: &CriterionParams, use_pi: bool) -> Result<CriterionReport> {
    if rho.n() < 3 {
        return Err(Error::Unsupported(format!("the criteria need n >= 3 parties, got {}", rho.n())));
    }
    if use_pi && !is_permutation_invariant(rho, PI_TOL)? {
        return Err(Error::Precondition(
            "the permutation-invariant threshold J requires a permutation-invariant state".into(),
        ));
    }
    detect_tensor(&extract_tensor(rho), params, use_pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ghz_state, w_state, white_noise_mix};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;

    fn params(a: f64, b: f64) -> CriterionParams {
        CriterionParams::new(a, b).unwrap()
    }

    fn qubits(n: usize) -> SystemDims {
        SystemDims::uniform(n, 2).unwrap()
    }

    #[test]
    fn trace_norm_examples() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert_abs_diff_eq!(trace_norm(&DMatrix::identity(2, 2)), 2.0, epsilon = 1e-14);
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![c(3.0), c(-4.0)]));
        assert_abs_diff_eq!(trace_norm(&d), 7.0, epsilon = 1e-14);

        let u = DVector::from_vec(vec![c(1.0), Complex64::new(0.0, 2.0), c(-2.0)]);
        let v = DVector::from_vec(vec![c(3.0), Complex64::new(4.0, 0.0)]);
        assert_abs_diff_eq!(trace_norm(&(&u * v.adjoint())), 3.0 * 5.0, epsilon = 1e-12);
        assert_eq!(trace_norm(&DMatrix::zeros(0, 3)), 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(CriterionParams::new(0.0, 0.0).is_err());
        assert!(CriterionParams::new(f64::NAN, 1.0).is_err());
        assert!(CriterionParams::new(0.0, 1.0).is_ok());
        assert_eq!(CriterionParams::default(), params(1.0, 1.0));
    }

    #[test]
    fn three_qubit_thresholds() {
        for b in enumerate_bipartitions(3).unwrap() {
            let w = threshold_w(&b, &qubits(3), &params(1.0, 1.0)).unwrap();
            assert_abs_diff_eq!(w, 1.0 + 3f64.sqrt(), epsilon = 1e-12);
        }
        let k = k_threshold(&qubits(3), &params(0.1, 2.0)).unwrap();
        assert_abs_diff_eq!(k, 0.1 + 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        let j = j_threshold(&qubits(3), &params(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(j, 1.0 + 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn four_qubit_thresholds() {
        let p = params(0.1, 1.2);
        let single = threshold_w(&"1|234".parse().unwrap(), &qubits(4), &p).unwrap();
        assert_abs_diff_eq!(single, 0.1 + 1.2 * 5.5f64.sqrt(), epsilon = 1e-12);
        let pair = threshold_w(&"13|24".parse().unwrap(), &qubits(4), &p).unwrap();
        assert_abs_diff_eq!(pair, 3.6 + 0.1 * 3f64.sqrt(), epsilon = 1e-12);

        let k = k_threshold(&qubits(4), &p).unwrap();
        assert_abs_diff_eq!(k, pair, epsilon = 1e-15);
        assert_abs_diff_eq!(k, 3.773205080756888, epsilon = 1e-12);

        let j = j_threshold(&qubits(4), &p).unwrap();
        let want = (110.0 + 12.0 * 22f64.sqrt() + 3.0 * 3f64.sqrt()) / 50.0;
        assert_abs_diff_eq!(j, want, epsilon = 1e-12);
        assert!(j <= k);
    }

    #[test]
    fn unsupported_sizes() {
        let b2 = Bipartition::new(2, vec![0]).unwrap();
        assert!(matches!(threshold_w(&b2, &qubits(2), &params(1.0, 1.0)), Err(Error::Unsupported(_))));
        assert!(k_threshold(&qubits(2), &params(1.0, 1.0)).is_err());
        let mixed = SystemDims::new(vec![2, 2, 3]).unwrap();
        assert!(matches!(j_threshold(&mixed, &params(1.0, 1.0)), Err(Error::Unsupported(_))));
        assert!(detect(&ghz_state(2, 2).unwrap(), &params(1.0, 1.0), false).is_err());
    }

    #[test]
    fn norm_bound_values() {
        assert_eq!(correlation_norm_bound(&[3]), 2.0);
        assert_abs_diff_eq!(correlation_norm_bound(&[2, 2]), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(correlation_norm_bound(&[2, 2, 2]), 5.5, epsilon = 1e-15);
    }

    #[test]
    fn ghz_single_split() {
        let p = params(0.1, 1.2);
        let bip: Bipartition = "1|234".parse().unwrap();
        let ghz = ghz_state(4, 2).unwrap();
        let rec = bipartition_check(&extract_tensor(&ghz), &bip, &p).unwrap();
        assert_abs_diff_eq!(rec.trace_norm, 6.1, epsilon = 1e-3);
        assert!(rec.excluded);

        for (x, excluded) in [(0.47, false), (0.49, true)] {
            let t = extract_tensor(&white_noise_mix(&ghz, x).unwrap());
            assert_eq!(bipartition_check(&t, &bip, &p).unwrap().excluded, excluded, "x={x}");
        }
    }

    #[test]
    fn maximally_mixed_is_never_excluded() {
        let mm = DensityMatrix::maximally_mixed(SystemDims::new(vec![2, 3, 2]).unwrap());
        let report = detect(&mm, &params(1.0, 1.0), false).unwrap();
        assert!(report.aggregate < 1e-15);
        assert!(report.records.iter().all(|r| r.trace_norm < 1e-15 && !r.excluded));
        assert!(report.min_margin() > 0.0);
        assert!(!report.gme_detected);
        assert!(report.nonseparable.is_empty());
    }

    #[test]
    fn w_state_aggregate() {
        let t = extract_tensor(&w_state());
        assert_abs_diff_eq!(aggregate_t(&t, &params(1.0, 1.0)).unwrap(), 4.7952, epsilon = 5e-4);
        let p = params(0.1, 2.0);
        assert!(detect(&white_noise_mix(&w_state(), 0.6).unwrap(), &p, false).unwrap().gme_detected);
        assert!(!detect(&white_noise_mix(&w_state(), 0.5).unwrap(), &p, false).unwrap().gme_detected);
    }

    #[test]
    fn ghz_permutation_invariant_detection() {
        let p = params(0.1, 1.2);
        let ghz = ghz_state(4, 2).unwrap();
        let t = extract_tensor(&ghz);
        assert_abs_diff_eq!(aggregate_t(&t, &p).unwrap(), 151.0 / 25.0, epsilon = 1e-3);

        let report = detect(&white_noise_mix(&ghz, 0.6).unwrap(), &p, true).unwrap();
        assert_eq!(report.gme_detected_pi, Some(true));
        // K is stricter than J here: 0.6 * 6.04 < 3.7732
        assert!(!report.gme_detected);
        assert_eq!(report.records.len(), 10);
        assert!(report.j_threshold.unwrap() <= report.k_threshold);
    }

    #[test]
    fn pi_precondition_enforced() {
        let rho = crate::states::random_density(&qubits(3), 2, 4).unwrap();
        assert!(matches!(detect(&rho, &params(1.0, 1.0), true), Err(Error::Precondition(_))));
        assert!(detect(&rho, &params(1.0, 1.0), false).is_ok());
    }

    #[test]
    fn report_serializes_bipartitions_as_strings() {
        let report = detect(&w_state(), &params(1.0, 1.0), true).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["records"][0]["bipartition"], "1|23");
        assert_eq!(json["dims"], serde_json::json!([2, 2, 2]));
        assert_eq!(json["gme_detected"], true);
    }
}
