//! Low-rank + sparse decomposition: proximal operators, IALM and APG robust
//! PCA, the partial-sum variant, and the reweighted patch-tensor solver.

mod prox;
mod rpca;
mod synth;
mod tensor;

pub use prox::{
    energy_rank, partial_svt, partial_svt_with_sigma, singular_values, soft_threshold, svt,
    svt_with_sigma,
};
pub use rpca::{rpca_apg, rpca_ialm, RpcaConfig, RpcaResult};
pub use synth::{synthetic_low_rank_sparse, synthetic_low_rank_sparse_tensor};
pub use tensor::{fold_mode, tensor_rpca, unfold_mode, TensorRpcaConfig, TensorRpcaResult};

use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

/// Convergence record shared by the matrix and tensor solvers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    /// Iterations actually executed before returning.
    pub iterations: usize,
    /// Number of spectral factorizations performed.
    pub svd_count: usize,
    /// Per-iteration relative residual `||D - B - T||_F / ||D||_F`.
    pub residual_trace: Vec<f64>,
    /// Whether a stopping rule fired before the iteration budget ran out.
    pub converged: bool,
    /// Whether the support-stability rule fired before the residual test.
    pub early_stopped: bool,
    /// Iteration at which the support-stability rule fired, when tracked.
    pub early_stop_iteration: Option<usize>,
    /// Iteration at which the plain residual test passed, when tracked.
    pub residual_iteration: Option<usize>,
}

impl SolverDiagnostics {
    pub(crate) fn new() -> Self {
        Self {
            iterations: 0,
            svd_count: 0,
            residual_trace: Vec::new(),
            converged: false,
            early_stopped: false,
            early_stop_iteration: None,
            residual_iteration: None,
        }
    }
}

pub(crate) fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn frobenius3(a: &Array3<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
