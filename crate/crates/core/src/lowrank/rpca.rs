//! Robust PCA solvers: inexact augmented Lagrange multipliers and the
//! accelerated proximal gradient method it replaces.

use ndarray::Array2;

use super::prox::{energy_rank, partial_svt_with_sigma, singular_values, soft_scalar};
use super::{frobenius, SolverDiagnostics};
use crate::error::{Error, Result};

/// Parameters for the matrix decomposition `D = B + T`.
#[derive(Debug, Clone)]
pub struct RpcaConfig {
    /// Sparsity weight on `||T||_1`.
    pub lambda: f64,
    /// Initial penalty; `None` selects `1.25 / sigma_max(D)`.
    pub mu0: Option<f64>,
    /// Penalty growth factor per iteration.
    pub rho: f64,
    /// Relative residual target.
    pub tol: f64,
    pub max_iter: usize,
    /// Project the sparse part to nonnegatives after shrinkage.
    pub nonneg_target: bool,
    /// Partial-sum energy ratio; 0 disables the partial-sum mode.
    pub energy_ratio: f64,
}

impl RpcaConfig {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            mu0: None,
            rho: 1.5,
            tol: 1e-7,
            max_iter: 500,
            nonneg_target: false,
            energy_ratio: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::invalid("lambda must be positive"));
        }
        if let Some(mu0) = self.mu0 {
            if !(mu0 > 0.0 && mu0.is_finite()) {
                return Err(Error::invalid("mu0 must be positive"));
            }
        }
        if !(self.rho > 1.0) {
            return Err(Error::invalid("rho must exceed 1"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::invalid("tol must lie in (0, 1)"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.energy_ratio) {
            return Err(Error::invalid("energy_ratio must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Background/target split plus solver diagnostics.
#[derive(Debug, Clone)]
pub struct RpcaResult {
    pub background: Array2<f64>,
    pub target: Array2<f64>,
    pub diagnostics: SolverDiagnostics,
}

impl RpcaResult {
    pub fn iterations(&self) -> usize {
        self.diagnostics.iterations
    }

    pub fn converged(&self) -> bool {
        self.diagnostics.converged
    }
}

fn check_input(d: &Array2<f64>, cfg: &RpcaConfig) -> Result<()> {
    cfg.validate()?;
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("input matrix contains non-finite values"));
    }
    Ok(())
}

fn zero_result(d: &Array2<f64>) -> RpcaResult {
    let mut diag = SolverDiagnostics::new();
    diag.iterations = 1;
    diag.residual_trace = vec![0.0];
    diag.converged = true;
    RpcaResult {
        background: Array2::zeros(d.dim()),
        target: Array2::zeros(d.dim()),
        diagnostics: diag,
    }
}

/// Singular-value shrinkage used by both solvers: plain soft threshold, or the
/// partial-sum form when an energy ratio is set.
fn shrink_spectrum(
    g: &Array2<f64>,
    tau: f64,
    energy_ratio: f64,
    svd_count: &mut usize,
) -> Result<Array2<f64>> {
    *svd_count += 1;
    if energy_ratio > 0.0 {
        let sigma = singular_values(g)?;
        let r0 = energy_rank(&sigma, energy_ratio)?;
        Ok(partial_svt_with_sigma(g, tau, r0)?.0)
    } else {
        Ok(partial_svt_with_sigma(g, tau, 0)?.0)
    }
}

fn shrink_sparse(g: &Array2<f64>, tau: f64, nonneg: bool) -> Array2<f64> {
    if nonneg {
        g.mapv(|v| soft_scalar(v, tau).max(0.0))
    } else {
        g.mapv(|v| soft_scalar(v, tau))
    }
}

/// Decompose `D = B + T` by inexact augmented Lagrange multipliers.
pub fn rpca_ialm(d: &Array2<f64>, cfg: &RpcaConfig) -> Result<RpcaResult> {
    check_input(d, cfg)?;
    let norm_d = frobenius(d);
    if norm_d == 0.0 {
        return Ok(zero_result(d));
    }

    let mut diag = SolverDiagnostics::new();
    let sigma_max = singular_values(d)?[0];
    diag.svd_count += 1;

    // Dual-norm scaling for the multiplier start.
    let inf_norm = d.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let dual = sigma_max.max(inf_norm / cfg.lambda);
    let mut y = d.mapv(|v| v / dual);

    let mut mu = cfg.mu0.unwrap_or(1.25 / sigma_max);
    let mu_max = mu * 1e7;
    let mut b = Array2::zeros(d.dim());
    let mut t = Array2::zeros(d.dim());

    for it in 1..=cfg.max_iter {
        let g_b = d - &t + &y.mapv(|v| v / mu);
        b = shrink_spectrum(&g_b, 1.0 / mu, cfg.energy_ratio, &mut diag.svd_count)?;

        let g_t = d - &b + &y.mapv(|v| v / mu);
        t = shrink_sparse(&g_t, cfg.lambda / mu, cfg.nonneg_target);

        let z = d - &b - &t;
        y.zip_mut_with(&z, |yv, &zv| *yv += mu * zv);
        mu = (mu * cfg.rho).min(mu_max);

        let res = frobenius(&z) / norm_d;
        diag.residual_trace.push(res);
        diag.iterations = it;
        if res <= cfg.tol {
            diag.converged = true;
            break;
        }
    }
    Ok(RpcaResult {
        background: b,
        target: t,
        diagnostics: diag,
    })
}

/// Decompose `D = B + T` by accelerated proximal gradient with Nesterov
/// extrapolation and a geometric continuation schedule on the smoothing
/// parameter. Solves the same separation at the same residual test, but
/// needs the continuation to run down before the constraint tightens, which
/// is what makes it slower than the multiplier method.
pub fn rpca_apg(d: &Array2<f64>, cfg: &RpcaConfig) -> Result<RpcaResult> {
    check_input(d, cfg)?;
    let norm_d = frobenius(d);
    if norm_d == 0.0 {
        return Ok(zero_result(d));
    }

    let mut diag = SolverDiagnostics::new();
    let sigma_max = singular_values(d)?[0];
    diag.svd_count += 1;

    let (m, n) = d.dim();
    let mut mu = 0.99 * sigma_max;
    // At a fixed point the residual entries scale like lambda * mu, so the
    // continuation floor is set from the requested residual.
    let mu_floor = 0.1 * cfg.tol * norm_d / (cfg.lambda * ((m * n) as f64).sqrt());
    let mu_floor = mu_floor.min(1e-6 * sigma_max).max(1e-15 * sigma_max);
    let eta = 0.9;

    let mut a = Array2::<f64>::zeros(d.dim());
    let mut e = Array2::<f64>::zeros(d.dim());
    let mut a_prev = a.clone();
    let mut e_prev = e.clone();
    let (mut t_k, mut t_prev) = (1.0f64, 1.0f64);

    for it in 1..=cfg.max_iter {
        let beta = (t_prev - 1.0) / t_k;
        let ya = &a + &(&a - &a_prev).mapv(|v| v * beta);
        let ye = &e + &(&e - &e_prev).mapv(|v| v * beta);
        let r = &ya + &ye - d;

        let g_a = &ya - &r.mapv(|v| 0.5 * v);
        let a_next = shrink_spectrum(&g_a, 0.5 * mu, cfg.energy_ratio, &mut diag.svd_count)?;
        let g_e = &ye - &r.mapv(|v| 0.5 * v);
        let e_next = shrink_sparse(&g_e, 0.5 * cfg.lambda * mu, cfg.nonneg_target);

        a_prev = std::mem::replace(&mut a, a_next);
        e_prev = std::mem::replace(&mut e, e_next);
        t_prev = t_k;
        t_k = 0.5 * (1.0 + (1.0 + 4.0 * t_prev * t_prev).sqrt());
        mu = (eta * mu).max(mu_floor);

        let res = frobenius(&(d - &a - &e)) / norm_d;
        diag.residual_trace.push(res);
        diag.iterations = it;
        if res <= cfg.tol {
            diag.converged = true;
            break;
        }
    }
    Ok(RpcaResult {
        background: a,
        target: e,
        diagnostics: diag,
    })
}
