//! Proximal operators: entrywise shrinkage and singular-value thresholding.
//!
//! Spectral operators run on the Gram matrix of the smaller side: for
//! `A = U S V^T`, any map `s -> f(s)` of the singular values satisfies
//! `U f(S) V^T = A . V diag(f(s)/s) V^T`, so only the eigendecomposition of
//! `A^T A` (or `A A^T`) is needed and `U` is never formed.

use nalgebra::DMatrix;
use ndarray::Array2;

use crate::error::{Error, Result};

/// Entrywise soft threshold: `sign(m) * max(|m| - tau, 0)`.
pub fn soft_threshold(m: &Array2<f64>, tau: f64) -> Result<Array2<f64>> {
    if tau < 0.0 || !tau.is_finite() {
        return Err(Error::invalid(format!("tau must be nonnegative, got {tau}")));
    }
    Ok(m.mapv(|v| soft_scalar(v, tau)))
}

#[inline]
pub(crate) fn soft_scalar(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}

/// Eigendecomposition of the Gram matrix of the smaller side of `a`.
///
/// Returns singular values (descending) and the corresponding orthonormal
/// basis: right singular vectors when `a` is tall, left when it is wide.
struct GramEig {
    sigma: Vec<f64>,
    /// k x k orthonormal basis, k = min(nrows, ncols); columns follow `sigma`.
    basis: Array2<f64>,
    /// True when the basis holds right singular vectors (tall input).
    right_side: bool,
}

fn gram_eig(a: &Array2<f64>) -> Result<GramEig> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("matrix contains non-finite values"));
    }
    let (m, n) = a.dim();
    let right_side = n <= m;
    let gram = if right_side { a.t().dot(a) } else { a.dot(&a.t()) };
    let k = gram.nrows();
    let gm = DMatrix::from_fn(k, k, |i, j| gram[(i, j)]);
    let eig = gm.symmetric_eigen();

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .ok_or(())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("eigendecomposition produced NaN".into()));
    }

    let sigma: Vec<f64> = order
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    let basis = Array2::from_shape_fn((k, k), |(r, c)| eig.eigenvectors[(r, order[c])]);
    Ok(GramEig {
        sigma,
        basis,
        right_side,
    })
}

/// Apply a singular-value map `s_i -> new_i` to `a` without forming `U`.
///
/// `scale[i]` must equal `new_i / s_i` (0 when the component is dropped).
fn apply_spectral_scale(a: &Array2<f64>, eig: &GramEig, scale: &[f64]) -> Array2<f64> {
    let kept: Vec<usize> = (0..scale.len()).filter(|&i| scale[i] != 0.0).collect();
    if kept.is_empty() {
        return Array2::zeros(a.dim());
    }
    let k = eig.basis.nrows();
    let mut vr = Array2::zeros((k, kept.len()));
    for (c, &i) in kept.iter().enumerate() {
        for r in 0..k {
            vr[(r, c)] = eig.basis[(r, i)];
        }
    }
    if eig.right_side {
        // A . Vr diag(scale) Vr^T
        let mut av = a.dot(&vr);
        for (c, &i) in kept.iter().enumerate() {
            av.column_mut(c).mapv_inplace(|v| v * scale[i]);
        }
        av.dot(&vr.t())
    } else {
        // Vr diag(scale) Vr^T . A
        let mut va = vr.t().dot(a);
        for (r, &i) in kept.iter().enumerate() {
            va.row_mut(r).mapv_inplace(|v| v * scale[i]);
        }
        vr.dot(&va)
    }
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &Array2<f64>) -> Result<Vec<f64>> {
    Ok(gram_eig(a)?.sigma)
}

fn shrink_scales(sigma: &[f64], tau: f64, keep_top: usize) -> Vec<f64> {
    // Components with negligible singular value contribute nothing to A.v
    // regardless of scale; zero them to avoid dividing by ~0.
    let cutoff = sigma.first().copied().unwrap_or(0.0) * 1e-14;
    sigma
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            if s <= cutoff {
                0.0
            } else if i < keep_top {
                1.0
            } else {
                (1.0 - tau / s).max(0.0)
            }
        })
        .collect()
}

/// Singular-value soft threshold of `a` by `tau`, with the singular values
/// of the input returned for diagnostics.
pub fn svt_with_sigma(a: &Array2<f64>, tau: f64) -> Result<(Array2<f64>, Vec<f64>)> {
    partial_svt_with_sigma(a, tau, 0)
}

/// Singular-value soft threshold: `U max(S - tau, 0) V^T`.
pub fn svt(a: &Array2<f64>, tau: f64) -> Result<Array2<f64>> {
    Ok(svt_with_sigma(a, tau)?.0)
}

/// Partial-sum variant: the top `r0` singular values pass through untouched,
/// the remainder are soft-thresholded by `tau`.
pub fn partial_svt(a: &Array2<f64>, tau: f64, r0: usize) -> Result<Array2<f64>> {
    Ok(partial_svt_with_sigma(a, tau, r0)?.0)
}

pub fn partial_svt_with_sigma(
    a: &Array2<f64>,
    tau: f64,
    r0: usize,
) -> Result<(Array2<f64>, Vec<f64>)> {
    if tau < 0.0 || !tau.is_finite() {
        return Err(Error::invalid(format!("tau must be nonnegative, got {tau}")));
    }
    let (m, n) = a.dim();
    if r0 > m.min(n) {
        return Err(Error::invalid(format!(
            "rank {r0} exceeds min dimension {}",
            m.min(n)
        )));
    }
    let eig = gram_eig(a)?;
    let scales = shrink_scales(&eig.sigma, tau, r0);
    let out = apply_spectral_scale(a, &eig, &scales);
    Ok((out, eig.sigma))
}

/// Smallest rank whose leading singular values carry at least `1 - r` of the
/// total singular-value mass. Zero when every singular value is zero.
pub fn energy_rank(singulars: &[f64], r: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::invalid(format!("ratio must be in [0, 1), got {r}")));
    }
    if singulars.windows(2).any(|w| w[0] < w[1]) || singulars.iter().any(|&s| s < 0.0) {
        return Err(Error::invalid(
            "singular values must be nonnegative and nonincreasing",
        ));
    }
    let total: f64 = singulars.iter().sum();
    if total == 0.0 {
        return Ok(0);
    }
    let want = (1.0 - r) * total;
    let mut cum = 0.0;
    for (i, &s) in singulars.iter().enumerate() {
        cum += s;
        if cum >= want {
            return Ok(i + 1);
        }
    }
    Ok(singulars.len())
}
