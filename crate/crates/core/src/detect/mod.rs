//! End-to-end detectors: image in, saliency map and mask out, with appendix
//! hyper-parameter defaults and per-stage wall-clock timing.

mod mpcm;

pub use mpcm::{mpcm_naive, mpcm_shifted, MpcmConfig};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::imgproc::{
    adaptive_threshold, fold_tensor, patch_tensor, patchify, unpatchify, white_tophat, BinaryMask,
    GrayImage, PatchConfig, PatchMatrix, PatchTensor, Reducer,
};
use crate::lowrank::{
    rpca_ialm, tensor_rpca, RpcaConfig, SolverDiagnostics, TensorRpcaConfig,
};

/// Wall-clock milliseconds per pipeline stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub ms: f64,
}

/// Detector output: saliency map, segmentation mask, per-stage timing, and
/// solver diagnostics when a low-rank solver ran.
#[derive(Debug, Clone)]
pub struct Detection {
    pub saliency: GrayImage,
    pub mask: BinaryMask,
    pub timing: Vec<StageTiming>,
    pub diagnostics: Option<SolverDiagnostics>,
}

impl Detection {
    pub fn total_ms(&self) -> f64 {
        self.timing.iter().map(|t| t.ms).sum()
    }
}

struct StageClock {
    timing: Vec<StageTiming>,
    last: Instant,
}

impl StageClock {
    fn start() -> Self {
        Self {
            timing: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        let ms = now.duration_since(self.last).as_secs_f64() * 1e3;
        self.timing.push(StageTiming {
            stage: stage.to_string(),
            // Sub-microsecond stages still report a positive duration.
            ms: ms.max(1e-6),
        });
        self.last = now;
    }
}

/// Patch-image separation settings (also the base for the partial-sum variant).
#[derive(Debug, Clone)]
pub struct IpiConfig {
    pub patch: PatchConfig,
    /// Numerator of the sparsity weight: `lambda = l / sqrt(min(dims))` over
    /// the patch-image dimensions.
    pub l: f64,
    /// Threshold factor applied to the folded saliency map.
    pub k: f64,
    pub v_min: f64,
    /// Solver settings; `lambda` is overwritten from `l` and the patch-image
    /// dimensions at run time.
    pub solver: RpcaConfig,
}

impl Default for IpiConfig {
    fn default() -> Self {
        Self {
            patch: PatchConfig::new(50, 10),
            l: 4.5,
            k: 10.0,
            v_min: 0.0,
            solver: RpcaConfig::new(1.0),
        }
    }
}

/// Partial-sum variant defaults: lower `L`, energy-constrained shrinkage, and
/// a nonnegative target projection.
#[derive(Debug, Clone)]
pub struct NippsConfig {
    pub base: IpiConfig,
}

impl Default for NippsConfig {
    fn default() -> Self {
        let mut base = IpiConfig {
            l: 2.0,
            ..Default::default()
        };
        base.solver.energy_ratio = 0.11;
        base.solver.nonneg_target = true;
        NippsConfig { base }
    }
}

/// Patch-tensor separation settings.
#[derive(Debug, Clone)]
pub struct RiptConfig {
    pub patch: PatchConfig,
    /// `lambda = l / sqrt(min(I, J, P))` over the patch-tensor dimensions.
    pub l: f64,
    pub k: f64,
    pub v_min: f64,
    pub solver: TensorRpcaConfig,
}

impl Default for RiptConfig {
    fn default() -> Self {
        let mut solver = TensorRpcaConfig::new(1.0);
        // Detection runs want the early-stop saving, not the tracked
        // comparison against the residual rule.
        solver.track_residual_rule = false;
        Self {
            patch: PatchConfig::new(50, 10),
            l: 0.001,
            k: 10.0,
            v_min: 0.0,
            solver,
        }
    }
}

fn clamp_nonneg(img: GrayImage) -> GrayImage {
    img.map(|v| v.max(0.0))
}

/// Patch-image pipeline: patchify, separate, fold the sparse part, threshold.
pub fn detect_ipi(img: &GrayImage, cfg: &IpiConfig) -> Result<Detection> {
    let mut clock = StageClock::start();
    let pm = patchify(img, &cfg.patch)?;
    clock.lap("patchify");

    let mut solver = cfg.solver.clone();
    solver.lambda = cfg.l / (pm.rows().min(pm.cols()) as f64).sqrt();
    let res = rpca_ialm(&pm.data, &solver)?;
    clock.lap("solve");

    let target = PatchMatrix {
        data: res.target,
        origin: pm.origin.clone(),
    };
    let saliency = clamp_nonneg(unpatchify(&target, Reducer::Mean)?);
    clock.lap("fold");

    let mask = adaptive_threshold(&saliency, cfg.k, cfg.v_min)?;
    clock.lap("threshold");

    Ok(Detection {
        saliency,
        mask,
        timing: clock.timing,
        diagnostics: Some(res.diagnostics),
    })
}

/// Partial-sum pipeline: the patch-image pipeline with the energy-constrained
/// shrinkage and nonnegative target projection.
pub fn detect_nipps(img: &GrayImage, cfg: &NippsConfig) -> Result<Detection> {
    detect_ipi(img, &cfg.base)
}

/// Patch-tensor pipeline: stack windows along the third axis, run the
/// reweighted tensor separation, fold the target, threshold.
pub fn detect_ript(img: &GrayImage, cfg: &RiptConfig) -> Result<Detection> {
    let mut clock = StageClock::start();
    let pt = patch_tensor(img, &cfg.patch)?;
    clock.lap("patchify");

    let (i, j, p) = pt.data.dim();
    let mut solver = cfg.solver.clone();
    solver.lambda = cfg.l / (i.min(j).min(p) as f64).sqrt();
    let res = tensor_rpca(&pt.data, &solver)?;
    clock.lap("solve");

    let target = PatchTensor {
        data: res.target,
        origin: pt.origin.clone(),
    };
    let saliency = clamp_nonneg(fold_tensor(&target, Reducer::Mean)?);
    clock.lap("fold");

    let mask = adaptive_threshold(&saliency, cfg.k, cfg.v_min)?;
    clock.lap("threshold");

    Ok(Detection {
        saliency,
        mask,
        timing: clock.timing,
        diagnostics: Some(res.diagnostics),
    })
}

/// Morphological baseline: white top-hat then threshold.
pub fn detect_tophat(img: &GrayImage, se_size: usize, k: f64) -> Result<Detection> {
    let mut clock = StageClock::start();
    let saliency = white_tophat(img, se_size)?;
    clock.lap("tophat");
    let mask = adaptive_threshold(&saliency, k, 0.0)?;
    clock.lap("threshold");
    Ok(Detection {
        saliency,
        mask,
        timing: clock.timing,
        diagnostics: None,
    })
}

/// Contrast-map detector; `accelerated` picks the shifted implementation.
pub fn detect_mpcm(img: &GrayImage, cfg: &MpcmConfig, accelerated: bool, k: f64) -> Result<Detection> {
    let mut clock = StageClock::start();
    let saliency = if accelerated {
        mpcm_shifted(img, cfg)?
    } else {
        mpcm_naive(img, cfg)?
    };
    clock.lap("contrast");
    let mask = adaptive_threshold(&saliency, k, 0.0)?;
    clock.lap("threshold");
    Ok(Detection {
        saliency,
        mask,
        timing: clock.timing,
        diagnostics: None,
    })
}

/// Default threshold factor for the detectors the parameter table leaves
/// unspecified (contrast and morphology baselines).
pub const DEFAULT_CONTRAST_K: f64 = 3.0;
/// Default structuring element for the top-hat baseline: strictly larger than
/// the 9x9 maximum small-target footprint so targets survive the opening.
pub const DEFAULT_TOPHAT_SE: usize = 11;
