//! Single-frame infrared small target detection toolkit.
//!
//! The crate bundles the classic model-driven detectors (top-hat, multiscale
//! patch contrast, and the patch-image / patch-tensor low-rank separations)
//! with their accelerated solver variants, the evaluation metrics used to
//! compare them (IoU, per-sample-normalized IoU, ROC sweeps), a seeded
//! synthetic scene generator for reproducible desk-scale experiments, and a
//! from-scratch, gradient-checked implementation of the asymmetric contextual
//! modulation fusion block and its ablation variants.
//!
//! Modules:
//! - [`imgproc`]: image types, filtering, morphology, patch rearrangement,
//!   adaptive thresholding, PNG/PGM I/O.
//! - [`lowrank`]: proximal operators and the IALM/APG/tensor solvers.
//! - [`detect`]: end-to-end detectors mapping images to saliency maps and masks.
//! - [`acm`]: the attention-fusion block, its variants, losses, and gradient
//!   checks.
//! - [`metrics`]: IoU/nIoU and ROC evaluation.
//! - [`dataset`]: corpus loading, annotation derivations, statistics, and the
//!   synthetic generator.

pub mod acm;
pub mod dataset;
pub mod detect;
pub mod error;
pub mod imgproc;
pub mod lowrank;
pub mod metrics;

pub use error::{Error, Result};
