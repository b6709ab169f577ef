//! Deep naive partial-label learning.
//!
//! This crate holds everything that does not touch the filesystem: a fixed-family
//! multilayer perceptron with batch normalization and hand-derived gradients, the
//! Yogi and SGD update rules, the partial-label loss and risk functionals, synthetic
//! data generators with controllable ambiguity, the training loop, and numeric
//! calculators for the classic learnability bounds.
//!
//! The crate is `no_std` and only needs `alloc`. The `std` feature (on by default)
//! only turns on runtime SIMD detection in the matrix-multiply backend.
//!
//! All arithmetic is `f64`.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod data;
mod error;
pub mod losses;
pub mod matrix;
pub mod nn;
pub mod optim;
pub mod rng;
pub mod snapshot;
pub mod stats;
pub mod theory;
pub mod train;

pub use data::{
    ambiguity_degree_analytic, ambiguity_degree_estimate, gen_gaussian_blobs, gen_partial_labels,
    kfold_split, random_relabel, subset_indices, AmbiguityEstimate, BlobSpec, CandidateMasks, FlipKind, FlipSpec, Fold, PllDataset,
};
pub use error::{Error, Result};
pub use losses::{
    avg_log_loss, cc_risk, classification_error, cross_entropy, generalization_gap, naive_loss,
    partial_zero_one_risk, PROB_FLOOR,
};
pub use matrix::Matrix;
pub use nn::{init_model, init_model_scaled, Cache, Forward, Gradients, Mode, ModelParams, ModelSpec, Parameters};
pub use optim::{sgd_step, YogiConfig, YogiState};
pub use train::{train, LossKind, MetricsRecord, OptimizerKind, TrainConfig};
