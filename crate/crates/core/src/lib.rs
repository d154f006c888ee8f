//! Semi-supervised kernel machine with two Laplacian regularizers.
//!
//! The learner extends the Laplacian SVM with a second smoothness penalty
//! built from binary indicator features: samples that share indicators are
//! pushed towards the same label, while a heat-kernel graph over a text
//! similarity space supplies the usual intrinsic-geometry penalty.
//!
//! The crate is organised as
//!
//! * [`text`]: tokenization, the 12 binary indicator detectors, n-gram and
//!   TF-IDF similarity construction, unsupervised filtering;
//! * [`kernel`]: linear and RBF kernels and Gram assembly;
//! * [`graph`]: agreement matrix, heat-kernel adjacency, Laplacians;
//! * [`model`]: the dual QP, coefficient recovery, bias and prediction;
//! * [`eval`]: datasets, transductive cross-validation, metrics, chi-squared
//!   ranking, sweeps, ranked export and a synthetic corpus generator.

pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod model;
pub mod text;

pub use error::{Error, Result};
pub use kernel::{GramMatrix, KernelSpec};
pub use model::{Hyperparameters, TrainedModel};
