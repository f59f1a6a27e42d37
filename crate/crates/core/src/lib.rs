//! Communications-chain simulator and trainable parametric multi-layer
//! receiver for joint channel estimation and symbol detection.
//!
//! The crate has four parts:
//!
//! * [`augmented`] / [`constellation`] — the augmented real representation
//!   of complex signals, alphabet handling, hard decisions, and symbol
//!   error rate accounting.
//! * [`layers`] — the differentiable layer models (data augmentation, soft
//!   thresholding, IQ imbalance, FIR, piecewise-constant phase), each with
//!   an exact hand-derived VJP, plus their composition in
//!   [`layers::Network`].
//! * [`chain`] — the ground-truth impairment chain that produces observed
//!   frames: 16QAM source, IQ imbalance at both ends, FIR channel, Wiener
//!   phase noise, additive Gaussian noise.
//! * [`trainer`] — the regularized least-squares loss, a from-scratch ADAM
//!   optimizer, the training loop, and the method variants (with/without
//!   the soft-threshold activation, projected gradient).

pub mod augmented;
pub mod chain;
pub mod constellation;
pub mod error;
pub mod layers;
pub mod params;
pub mod rng;
pub mod trainer;

pub use augmented::AugmentedVector;
pub use chain::{simulate_trial, snr_to_noise_var, wiener_phase, ChainConfig, TrialData};
pub use constellation::{random_symbols, symbol_error_rate, Constellation};
pub use error::{Error, Result};
pub use layers::{ForwardCache, Network, PilotPattern};
pub use params::NetworkParams;
pub use trainer::{
    adam_step, detect_symbols, loss, mse, train, AdamState, Method, TraceRow, TrainConfig,
    TrainResult, TrainTrace,
};

/// Re-export of the complex sample type used throughout the crate.
pub use num_complex::Complex64;
