//! Differentiable layer models of the parametric receiver network.
//!
//! Each layer ships a forward map on the augmented real representation and
//! an exact hand-derived vector-Jacobian product with respect to its input
//! and its trainable parameters. There is no general autodiff graph: the
//! network is a fixed composition of five layer types, so the chain rule is
//! spelled out once in [`Network::backward`].

mod data_augmented;
mod fir;
mod iq;
mod network;
mod phase;
mod soft_threshold;

pub use data_augmented::{data_augmented_forward, data_augmented_vjp, PilotPattern};
pub use fir::{fir_forward, fir_vjp};
pub use iq::{iq_forward, iq_vjp};
pub use network::{ForwardCache, Network};
pub use phase::{phase_forward, phase_vjp};
pub use soft_threshold::{soft_threshold_forward, soft_threshold_vjp};
