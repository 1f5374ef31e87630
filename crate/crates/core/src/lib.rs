//! Exact upper bounds on the number of linear regions of ReLU networks.
//!
//! The bound is computed by pushing a histogram of region dimensions through
//! one exact big-integer matrix per layer. Pooling, max-pooling, skip
//! connections and residual blocks each get their own transform. An
//! independent oracle counts actual regions of concrete networks for
//! cross-checking.

pub mod archspec;
pub mod binomial;
pub mod cli;
pub mod engine;
pub mod error;
pub mod gamma;
pub mod histogram;
pub mod oracle;
pub mod transfer;

pub use error::{Error, Result};
pub use gamma::{GammaProvider, GammaVariant};
pub use histogram::Histogram;
