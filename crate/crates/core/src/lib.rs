//! Hermite needlet frames on `ℝ^d` (`d ∈ {1, 2}`).
//!
//! Building blocks, bottom-up:
//!
//! * [`hermite`]: normalized Hermite functions, projector and partial-sum
//!   kernels, Christoffel functions, expansions and projection of functions.
//! * [`quadrature`]: Hermite zeros, Gauss–Hermite rules with Christoffel
//!   weights and product cubature.
//! * [`cutoff`]: smooth cutoffs, dual pairs and the quadratic cutoff.
//! * [`frame`]: needlet frames, analysis and synthesis.
//! * [`spaces`]: Hermite–Triebel–Lizorkin and Besov norms, best
//!   approximation and the translation study.
//!
//! Data-parallel loops run on rayon with the default `parallel` feature and
//! sequentially without it. Both paths reduce in the same fixed order.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cutoff;
pub mod frame;
pub mod error;
pub mod export;
pub mod hermite;
mod par;
pub mod quadrature;
pub mod spaces;
pub mod verify;

pub use error::{ErrorClass, NeedletError, Result};
