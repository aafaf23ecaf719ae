//! Direct sampling imaging for time-harmonic inverse acoustic scattering.
//!
//! The crate provides the special functions and kernels the method rests on,
//! a volume integral equation solver for synthetic data, the near- and
//! far-field indicators, and the diagnostics used to validate them.

pub mod diagnostics;
pub mod error;
pub mod forward_model;
pub mod green_kernel;
pub mod indicator;
pub mod measurement;
pub mod pipeline;
pub mod quadrature;
pub mod scenarios;
pub mod special_fn;

pub use error::{DsmError, Result};
pub use green_kernel::{Dim, Direction, Point, WaveContext};
pub use special_fn::ComplexScalar;
