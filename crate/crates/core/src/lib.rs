//! Parameterized fiber-transmission model.
//!
//! The crate trains a small set of basis physics-informed networks on the
//! normalized nonlinear Schrödinger equation at greedily chosen bit
//! rates, then predicts propagation at any rate in the sweep through
//! fitted linear combinations, validated against a split-step Fourier
//! reference solver.

pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod fft;
pub mod grid;
pub mod net;
pub mod physics;
pub mod signal;
pub mod ssfm;

pub use error::{Error, Result};
