//! Limiting spectral distributions of sparse inhomogeneous Erdős–Rényi graphs.
//!
//! Three independent routes to the same measure:
//! exact moments summed over Special Symmetric partitions ([`moments`]),
//! a Bessel-kernel fixed point for the Stieltjes transform ([`stieltjes`]),
//! and Monte Carlo eigenvalues of sampled graphs ([`ensembles`], [`spectra`]).

pub mod cli;
pub mod config;
pub mod eigen;
pub mod ensembles;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod moments;
pub mod partitions;
pub mod spectra;
pub mod stieltjes;

pub use error::{Error, Result};
