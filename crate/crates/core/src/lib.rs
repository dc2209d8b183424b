//! Freezing limits of beta-Jacobi ensembles.
//!
//! As the multiplicities `k = kappa * (a, b, 1)` of a beta-Jacobi ensemble
//! grow, its ordered eigenvalues concentrate at the zeros `z` of the Jacobi
//! polynomial `P_N^(alpha, beta)` with `alpha = a + b - 1`, `beta = b - 1`,
//! and `sqrt(kappa) (X - z)` becomes Gaussian. This crate computes:
//!
//! * the freezing point and its closed-form scalars ([`freeze`]),
//! * the limiting precision matrices in algebraic and trigonometric
//!   coordinates ([`precision`]),
//! * their spectra, eigenvectors and determinants ([`spectral`]),
//! * Selberg normalization constants and their limit ([`normalization`]),
//! * Hermite and Laguerre degenerations ([`limits`]),
//! * a Metropolis sampler for empirical checks at finite `kappa`
//!   ([`sampler`]).

pub mod error;
pub mod freeze;
pub mod limits;
pub mod linalg;
pub mod normalization;
pub mod params;
pub mod precision;
pub mod recurrence;
pub mod sampler;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
pub use freeze::FreezePoint;
pub use params::EnsembleParams;
pub use precision::{Coordinates, PrecisionMatrix};
