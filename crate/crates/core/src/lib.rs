//! Compound matrices, sign-regularity, and diagonal Lyapunov certificates for
//! discrete-time k-positive systems.
//!
//! The crate is organized bottom-up:
//!
//! - [`matcore`]: dense matrices, lexicographic index sets, minors, spectra.
//! - [`compound`]: multiplicative compounds A^(k), wedge products, k-content.
//! - [`signreg`]: sign variations, the cones P^k_∓, SR_k / SSR_k classification.
//! - [`stability`]: Schur and Stein tests, diagonal certificates for A^(k),
//!   recovery of a diagonal P from P^(n-1) = D, principal-minor screens.
//! - [`cyclic`]: cyclic chains with a signed feedback corner.
//! - [`nonlinear`]: x(j+1) = A φ(x(j)) with wedge-trajectory Lyapunov diagnostics.
//! - [`reference`]: the worked matrices used in regression tests and demos.

pub mod compound;
pub mod cyclic;
pub mod error;
pub mod matcore;
pub mod nonlinear;
pub mod reference;
pub mod signreg;
pub mod stability;

pub use error::{Error, Result};
pub use matcore::{LexIndexSet, Mat, PositiveDiagonal, DEFAULT_PD_TOL, DEFAULT_ZERO_TOL};
