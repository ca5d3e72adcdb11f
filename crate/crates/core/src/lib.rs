//! Numerical library for a single-qubit dephasing probe of Ohmic-family
//! environments.
//!
//! A qubit coupled to a bosonic bath with spectral density
//! `J(w) = eta * w^s * wc^(1-s) * exp(-w/wc)` accumulates a decoherence
//! exponent `gamma` in its off-diagonal coherence. This crate computes
//! `gamma` in scaled variables (`tau = wc * t`, `theta = T / wc`), the
//! quantum and classical Fisher information for estimating the cutoff
//! `wc`, the scale-invariant signal-to-noise ratio, its optima over the
//! interrogation time, and Monte Carlo Ramsey experiments that check the
//! Cramer-Rao bound.

pub mod cli;
pub mod environment;
pub mod error;
pub mod metrology;
pub mod optimize;
pub mod ramsey;
pub mod specfun;

pub use error::{Error, Result};
