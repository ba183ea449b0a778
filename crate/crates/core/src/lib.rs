//! Certified construction of a hypercyclic rank-one perturbation `T = D + b⊗a`
//! of a unitary diagonal operator on `ℓ²(ℕ)`.
//!
//! The crate builds the defining sequences `λₙ, μₙ, aₙ, b⁽ⁿ⁾` step by step,
//! keeps every unimodular point on an exact dyadic angle, and decides every
//! required strict inequality with outward-rounded interval arithmetic.
//!
//! - [`exactcircle`]: dyadic angles and certified real/complex intervals.
//! - [`cauchy`]: Cauchy matrices `1/(μᵢ − λⱼ)`, closed-form inverse and determinant.
//! - [`induction`]: the step-one seed and the inductive step with precision escalation.
//! - [`certify`]: the certificate suite over a constructed state.
//! - [`dynamics`]: finite truncations, orbits, eigen-residuals and spectral oracles.

pub mod cauchy;
pub mod certify;
pub mod dynamics;
pub mod error;
pub mod exactcircle;
pub mod induction;

pub use error::{Error, Result};
