//! Verification toolkit for the fourth-order Liouville-type equation
//!
//! ```text
//! lap^2 u - lambda1 kappa lap u + lambda2 kappa^2 (1 - e^{4u}) = 0
//! ```
//!
//! on the round 4-sphere of curvature scale `kappa`, together with the
//! parameter-region analytics of its classification theory and the
//! Onofri-type inequality it implies.
//!
//! The crate is organized around axisymmetric spectral calculus on the
//! sphere (`sphere`), the invariant-tensor differential identities
//! (`invariants`), the equation itself with its explicit solution family and
//! a Newton solver (`pde`), the parameter-plane analytics (`region`), the
//! quadratic-form estimate machinery (`quadform`) and the inequality suite
//! (`onofri`). Everything is deterministic; randomized sweeps take explicit
//! seeds.

pub mod dd;
pub mod embed;
pub mod invariants;
pub mod onofri;
pub mod pde;
pub mod quadform;
pub mod region;
pub mod scalar;
pub mod sphere;

pub mod cli;
mod svg;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bracket failure: {0}")]
    Bracket(String),
    #[error("singular configuration: {0}")]
    Singular(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
