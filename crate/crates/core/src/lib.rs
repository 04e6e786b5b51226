//! Quaternionic Hodge projections, truncated power series and homogenizing
//! automorphisms of complete local rings.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: exact Gaussian rationals and a floating backend;
//! - [`quatlin`]: induced complex structures on ℍⁿ, Hodge projectors, and
//!   the scalar `λ` of the projection composite `Φ_{I,J}`;
//! - [`series`]: truncated multivariate power series, substitution maps,
//!   ideals and standard bases modulo `𝔪^{N+1}`;
//! - [`homog`]: homogenizing automorphisms, the shifted eigen-equation,
//!   eigen-coordinates and homogeneous presentations;
//! - [`germ`]: the flat model on ℍⁿ, the map `Ψ_{I,J}`, unions of
//!   quaternionic planes and their normalization;
//! - [`job`]: the job-file format and JSON reports behind the `quathom` binary;
//! - [`sample`]: seeded random inputs for property checks.

pub mod error;
pub mod field;
pub mod germ;
pub mod homog;
pub mod job;
pub mod linalg;
pub mod quatlin;
pub mod sample;
pub mod series;

pub use error::{Error, Result};
pub use field::{Field, GaussRat};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quaternions.md")]
    mod quaternions {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/homogenizing.md")]
    mod homogenizing {}
    #[doc = include_str!("../../../book/src/planes.md")]
    mod planes {}
    #[doc = include_str!("../../../book/src/jobs.md")]
    mod jobs {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
