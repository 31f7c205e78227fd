//! Numerical verification of matrix identities for the classical Hermitian
//! symmetric spaces and their maximal representations.
//!
//! The crate is organised bottom-up:
//!
//! - [`cmatrix`]: dense complex matrices, Hermitian eigensolver, `expm`.
//! - [`lie_spaces`]: the four families, tangent embeddings, curvature.
//! - [`trace_bounds`]: trace-ratio inequalities and flat families.
//! - [`youla`]: canonical form of complex skew-symmetric matrices.
//! - [`levi`]: the defining function on skew matrices and its Levi form.
//! - [`reps`]: canonical sl2 representations, centralizers, transitivity.
//! - [`higgs`]: fiberwise Toledo and energy densities.
//! - [`suite`] and [`report`]: the batch runner and its JSON output.

pub mod cmatrix;
pub mod error;
pub mod higgs;
pub mod levi;
pub mod lie_spaces;
pub mod par;
pub mod report;
pub mod reps;
pub mod rng;
pub mod suite;
pub mod trace_bounds;
pub mod youla;

pub use cmatrix::{ComplexMatrix, EigenResult, C64};
pub use error::{Error, Result};
pub use lie_spaces::{HermitianFamily, TangentParam};
pub use report::{LemmaReport, SubCheck};
