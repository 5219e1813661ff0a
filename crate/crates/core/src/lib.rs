//! Weighted Lie algebras, graded contractions and numerical checks of spectral
//! growth laws for left-invariant operators on Lie groups.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod catalog;
pub mod error;
pub mod estimates;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod quad;
pub mod rockland;
pub mod spectral;
pub mod weighted;

pub use error::{Error, Result};
pub use lie::{LieAlgebra, MultiIndex, Subspace, Vector};
pub use linalg::Q;
