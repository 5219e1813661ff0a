//! Spectral backends and numerical checks of growth laws, heat traces,
//! multiplier bounds and Sobolev embeddings.

mod backend;
mod embedding;
mod growth;
mod heat;
mod multiplier;

pub use backend::{
    heisenberg_plancherel_constant, su2_irrep, su2_sublaplacian_spectrum, BackendKind,
    SpectralBackend,
};
pub use embedding::{torus_embedding_witness, EmbeddingParams, EmbeddingWitness};
pub use growth::{
    fit_power_exponent, log_grid, verify_growth, GrowthReport, PowerFit, DEFAULT_EXPONENT_TOL,
};
pub use heat::{h1_heat_kernel, h1_heat_kernel_with, heat_trace_l2, heat_trace_stieltjes};
pub use multiplier::{
    heat_lp_lq_bound, lp_lq_exponent, multiplier_norm_bound, sup_functional, MultiplierSpec,
    SupBound, TAIL_THRESHOLD,
};

use crate::linalg::Q;

pub(crate) fn ser_rational<S: serde::Serializer>(
    q: &Q,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}
