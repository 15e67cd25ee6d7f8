//! Machine checks of matrix identities, rank formulas and matroid relations.
//!
//! Identity checks are bit-exact: a pass means literal equality of rational
//! matrices after the stated scalings and products. Checks about generic
//! matroids evaluate sampled instances and record the seeds they used.

mod bipartite;
mod combinatorial;
mod identities;
mod probe;
mod ranks;
mod report;

use alloc::string::String;
use thiserror::Error;

use crate::builders::BuildError;
use crate::geometry::GeometryError;
use crate::graph::GraphError;
use crate::linalg::LinalgError;
use crate::matroid::MatroidError;

pub use bipartite::{
    check_bipartite_coincidence, check_bipartite_general_rank, check_bipartite_rank, check_bipartite_subgraphs, Theory,
};
pub use combinatorial::{h2_independent_combinatorial, has_alternating_closed_trail, COMBINATORIAL_MAX_EDGES};
pub use identities::{
    check_coincidence, check_h2_parametrization, check_scaling_invariance, check_skew_jacobian, h2_alphas,
    scaled_configuration, solve_block_change, BlockChange,
};
pub use probe::{probe_conjectures, PROBE_MAX_N};
pub use ranks::{
    check_abstract_rigidity, check_generic_rank, check_h2_oracle, check_moment_quadrics, check_property,
    check_random_splits, check_split_monotonicity, Claim,
};
pub use report::{CheckReport, Status, Witness};

/// Inputs that violate a check's preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

pub(crate) fn precondition(msg: impl Into<String>) -> VerifyError {
    VerifyError::Precondition(msg.into())
}
