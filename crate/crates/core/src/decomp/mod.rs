//! Biquadratic rank-one decomposition and biquadratic Tucker forms.

mod rank_one;
mod tucker;

pub use rank_one::{
    bq_rank_one_decompose, factor_matrices, numerical_rank, reconstruct, term_bound, tucker_ranks,
    BQDecomposition, RankOneTerm, DEFAULT_DROP_TOL, DEFAULT_RANK_TOL,
};
pub use tucker::{
    br_preservation_check, hosvd, independent_core, mode_multiply, BrPreservationReport, TuckerForm,
    TuckerKind, EXACT_TOL,
};
