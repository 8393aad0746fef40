//! Scaling analysis and rank bounds: the zero-submatrix score condition,
//! Sinkhorn row/column scaling, ℓ2 scaling, cancellation functionals, the
//! off-diagonal sum identity, and the diagonal-dominant rank bound.

pub mod gram;
pub mod property_s;
pub mod sinkhorn;

pub use gram::{
    cancellation_functionals, cancellation_functionals_f64, default_c0, default_c1, default_eta_sqr,
    gram_summary_f64, offdiag_identity_check, offdiag_inequality_holds, rank_lower_bound,
    rank_lower_bound_f64, squares_bound_check, GramError, GramSummary, IdentityReport, RankBound,
    RowScaledMatrix, SquaresBoundReport,
};
pub use property_s::{
    property_s, property_s_bruteforce, PropertySVerdict, ZeroPattern, ZeroSubmatrixWitness,
    DEFAULT_BUDGET_COLS,
};
pub use sinkhorn::{
    apply_l2, l2_scale, sinkhorn, ScaleError, ScalingResult, DEFAULT_EPSILON, DEFAULT_MAX_ITERS,
};
