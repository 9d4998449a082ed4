//! Residuals, certificates and constraint-qualification diagnostics for
//! primal-dual pairs `(x, λ)`.

mod certificate;
mod diagnostic;
mod example35;
mod membership;
mod penalty;
mod record;
mod split;

pub use certificate::{infeasibility_gradient, Certificate, HistorySummary, Verdict};
pub use diagnostic::{
    bounded_multiplier_diagnostic, growth_exponent, weighted_min_modulus, MultiplierDiagnostic, BOUNDED_TREND_EXPONENT,
};
pub use example35::{build_example35, Example35Analytic, Example35Discrete, Example35Pair};
pub use membership::{
    m_membership, MembershipWitness, DEFAULT_MEMBERSHIP_MAX_ITER, DEFAULT_MEMBERSHIP_TOL, DYKSTRA_MAX_ITER,
};
pub use penalty::{
    quadratic_penalty_generator, quadratic_penalty_generator_with, PenaltyConfig, PenaltyRecord, PenaltySequence,
};
pub(crate) use record::record_from_grad;
pub use record::{akkt_residuals, is_kkt, lagrangian_grad_x, AkktRecord};
pub use split::{box_split, split_bound_check, split_bound_lhs, SplitBoundReport, SPLIT_BOUND_SLACK};
