//! Replica-symmetric theory of the stationary state and the closed-form
//! impact predictions built on it.

mod predictions;
mod saddle;
mod special;

pub use predictions::{
    concavity_exponent, exec_cost_ratio_theory, kappa_moments, kappa_triple, permanent_impact_theory,
    saturation_shift, small_t_ratio, ResponseKernel,
};
pub use saddle::{
    critical_ns, solve_zeta, susceptibility, theory, zeta_residual, CriticalPoint, ReplicaSolution,
    MAX_ROOT_ITERATIONS, ROOT_TOLERANCE,
};
pub use special::{erf, erf_scaled, erfc, self_overlap, SERIES_SWITCH};
