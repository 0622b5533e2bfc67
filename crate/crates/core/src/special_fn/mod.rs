//! ϑ(t), Z(t) and d(n): the evaluators every other module builds on.

mod divisor;
mod rs_coeffs;
mod theta;
mod zfun;

pub use divisor::{DivisorTable, DEFAULT_BUDGET};
pub use rs_coeffs::{psi_closed_form, RsCorrection};
pub use theta::{dtheta, theta, theta_asymptotic_dd, theta_dd, ThetaEval, ThetaMode, EXACT_T_MAX};
pub use zfun::{LnTable, ZFunction, T_SWITCH};

/// Builds a divisor table under the default memory budget.
pub fn divisor_table(limit: u64) -> crate::Result<DivisorTable> {
    DivisorTable::new(limit, DEFAULT_BUDGET)
}
