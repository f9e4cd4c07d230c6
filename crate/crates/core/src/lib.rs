//! Jacobi θ₁ and Dedekind η: evaluation, multiplier systems, modular argument
//! reduction, and a numerical replay of the residue-calculus proof of the θ₁
//! transformation law.

pub type Complex = num_complex::Complex64;

pub mod dedekind;
pub mod error;
pub mod lambert;
pub mod modular;
pub mod reducer;
pub mod residue;
pub mod sweep;
pub mod theta;

pub use dedekind::{
    dedekind_sum_fast, dedekind_sum_naive, eta_multiplier, theta_multiplier, ExactRational,
    MultiplierValue,
};
pub use error::{Error, Result};
pub use modular::{
    moebius_apply, principal_arg, principal_log, principal_power, principal_sqrt,
    reduce_to_fundamental_domain, solve_h, theorem_params_from_matrix, ModularMatrix, TauPoint,
    TheoremParams,
};
pub use theta::{
    eta, jacobi_triple_product_check, log_theta1, log_theta1_triple_sum, theta1_product,
    theta1_series, zero_lattice_distance, SeriesEval, ThetaPoint, TruncationControl,
};
