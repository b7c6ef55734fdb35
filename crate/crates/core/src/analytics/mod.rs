//! Closed-form and fixed-point predictions: triangle configuration
//! probabilities, emergence probability, the epidemic-threshold Jacobian and
//! its spectral radius, and the single-strain size heuristic.

mod config_probs;
mod emergence;
mod size;
mod spectral;
mod threshold;

pub use config_probs::{triangle_config_probs, ConfigProbs};
pub use emergence::{
    emergence_probability, emergence_probability_with, EmergenceSolution, SolverOptions,
};
pub use size::{effective_transmissibility, progeny_mean_matrix, size_heuristic};
pub use spectral::spectral_radius;
pub use threshold::{
    critical_parameter, delta_matrix, jacobian, one_step_irreversible_rho,
    one_step_irreversible_rho_for, pi_matrix, rho_along, threshold_rho, JacobianMatrix,
    CRITICAL_RHO_TOL,
};
