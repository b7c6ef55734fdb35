use crate::analytics::config_probs::triangle_config_probs;
use crate::analytics::spectral::spectral_radius;
use crate::degree_models::{JointDegreeModel, ModelFamily};
use crate::error::{Error, Result};
use crate::spread_sim::StrainParams;

/// Accuracy of [`critical_parameter`]: `|rho(J) - 1|` at the returned point.
pub const CRITICAL_RHO_TOL: f64 = 1e-9;

/// `Pi_ij = T_i mu_ij`: probability that a strain-`i` carrier passes strain
/// `j` (after mutation) along one single edge.
pub fn pi_matrix(params: &StrainParams) -> [[f64; 2]; 2] {
    let t = params.t();
    let mu = params.mu();
    [
        [t[0] * mu[0][0], t[0] * mu[0][1]],
        [t[1] * mu[1][0], t[1] * mu[1][1]],
    ]
}

/// `Delta_ij`: mean number of triangle corners ending with strain `j` when
/// the triangle's parent carries strain `i`.
pub fn delta_matrix(params: &StrainParams) -> [[f64; 2]; 2] {
    triangle_config_probs(params).mean_corner_infections()
}

/// Linearization of the extinction fixed point at the all-ones point,
/// ordered `(h_1, h_2, g_1, g_2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianMatrix {
    entries: [[f64; 4]; 4],
}

impl JacobianMatrix {
    pub fn entries(&self) -> [[f64; 4]; 4] {
        self.entries
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(&self.entries)
    }
}

/// Builds
///
/// ```text
/// J = [[b_s Pi, (<st>/<s>) Pi], [(<st>/<t>) Delta, b_t Delta]]
/// ```
///
/// with `b_s = (<s^2> - <s>) / <s>` and `b_t = (<t^2> - <t>) / <t>`. Ratios
/// with a zero denominator are taken as zero.
pub fn jacobian(model: &JointDegreeModel, params: &StrainParams) -> Result<JacobianMatrix> {
    model.validate()?;
    let m = model.moments();
    if m.mean_s <= 0.0 && m.mean_t <= 0.0 {
        return Err(Error::DegenerateModel);
    }
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    let (bs, bt) = (m.excess_s(), m.excess_t());
    let (st_s, st_t) = (ratio(m.cross, m.mean_s), ratio(m.cross, m.mean_t));
    let pi = pi_matrix(params);
    let delta = delta_matrix(params);
    let mut j = [[0.0; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            j[r][c] = pi[r][c] * bs;
            j[r][c + 2] = pi[r][c] * st_s;
            j[r + 2][c] = delta[r][c] * st_t;
            j[r + 2][c + 2] = delta[r][c] * bt;
        }
    }
    Ok(JacobianMatrix { entries: j })
}

/// `rho(J)` for `model` and `params`.
pub fn threshold_rho(model: &JointDegreeModel, params: &StrainParams) -> Result<f64> {
    Ok(jacobian(model, params)?.spectral_radius())
}

/// Closed-form `rho(J)` for doubly Poisson degrees under one-step
/// irreversible mutation (`mu22 = 1`, `mu21 = 0`, `T1 < T2`):
///
/// ```text
/// rho(J) = lambda_s T2 (1 + (2 lambda_t / lambda_s)(1 - T2^2 + T2))
/// ```
///
/// Only the strain-2 quantities enter; use
/// [`one_step_irreversible_rho_for`] to also check the strain parameters.
pub fn one_step_irreversible_rho(lambda_s: f64, lambda_t: f64, t2: f64) -> Result<f64> {
    if !(lambda_s > 0.0 && lambda_s.is_finite()) {
        return Err(Error::Argument(format!("lambda_s = {lambda_s} must be positive")));
    }
    if !(lambda_t >= 0.0 && lambda_t.is_finite()) {
        return Err(Error::Argument(format!("lambda_t = {lambda_t} must be nonnegative")));
    }
    if !(0.0..=1.0).contains(&t2) {
        return Err(Error::Argument(format!("T2 = {t2} not in [0, 1]")));
    }
    Ok(lambda_s * t2 * (1.0 + (2.0 * lambda_t / lambda_s) * (1.0 - t2 * t2 + t2)))
}

/// [`one_step_irreversible_rho`] after checking that `params` is one-step
/// irreversible with `T1 < T2`.
pub fn one_step_irreversible_rho_for(
    lambda_s: f64,
    lambda_t: f64,
    params: &StrainParams,
) -> Result<f64> {
    let [t1, t2] = params.t();
    let mu = params.mu();
    if mu[1][1] != 1.0 || mu[1][0] != 0.0 {
        return Err(Error::Argument(format!(
            "mutation is not one-step irreversible: mu2 = {:?}",
            mu[1]
        )));
    }
    if t1 >= t2 {
        return Err(Error::Argument(format!("closed form needs T1 < T2, got T1 = {t1}, T2 = {t2}")));
    }
    one_step_irreversible_rho(lambda_s, lambda_t, t2)
}

/// `rho(J)` along a family; a model with no edges at all has `rho = 0`.
pub fn rho_along(family: &ModelFamily, params: &StrainParams, lambda: f64) -> Result<f64> {
    match threshold_rho(&family.model_at(lambda)?, params) {
        Err(Error::DegenerateModel) => Ok(0.0),
        other => other,
    }
}

/// Bisects for the `lambda` in `(lo, hi)` where `rho(J) = 1` along `family`.
/// Requires `rho(lo) < 1 < rho(hi)` and monotonicity in between.
pub fn critical_parameter(
    family: &ModelFamily,
    params: &StrainParams,
    bracket: (f64, f64),
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Argument(format!("bad bracket ({lo}, {hi})")));
    }
    let (r_lo, r_hi) = (rho_along(family, params, lo)?, rho_along(family, params, hi)?);
    if !(r_lo < 1.0 && r_hi > 1.0) {
        return Err(Error::Argument(format!(
            "bracket ({lo}, {hi}) does not straddle rho = 1: rho = ({r_lo}, {r_hi})"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let r = rho_along(family, params, mid)?;
        if (r - 1.0).abs() < CRITICAL_RHO_TOL {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            // bracket exhausted at machine precision without meeting the tolerance
            return Err(Error::Convergence {
                iterations: 0,
                residual: (r - 1.0).abs(),
            });
        }
        if r < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}
