//! Extinction probabilities along single edges (`h`) and triangles (`g`) and
//! the resulting probability of emergence.
//!
//! With `E(a, b)` and `D(a, b)` the size-biased single-edge and triangle
//! sums of the degree model, the map iterated here is
//!
//! ```text
//! h_i = 1 - T_i + T_i (mu_i1 E(h_1, g_1) + mu_i2 E(h_2, g_2))
//! g_i = p_i1 + p_i2 D_1 + p_i3 D_1^2 + p_i4 D_2 + p_i5 D_2^2 + p_i6 D_1 D_2
//! ```
//!
//! with `D_k = D(h_k, g_k)`. Every component is a power series with
//! nonnegative coefficients, so iterating from the zero vector increases
//! monotonically to the smallest fixed point in `[0, 1]^4`.

use crate::analytics::config_probs::{triangle_config_probs, ConfigProbs};
use crate::degree_models::JointDegreeModel;
use crate::error::{Error, Result};
use crate::spread_sim::{Strain, StrainParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once successive iterates differ by at most this in sup norm.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-12,
            max_iter: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmergenceSolution {
    /// `(h_1, h_2)` at the fixed point.
    pub h: [f64; 2],
    /// `(g_1, g_2)` at the fixed point.
    pub g: [f64; 2],
    /// Probability of emergence for a seed carrying strain 1 and strain 2.
    pub prob_emergence: [f64; 2],
    pub iterations: usize,
    /// Sup-norm step at termination.
    pub residual: f64,
    /// The mutation matrix is reducible; above threshold the fixed point need
    /// not be unique and the smallest root is reported.
    pub decomposable: bool,
}

impl EmergenceSolution {
    pub fn for_seed(&self, seed: Strain) -> f64 {
        self.prob_emergence[seed.index()]
    }
}

/// One application of the fixed-point map to `[h1, h2, g1, g2]`.
pub(crate) fn step(
    model: &JointDegreeModel,
    params: &StrainParams,
    probs: &ConfigProbs,
    x: [f64; 4],
) -> [f64; 4] {
    let [h1, h2, g1, g2] = x;
    let k1 = model.pgf_terms_unchecked(h1, g1);
    let k2 = model.pgf_terms_unchecked(h2, g2);
    let (e1, e2, d1, d2) = (k1.edge, k2.edge, k1.tri, k2.tri);
    let t = params.t();
    let mu = params.mu();
    let mut out = [0.0; 4];
    for i in 0..2 {
        out[i] = 1.0 - t[i] + t[i] * (mu[i][0] * e1 + mu[i][1] * e2);
        let p = probs.rows()[i];
        out[2 + i] = p[0] + p[1] * d1 + p[2] * d1 * d1 + p[3] * d2 + p[4] * d2 * d2 + p[5] * d1 * d2;
    }
    // guard against rounding above 1
    out.map(|v| v.clamp(0.0, 1.0))
}

pub fn emergence_probability(
    model: &JointDegreeModel,
    params: &StrainParams,
) -> Result<EmergenceSolution> {
    emergence_probability_with(model, params, SolverOptions::default())
}

pub fn emergence_probability_with(
    model: &JointDegreeModel,
    params: &StrainParams,
    opts: SolverOptions,
) -> Result<EmergenceSolution> {
    model.validate()?;
    let probs = triangle_config_probs(params);
    let mut x = [0.0; 4];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let next = step(model, params, &probs, x);
        iterations += 1;
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = next;
        if residual <= opts.tol {
            break;
        }
    }
    if residual.is_nan() || residual > opts.tol {
        return Err(Error::Convergence {
            iterations,
            residual,
        });
    }
    let [h1, h2, g1, g2] = x;
    let pe = |h: f64, g: f64| (1.0 - model.pgf_terms_unchecked(h, g).g).clamp(0.0, 1.0);
    Ok(EmergenceSolution {
        h: [h1, h2],
        g: [g1, g2],
        prob_emergence: [pe(h1, g1), pe(h2, g2)],
        iterations,
        residual,
        decomposable: params.is_decomposable(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_models::DegreeTable;

    #[test]
    fn no_transmission_means_no_emergence() {
        let model = JointDegreeModel::doubly_poisson(3.0, 3.0).unwrap();
        let params = StrainParams::from_diagonal(0.0, 0.0, 0.75, 0.75).unwrap();
        let sol = emergence_probability(&model, &params).unwrap();
        assert_eq!(sol.h, [1.0, 1.0]);
        assert_eq!(sol.g, [1.0, 1.0]);
        assert_eq!(sol.prob_emergence, [0.0, 0.0]);
    }

    #[test]
    fn subcritical_unclustered_single_strain() {
        let model = JointDegreeModel::doubly_poisson(1.0, 0.0).unwrap();
        let params = StrainParams::one_step_irreversible(0.2, 0.2, 0.0).unwrap();
        let sol = emergence_probability(&model, &params).unwrap();
        assert!(sol.for_seed(Strain::One) < 1e-10);
        assert!(sol.decomposable);
    }

    #[test]
    fn poisson_single_strain_matches_scalar_equation() {
        // unclustered, single strain: u = 1 - T + T exp(lambda (u - 1)),
        // P_E = 1 - exp(lambda (u - 1)); solved here by bisection on the
        // nontrivial root.
        let (lambda, t) = (3.0, 0.6);
        let f = |u: f64| 1.0 - t + t * (lambda * (u - 1.0)).exp() - u;
        let (mut lo, mut hi) = (0.0, 0.999);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let want = 1.0 - (lambda * (lo - 1.0)).exp();
        let model = JointDegreeModel::doubly_poisson(lambda, 0.0).unwrap();
        let sol = emergence_probability(&model, &StrainParams::single_strain(t).unwrap()).unwrap();
        assert!((sol.for_seed(Strain::One) - want).abs() < 1e-10);
        assert!((sol.for_seed(Strain::Two) - want).abs() < 1e-10);
    }

    #[test]
    fn iterates_are_monotone_and_bounded() {
        let model = JointDegreeModel::cluster_tunable(1.2, 2.5).unwrap();
        let params = StrainParams::from_diagonal(0.3, 0.6, 0.6, 0.8).unwrap();
        let probs = triangle_config_probs(&params);
        let mut x = [0.0; 4];
        for _ in 0..500 {
            let next = step(&model, &params, &probs, x);
            for k in 0..4 {
                assert!(next[k] >= x[k] - 1e-15);
                assert!(next[k] <= 1.0);
            }
            x = next;
        }
    }

    #[test]
    fn table_triangle_only_network() {
        // every node in exactly one triangle: outbreaks are finite
        let model = JointDegreeModel::Table(DegreeTable::point(0, 1));
        let params = StrainParams::single_strain(1.0).unwrap();
        let sol = emergence_probability(&model, &params).unwrap();
        assert!(sol.prob_emergence[0] < 1e-12);
    }

    #[test]
    fn convergence_failure_is_reported() {
        let model = JointDegreeModel::doubly_poisson(3.0, 1.0).unwrap();
        let params = StrainParams::from_diagonal(0.5, 0.5, 0.9, 0.9).unwrap();
        let opts = SolverOptions { tol: 1e-12, max_iter: 3 };
        match emergence_probability_with(&model, &params, opts) {
            Err(Error::Convergence { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-12);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }
}
