use crate::analytics::emergence::emergence_probability;
use crate::analytics::spectral::spectral_radius;
use crate::analytics::threshold::pi_matrix;
use crate::degree_models::JointDegreeModel;
use crate::error::Result;
use crate::spread_sim::{Strain, StrainParams};

/// `rho(Pi)`, the transmissibility of the equivalent single-strain contagion.
pub fn effective_transmissibility(params: &StrainParams) -> f64 {
    // rho(Pi) never exceeds the largest row sum max(T_i) <= 1
    spectral_radius(&pi_matrix(params)).clamp(0.0, 1.0)
}

/// Mean epidemic size predicted by collapsing the two strains into one
/// contagion with transmissibility `rho(Pi)`.
///
/// With a single transmissibility the process is undirected bond
/// percolation, whose emergence probability equals its giant-component
/// fraction, so the single-strain emergence probability is the size.
pub fn size_heuristic(model: &JointDegreeModel, params: &StrainParams) -> Result<f64> {
    let collapsed = StrainParams::single_strain(effective_transmissibility(params))?;
    Ok(emergence_probability(model, &collapsed)?.for_seed(Strain::One))
}

/// Mean offspring matrix over progeny types `{1,1}, {1,2}, {2,1}, {2,2}`
/// (strain received, strain after mutation), divided by the mean excess
/// degree. Its spectral radius equals that of [`pi_matrix`].
pub fn progeny_mean_matrix(params: &StrainParams) -> [[f64; 4]; 4] {
    let [[a, b], [c, d]] = pi_matrix(params);
    let carries_one = [a, b, 0.0, 0.0];
    let carries_two = [0.0, 0.0, c, d];
    [carries_one, carries_two, carries_one, carries_two]
}
