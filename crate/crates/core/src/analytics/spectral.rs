use nalgebra::DMatrix;

/// Largest eigenvalue modulus of a small dense real matrix.
///
/// Uses a real Schur decomposition rather than power iteration, so reducible
/// matrices (e.g. one-step irreversible mutation) are handled exactly.
/// Returns NaN if any entry is not finite.
pub fn spectral_radius<const N: usize>(m: &[[f64; N]; N]) -> f64 {
    spectral_radius_dyn(N, |i, j| m[i][j])
}

pub(crate) fn spectral_radius_dyn(n: usize, entry: impl Fn(usize, usize) -> f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n, n, entry);
    if m.iter().any(|x| !x.is_finite()) {
        return f64::NAN;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
