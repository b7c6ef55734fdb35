#![allow(dead_code)]

use mutaclust::graph_gen::ClusteredGraph;
use mutaclust::StrainParams;
use rand::Rng;

pub fn random_params<R: Rng>(rng: &mut R) -> StrainParams {
    let t = [rng.random::<f64>(), rng.random::<f64>()];
    let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
    StrainParams::new(t, [[a, 1.0 - a], [1.0 - b, b]]).unwrap()
}

/// Outcome class of the two far corners, 0-based: none, one strain-1,
/// two strain-1, one strain-2, two strain-2, one of each.
fn class(a: Option<usize>, b: Option<usize>) -> usize {
    match (a, b) {
        (None, None) => 0,
        (Some(x), None) | (None, Some(x)) => 1 + 2 * x,
        (Some(x), Some(y)) if x == y => 2 + 2 * x,
        _ => 5,
    }
}

/// Enumerates every transmission and mutation event inside a triangle whose
/// parent carries strain `i`: the parent tries both corners in one round,
/// and a lone infected corner then tries the other one.
pub fn enumerate_triangle(params: &StrainParams) -> [[f64; 6]; 2] {
    let t = params.t();
    let mu = params.mu();
    let mut out = [[0.0; 6]; 2];
    for i in 0..2 {
        // per corner: None with 1 - T_i, strain j with T_i mu_ij
        let first: [(Option<usize>, f64); 3] =
            [(None, 1.0 - t[i]), (Some(0), t[i] * mu[i][0]), (Some(1), t[i] * mu[i][1])];
        for &(a, pa) in &first {
            for &(b, pb) in &first {
                let p = pa * pb;
                match (a, b) {
                    (Some(x), None) | (None, Some(x)) => {
                        let second: [(Option<usize>, f64); 3] = [
                            (None, 1.0 - t[x]),
                            (Some(0), t[x] * mu[x][0]),
                            (Some(1), t[x] * mu[x][1]),
                        ];
                        for &(c, pc) in &second {
                            out[i][class(Some(x), c)] += p * pc;
                        }
                    }
                    _ => out[i][class(a, b)] += p,
                }
            }
        }
    }
    out
}

/// Largest eigenvalue of a nonnegative 2x2 matrix.
pub fn rho2(m: [[f64; 2]; 2]) -> f64 {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0);
    0.5 * (tr + disc.sqrt())
}

/// Size of the cluster containing `seed` after keeping each edge with
/// probability `p`.
pub fn bond_percolation_cluster<R: Rng>(g: &ClusteredGraph, p: f64, seed: usize, rng: &mut R) -> usize {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![seed];
    seen[seed] = true;
    let mut size = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !seen[w] && rng.random::<f64>() < p {
                seen[w] = true;
                size += 1;
                stack.push(w);
            }
        }
    }
    size
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_statistic(a: &[usize], b: &[usize]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}
