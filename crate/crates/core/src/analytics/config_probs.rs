use crate::spread_sim::{Strain, StrainParams};

/// Probabilities of the six outcomes at the two far corners of a triangle
/// whose parent carries strain `i`:
///
/// | j | outcome |
/// |---|---------|
/// | 1 | neither corner infected |
/// | 2 | exactly one infected, carrying strain 1 |
/// | 3 | both infected, both strain 1 |
/// | 4 | exactly one infected, carrying strain 2 |
/// | 5 | both infected, both strain 2 |
/// | 6 | both infected, one of each strain |
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigProbs {
    p: [[f64; 6]; 2],
}

impl ConfigProbs {
    /// Row for a parent carrying `parent`, indexed `j - 1`.
    pub fn row(&self, parent: Strain) -> [f64; 6] {
        self.p[parent.index()]
    }

    /// `p_ij` with one-based `j`.
    pub fn get(&self, parent: Strain, j: usize) -> f64 {
        assert!((1..=6).contains(&j), "configuration index {j} not in 1..=6");
        self.p[parent.index()][j - 1]
    }

    pub fn rows(&self) -> [[f64; 6]; 2] {
        self.p
    }

    /// Mean number of corners ending with strain 1 and strain 2, per parent
    /// strain. Rows of this matrix form the triangle kernel of the Jacobian.
    pub fn mean_corner_infections(&self) -> [[f64; 2]; 2] {
        self.p.map(|r| [r[1] + 2.0 * r[2] + r[5], r[3] + 2.0 * r[4] + r[5]])
    }
}

pub fn triangle_config_probs(params: &StrainParams) -> ConfigProbs {
    let [t1, t2] = params.t();
    let mu = params.mu();
    let mut p = [[0.0; 6]; 2];
    for (i, row) in p.iter_mut().enumerate() {
        let ti = params.t()[i];
        let (mi1, mi2) = (mu[i][0], mu[i][1]);
        let miss = 1.0 - ti;
        *row = [
            miss * miss,
            2.0 * ti * mi1 * miss * (1.0 - t1),
            (ti * mi1).powi(2) + 2.0 * ti * mi1 * miss * t1 * mu[0][0],
            2.0 * ti * mi2 * miss * (1.0 - t2),
            (ti * mi2).powi(2) + 2.0 * ti * mi2 * miss * t2 * mu[1][1],
            2.0 * (ti * ti * mi1 * mi2
                + ti * mi1 * miss * t1 * mu[0][1]
                + ti * mi2 * miss * t2 * mu[1][0]),
        ];
    }
    ConfigProbs { p }
}
