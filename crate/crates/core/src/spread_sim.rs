//! Round-synchronous two-strain SIR spreading with mutation.
//!
//! Each round, every infectious node carrying strain `i` tries to infect each
//! susceptible neighbor independently with probability `T_i`. A susceptible
//! node that collects `x` strain-1 and `y` strain-2 successful exposures in a
//! round adopts strain 1 with probability `x / (x + y)`, then mutates to strain
//! `j` with probability `mu[adopted][j]`. Nodes are infectious for exactly one
//! round and are never reinfected. The seed keeps its assigned strain.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph_gen::ClusteredGraph;

/// Row-sum tolerance for the mutation matrix.
pub const MU_ROW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strain {
    One,
    Two,
}

impl Strain {
    pub const BOTH: [Strain; 2] = [Strain::One, Strain::Two];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Strain::One => 0,
            Strain::Two => 1,
        }
    }

    /// Parses the one-based label used on the command line.
    pub fn from_label(label: u8) -> Result<Self> {
        match label {
            1 => Ok(Strain::One),
            2 => Ok(Strain::Two),
            _ => Err(Error::Argument(format!("strain must be 1 or 2, got {label}"))),
        }
    }

    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }
}

impl fmt::Display for Strain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Transmissibilities and the row-stochastic mutation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainParams {
    t: [f64; 2],
    mu: [[f64; 2]; 2],
}

impl StrainParams {
    pub fn new(t: [f64; 2], mu: [[f64; 2]; 2]) -> Result<Self> {
        for (i, &ti) in t.iter().enumerate() {
            if !(0.0..=1.0).contains(&ti) {
                return Err(Error::InvalidParams(format!("T{} = {ti} not in [0, 1]", i + 1)));
            }
        }
        for (i, row) in mu.iter().enumerate() {
            if row.iter().any(|&m| !m.is_finite() || m < 0.0) {
                return Err(Error::InvalidParams(format!("mu row {} = {row:?} has a negative entry", i + 1)));
            }
            if (row[0] + row[1] - 1.0).abs() > MU_ROW_TOL {
                return Err(Error::InvalidParams(format!("mu row {} = {row:?} does not sum to 1", i + 1)));
            }
        }
        Ok(StrainParams { t, mu })
    }

    /// `T = (t1, t2)` with `mu = [[mu11, 1 - mu11], [1 - mu22, mu22]]`.
    pub fn from_diagonal(t1: f64, t2: f64, mu11: f64, mu22: f64) -> Result<Self> {
        Self::new([t1, t2], [[mu11, 1.0 - mu11], [1.0 - mu22, mu22]])
    }

    /// One-step irreversible mutation: strain 1 mutates to strain 2 with
    /// probability `mu12`; strain 2 never reverts.
    pub fn one_step_irreversible(t1: f64, t2: f64, mu12: f64) -> Result<Self> {
        Self::new([t1, t2], [[1.0 - mu12, mu12], [0.0, 1.0]])
    }

    /// Same transmissibility for both strains, no mutation.
    pub fn single_strain(t: f64) -> Result<Self> {
        Self::new([t, t], [[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn t(&self) -> [f64; 2] {
        self.t
    }

    pub fn mu(&self) -> [[f64; 2]; 2] {
        self.mu
    }

    /// `T_i`
    pub fn transmissibility(&self, s: Strain) -> f64 {
        self.t[s.index()]
    }

    /// `mu_ij`
    pub fn mutation(&self, from: Strain, to: Strain) -> f64 {
        self.mu[from.index()][to.index()]
    }

    /// True when one strain cannot reach the other through mutation.
    pub fn is_decomposable(&self) -> bool {
        self.mu[0][1] == 0.0 || self.mu[1][0] == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationOutcome {
    pub total_infected: usize,
    pub infected_by_strain: [usize; 2],
    pub rounds: usize,
    pub seed_node: usize,
    pub seed_strain: Strain,
}

impl SimulationOutcome {
    pub fn fraction(&self, n: usize) -> f64 {
        self.total_infected as f64 / n as f64
    }
}

/// Reusable buffers for repeated runs on graphs of the same size.
#[derive(Debug, Clone, Default)]
pub struct Simulator {
    infected: Vec<bool>,
    exposures: Vec<[u32; 2]>,
    touched: Vec<u32>,
    frontier: Vec<(u32, Strain)>,
    next: Vec<(u32, Strain)>,
}

impl Simulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn run<R: Rng + ?Sized>(
        &mut self,
        graph: &ClusteredGraph,
        params: &StrainParams,
        seed_node: usize,
        seed_strain: Strain,
        rng: &mut R,
    ) -> Result<SimulationOutcome> {
        let n = graph.n();
        if seed_node >= n {
            return Err(Error::Argument(format!("seed node {seed_node} not in [0, {n})")));
        }
        self.infected.clear();
        self.infected.resize(n, false);
        self.exposures.clear();
        self.exposures.resize(n, [0, 0]);
        self.touched.clear();
        self.frontier.clear();
        self.next.clear();

        let mut by_strain = [0usize; 2];
        self.infected[seed_node] = true;
        by_strain[seed_strain.index()] += 1;
        self.frontier.push((seed_node as u32, seed_strain));

        let mut rounds = 0;
        while !self.frontier.is_empty() {
            rounds += 1;
            // every attempt of the round resolves before any adoption draw
            for &(u, strain) in &self.frontier {
                let t = params.t[strain.index()];
                if t == 0.0 {
                    continue;
                }
                for &v in graph.neighbors(u as usize) {
                    if self.infected[v as usize] || rng.random::<f64>() >= t {
                        continue;
                    }
                    let e = &mut self.exposures[v as usize];
                    if *e == [0, 0] {
                        self.touched.push(v);
                    }
                    e[strain.index()] += 1;
                }
            }
            for &v in &self.touched {
                let [x, y] = std::mem::take(&mut self.exposures[v as usize]);
                let adopted = if y == 0 {
                    Strain::One
                } else if x == 0 {
                    Strain::Two
                } else if rng.random_range(0..x + y) < x {
                    Strain::One
                } else {
                    Strain::Two
                };
                let carried = if rng.random::<f64>() < params.mu[adopted.index()][0] {
                    Strain::One
                } else {
                    Strain::Two
                };
                self.infected[v as usize] = true;
                by_strain[carried.index()] += 1;
                self.next.push((v, carried));
            }
            self.touched.clear();
            std::mem::swap(&mut self.frontier, &mut self.next);
            self.next.clear();
        }

        Ok(SimulationOutcome {
            total_infected: by_strain[0] + by_strain[1],
            infected_by_strain: by_strain,
            rounds,
            seed_node,
            seed_strain,
        })
    }
}

/// Runs one outbreak from `seed_node` carrying `seed_strain`.
pub fn simulate<R: Rng + ?Sized>(
    graph: &ClusteredGraph,
    params: &StrainParams,
    seed_node: usize,
    seed_strain: Strain,
    rng: &mut R,
) -> Result<SimulationOutcome> {
    Simulator::new().run(graph, params, seed_node, seed_strain, rng)
}

/// Whether the outbreak reached at least `frac_threshold * n` nodes.
pub fn classify(outcome: &SimulationOutcome, n: usize, frac_threshold: f64) -> bool {
    debug_assert!(frac_threshold > 0.0 && frac_threshold < 1.0);
    // ratio form keeps the boundary exact, e.g. 5/100 == 0.05
    outcome.fraction(n) >= frac_threshold
}
