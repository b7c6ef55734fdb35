//! Monte Carlo sweeps over a model family, with analytic predictions
//! alongside the empirical estimates for every grid point.

use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{emergence_probability, size_heuristic, threshold_rho};
use crate::degree_models::{JointDegreeModel, ModelFamily};
use crate::error::{Error, Result};
use crate::graph_gen::{generate, ClusteredGraph};
use crate::rng::stream_rng;
use crate::spread_sim::{classify, SimulationOutcome, Simulator, Strain, StrainParams};

pub const DEFAULT_FRAC_THRESHOLD: f64 = 0.05;
pub const DEFAULT_GRAPHS_PER_POINT: usize = 10;

/// Exact header of the sweep CSV.
pub const SWEEP_CSV_HEADER: &str =
    "grid_param,lambda_s,lambda_t,c,n,trials,rho_J,pe_pred,pe_emp,size_pred,size_emp,trials_epidemic,error";

const GRAPH_STREAM: u64 = 0;
const TRIAL_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: ModelFamily,
    pub grid: Vec<f64>,
    pub params: StrainParams,
    pub n: usize,
    pub trials: usize,
    pub frac_threshold: f64,
    pub master_seed: u64,
    pub graphs_per_point: usize,
    pub seed_strain: Strain,
}

impl SweepConfig {
    /// Defaults: desk-scale `n = 20000`, 2000 trials, threshold 0.05, ten
    /// graphs per point, seed strain 1, master seed 0.
    pub fn new(family: ModelFamily, grid: Vec<f64>, params: StrainParams) -> Self {
        SweepConfig {
            family,
            grid,
            params,
            n: 20_000,
            trials: 2_000,
            frac_threshold: DEFAULT_FRAC_THRESHOLD,
            master_seed: 0,
            graphs_per_point: DEFAULT_GRAPHS_PER_POINT,
            seed_strain: Strain::One,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Argument("trials must be at least 1".into()));
        }
        if self.n < 10 {
            return Err(Error::Argument(format!("n = {} must be at least 10", self.n)));
        }
        if self.grid.is_empty() {
            return Err(Error::Argument("grid is empty".into()));
        }
        if self.graphs_per_point == 0 {
            return Err(Error::Argument("graphs_per_point must be at least 1".into()));
        }
        if !(self.frac_threshold > 0.0 && self.frac_threshold < 1.0) {
            return Err(Error::Argument(format!(
                "frac_threshold = {} not in (0, 1)",
                self.frac_threshold
            )));
        }
        for &x in &self.grid {
            self.family.model_at(x)?;
        }
        Ok(())
    }
}

/// One CSV row. `size_emp` is empty when no trial was classified epidemic;
/// `error` carries analytic failures, whose columns are then NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub grid_param: f64,
    pub lambda_s: f64,
    pub lambda_t: f64,
    pub c: Option<f64>,
    pub n: usize,
    pub trials: usize,
    #[serde(rename = "rho_J")]
    pub rho_j: f64,
    pub pe_pred: f64,
    pub pe_emp: f64,
    pub size_pred: f64,
    pub size_emp: Option<f64>,
    pub trials_epidemic: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalEstimates {
    /// Fraction of trials classified epidemic.
    pub pe_emp: f64,
    /// Mean infected fraction over epidemic trials; `None` without any.
    pub size_emp: Option<f64>,
    pub trials_epidemic: usize,
}

pub fn empirical_estimates(
    outcomes: &[SimulationOutcome],
    n: usize,
    frac_threshold: f64,
) -> Result<EmpiricalEstimates> {
    if outcomes.is_empty() {
        return Err(Error::Argument("no outcomes to summarize".into()));
    }
    let mut epidemic = 0usize;
    let mut size_sum = 0.0;
    for o in outcomes.iter().filter(|o| classify(o, n, frac_threshold)) {
        epidemic += 1;
        size_sum += o.fraction(n);
    }
    Ok(EmpiricalEstimates {
        pe_emp: epidemic as f64 / outcomes.len() as f64,
        size_emp: (epidemic > 0).then(|| size_sum / epidemic as f64),
        trials_epidemic: epidemic,
    })
}

/// Graph realizations for grid point `grid_index`.
pub fn point_graphs(
    config: &SweepConfig,
    grid_index: usize,
    model: &JointDegreeModel,
) -> Result<Vec<ClusteredGraph>> {
    (0..config.graphs_per_point)
        .into_par_iter()
        .map(|g| {
            let mut rng = stream_rng(config.master_seed, &[grid_index as u64, GRAPH_STREAM, g as u64]);
            generate(model, config.n, &mut rng)
        })
        .collect()
}

/// Runs `config.trials` outbreaks, trial `k` on graph `k mod graphs.len()`
/// from a uniformly random seed node. Output order is trial order.
pub fn run_trials(
    config: &SweepConfig,
    grid_index: usize,
    graphs: &[ClusteredGraph],
) -> Result<Vec<SimulationOutcome>> {
    (0..config.trials)
        .into_par_iter()
        .map_init(Simulator::new, |sim, k| {
            let graph = &graphs[k % graphs.len()];
            let mut rng = stream_rng(config.master_seed, &[grid_index as u64, TRIAL_STREAM, k as u64]);
            let seed = rng.random_range(0..graph.n());
            sim.run(graph, &config.params, seed, config.seed_strain, &mut rng)
        })
        .collect()
}

fn note(errors: &mut Vec<String>, what: &str, e: &Error) {
    errors.push(format!("{what}: {e}"));
}

/// Analytic columns `(rho_J, pe_pred, size_pred)` with failures noted.
fn predictions(
    model: &JointDegreeModel,
    params: &StrainParams,
    seed: Strain,
    errors: &mut Vec<String>,
) -> (f64, f64, f64) {
    let rho = match threshold_rho(model, params) {
        Ok(r) => r,
        Err(Error::DegenerateModel) => 0.0,
        Err(e) => {
            note(errors, "rho_J", &e);
            f64::NAN
        }
    };
    let pe = emergence_probability(model, params)
        .map(|s| s.for_seed(seed))
        .unwrap_or_else(|e| {
            note(errors, "pe_pred", &e);
            f64::NAN
        });
    let size = size_heuristic(model, params).unwrap_or_else(|e| {
        note(errors, "size_pred", &e);
        f64::NAN
    });
    (rho, pe, size)
}

pub fn run_point(config: &SweepConfig, grid_index: usize) -> Result<SweepRow> {
    let x = config.grid[grid_index];
    let model = config.family.model_at(x)?;
    let graphs = point_graphs(config, grid_index, &model)?;
    let outcomes = run_trials(config, grid_index, &graphs)?;
    let est = empirical_estimates(&outcomes, config.n, config.frac_threshold)?;

    let mut errors = Vec::new();
    let (rho_j, pe_pred, size_pred) =
        predictions(&model, &config.params, config.seed_strain, &mut errors);
    let m = model.moments();
    Ok(SweepRow {
        grid_param: x,
        lambda_s: m.mean_s,
        lambda_t: m.mean_t,
        c: config.family.c(),
        n: config.n,
        trials: config.trials,
        rho_j,
        pe_pred,
        pe_emp: est.pe_emp,
        size_pred,
        size_emp: est.size_emp,
        trials_epidemic: est.trials_epidemic,
        error: (!errors.is_empty()).then(|| errors.join("; ")),
    })
}

/// Runs every grid point in order. Deterministic given `config.master_seed`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    (0..config.grid.len()).map(|i| run_point(config, i)).collect()
}

pub fn write_rows<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(SWEEP_CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != SWEEP_CSV_HEADER {
        return Err(Error::Parse(format!("unexpected sweep header `{}`", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}
