//! Command-line front end. The binary only forwards `std::env::args` here so
//! that the argument handling can be exercised from tests.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use crate::analytics::{
    critical_parameter, effective_transmissibility, emergence_probability, size_heuristic,
    threshold_rho,
};
use crate::degree_models::{DegreeTable, JointDegreeModel, ModelFamily};
use crate::error::{Error, Result};
use crate::graph_gen::{generate, global_clustering};
use crate::harness::{run_sweep, write_rows, SweepConfig, DEFAULT_FRAC_THRESHOLD, DEFAULT_GRAPHS_PER_POINT};
use crate::rng::stream_rng;
use crate::spread_sim::{classify, simulate, Strain, StrainParams};

#[derive(Parser, Debug)]
#[command(name = "mutaclust", version, about = "Two-strain contagion on clustered random graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph and write it as an edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Edge list path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one outbreak on a fresh graph and print its outcome.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        strains: StrainArgs,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, default_value_t = 1)]
        seed_strain: u8,
        /// Seed node; uniformly random when omitted.
        #[arg(long)]
        seed_node: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_FRAC_THRESHOLD)]
        frac_threshold: f64,
    },
    /// Print the analytic predictions for one parameter point.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        strains: StrainArgs,
    },
    /// Bisect for the critical lambda along a model family.
    Threshold {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        strains: StrainArgs,
        #[arg(long, default_value_t = 1e-6)]
        lo: f64,
        #[arg(long, default_value_t = 10.0)]
        hi: f64,
    },
    /// Monte Carlo sweep with predictions, written as CSV.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        strains: StrainArgs,
        /// Comma-separated values of the varied lambda.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 2_000)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_FRAC_THRESHOLD)]
        frac_threshold: f64,
        #[arg(long, default_value_t = 1)]
        seed_strain: u8,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        #[arg(long, default_value_t = DEFAULT_GRAPHS_PER_POINT)]
        graphs_per_point: usize,
        /// CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    DoublyPoisson,
    ClusterTunable,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::DoublyPoisson)]
    pub model: ModelKind,
    #[arg(long)]
    pub lambda_s: Option<f64>,
    #[arg(long)]
    pub lambda_t: Option<f64>,
    /// Cluster-tunable scale, or both doubly Poisson means at once.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Joint degree table with header `s,t,p`.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Argument(format!("--{flag} is required for this model")))
}

impl ModelArgs {
    /// A single fully specified model.
    pub fn model(&self) -> Result<JointDegreeModel> {
        match self.model {
            ModelKind::DoublyPoisson => {
                let ls = self.lambda_s.or(self.lambda);
                let lt = self.lambda_t.or(self.lambda);
                JointDegreeModel::doubly_poisson(need(ls, "lambda-s")?, need(lt, "lambda-t")?)
            }
            ModelKind::ClusterTunable => {
                JointDegreeModel::cluster_tunable(need(self.lambda, "lambda")?, need(self.c, "c")?)
            }
            ModelKind::Table => {
                let path = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::Argument("--table is required for the table model".into()))?;
                Ok(JointDegreeModel::Table(DegreeTable::from_csv_path(path)?))
            }
        }
    }

    /// The one-parameter family swept or bisected over. For doubly Poisson
    /// models a fixed `--lambda-t` varies `lambda_s`, a fixed `--lambda-s`
    /// varies `lambda_t`, and neither varies both together.
    pub fn family(&self) -> Result<ModelFamily> {
        match self.model {
            ModelKind::DoublyPoisson => match (self.lambda_s, self.lambda_t) {
                (None, None) => Ok(ModelFamily::DoublyPoissonDiagonal),
                (None, Some(lambda_t)) => Ok(ModelFamily::DoublyPoissonSingles { lambda_t }),
                (Some(lambda_s), None) => Ok(ModelFamily::DoublyPoissonTriangles { lambda_s }),
                (Some(_), Some(_)) => Err(Error::Argument(
                    "give at most one of --lambda-s and --lambda-t; the other is varied".into(),
                )),
            },
            ModelKind::ClusterTunable => Ok(ModelFamily::ClusterTunable { c: need(self.c, "c")? }),
            ModelKind::Table => Ok(ModelFamily::Fixed(self.model()?)),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct StrainArgs {
    #[arg(long, default_value_t = 0.2)]
    pub t1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t2: f64,
    #[arg(long)]
    pub mu11: Option<f64>,
    #[arg(long)]
    pub mu12: Option<f64>,
    #[arg(long)]
    pub mu21: Option<f64>,
    #[arg(long)]
    pub mu22: Option<f64>,
}

/// Completes a mutation row from whichever entries were given; an empty row
/// keeps its own strain.
fn mu_row(stay: Option<f64>, leave: Option<f64>) -> [f64; 2] {
    match (stay, leave) {
        (Some(a), Some(b)) => [a, b],
        (Some(a), None) => [a, 1.0 - a],
        (None, Some(b)) => [1.0 - b, b],
        (None, None) => [1.0, 0.0],
    }
}

impl StrainArgs {
    pub fn params(&self) -> Result<StrainParams> {
        let r1 = mu_row(self.mu11, self.mu12);
        let [b, a] = mu_row(self.mu22, self.mu21);
        StrainParams::new([self.t1, self.t2], [r1, [a, b]])
    }
}

fn open_out<'a>(path: Option<&PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli.command, out),
        Err(e) if !e.use_stderr() => {
            // --help and --version
            write!(out, "{e}")?;
            Ok(())
        }
        Err(e) => Err(Error::Argument(e.to_string())),
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Generate { model, n, rng_seed, out: path } => {
            let model = model.model()?;
            let graph = generate(&model, n, &mut stream_rng(rng_seed, &[]))?;
            {
                let mut w = open_out(path.as_ref(), out)?;
                graph.write_edge_list(&mut w)?;
                w.flush()?;
            }
            if path.is_some() {
                writeln!(
                    out,
                    "n={} edges={} clustering={:.6} {}",
                    graph.n(),
                    graph.edge_count(),
                    global_clustering(&graph),
                    graph.diagnostics()
                )?;
            }
        }
        Command::Simulate { model, strains, n, rng_seed, seed_strain, seed_node, frac_threshold } => {
            let model = model.model()?;
            let params = strains.params()?;
            let strain = Strain::from_label(seed_strain)?;
            let mut rng = stream_rng(rng_seed, &[]);
            let graph = generate(&model, n, &mut rng)?;
            let seed = match seed_node {
                Some(v) => v,
                None => rng.random_range(0..graph.n()),
            };
            let o = simulate(&graph, &params, seed, strain, &mut rng)?;
            writeln!(
                out,
                "seed_node={} seed_strain={} total_infected={} strain1={} strain2={} rounds={} fraction={:.6} epidemic={}",
                o.seed_node,
                o.seed_strain,
                o.total_infected,
                o.infected_by_strain[0],
                o.infected_by_strain[1],
                o.rounds,
                o.fraction(graph.n()),
                classify(&o, graph.n(), frac_threshold)
            )?;
        }
        Command::Predict { model, strains } => {
            let model = model.model()?;
            let params = strains.params()?;
            let rho = match threshold_rho(&model, &params) {
                Err(Error::DegenerateModel) => 0.0,
                r => r?,
            };
            let sol = emergence_probability(&model, &params)?;
            writeln!(out, "rho_J={rho}")?;
            writeln!(out, "pe_strain1={}", sol.prob_emergence[0])?;
            writeln!(out, "pe_strain2={}", sol.prob_emergence[1])?;
            writeln!(out, "h={:?} g={:?} iterations={}", sol.h, sol.g, sol.iterations)?;
            writeln!(out, "t_tilde={}", effective_transmissibility(&params))?;
            writeln!(out, "size_pred={}", size_heuristic(&model, &params)?)?;
        }
        Command::Threshold { model, strains, lo, hi } => {
            let family = model.family()?;
            let params = strains.params()?;
            let lambda = critical_parameter(&family, &params, (lo, hi))?;
            writeln!(out, "lambda_star={lambda}")?;
        }
        Command::Sweep {
            model,
            strains,
            grid,
            n,
            trials,
            frac_threshold,
            seed_strain,
            rng_seed,
            graphs_per_point,
            out: path,
        } => {
            let mut config = SweepConfig::new(model.family()?, grid, strains.params()?);
            config.n = n;
            config.trials = trials;
            config.frac_threshold = frac_threshold;
            config.seed_strain = Strain::from_label(seed_strain)?;
            config.master_seed = rng_seed;
            config.graphs_per_point = graphs_per_point;
            let rows = run_sweep(&config)?;
            let mut w = open_out(path.as_ref(), out)?;
            write_rows(&mut w, &rows)?;
            w.flush()?;
        }
    }
    Ok(())
}
