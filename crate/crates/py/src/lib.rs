//! Python bindings. Errors surface as `ValueError` for bad inputs,
//! `RuntimeError` for solver failures and `OSError` for I/O.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mutaclust::analytics;
use mutaclust::degree_models::{DegreeTable, TableRow};
use mutaclust::graph_gen;
use mutaclust::harness;
use mutaclust::rng::stream_rng;
use mutaclust::spread_sim;
use mutaclust::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e @ (Error::Convergence { .. } | Error::DegenerateModel) => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for mutaclust::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn strain(label: u8) -> PyResult<mutaclust::Strain> {
    mutaclust::Strain::from_label(label).py()
}

/// Joint distribution of single-edge and triangle counts per node.
#[pyclass(frozen, name = "DegreeModel", module = "mutaclust")]
struct DegreeModel(mutaclust::JointDegreeModel);

#[pymethods]
impl DegreeModel {
    #[staticmethod]
    fn doubly_poisson(lambda_s: f64, lambda_t: f64) -> PyResult<Self> {
        mutaclust::JointDegreeModel::doubly_poisson(lambda_s, lambda_t).py().map(Self)
    }

    #[staticmethod]
    fn cluster_tunable(lambda_: f64, c: f64) -> PyResult<Self> {
        mutaclust::JointDegreeModel::cluster_tunable(lambda_, c).py().map(Self)
    }

    /// From `(s, t, p)` triples.
    #[staticmethod]
    fn table(rows: Vec<(u32, u32, f64)>) -> PyResult<Self> {
        let rows = rows.into_iter().map(|(s, t, p)| TableRow { s, t, p }).collect();
        mutaclust::JointDegreeModel::table(rows).py().map(Self)
    }

    /// From a CSV file with header `s,t,p`.
    #[staticmethod]
    fn from_csv(path: std::path::PathBuf) -> PyResult<Self> {
        DegreeTable::from_csv_path(path).py().map(|t| Self(mutaclust::JointDegreeModel::Table(t)))
    }

    fn pmf(&self, s: u32, t: u32) -> f64 {
        self.0.pmf(s, t)
    }

    fn moments<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = self.0.moments();
        let d = PyDict::new(py);
        d.set_item("mean_s", m.mean_s)?;
        d.set_item("mean_t", m.mean_t)?;
        d.set_item("ex2_s", m.ex2_s)?;
        d.set_item("ex2_t", m.ex2_t)?;
        d.set_item("cross", m.cross)?;
        d.set_item("mean_degree", m.mean_degree())?;
        d.set_item("degree_variance", m.degree_variance())?;
        Ok(d)
    }

    /// `(G, G_edge, G_tri)` at `(a, b)`.
    fn pgf_terms(&self, a: f64, b: f64) -> PyResult<(f64, f64, f64)> {
        let k = self.0.pgf_terms(a, b).py()?;
        Ok((k.g, k.edge, k.tri))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// One-parameter family of degree models indexed by `lambda`.
#[pyclass(frozen, name = "ModelFamily", module = "mutaclust")]
struct ModelFamily(mutaclust::ModelFamily);

#[pymethods]
impl ModelFamily {
    /// Doubly Poisson with `lambda_s = lambda_t = lambda`.
    #[staticmethod]
    fn diagonal() -> Self {
        Self(mutaclust::ModelFamily::DoublyPoissonDiagonal)
    }

    /// Doubly Poisson varying `lambda_s` at fixed `lambda_t`.
    #[staticmethod]
    fn singles(lambda_t: f64) -> Self {
        Self(mutaclust::ModelFamily::DoublyPoissonSingles { lambda_t })
    }

    /// Doubly Poisson varying `lambda_t` at fixed `lambda_s`.
    #[staticmethod]
    fn triangles(lambda_s: f64) -> Self {
        Self(mutaclust::ModelFamily::DoublyPoissonTriangles { lambda_s })
    }

    #[staticmethod]
    fn cluster_tunable(c: f64) -> Self {
        Self(mutaclust::ModelFamily::ClusterTunable { c })
    }

    fn model_at(&self, lambda_: f64) -> PyResult<DegreeModel> {
        self.0.model_at(lambda_).py().map(DegreeModel)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Transmissibilities `t` and row-stochastic mutation matrix `mu`.
#[pyclass(frozen, name = "StrainParams", module = "mutaclust")]
struct StrainParams(spread_sim::StrainParams);

#[pymethods]
impl StrainParams {
    #[new]
    fn new(t: [f64; 2], mu: [[f64; 2]; 2]) -> PyResult<Self> {
        spread_sim::StrainParams::new(t, mu).py().map(Self)
    }

    #[staticmethod]
    fn from_diagonal(t1: f64, t2: f64, mu11: f64, mu22: f64) -> PyResult<Self> {
        spread_sim::StrainParams::from_diagonal(t1, t2, mu11, mu22).py().map(Self)
    }

    #[staticmethod]
    fn one_step_irreversible(t1: f64, t2: f64, mu12: f64) -> PyResult<Self> {
        spread_sim::StrainParams::one_step_irreversible(t1, t2, mu12).py().map(Self)
    }

    #[staticmethod]
    fn single_strain(t: f64) -> PyResult<Self> {
        spread_sim::StrainParams::single_strain(t).py().map(Self)
    }

    #[getter]
    fn t(&self) -> [f64; 2] {
        self.0.t()
    }

    #[getter]
    fn mu(&self) -> [[f64; 2]; 2] {
        self.0.mu()
    }

    fn __repr__(&self) -> String {
        format!("StrainParams(t={:?}, mu={:?})", self.0.t(), self.0.mu())
    }
}

/// Simple undirected graph sampled from a degree model.
#[pyclass(frozen, name = "Graph", module = "mutaclust")]
struct Graph(graph_gen::ClusteredGraph);

#[pymethods]
impl Graph {
    #[staticmethod]
    #[pyo3(signature = (model, n, rng_seed = 0))]
    fn generate(py: Python<'_>, model: &DegreeModel, n: usize, rng_seed: u64) -> PyResult<Self> {
        let model = model.0.clone();
        py.detach(|| graph_gen::generate(&model, n, &mut stream_rng(rng_seed, &[])))
            .py()
            .map(Self)
    }

    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> PyResult<Self> {
        graph_gen::ClusteredGraph::from_edges(n, edges).py().map(Self)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<u32>> {
        if v >= self.0.n() {
            return Err(PyValueError::new_err(format!("node {v} out of range")));
        }
        Ok(self.0.neighbors(v).to_vec())
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.0.edges().collect()
    }

    fn global_clustering(&self) -> f64 {
        graph_gen::global_clustering(&self.0)
    }

    fn diagnostics<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = self.0.diagnostics();
        let out = PyDict::new(py);
        out.set_item("raw_edges", d.raw_edges)?;
        out.set_item("self_loops", d.self_loops)?;
        out.set_item("parallel_merged", d.parallel_merged)?;
        out.set_item("degenerate_triangles", d.degenerate_triangles)?;
        out.set_item("removed_fraction", d.removed_fraction())?;
        Ok(out)
    }

    fn write_edge_list(&self, path: std::path::PathBuf) -> PyResult<()> {
        let file = std::fs::File::create(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        self.0
            .write_edge_list(std::io::BufWriter::new(file))
            .map_err(|e| PyOSError::new_err(e.to_string()))
    }
}

/// One outbreak; returns a dict with the outcome counts.
#[pyfunction]
#[pyo3(signature = (graph, params, seed_node, seed_strain = 1, rng_seed = 0))]
fn simulate<'py>(
    py: Python<'py>,
    graph: &Graph,
    params: &StrainParams,
    seed_node: usize,
    seed_strain: u8,
    rng_seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = strain(seed_strain)?;
    let o = spread_sim::simulate(&graph.0, &params.0, seed_node, s, &mut stream_rng(rng_seed, &[])).py()?;
    let d = PyDict::new(py);
    d.set_item("total_infected", o.total_infected)?;
    d.set_item("infected_by_strain", o.infected_by_strain)?;
    d.set_item("rounds", o.rounds)?;
    d.set_item("seed_node", o.seed_node)?;
    d.set_item("seed_strain", o.seed_strain.label())?;
    Ok(d)
}

/// `[[p_11..p_16], [p_21..p_26]]`.
#[pyfunction]
fn config_probs(params: &StrainParams) -> [[f64; 6]; 2] {
    analytics::triangle_config_probs(&params.0).rows()
}

#[pyfunction]
fn emergence_probability<'py>(
    py: Python<'py>,
    model: &DegreeModel,
    params: &StrainParams,
) -> PyResult<Bound<'py, PyDict>> {
    let sol = analytics::emergence_probability(&model.0, &params.0).py()?;
    let d = PyDict::new(py);
    d.set_item("prob_emergence", sol.prob_emergence)?;
    d.set_item("h", sol.h)?;
    d.set_item("g", sol.g)?;
    d.set_item("iterations", sol.iterations)?;
    d.set_item("residual", sol.residual)?;
    d.set_item("decomposable", sol.decomposable)?;
    Ok(d)
}

#[pyfunction]
fn jacobian(model: &DegreeModel, params: &StrainParams) -> PyResult<[[f64; 4]; 4]> {
    analytics::jacobian(&model.0, &params.0).py().map(|j| j.entries())
}

#[pyfunction]
fn threshold_rho(model: &DegreeModel, params: &StrainParams) -> PyResult<f64> {
    analytics::threshold_rho(&model.0, &params.0).py()
}

#[pyfunction]
fn one_step_irreversible_rho(lambda_s: f64, lambda_t: f64, t2: f64) -> PyResult<f64> {
    analytics::one_step_irreversible_rho(lambda_s, lambda_t, t2).py()
}

#[pyfunction]
fn critical_parameter(family: &ModelFamily, params: &StrainParams, lo: f64, hi: f64) -> PyResult<f64> {
    analytics::critical_parameter(&family.0, &params.0, (lo, hi)).py()
}

#[pyfunction]
fn effective_transmissibility(params: &StrainParams) -> f64 {
    analytics::effective_transmissibility(&params.0)
}

#[pyfunction]
fn size_heuristic(model: &DegreeModel, params: &StrainParams) -> PyResult<f64> {
    analytics::size_heuristic(&model.0, &params.0).py()
}

#[pyfunction]
fn progeny_mean_matrix(params: &StrainParams) -> [[f64; 4]; 4] {
    analytics::progeny_mean_matrix(&params.0)
}

/// Spectral radius of a square matrix given as a list of rows.
#[pyfunction]
fn spectral_radius(matrix: Vec<Vec<f64>>) -> PyResult<f64> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let at = |r: usize, c: usize| matrix[r][c];
    match n {
        2 => Ok(analytics::spectral_radius(&[[at(0, 0), at(0, 1)], [at(1, 0), at(1, 1)]])),
        4 => Ok(analytics::spectral_radius(&std::array::from_fn::<[f64; 4], 4, _>(|r| {
            std::array::from_fn(|c| at(r, c))
        }))),
        _ => Err(PyValueError::new_err("only 2x2 and 4x4 matrices are supported")),
    }
}

/// Runs a sweep; returns a list of row dicts and writes CSV to `out` if given.
#[pyfunction]
#[pyo3(signature = (
    family, grid, params, n = 20_000, trials = 2_000, frac_threshold = 0.05,
    rng_seed = 0, graphs_per_point = 10, seed_strain = 1, out = None
))]
#[allow(clippy::too_many_arguments)]
fn run_sweep<'py>(
    py: Python<'py>,
    family: &ModelFamily,
    grid: Vec<f64>,
    params: &StrainParams,
    n: usize,
    trials: usize,
    frac_threshold: f64,
    rng_seed: u64,
    graphs_per_point: usize,
    seed_strain: u8,
    out: Option<std::path::PathBuf>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut cfg = harness::SweepConfig::new(family.0.clone(), grid, params.0);
    cfg.n = n;
    cfg.trials = trials;
    cfg.frac_threshold = frac_threshold;
    cfg.master_seed = rng_seed;
    cfg.graphs_per_point = graphs_per_point;
    cfg.seed_strain = strain(seed_strain)?;
    let rows = py.detach(|| harness::run_sweep(&cfg)).py()?;
    if let Some(path) = out {
        let file = std::fs::File::create(path).map_err(|e| PyOSError::new_err(e.to_string()))?;
        harness::write_rows(std::io::BufWriter::new(file), &rows).py()?;
    }
    rows.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("grid_param", r.grid_param)?;
            d.set_item("lambda_s", r.lambda_s)?;
            d.set_item("lambda_t", r.lambda_t)?;
            d.set_item("c", r.c)?;
            d.set_item("n", r.n)?;
            d.set_item("trials", r.trials)?;
            d.set_item("rho_J", r.rho_j)?;
            d.set_item("pe_pred", r.pe_pred)?;
            d.set_item("pe_emp", r.pe_emp)?;
            d.set_item("size_pred", r.size_pred)?;
            d.set_item("size_emp", r.size_emp)?;
            d.set_item("trials_epidemic", r.trials_epidemic)?;
            d.set_item("error", r.error.as_deref())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "mutaclust")]
fn mutaclust_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<DegreeModel>()?;
    m.add_class::<ModelFamily>()?;
    m.add_class::<StrainParams>()?;
    m.add_class::<Graph>()?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(config_probs, m)?)?;
    m.add_function(wrap_pyfunction!(emergence_probability, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_rho, m)?)?;
    m.add_function(wrap_pyfunction!(one_step_irreversible_rho, m)?)?;
    m.add_function(wrap_pyfunction!(critical_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(effective_transmissibility, m)?)?;
    m.add_function(wrap_pyfunction!(size_heuristic, m)?)?;
    m.add_function(wrap_pyfunction!(progeny_mean_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_radius, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
