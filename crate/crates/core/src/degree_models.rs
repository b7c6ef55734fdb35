//! Joint degree distributions `q(s, t)` over the number of single edges `s`
//! and triangle corners `t` attached to a node.
//!
//! Three families are supported:
//!
//! * [`JointDegreeModel::DoublyPoisson`]: `s ~ Poisson(lambda_s)` and
//!   `t ~ Poisson(lambda_t)`, independent.
//! * [`JointDegreeModel::ClusterTunable`]: `s = 2 X` with
//!   `X ~ Poisson((4 - c) lambda / 2)` and `t ~ Poisson(c lambda / 2)`. The mean
//!   total degree `<s> + 2<t> = 4 lambda` and its variance `8 lambda` do not
//!   depend on `c`, so `c` only moves edges between singles and triangles.
//! * [`JointDegreeModel::Table`]: an explicit finite support.
//!
//! The built-in families use closed forms everywhere; nothing is truncated.
//! Heavy-tailed inputs must be supplied as a pre-truncated [`DegreeTable`].

use std::io::Read;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Poisson;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(p) = 1` for a constructed table.
pub const TABLE_SUM_TOL: f64 = 1e-12;
/// Tolerance on `sum(p) = 1` accepted by the CSV parser before renormalizing.
pub const CSV_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub s: u32,
    pub t: u32,
    pub p: f64,
}

/// A finite joint degree distribution. Rows have distinct `(s, t)`,
/// nonnegative probabilities and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeTable {
    rows: Vec<TableRow>,
}

impl DegreeTable {
    pub fn new(rows: Vec<TableRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidModel("degree table has no rows".into()));
        }
        let mut keys: Vec<(u32, u32)> = Vec::with_capacity(rows.len());
        let mut total = 0.0;
        for row in &rows {
            if !row.p.is_finite() || row.p < 0.0 {
                return Err(Error::InvalidModel(format!(
                    "probability for (s={}, t={}) is {}",
                    row.s, row.t, row.p
                )));
            }
            keys.push((row.s, row.t));
            total += row.p;
        }
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidModel(format!(
                "duplicate support point (s={}, t={})",
                w[0].0, w[0].1
            )));
        }
        if (total - 1.0).abs() > TABLE_SUM_TOL {
            return Err(Error::InvalidModel(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(DegreeTable { rows })
    }

    /// Point mass at `(s, t)`.
    pub fn point(s: u32, t: u32) -> Self {
        DegreeTable {
            rows: vec![TableRow { s, t, p: 1.0 }],
        }
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    /// Parses the `s,t,p` CSV format. Sums within [`CSV_SUM_TOL`] of one are
    /// accepted and renormalized.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let names: Vec<&str> = headers.iter().collect();
        if names != ["s", "t", "p"] {
            return Err(Error::Parse(format!(
                "expected header `s,t,p`, found `{}`",
                names.join(",")
            )));
        }
        let mut rows = Vec::new();
        for rec in rdr.deserialize() {
            let row: TableRow = rec?;
            rows.push(row);
        }
        let total: f64 = rows.iter().map(|r| r.p).sum();
        if !((1.0 - CSV_SUM_TOL)..=(1.0 + CSV_SUM_TOL)).contains(&total) {
            return Err(Error::Parse(format!(
                "probabilities sum to {total}, outside 1 +/- {CSV_SUM_TOL:e}"
            )));
        }
        for row in &mut rows {
            row.p /= total;
        }
        DegreeTable::new(rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }
}

/// Raw moments of a joint degree distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    /// `<s>`
    pub mean_s: f64,
    /// `<t>`
    pub mean_t: f64,
    /// `<s^2>`
    pub ex2_s: f64,
    /// `<t^2>`
    pub ex2_t: f64,
    /// `<s t>`
    pub cross: f64,
}

impl MomentSet {
    /// Mean excess single-edge count `(<s^2> - <s>) / <s>`; zero when `<s> = 0`.
    pub fn excess_s(&self) -> f64 {
        ratio_or_zero(self.ex2_s - self.mean_s, self.mean_s)
    }

    /// Mean excess triangle count `(<t^2> - <t>) / <t>`; zero when `<t> = 0`.
    pub fn excess_t(&self) -> f64 {
        ratio_or_zero(self.ex2_t - self.mean_t, self.mean_t)
    }

    /// Mean total degree `<s> + 2<t>`.
    pub fn mean_degree(&self) -> f64 {
        self.mean_s + 2.0 * self.mean_t
    }

    /// Variance of the total degree `s + 2t`.
    pub fn degree_variance(&self) -> f64 {
        let ex2 = self.ex2_s + 4.0 * self.cross + 4.0 * self.ex2_t;
        ex2 - self.mean_degree().powi(2)
    }
}

fn ratio_or_zero(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// `G`, the size-biased single-edge sum and the size-biased triangle sum,
/// evaluated at one point `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgfTerms {
    /// `sum q(s,t) a^s b^t`
    pub g: f64,
    /// `sum s q(s,t) / <s> a^(s-1) b^t`, or 1 when `<s> = 0`
    pub edge: f64,
    /// `sum t q(s,t) / <t> a^s b^(t-1)`, or 1 when `<t> = 0`
    pub tri: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointDegreeModel {
    DoublyPoisson { lambda_s: f64, lambda_t: f64 },
    ClusterTunable { lambda: f64, c: f64 },
    Table(DegreeTable),
}

impl JointDegreeModel {
    pub fn doubly_poisson(lambda_s: f64, lambda_t: f64) -> Result<Self> {
        let m = JointDegreeModel::DoublyPoisson { lambda_s, lambda_t };
        m.validate()?;
        Ok(m)
    }

    pub fn cluster_tunable(lambda: f64, c: f64) -> Result<Self> {
        let m = JointDegreeModel::ClusterTunable { lambda, c };
        m.validate()?;
        Ok(m)
    }

    pub fn table(rows: Vec<TableRow>) -> Result<Self> {
        Ok(JointDegreeModel::Table(DegreeTable::new(rows)?))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            JointDegreeModel::DoublyPoisson { lambda_s, lambda_t } => {
                if !(lambda_s >= 0.0 && lambda_s.is_finite()) {
                    return Err(Error::InvalidModel(format!("lambda_s = {lambda_s}")));
                }
                if !(lambda_t >= 0.0 && lambda_t.is_finite()) {
                    return Err(Error::InvalidModel(format!("lambda_t = {lambda_t}")));
                }
            }
            JointDegreeModel::ClusterTunable { lambda, c } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidModel(format!("lambda = {lambda}")));
                }
                if !(0.0..=4.0).contains(&c) {
                    return Err(Error::InvalidModel(format!("c = {c} not in [0, 4]")));
                }
            }
            // constructor-checked
            JointDegreeModel::Table(_) => {}
        }
        Ok(())
    }

    /// Poisson rates `(X, t)` for the cluster-tunable family, where `s = 2X`.
    fn cluster_rates(lambda: f64, c: f64) -> (f64, f64) {
        ((4.0 - c) / 2.0 * lambda, c / 2.0 * lambda)
    }

    /// `q(s, t)`; zero outside the support.
    pub fn pmf(&self, s: u32, t: u32) -> f64 {
        match self {
            JointDegreeModel::DoublyPoisson { lambda_s, lambda_t } => {
                poisson_pmf(*lambda_s, s) * poisson_pmf(*lambda_t, t)
            }
            JointDegreeModel::ClusterTunable { lambda, c } => {
                if s % 2 == 1 {
                    return 0.0;
                }
                let (rx, rt) = Self::cluster_rates(*lambda, *c);
                poisson_pmf(rx, s / 2) * poisson_pmf(rt, t)
            }
            JointDegreeModel::Table(table) => table
                .rows
                .iter()
                .find(|r| r.s == s && r.t == t)
                .map_or(0.0, |r| r.p),
        }
    }

    pub fn moments(&self) -> MomentSet {
        match self {
            JointDegreeModel::DoublyPoisson { lambda_s, lambda_t } => {
                let (ls, lt) = (*lambda_s, *lambda_t);
                MomentSet {
                    mean_s: ls,
                    mean_t: lt,
                    ex2_s: ls + ls * ls,
                    ex2_t: lt + lt * lt,
                    cross: ls * lt,
                }
            }
            JointDegreeModel::ClusterTunable { lambda, c } => {
                let (rx, rt) = Self::cluster_rates(*lambda, *c);
                MomentSet {
                    mean_s: 2.0 * rx,
                    mean_t: rt,
                    ex2_s: 4.0 * (rx + rx * rx),
                    ex2_t: rt + rt * rt,
                    cross: 2.0 * rx * rt,
                }
            }
            JointDegreeModel::Table(table) => {
                let mut m = MomentSet {
                    mean_s: 0.0,
                    mean_t: 0.0,
                    ex2_s: 0.0,
                    ex2_t: 0.0,
                    cross: 0.0,
                };
                for r in &table.rows {
                    let (s, t) = (f64::from(r.s), f64::from(r.t));
                    m.mean_s += r.p * s;
                    m.mean_t += r.p * t;
                    m.ex2_s += r.p * s * s;
                    m.ex2_t += r.p * t * t;
                    m.cross += r.p * s * t;
                }
                m
            }
        }
    }

    /// Evaluates the generating-function sums at `(a, b)` in the unit square.
    pub fn pgf_terms(&self, a: f64, b: f64) -> Result<PgfTerms> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::Domain(format!("pgf arguments ({a}, {b}) outside [0,1]^2")));
        }
        Ok(self.pgf_terms_unchecked(a, b))
    }

    /// [`pgf_terms`](Self::pgf_terms) without the domain check; used in the
    /// fixed-point inner loop where iterates stay in `[0, 1]` by construction.
    pub(crate) fn pgf_terms_unchecked(&self, a: f64, b: f64) -> PgfTerms {
        match self {
            JointDegreeModel::DoublyPoisson { lambda_s, lambda_t } => {
                let g = (lambda_s * (a - 1.0) + lambda_t * (b - 1.0)).exp();
                PgfTerms {
                    g,
                    edge: if *lambda_s > 0.0 { g } else { 1.0 },
                    tri: if *lambda_t > 0.0 { g } else { 1.0 },
                }
            }
            JointDegreeModel::ClusterTunable { lambda, c } => {
                let (rx, rt) = Self::cluster_rates(*lambda, *c);
                let g = (rx * (a * a - 1.0) + rt * (b - 1.0)).exp();
                PgfTerms {
                    g,
                    // d/da exp(rx (a^2 - 1)) / (2 rx) = a exp(...)
                    edge: if rx > 0.0 { a * g } else { 1.0 },
                    tri: if rt > 0.0 { g } else { 1.0 },
                }
            }
            JointDegreeModel::Table(table) => {
                let m = self.moments();
                let (mut g, mut edge, mut tri) = (0.0, 0.0, 0.0);
                for r in &table.rows {
                    let (s, t) = (r.s as i32, r.t as i32);
                    let bt = b.powi(t);
                    g += r.p * a.powi(s) * bt;
                    if s > 0 {
                        edge += f64::from(r.s) * r.p * a.powi(s - 1) * bt;
                    }
                    if t > 0 {
                        tri += f64::from(r.t) * r.p * a.powi(s) * b.powi(t - 1);
                    }
                }
                PgfTerms {
                    g,
                    edge: if m.mean_s > 0.0 { edge / m.mean_s } else { 1.0 },
                    tri: if m.mean_t > 0.0 { tri / m.mean_t } else { 1.0 },
                }
            }
        }
    }

    pub fn sampler(&self) -> Result<DegreeSampler> {
        self.validate()?;
        let kind = match self {
            JointDegreeModel::DoublyPoisson { lambda_s, lambda_t } => SamplerKind::Poisson {
                singles: poisson(*lambda_s),
                triangles: poisson(*lambda_t),
                double_singles: false,
            },
            JointDegreeModel::ClusterTunable { lambda, c } => {
                let (rx, rt) = Self::cluster_rates(*lambda, *c);
                SamplerKind::Poisson {
                    singles: poisson(rx),
                    triangles: poisson(rt),
                    double_singles: true,
                }
            }
            JointDegreeModel::Table(table) => SamplerKind::Table {
                support: table.rows.iter().map(|r| (r.s, r.t)).collect(),
                index: WeightedIndex::new(table.rows.iter().map(|r| r.p))
                    .map_err(|e| Error::InvalidModel(e.to_string()))?,
            },
        };
        Ok(DegreeSampler { kind })
    }
}

/// A one-parameter curve of models, `lambda -> q(s, t)`, used for sweeps and
/// threshold search.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFamily {
    /// Doubly Poisson with `lambda_s = lambda_t = lambda`.
    DoublyPoissonDiagonal,
    /// Doubly Poisson with `lambda_s = lambda` and a fixed `lambda_t`.
    DoublyPoissonSingles { lambda_t: f64 },
    /// Doubly Poisson with `lambda_t = lambda` and a fixed `lambda_s`.
    DoublyPoissonTriangles { lambda_s: f64 },
    /// Cluster-tunable family at a fixed `c`.
    ClusterTunable { c: f64 },
    /// The same model for every `lambda`.
    Fixed(JointDegreeModel),
}

impl ModelFamily {
    pub fn model_at(&self, lambda: f64) -> Result<JointDegreeModel> {
        match self {
            ModelFamily::DoublyPoissonDiagonal => JointDegreeModel::doubly_poisson(lambda, lambda),
            ModelFamily::DoublyPoissonSingles { lambda_t } => {
                JointDegreeModel::doubly_poisson(lambda, *lambda_t)
            }
            ModelFamily::DoublyPoissonTriangles { lambda_s } => {
                JointDegreeModel::doubly_poisson(*lambda_s, lambda)
            }
            ModelFamily::ClusterTunable { c } => JointDegreeModel::cluster_tunable(lambda, *c),
            ModelFamily::Fixed(model) => Ok(model.clone()),
        }
    }

    /// Clustering knob, for the cluster-tunable family only.
    pub fn c(&self) -> Option<f64> {
        match self {
            ModelFamily::ClusterTunable { c } => Some(*c),
            _ => None,
        }
    }
}

/// Draws one `(s, t)` pair from `model`. Builds a fresh [`DegreeSampler`];
/// use that directly when drawing many times.
pub fn sample_joint_degree<R: Rng + ?Sized>(
    model: &JointDegreeModel,
    rng: &mut R,
) -> Result<(u32, u32)> {
    Ok(model.sampler()?.sample(rng))
}

fn poisson(rate: f64) -> Option<Poisson<f64>> {
    // rate validated by the caller; zero means a point mass at 0
    (rate > 0.0).then(|| Poisson::new(rate).expect("positive finite rate"))
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Poisson {
        singles: Option<Poisson<f64>>,
        triangles: Option<Poisson<f64>>,
        double_singles: bool,
    },
    Table {
        support: Vec<(u32, u32)>,
        index: WeightedIndex<f64>,
    },
}

/// Reusable sampler for a validated [`JointDegreeModel`].
#[derive(Debug, Clone)]
pub struct DegreeSampler {
    kind: SamplerKind,
}

impl DegreeSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        match &self.kind {
            SamplerKind::Poisson {
                singles,
                triangles,
                double_singles,
            } => {
                let draw = |d: &Option<Poisson<f64>>, rng: &mut R| {
                    d.as_ref().map_or(0, |d| d.sample(rng) as u32)
                };
                let x = draw(singles, rng);
                let t = draw(triangles, rng);
                (if *double_singles { 2 * x } else { x }, t)
            }
            SamplerKind::Table { support, index } => support[index.sample(rng)],
        }
    }
}

/// Poisson probability mass, evaluated in log space.
pub(crate) fn poisson_pmf(rate: f64, k: u32) -> f64 {
    if rate == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let ln_fact: f64 = (2..=k).map(|i| f64::from(i).ln()).sum();
    (f64::from(k) * rate.ln() - rate - ln_fact).exp()
}
