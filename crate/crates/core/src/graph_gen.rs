//! Clustered configuration-model graphs: single stubs are matched in pairs,
//! triangle corners in trios, and the result is simplified.

use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::degree_models::JointDegreeModel;
use crate::error::{Error, Result};

/// Per-node `(s, t)` counts with `sum s` even and `sum t` divisible by 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    nodes: Vec<(u32, u32)>,
    fixups: u32,
}

impl DegreeSequence {
    pub fn new(nodes: Vec<(u32, u32)>) -> Result<Self> {
        let (ss, st) = sums(&nodes);
        if ss % 2 != 0 || st % 3 != 0 {
            return Err(Error::Argument(format!(
                "degree sequence has sum(s) = {ss}, sum(t) = {st}; need even and a multiple of 3"
            )));
        }
        Ok(DegreeSequence { nodes, fixups: 0 })
    }

    pub fn nodes(&self) -> &[(u32, u32)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unit increments applied by the parity fixup.
    pub fn fixups(&self) -> u32 {
        self.fixups
    }
}

fn sums(nodes: &[(u32, u32)]) -> (u64, u64) {
    nodes.iter().fold((0, 0), |(a, b), &(s, t)| {
        (a + u64::from(s), b + u64::from(t))
    })
}

/// Draws `n` i.i.d. `(s, t)` pairs, then forces the parity constraints by
/// incrementing uniformly chosen nodes.
pub fn sample_degree_sequence<R: Rng + ?Sized>(
    model: &JointDegreeModel,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::Argument("need at least one node".into()));
    }
    let sampler = model.sampler()?;
    let mut nodes: Vec<(u32, u32)> = (0..n).map(|_| sampler.sample(rng)).collect();
    let (ss, mut st) = sums(&nodes);
    let mut fixups = 0;
    if ss % 2 == 1 {
        nodes[rng.random_range(0..n)].0 += 1;
        fixups += 1;
    }
    while st % 3 != 0 {
        nodes[rng.random_range(0..n)].1 += 1;
        st += 1;
        fixups += 1;
    }
    Ok(DegreeSequence { nodes, fixups })
}

/// Output of stub matching before any simplification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMatching {
    pub n: usize,
    pub single_pairs: Vec<(u32, u32)>,
    pub trios: Vec<[u32; 3]>,
}

/// Uniform random pairing of single stubs and uniform random partition of
/// triangle corners into trios.
pub fn match_stubs<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> RawMatching {
    let mut singles = Vec::new();
    let mut corners = Vec::new();
    for (v, &(s, t)) in seq.nodes.iter().enumerate() {
        let v = v as u32;
        singles.extend(std::iter::repeat_n(v, s as usize));
        corners.extend(std::iter::repeat_n(v, t as usize));
    }
    singles.shuffle(rng);
    corners.shuffle(rng);
    RawMatching {
        n: seq.len(),
        single_pairs: singles.chunks_exact(2).map(|c| (c[0], c[1])).collect(),
        trios: corners.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
    }
}

/// What simplification removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Edges produced by matching: single pairs plus three per trio.
    pub raw_edges: u64,
    pub self_loops: u64,
    pub parallel_merged: u64,
    /// Trios with a repeated node.
    pub degenerate_triangles: u64,
}

impl Diagnostics {
    /// Fraction of raw edges dropped as self-loops or merged duplicates.
    pub fn removed_fraction(&self) -> f64 {
        if self.raw_edges == 0 {
            0.0
        } else {
            (self.self_loops + self.parallel_merged) as f64 / self.raw_edges as f64
        }
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "raw_edges={} self_loops={} parallel_merged={} degenerate_triangles={}",
            self.raw_edges, self.self_loops, self.parallel_merged, self.degenerate_triangles
        )
    }
}

/// A simple undirected graph in compressed adjacency form. Neighbor lists
/// are sorted and free of self-loops and duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteredGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    diagnostics: Diagnostics,
}

impl ClusteredGraph {
    /// Builds a simple graph from arbitrary edges, dropping loops and
    /// duplicates.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut diagnostics = Diagnostics::default();
        let mut list = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Argument(format!("edge ({u}, {v}) outside [0, {n})")));
            }
            diagnostics.raw_edges += 1;
            if u == v {
                diagnostics.self_loops += 1;
            } else {
                list.push((u.min(v), u.max(v)));
            }
        }
        Ok(Self::from_normalized(n, list, diagnostics))
    }

    fn from_normalized(n: usize, mut edges: Vec<(u32, u32)>, mut diagnostics: Diagnostics) -> Self {
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        diagnostics.parallel_merged += (before - edges.len()) as u64;

        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[n]];
        // Sorted edge order yields sorted neighbor lists.
        for &(u, v) in &edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        ClusteredGraph {
            offsets,
            targets,
            diagnostics,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u as u32, v))
        })
    }

    /// Writes `u v` lines followed by a `# diagnostics:` trailer.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        writeln!(out, "# diagnostics: n={} {}", self.n(), self.diagnostics)
    }

    /// Reads the format produced by [`write_edge_list`](Self::write_edge_list).
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut edges = Vec::new();
        let mut n = None;
        let mut diag = Diagnostics::default();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("# diagnostics:") {
                for kv in rest.split_whitespace() {
                    let (k, v) = kv
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("bad trailer field `{kv}`")))?;
                    let v: u64 = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad trailer value `{kv}`")))?;
                    match k {
                        "n" => n = Some(v as usize),
                        "raw_edges" => diag.raw_edges = v,
                        "self_loops" => diag.self_loops = v,
                        "parallel_merged" => diag.parallel_merged = v,
                        "degenerate_triangles" => diag.degenerate_triangles = v,
                        _ => {}
                    }
                }
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<u32>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(Error::Parse(format!("bad edge line `{line}`"))),
            }
        }
        let n = match n {
            Some(n) => n,
            None => edges.iter().map(|&(u, v)| u.max(v) as usize + 1).max().unwrap_or(0),
        };
        let mut g = Self::from_edges(n, edges)?;
        g.diagnostics = diag;
        Ok(g)
    }
}

/// Turns a raw matching into a simple graph. Trios become three pairwise
/// edges; loops are dropped and parallel edges merged.
pub fn simplify(raw: &RawMatching) -> ClusteredGraph {
    let mut diagnostics = Diagnostics::default();
    let mut edges = Vec::with_capacity(raw.single_pairs.len() + 3 * raw.trios.len());
    let mut push = |u: u32, v: u32, d: &mut Diagnostics| {
        d.raw_edges += 1;
        if u == v {
            d.self_loops += 1;
        } else {
            edges.push((u.min(v), u.max(v)));
        }
    };
    for &(u, v) in &raw.single_pairs {
        push(u, v, &mut diagnostics);
    }
    for &[a, b, c] in &raw.trios {
        if a == b || b == c || a == c {
            diagnostics.degenerate_triangles += 1;
        }
        push(a, b, &mut diagnostics);
        push(b, c, &mut diagnostics);
        push(a, c, &mut diagnostics);
    }
    ClusteredGraph::from_normalized(raw.n, edges, diagnostics)
}

pub fn assemble<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> ClusteredGraph {
    simplify(&match_stubs(seq, rng))
}

/// Samples a degree sequence of length `n` and assembles it.
pub fn generate<R: Rng + ?Sized>(
    model: &JointDegreeModel,
    n: usize,
    rng: &mut R,
) -> Result<ClusteredGraph> {
    let seq = sample_degree_sequence(model, n, rng)?;
    Ok(assemble(&seq, rng))
}

/// Closed triangles and connected triples of a simple graph.
pub fn triangle_and_triple_counts(graph: &ClusteredGraph) -> (u64, u64) {
    let mut triangles = 0u64;
    let mut triples = 0u64;
    for u in 0..graph.n() {
        let d = graph.degree(u) as u64;
        triples += d * d.saturating_sub(1) / 2;
        let nu = graph.neighbors(u);
        for &v in nu.iter().filter(|&&v| v as usize > u) {
            let nv = graph.neighbors(v as usize);
            // count w > v adjacent to both
            let (mut i, mut j) = (nu.partition_point(|&w| w <= v), nv.partition_point(|&w| w <= v));
            while i < nu.len() && j < nv.len() {
                match nu[i].cmp(&nv[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        triangles += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
    }
    (triangles, triples)
}

/// `3 * triangles / connected triples`, or 0 with no connected triples.
pub fn global_clustering(graph: &ClusteredGraph) -> f64 {
    let (triangles, triples) = triangle_and_triple_counts(graph);
    if triples == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / triples as f64
    }
}
