//! Two-strain contagion on random graphs with tunable clustering.
//!
//! Graphs come from a configuration model over single edges and triangles.
//! Outbreaks are simulated round by round with mutation between strains,
//! and the emergence probability, epidemic threshold and mean epidemic size
//! are predicted analytically.

pub mod analytics;
pub mod cli;
pub mod degree_models;
pub mod error;
pub mod graph_gen;
pub mod harness;
pub mod rng;
pub mod spread_sim;

pub use degree_models::{DegreeTable, JointDegreeModel, ModelFamily, MomentSet, PgfTerms};
pub use error::{Error, Result};
pub use graph_gen::{ClusteredGraph, DegreeSequence, Diagnostics};
pub use harness::{run_sweep, SweepConfig, SweepRow};
pub use spread_sim::{SimulationOutcome, Simulator, Strain, StrainParams};
