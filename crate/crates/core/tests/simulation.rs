mod common;

use mutaclust::analytics::critical_parameter;
use mutaclust::graph_gen::{assemble, generate, global_clustering, sample_degree_sequence};
use mutaclust::harness::{read_rows, run_sweep, write_rows, SweepConfig};
use mutaclust::rng::stream_rng;
use mutaclust::spread_sim::simulate;
use mutaclust::{JointDegreeModel, ModelFamily, Simulator, Strain, StrainParams};
use rand::Rng;

fn baseline_params() -> StrainParams {
    StrainParams::from_diagonal(0.2, 0.5, 0.75, 0.75).unwrap()
}

#[test]
fn equal_transmissibility_is_bond_percolation() {
    let model = JointDegreeModel::doubly_poisson(1.5, 0.6).unwrap();
    let g = generate(&model, 2_000, &mut stream_rng(11, &[0])).unwrap();
    let t = 0.4;
    let params = StrainParams::new([t, t], [[0.3, 0.7], [0.6, 0.4]]).unwrap();
    let trials = 2_000;

    let mut sim = Simulator::new();
    let mut rng = stream_rng(11, &[1]);
    let sir: Vec<usize> = (0..trials)
        .map(|_| {
            let seed = rng.random_range(0..g.n());
            sim.run(&g, &params, seed, Strain::One, &mut rng).unwrap().total_infected
        })
        .collect();
    let mut rng = stream_rng(11, &[2]);
    let perc: Vec<usize> = (0..trials)
        .map(|_| {
            let seed = rng.random_range(0..g.n());
            common::bond_percolation_cluster(&g, t, seed, &mut rng)
        })
        .collect();

    let d = common::ks_statistic(&sir, &perc);
    let m = trials as f64;
    let critical = 1.628 * ((m + m) / (m * m)).sqrt();
    assert!(d < critical, "KS statistic {d} exceeds {critical}");
}

#[test]
fn seed_is_counted_under_its_strain() {
    // the seed never mutates even when every new infection must
    let g = mutaclust::ClusteredGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let params = StrainParams::new([1.0, 1.0], [[0.0, 1.0], [1.0, 0.0]]).unwrap();
    let o = simulate(&g, &params, 0, Strain::One, &mut stream_rng(0, &[])).unwrap();
    assert_eq!(o.total_infected, 3);
    assert_eq!(o.infected_by_strain, [2, 1]);
}

#[test]
fn outcome_is_deterministic() {
    let model = JointDegreeModel::cluster_tunable(1.0, 2.0).unwrap();
    let g = generate(&model, 1_000, &mut stream_rng(3, &[])).unwrap();
    let run = || simulate(&g, &baseline_params(), 17, Strain::Two, &mut stream_rng(4, &[])).unwrap();
    assert_eq!(run(), run());
}

#[test]
fn assemble_is_reproducible() {
    let model = JointDegreeModel::doubly_poisson(2.0, 1.0).unwrap();
    let seq = sample_degree_sequence(&model, 500, &mut stream_rng(5, &[])).unwrap();
    let a = assemble(&seq, &mut stream_rng(6, &[]));
    let b = assemble(&seq, &mut stream_rng(6, &[]));
    assert_eq!(a, b);
}

#[test]
fn clustering_increases_with_c() {
    let cc: Vec<f64> = [0.01, 2.0, 3.99]
        .iter()
        .map(|&c| {
            let model = JointDegreeModel::cluster_tunable(1.0, c).unwrap();
            global_clustering(&generate(&model, 20_000, &mut stream_rng(7, &[])).unwrap())
        })
        .collect();
    assert!(cc[0] < cc[1] && cc[1] < cc[2], "{cc:?}");
}

fn small_config(grid: Vec<f64>) -> SweepConfig {
    let mut cfg = SweepConfig::new(ModelFamily::DoublyPoissonDiagonal, grid, baseline_params());
    cfg.n = 2_000;
    cfg.trials = 200;
    cfg.graphs_per_point = 3;
    cfg.master_seed = 42;
    cfg
}

#[test]
fn sweep_is_reproducible_and_round_trips() {
    let cfg = small_config(vec![0.3, 1.0, 3.0]);
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows, run_sweep(&cfg).unwrap());

    let mut other = cfg.clone();
    other.master_seed = 43;
    assert_ne!(rows, run_sweep(&other).unwrap());

    let mut buf = Vec::new();
    write_rows(&mut buf, &rows).unwrap();
    assert_eq!(read_rows(buf.as_slice()).unwrap(), rows);
}

#[test]
fn subcritical_rows_predict_no_emergence() {
    let cfg = small_config(vec![0.1, 0.3, 0.5, 0.7, 0.9, 2.0]);
    for row in run_sweep(&cfg).unwrap() {
        assert!((0.0..=1.0).contains(&row.pe_emp));
        assert!((0.0..=1.0).contains(&row.pe_pred));
        assert!((0.0..=1.0).contains(&row.size_pred));
        if row.rho_j <= 1.0 {
            assert!(row.pe_pred < 1e-9, "{row:?}");
        }
        assert_eq!(row.size_emp.is_some(), row.trials_epidemic > 0);
    }
}

#[test]
fn monte_carlo_onset_near_critical_lambda() {
    let params = baseline_params();
    let fam = ModelFamily::DoublyPoissonDiagonal;
    let star = critical_parameter(&fam, &params, (1e-6, 10.0)).unwrap();
    let grid: Vec<f64> = (11..=20).map(|k| k as f64 * 0.05).collect();
    let mut cfg = SweepConfig::new(fam, grid, params);
    cfg.trials = 2_000;
    cfg.master_seed = 5;
    let rows = run_sweep(&cfg).unwrap();
    let onset = rows
        .iter()
        .find(|r| r.pe_emp >= 0.005)
        .map(|r| r.grid_param)
        .expect("no epidemics on the grid");
    assert!((onset - star).abs() <= 0.1, "onset {onset} vs lambda* {star}");
}
