mod common;

use mutaclust::analytics::{
    emergence_probability, jacobian, pi_matrix, progeny_mean_matrix, spectral_radius,
    threshold_rho, triangle_config_probs,
};
use mutaclust::degree_models::TableRow;
use mutaclust::graph_gen::{assemble, match_stubs, DegreeSequence};
use mutaclust::harness::{read_rows, write_rows, SweepRow};
use mutaclust::rng::stream_rng;
use mutaclust::{JointDegreeModel, Strain, StrainParams};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = StrainParams> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64)
        .prop_map(|(t1, t2, a, b)| StrainParams::new([t1, t2], [[a, 1.0 - a], [1.0 - b, b]]).unwrap())
}

fn table() -> impl Strategy<Value = Vec<TableRow>> {
    prop::collection::btree_map((0u32..6, 0u32..4), 0.01..1.0f64, 1..8).prop_map(|m| {
        let total: f64 = m.values().sum();
        m.into_iter().map(|((s, t), w)| TableRow { s, t, p: w / total }).collect()
    })
}

/// Rescales so the sum is one to the last ulp, as the table constructor demands.
fn normalized(mut rows: Vec<TableRow>) -> Vec<TableRow> {
    let total: f64 = rows.iter().map(|r| r.p).sum();
    for r in &mut rows {
        r.p /= total;
    }
    rows
}

fn model() -> impl Strategy<Value = JointDegreeModel> {
    prop_oneof![
        (0.0..4.0f64, 0.0..4.0f64).prop_map(|(s, t)| JointDegreeModel::doubly_poisson(s, t).unwrap()),
        (0.0..3.0f64, 0.0..=4.0f64).prop_map(|(l, c)| JointDegreeModel::cluster_tunable(l, c).unwrap()),
        table().prop_map(|rows| JointDegreeModel::table(normalized(rows)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn config_rows_are_distributions(p in params()) {
        let probs = triangle_config_probs(&p);
        let oracle = common::enumerate_triangle(&p);
        for (row, want) in probs.rows().iter().zip(&oracle) {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (p, w) in row.iter().zip(want) {
                prop_assert!(*p >= 0.0);
                prop_assert!((p - w).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn progeny_matrix_matches_pi(p in params()) {
        let m = spectral_radius(&progeny_mean_matrix(&p));
        prop_assert!((m - common::rho2(pi_matrix(&p))).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pgf_is_one_at_one(m in model()) {
        let k = m.pgf_terms(1.0, 1.0).unwrap();
        prop_assert!((k.g - 1.0).abs() < 1e-12);
        prop_assert!((k.edge - 1.0).abs() < 1e-12);
        prop_assert!((k.tri - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pgf_monotone(m in model(), a in 0.0..=1.0f64, b in 0.0..=1.0f64, da in 0.0..=1.0f64, db in 0.0..=1.0f64) {
        let lo = m.pgf_terms(a, b).unwrap();
        let hi = m.pgf_terms(a + (1.0 - a) * da, b + (1.0 - b) * db).unwrap();
        prop_assert!(hi.g >= lo.g - 1e-12);
        prop_assert!(hi.edge >= lo.edge - 1e-12);
        prop_assert!(hi.tri >= lo.tri - 1e-12);
    }

    #[test]
    fn pgf_rejects_outside_unit_square(m in model(), a in 1.0001..5.0f64) {
        prop_assert!(m.pgf_terms(a, 0.5).is_err());
        prop_assert!(m.pgf_terms(0.5, -a).is_err());
    }

    #[test]
    fn table_moments_are_weighted_sums(rows in table()) {
        let rows = normalized(rows);
        let m = JointDegreeModel::table(rows.clone()).unwrap().moments();
        let sum = |f: &dyn Fn(f64, f64) -> f64| rows.iter().map(|r| r.p * f(f64::from(r.s), f64::from(r.t))).sum::<f64>();
        prop_assert!((m.mean_s - sum(&|s, _| s)).abs() < 1e-12);
        prop_assert!((m.mean_t - sum(&|_, t| t)).abs() < 1e-12);
        prop_assert!((m.ex2_s - sum(&|s, _| s * s)).abs() < 1e-12);
        prop_assert!((m.ex2_t - sum(&|_, t| t * t)).abs() < 1e-12);
        prop_assert!((m.cross - sum(&|s, t| s * t)).abs() < 1e-12);
    }

    #[test]
    fn cluster_tunable_mean_degree_fixed(lambda in 0.0..5.0f64, c in 0.0..=4.0f64) {
        let m = JointDegreeModel::cluster_tunable(lambda, c).unwrap().moments();
        prop_assert!((m.mean_degree() - 4.0 * lambda).abs() < 1e-9 * (1.0 + lambda));
        prop_assert!((m.degree_variance() - 8.0 * lambda).abs() < 1e-9 * (1.0 + lambda));
    }

    #[test]
    fn solver_iterates_stay_in_unit_interval(m in model(), p in params()) {
        let sol = emergence_probability(&m, &p).unwrap();
        for v in sol.h.iter().chain(&sol.g).chain(&sol.prob_emergence) {
            prop_assert!((0.0..=1.0).contains(v));
        }
    }

    #[test]
    fn no_triangles_reduces_to_unclustered(ls in 0.01..5.0f64, p in params()) {
        // with lambda_t = 0 the threshold is lambda_s rho(Pi)
        let model = JointDegreeModel::doubly_poisson(ls, 0.0).unwrap();
        let rho = jacobian(&model, &p).unwrap().spectral_radius();
        prop_assert!((rho - ls * common::rho2(pi_matrix(&p))).abs() < 1e-10);
    }

    #[test]
    fn stub_counts_before_simplification(
        nodes in prop::collection::vec((0u32..5, 0u32..4), 3..40),
        seed in any::<u64>(),
    ) {
        let mut nodes = nodes;
        // restore parity on the first node
        let s_sum: u32 = nodes.iter().map(|n| n.0).sum();
        let t_sum: u32 = nodes.iter().map(|n| n.1).sum();
        nodes[0].0 += s_sum % 2;
        nodes[0].1 += (3 - t_sum % 3) % 3;
        let seq = DegreeSequence::new(nodes.clone()).unwrap();
        let raw = match_stubs(&seq, &mut stream_rng(seed, &[]));
        let mut single = vec![0u32; nodes.len()];
        let mut tri = vec![0u32; nodes.len()];
        for &(u, v) in &raw.single_pairs {
            single[u as usize] += 1;
            single[v as usize] += 1;
        }
        for trio in &raw.trios {
            for &v in trio {
                tri[v as usize] += 2;
            }
        }
        for (v, &(s, t)) in nodes.iter().enumerate() {
            prop_assert_eq!(single[v], s);
            prop_assert_eq!(tri[v], 2 * t);
        }

        let g = assemble(&seq, &mut stream_rng(seed, &[]));
        for (v, &(s, t)) in nodes.iter().enumerate() {
            prop_assert!(g.degree(v) as u32 <= s + 2 * t);
            prop_assert!(!g.neighbors(v).contains(&(v as u32)));
            for &w in g.neighbors(v) {
                prop_assert!(g.neighbors(w as usize).contains(&(v as u32)));
            }
        }
    }

    #[test]
    fn identity_mutation_keeps_seed_strain(t1 in 0.0..=1.0f64, t2 in 0.0..=1.0f64, two in any::<bool>(), seed in any::<u64>()) {
        let model = JointDegreeModel::doubly_poisson(1.5, 0.7).unwrap();
        let mut rng = stream_rng(seed, &[]);
        let g = mutaclust::graph_gen::generate(&model, 300, &mut rng).unwrap();
        let p = StrainParams::new([t1, t2], [[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let strain = if two { Strain::Two } else { Strain::One };
        let o = mutaclust::spread_sim::simulate(&g, &p, 0, strain, &mut rng).unwrap();
        prop_assert_eq!(o.infected_by_strain[strain.index()], o.total_infected);
        prop_assert!(o.total_infected >= 1 && o.total_infected <= g.n());
    }

    #[test]
    fn sweep_csv_round_trip(rows in prop::collection::vec(sweep_row(), 0..10)) {
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        let back = read_rows(buf.as_slice()).unwrap();
        prop_assert_eq!(back, rows);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn subcritical_means_no_emergence(m in model(), p in params()) {
        // a model without edges has rho = 0
        let rho = threshold_rho(&m, &p).unwrap_or(0.0);
        // away from rho = 1, where convergence is sublinear
        prop_assume!(rho <= 0.95);
        let sol = emergence_probability(&m, &p).unwrap();
        prop_assert!(sol.prob_emergence.iter().all(|&pe| pe < 1e-9), "rho = {rho}, {sol:?}");
        prop_assert!(sol.h.iter().chain(&sol.g).all(|&x| x > 1.0 - 1e-9));
    }
}

fn sweep_row() -> impl Strategy<Value = SweepRow> {
    let probs = (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64, prop::option::of(0.0..=1.0f64));
    let text = prop::option::of("[a-z ,:;=\"0-9.]{1,30}");
    (
        (any::<f64>().prop_filter("finite", |x| x.is_finite()), 0.0..10.0f64, 0.0..10.0f64),
        (prop::option::of(0.0..=4.0f64), 10usize..1_000_000, 1usize..100_000, 0.0..100.0f64),
        probs,
        (0usize..100_000, text),
    )
        .prop_map(|((grid_param, lambda_s, lambda_t), (c, n, trials, rho_j), (pe_pred, pe_emp, size_pred, size_emp), (trials_epidemic, error))| {
            SweepRow {
                grid_param,
                lambda_s,
                lambda_t,
                c,
                n,
                trials,
                rho_j,
                pe_pred,
                pe_emp,
                size_pred,
                size_emp,
                trials_epidemic,
                error,
            }
        })
}
