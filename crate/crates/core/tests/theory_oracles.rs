mod common;

use common::{direct_l, direct_u, rel_close, rng, tiny_model_f};
use overlap_graph_lab::cover::connected_patterns;
use overlap_graph_lab::layer::TableEntry;
use overlap_graph_lab::theory::{
    exact_l, exact_u, expected_count_bracket, inclusion_bounds, lemma3_bounds,
    matched_er_probability, BoundParams, LSource,
};
use overlap_graph_lab::{count_cliques, generate, LayerDistribution, ModelParams, SubgraphPattern};
use rand::Rng;

fn dists() -> Vec<LayerDistribution> {
    vec![
        LayerDistribution::point(3, 1.0).unwrap(),
        LayerDistribution::point(4, 0.6).unwrap(),
        LayerDistribution::table(vec![
            TableEntry {
                size: 2,
                strength: 0.9,
                weight: 0.3,
            },
            TableEntry {
                size: 4,
                strength: 0.5,
                weight: 0.5,
            },
            TableEntry {
                size: 5,
                strength: 0.2,
                weight: 0.2,
            },
        ])
        .unwrap(),
    ]
}

fn small_patterns(max_edges: usize) -> Vec<SubgraphPattern> {
    let mut all = connected_patterns(max_edges).unwrap();
    let edge: SubgraphPattern = "custom:0-1".parse().unwrap();
    let path: SubgraphPattern = "custom:0-1 1-2".parse().unwrap();
    all.push(SubgraphPattern::disjoint_union(&edge, &edge).unwrap());
    all.push(SubgraphPattern::disjoint_union(&path, &edge).unwrap());
    all
}

#[test]
fn partition_sum_matches_mapping_enumeration() {
    for pattern in small_patterns(4) {
        for dist in dists() {
            for m in 0..=3 {
                let n = 7;
                let got = exact_u(&pattern, n, m, &dist).unwrap();
                let want = direct_u(&pattern, n, m, &dist);
                assert!(
                    rel_close(got, want, 1e-12),
                    "{pattern} m={m} {dist}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn pair_sum_matches_pair_enumeration() {
    for pattern in small_patterns(3) {
        for dist in dists() {
            for m in 1..=3 {
                let got = exact_l(&pattern, 8, m, &dist).unwrap();
                let want = direct_l(&pattern, 8, m, &dist);
                assert!(
                    rel_close(got, want, 1e-12),
                    "{pattern} m={m} {dist}: {got} vs {want}"
                );
            }
        }
    }
    let c4: SubgraphPattern = "cycle:4".parse().unwrap();
    let d = LayerDistribution::point(4, 0.7).unwrap();
    assert!(rel_close(
        exact_l(&c4, 9, 3, &d).unwrap(),
        direct_l(&c4, 9, 3, &d),
        1e-12
    ));
}

#[test]
fn exact_l_is_zero_for_one_layer_and_nonnegative() {
    let mut r = rng(5);
    for pattern in small_patterns(3) {
        assert_eq!(exact_l(&pattern, 6, 1, &dists()[1]).unwrap(), 0.0);
    }
    for _ in 0..20 {
        let dist = &dists()[r.random_range(0..3)];
        let pattern = &small_patterns(3)[r.random_range(0..6)];
        let l = exact_l(pattern, r.random_range(6..12), r.random_range(1..4), dist).unwrap();
        assert!(l >= 0.0);
    }
}

#[test]
fn tiny_model_sandwich() {
    let k3: SubgraphPattern = "clique:3".parse().unwrap();
    let f = tiny_model_f(&k3, 5, 2, 3, 1.0);
    assert!((f - 0.19).abs() < 1e-12);
    let b = inclusion_bounds(
        &k3,
        5,
        2,
        &LayerDistribution::point(3, 1.0).unwrap(),
        LSource::Exact,
    )
    .unwrap();
    assert!((b.u_exact - 0.38).abs() < 1e-12);
    assert!(b.f_lower <= f && f <= b.f_upper);

    // More tiny instances, including y < 1 and three layers.
    let cases = [
        ("clique:3", 5, 3, 3, 0.5),
        ("cycle:4", 6, 2, 4, 0.7),
        ("custom:0-1 1-2", 5, 3, 3, 0.4),
        ("clique:3", 6, 2, 4, 1.0),
    ];
    for (spec, n, m, x, y) in cases {
        let p: SubgraphPattern = spec.parse().unwrap();
        let f = tiny_model_f(&p, n, m, x, y);
        let dist = LayerDistribution::point(x as u64, y).unwrap();
        let b = inclusion_bounds(&p, n, m, &dist, LSource::Exact).unwrap();
        assert!(
            b.f_lower <= f + 1e-15 && f <= b.f_upper + 1e-15,
            "{spec}: {} <= {f} <= {}",
            b.f_lower,
            b.f_upper
        );
        // With one layer the union bound is exact.
        let one = tiny_model_f(&p, n, 1, x, y);
        assert!((exact_u(&p, n, 1, &dist).unwrap() - one).abs() < 1e-12);
    }
}

#[test]
fn closed_form_bounds_dominate() {
    let mut r = rng(17);
    let patterns: Vec<SubgraphPattern> = ["clique:3", "clique:4", "cycle:4"]
        .iter()
        .map(|p| p.parse().unwrap())
        .collect();
    for _ in 0..50 {
        let pattern = &patterns[r.random_range(0..3)];
        let x = r.random_range(pattern.node_count() as u64..=7);
        let y = r.random_range(0.05..=1.0);
        let dist = LayerDistribution::point(x, y).unwrap();
        let n = r.random_range(x as usize..=40);
        let m = r.random_range(0..=60);
        let b = lemma3_bounds(pattern, n, m, &dist, BoundParams::default_for(&dist)).unwrap();
        let u = exact_u(pattern, n, m, &dist).unwrap();
        assert!(
            u <= b.u_bound * (1.0 + 1e-12),
            "{pattern} n={n} m={m} {dist}: U={u} > {}",
            b.u_bound
        );
        if m <= 4 && pattern.edge_count() <= 4 {
            let l = exact_l(pattern, n, m, &dist).unwrap();
            assert!(l <= b.l_bound * (1.0 + 1e-12));
        }
    }
    let d = LayerDistribution::point(4, 0.5).unwrap();
    let b = lemma3_bounds(&patterns[0], 20, 0, &d, BoundParams::default_for(&d)).unwrap();
    assert_eq!((b.u_bound, b.l_bound), (0.0, 0.0));
}

#[test]
fn single_layer_term_is_a_lower_bound_on_u() {
    for pattern in small_patterns(4) {
        for dist in dists() {
            for (n, m) in [(8, 1), (8, 5), (30, 40)] {
                let r = pattern.node_count();
                let single = m as f64 * dist.cross_moment(r as u32, pattern.edge_count() as u32)
                    / (0..r).map(|i| (n - i) as f64).product::<f64>();
                assert!(exact_u(&pattern, n, m, &dist).unwrap() >= single * (1.0 - 1e-12));
            }
        }
    }
}

fn monte_carlo<F: Fn(u64) -> f64>(reps: u64, f: F) -> (f64, f64) {
    let xs: Vec<f64> = (0..reps).map(f).collect();
    let mean = xs.iter().sum::<f64>() / reps as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    (mean, (var / reps as f64).sqrt())
}

#[test]
fn triangle_bracket_contains_simulated_mean() {
    let dist = LayerDistribution::point(5, 0.5).unwrap();
    let k3 = SubgraphPattern::clique(3).unwrap();
    let (lo, hi) = expected_count_bracket(
        &k3,
        200,
        200,
        &dist,
        LSource::Lemma3(BoundParams::default_for(&dist)),
    )
    .unwrap();
    let (mean, se) = monte_carlo(200, |s| {
        let g = generate(&ModelParams::new(200, 200, dist.clone(), s)).unwrap();
        count_cliques(&g, 3).unwrap().count as f64
    });
    assert!(lo <= hi);
    assert!(
        mean >= lo - 4.0 * se && mean <= hi + 4.0 * se,
        "{mean} ± {se} vs [{lo}, {hi}]"
    );
}

#[test]
fn edge_density_matches_matched_probability() {
    let dist = LayerDistribution::point(5, 0.5).unwrap();
    let p = matched_er_probability(200, 200, &dist).unwrap();
    let pairs = 200.0 * 199.0 / 2.0;
    let (mean, se) = monte_carlo(200, |s| {
        generate(&ModelParams::new(200, 200, dist.clone(), s))
            .unwrap()
            .edge_count() as f64
            / pairs
    });
    assert!((mean - p).abs() <= 4.0 * se, "{mean} ± {se} vs {p}");
}

#[test]
fn bracket_is_exact_for_one_layer() {
    for dist in dists() {
        for pattern in small_patterns(3) {
            let (lo, hi) = expected_count_bracket(&pattern, 10, 1, &dist, LSource::Exact).unwrap();
            let want = dist.cross_moment(pattern.node_count() as u32, pattern.edge_count() as u32)
                / pattern.automorphisms() as f64;
            assert!(rel_close(lo, want, 1e-12) && rel_close(hi, want, 1e-12));
        }
    }
}
