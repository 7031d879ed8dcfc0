mod common;

use common::{random_graph, rng};
use overlap_graph_lab::count::count_injective_homomorphisms;
use overlap_graph_lab::{
    count_cliques, count_cycles, count_pattern_bruteforce, Graph, SubgraphPattern,
};
use rand::Rng;

/// Plain subset scan: every r-subset whose pairs are all adjacent.
fn cliques_by_subsets(g: &Graph, r: usize) -> u64 {
    let n = g.node_count();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .filter(|m| {
            let nodes: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            nodes
                .iter()
                .enumerate()
                .all(|(i, &u)| nodes[i + 1..].iter().all(|&v| g.has_edge(u, v)))
        })
        .count() as u64
}

#[test]
fn fast_counters_match_brute_force() {
    let mut r = rng(2024);
    for _ in 0..200 {
        let n = r.random_range(1..=9);
        let g = random_graph(n, 0.4, &mut r);
        for k in 2..=5 {
            let bf = count_pattern_bruteforce(&g, &SubgraphPattern::clique(k).unwrap())
                .unwrap()
                .count;
            assert_eq!(count_cliques(&g, k).unwrap().count, bf);
            assert_eq!(cliques_by_subsets(&g, k), bf);
        }
        for k in 3..=6 {
            let bf = count_pattern_bruteforce(&g, &SubgraphPattern::cycle(k).unwrap())
                .unwrap()
                .count;
            assert_eq!(count_cycles(&g, k).unwrap().count, bf);
        }
    }
}

#[test]
fn closed_forms_on_complete_graphs() {
    for n in 3..=8u64 {
        let g = Graph::complete(n as usize);
        for r in 3..=n {
            let binom = (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
            assert_eq!(count_cliques(&g, r as usize).unwrap().count, binom);
            let perms: u64 = (1..=r).product();
            assert_eq!(
                count_cycles(&g, r as usize).unwrap().count,
                binom * perms / (2 * r)
            );
        }
    }
}

#[test]
fn counts_on_larger_sparse_graphs_agree() {
    // Brute force is guarded to small hosts, so compare the two fast counters
    // against each other and against homomorphism counts on 12-node graphs.
    let mut r = rng(7);
    for _ in 0..30 {
        let g = random_graph(12, 0.35, &mut r);
        for k in [3, 4] {
            let p = SubgraphPattern::clique(k).unwrap();
            assert_eq!(
                count_cliques(&g, k).unwrap().count * p.automorphisms(),
                count_injective_homomorphisms(&g, &p)
            );
        }
        let c3 = count_cycles(&g, 3).unwrap().count;
        assert_eq!(c3, count_cliques(&g, 3).unwrap().count);
        let c5 = SubgraphPattern::cycle(5).unwrap();
        assert_eq!(
            count_cycles(&g, 5).unwrap().count * 10,
            count_injective_homomorphisms(&g, &c5)
        );
    }
}

#[test]
fn counting_known_graphs() {
    let p = Graph::petersen();
    assert_eq!(count_cliques(&p, 3).unwrap().count, 0);
    assert_eq!(count_cycles(&p, 5).unwrap().count, 12);
    assert_eq!(count_cycles(&p, 6).unwrap().count, 10);
    let c7 = Graph::cycle(7).unwrap();
    assert_eq!(count_cycles(&c7, 7).unwrap().count, 1);
    assert_eq!(count_cycles(&c7, 4).unwrap().count, 0);
    let path: SubgraphPattern = "custom:0-1 1-2".parse().unwrap();
    assert_eq!(
        count_pattern_bruteforce(&Graph::complete(3), &path)
            .unwrap()
            .count,
        3
    );
    assert_eq!(
        count_pattern_bruteforce(&Graph::empty(6), &SubgraphPattern::cycle(4).unwrap())
            .unwrap()
            .count,
        0
    );
    assert!(
        count_pattern_bruteforce(&Graph::complete(13), &SubgraphPattern::clique(4).unwrap())
            .is_err()
    );
    assert_eq!(
        count_pattern_bruteforce(&Graph::complete(13), &path)
            .unwrap()
            .count,
        13 * 66
    );
}
