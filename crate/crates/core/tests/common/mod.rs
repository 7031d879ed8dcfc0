//! Independent reference computations shared by the integration tests.
//! Nothing here calls the partition-sum or counting code under test.

#![allow(dead_code)]

use overlap_graph_lab::{Graph, LayerDistribution, SubgraphPattern};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) on `n` nodes.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn falling(n: usize, r: usize) -> f64 {
    (0..r).map(|i| n as f64 - i as f64).product()
}

fn nodes_touched(edges: &[(usize, usize)]) -> usize {
    let mut seen: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Probability that a single layer covers exactly the given edge group.
fn layer_factor(group: &[(usize, usize)], n: usize, dist: &LayerDistribution) -> f64 {
    if group.is_empty() {
        return 1.0;
    }
    let a = nodes_touched(group);
    dist.cross_moment(a as u32, group.len() as u32) / falling(n, a)
}

/// All maps `E(R) -> [m]` in lexicographic order.
fn mappings(s: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.pow(s as u32);
    (0..total)
        .map(|mut code| {
            (0..s)
                .map(|_| {
                    let k = code % m;
                    code /= m;
                    k
                })
                .collect()
        })
        .collect()
}

fn mapping_probability(
    edges: &[(usize, usize)],
    maps: &[&[usize]],
    n: usize,
    m: usize,
    dist: &LayerDistribution,
) -> f64 {
    (0..m)
        .map(|k| {
            let mut group: Vec<(usize, usize)> = Vec::new();
            for map in maps {
                for (i, &e) in edges.iter().enumerate() {
                    if map[i] == k && !group.contains(&e) {
                        group.push(e);
                    }
                }
            }
            layer_factor(&group, n, dist)
        })
        .product()
}

/// `U(R) = Σ_φ Pr(A_φ)` over all `m^s` edge-to-layer maps.
pub fn direct_u(pattern: &SubgraphPattern, n: usize, m: usize, dist: &LayerDistribution) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let edges = pattern.edges();
    mappings(edges.len(), m)
        .iter()
        .map(|phi| mapping_probability(edges, &[phi], n, m, dist))
        .sum()
}

/// `L(R) = Σ_{φ ≠ ψ} Pr(A_φ ∩ A_ψ)` over ordered pairs of maps.
pub fn direct_l(pattern: &SubgraphPattern, n: usize, m: usize, dist: &LayerDistribution) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let edges = pattern.edges();
    let maps = mappings(edges.len(), m);
    let mut total = 0.0;
    for phi in &maps {
        for psi in &maps {
            if phi != psi {
                total += mapping_probability(edges, &[phi, psi], n, m, dist);
            }
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Exact `f(R)`: the probability that the copy of `R` on nodes `0..r` is
/// present, for `PointMass(x, y)` layers. Sums over every joint choice of
/// layer node sets; given those, pairs are independent, so a pattern edge is
/// missing with probability `(1 - y)^(layers containing it)`.
pub fn tiny_model_f(pattern: &SubgraphPattern, n: usize, m: usize, x: usize, y: f64) -> f64 {
    let sets = subsets(n, x);
    let weight = 1.0 / (sets.len() as f64).powi(m as i32);
    let mut total = 0.0;
    let mut choice = vec![0usize; m];
    loop {
        let mut prob = 1.0;
        for &(u, v) in pattern.edges() {
            let holders = choice
                .iter()
                .filter(|&&c| sets[c].contains(&u) && sets[c].contains(&v))
                .count();
            prob *= 1.0 - (1.0 - y).powi(holders as i32);
        }
        total += prob * weight;
        let mut i = 0;
        loop {
            if i == m {
                return total;
            }
            choice[i] += 1;
            if choice[i] < sets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()) || a == b
}
