//! Sampling `G_n`: the union of `m` independent random layers.
//!
//! Layer `k` draws its type `(x, y)` from the layer distribution, picks a
//! uniform `x`-subset of the nodes and keeps each internal pair with
//! probability `y`. Every layer owns a ChaCha8 stream seeded with
//! `seed::child(seed, [k])`, so layers can be produced in any order.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::layer::{LayerDistribution, LayerSample};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub m: usize,
    pub dist: LayerDistribution,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub index: usize,
    pub sample: LayerSample,
    /// Sorted node subset.
    pub nodes: Vec<NodeId>,
    /// Pairs `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(NodeId, NodeId)>,
}

impl ModelParams {
    pub fn new(n: usize, m: usize, dist: LayerDistribution, seed: u64) -> Self {
        ModelParams { n, m, dist, seed }
    }

    pub fn validate(&self) -> Result<()> {
        self.dist.validate()?;
        let max = self.dist.max_size();
        if max > self.n as u64 && self.m > 0 {
            return Err(Error::Domain(format!(
                "layer sizes up to {max} are attainable but the graph has {} nodes",
                self.n
            )));
        }
        Ok(())
    }

    fn layer_rng(&self, k: usize) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed::child(self.seed, &[k as u64]))
    }

    /// Samples layer `k` alone.
    pub fn sample_layer(&self, k: usize) -> Result<Layer> {
        let mut rng = self.layer_rng(k);
        let sample = self.dist.sample(&mut rng);
        if sample.size > self.n as u64 {
            return Err(Error::LayerTooLarge {
                layer: k as u64,
                size: sample.size,
                n: self.n as u64,
            });
        }
        let mut nodes = uniform_subset(self.n, sample.size as usize, &mut rng);
        nodes.sort_unstable();
        let mut edges = Vec::new();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                if rng.random::<f64>() < sample.strength {
                    edges.push((u, v));
                }
            }
        }
        Ok(Layer {
            index: k,
            sample,
            nodes,
            edges,
        })
    }
}

/// Uniform `k`-subset of `0..n` by a partial Fisher–Yates shuffle. Only the
/// touched positions of the virtual index array are materialized.
pub fn uniform_subset<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<NodeId> {
    assert!(k <= n, "subset size {k} exceeds population {n}");
    let mut displaced: HashMap<usize, usize> = HashMap::with_capacity(2 * k);
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let j = rng.random_range(i..n);
        let at_j = *displaced.get(&j).unwrap_or(&j);
        let at_i = *displaced.get(&i).unwrap_or(&i);
        displaced.insert(j, at_i);
        out.push(at_j);
    }
    out
}

/// The full layer decomposition of `G_n`.
pub fn generate_layers(params: &ModelParams) -> Result<Vec<Layer>> {
    params.dist.validate()?;
    (0..params.m).map(|k| params.sample_layer(k)).collect()
}

/// Samples `G_n`.
pub fn generate(params: &ModelParams) -> Result<Graph> {
    params.dist.validate()?;
    let mut pairs = Vec::new();
    for k in 0..params.m {
        pairs.extend(params.sample_layer(k)?.edges);
    }
    Ok(union_graph(params.n, pairs))
}

/// Same output as [`generate`], with layers sampled on the rayon pool.
pub fn generate_parallel(params: &ModelParams) -> Result<Graph> {
    params.dist.validate()?;
    let layers: Vec<Layer> = (0..params.m)
        .into_par_iter()
        .map(|k| params.sample_layer(k))
        .collect::<Result<_>>()?;
    Ok(union_graph(
        params.n,
        layers.into_iter().flat_map(|l| l.edges).collect(),
    ))
}

fn union_graph(n: usize, mut pairs: Vec<(NodeId, NodeId)>) -> Graph {
    pairs.sort_unstable();
    pairs.dedup();
    Graph::from_unique_pairs(n, pairs.into_iter())
}

/// Renders layers as `k x y : v1 v2 ... ; u1-w1 u2-w2 ...`, one per line.
pub fn format_layers(layers: &[Layer]) -> String {
    let mut out = String::new();
    for layer in layers {
        let _ = write!(
            out,
            "{} {} {} :",
            layer.index, layer.sample.size, layer.sample.strength
        );
        for v in &layer.nodes {
            let _ = write!(out, " {v}");
        }
        out.push_str(" ;");
        for (u, v) in &layer.edges {
            let _ = write!(out, " {u}-{v}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(x: u64, y: f64) -> LayerDistribution {
        LayerDistribution::point(x, y).unwrap()
    }

    #[test]
    fn no_layers_gives_empty_graph() {
        let g = generate(&ModelParams::new(10, 0, point(4, 1.0), 1)).unwrap();
        assert_eq!(g.node_count(), 10);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn three_full_four_cliques() {
        for seed in 0..50 {
            let g = generate(&ModelParams::new(10, 3, point(4, 1.0), seed)).unwrap();
            assert!((6..=18).contains(&g.edge_count()));
            assert!(g.max_degree() <= 9);
        }
    }

    #[test]
    fn full_strength_layers_are_triangles() {
        let layers = generate_layers(&ModelParams::new(10, 2, point(3, 1.0), 3)).unwrap();
        assert_eq!(layers.len(), 2);
        for l in &layers {
            assert_eq!(l.nodes.len(), 3);
            assert_eq!(l.edges.len(), 3);
        }
    }

    #[test]
    fn empty_layer() {
        let layers = generate_layers(&ModelParams::new(10, 1, point(0, 0.5), 3)).unwrap();
        assert!(layers[0].nodes.is_empty());
        assert!(layers[0].edges.is_empty());
    }

    #[test]
    fn oversized_layer_is_an_error() {
        let params = ModelParams::new(4, 3, point(5, 0.5), 0);
        assert!(params.validate().is_err());
        match generate(&params) {
            Err(Error::LayerTooLarge { layer, size, n }) => {
                assert_eq!((layer, size, n), (0, 5, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn layer_edges_stay_inside_node_subset() {
        let dist: LayerDistribution = "table:(2,1.0,0.3);(6,0.4,0.7)".parse().unwrap();
        let layers = generate_layers(&ModelParams::new(30, 40, dist, 9)).unwrap();
        for l in &layers {
            assert_eq!(l.nodes.len() as u64, l.sample.size);
            for &(u, v) in &l.edges {
                assert!(u < v);
                assert!(l.nodes.binary_search(&u).is_ok() && l.nodes.binary_search(&v).is_ok());
            }
        }
    }

    #[test]
    fn parallel_generation_matches_serial() {
        let params = ModelParams::new(300, 300, "binom:N=12,p=0.4,y=0.3".parse().unwrap(), 77);
        assert_eq!(
            generate(&params).unwrap(),
            generate_parallel(&params).unwrap()
        );
    }

    #[test]
    fn uniform_subset_pair_frequencies() {
        let draws = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts = HashMap::new();
        for _ in 0..draws {
            let mut s = uniform_subset(5, 2, &mut rng);
            s.sort_unstable();
            *counts.entry((s[0], s[1])).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 10);
        let se = (0.1f64 * 0.9 / draws as f64).sqrt();
        for (&pair, &c) in &counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.1).abs() < 4.0 * se, "{pair:?}: {f}");
        }
    }

    #[test]
    fn layer_dump_format() {
        let layers = generate_layers(&ModelParams::new(10, 1, point(3, 1.0), 1)).unwrap();
        let text = format_layers(&layers);
        let l = &layers[0];
        let expect = format!(
            "0 3 1 : {} {} {} ; {}-{} {}-{} {}-{}\n",
            l.nodes[0],
            l.nodes[1],
            l.nodes[2],
            l.edges[0].0,
            l.edges[0].1,
            l.edges[1].0,
            l.edges[1].1,
            l.edges[2].0,
            l.edges[2].1
        );
        assert_eq!(text, expect);
    }
}
