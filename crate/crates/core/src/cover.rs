//! Edge covers and partitions of small pattern graphs, and exhaustive
//! checkers for the cover inequalities the frequency bounds rely on.
//!
//! Blocks are bitmasks over the pattern's edge indices (bit `i` is
//! `pattern.edges()[i]`).

use std::collections::BTreeSet;

use crate::edges::EdgeSet;
use crate::error::{Error, Result};
use crate::pattern::{next_permutation, SubgraphPattern};

pub const MAX_PARTITION_EDGES: usize = 8;
pub const MAX_COVER_EDGES: usize = 6;
pub const MAX_COVER_BLOCKS: usize = 4;
pub const MAX_LEMMA2_EDGES: usize = 6;

pub type EdgeMask = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCover {
    pub blocks: Vec<EdgeMask>,
    pub is_partition: bool,
    /// Some two blocks share at least two incident nodes.
    pub has_overlapping_pair: bool,
    /// Some two blocks share an edge.
    pub has_shared_edge: bool,
}

impl EdgeCover {
    pub fn new(pattern: &SubgraphPattern, blocks: Vec<EdgeMask>) -> Self {
        let node_masks: Vec<u32> = blocks
            .iter()
            .map(|&b| block_node_mask(pattern, b))
            .collect();
        let mut is_partition = true;
        let mut has_overlapping_pair = false;
        let mut has_shared_edge = false;
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if blocks[i] & blocks[j] != 0 {
                    is_partition = false;
                    has_shared_edge = true;
                }
                if (node_masks[i] & node_masks[j]).count_ones() >= 2 {
                    has_overlapping_pair = true;
                }
            }
        }
        EdgeCover {
            blocks,
            is_partition,
            has_overlapping_pair,
            has_shared_edge,
        }
    }

    /// `Σ (‖E‖ - 1)` over the blocks.
    pub fn excess(&self, pattern: &SubgraphPattern) -> usize {
        self.blocks
            .iter()
            .map(|&b| pattern.incident_nodes_of_mask(b) - 1)
            .sum()
    }

    /// `Σ |E|` over the blocks.
    pub fn total_edges(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn edge_sets(&self, pattern: &SubgraphPattern) -> Vec<EdgeSet> {
        self.blocks
            .iter()
            .map(|&b| {
                pattern
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| b >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect()
            })
            .collect()
    }
}

fn block_node_mask(pattern: &SubgraphPattern, block: EdgeMask) -> u32 {
    pattern
        .edge_node_masks()
        .iter()
        .enumerate()
        .filter(|(i, _)| block >> i & 1 == 1)
        .fold(0, |acc, (_, &m)| acc | m)
}

/// Set partitions of `{0, .., n-1}` in restricted-growth-string order.
/// Each item is the list of blocks as bitmasks, ordered by smallest element.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    maxes: Vec<usize>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            maxes: vec![0; n],
            done: false,
        }
    }

    fn blocks(&self) -> Vec<EdgeMask> {
        let count = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![0; count];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b] |= 1 << i;
        }
        blocks
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<EdgeMask>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let n = self.rgs.len();
        if n == 0 {
            self.done = true;
            return Some(Vec::new());
        }
        let out = self.blocks();
        // rgs[i] <= 1 + max(rgs[..i]); maxes[i] = max(rgs[..=i])
        let mut i = n - 1;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            let prefix_max = self.maxes[i - 1];
            if self.rgs[i] <= prefix_max {
                self.rgs[i] += 1;
                self.maxes[i] = prefix_max.max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                break;
            }
            i -= 1;
        }
        Some(out)
    }
}

/// Every set partition of the pattern's edge set, as covers.
pub fn enumerate_partitions(pattern: &SubgraphPattern) -> Result<Vec<EdgeCover>> {
    let s = pattern.edge_count();
    if s > MAX_PARTITION_EDGES {
        return Err(Error::SizeGuard(format!(
            "partition enumeration limited to {MAX_PARTITION_EDGES} edges, pattern has {s}"
        )));
    }
    Ok(SetPartitions::new(s)
        .map(|blocks| EdgeCover::new(pattern, blocks))
        .collect())
}

/// Covers with at most `max_blocks` nonempty blocks, as multisets of subsets.
pub fn enumerate_covers(pattern: &SubgraphPattern, max_blocks: usize) -> Result<Vec<EdgeCover>> {
    let s = pattern.edge_count();
    if s > MAX_COVER_EDGES {
        return Err(Error::SizeGuard(format!(
            "cover enumeration limited to {MAX_COVER_EDGES} edges, pattern has {s}"
        )));
    }
    let full: EdgeMask = (1 << s) - 1;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(max_blocks);
    collect_covers(pattern, full, 1, max_blocks, &mut chosen, &mut out);
    Ok(out)
}

fn collect_covers(
    pattern: &SubgraphPattern,
    full: EdgeMask,
    min_subset: EdgeMask,
    max_blocks: usize,
    chosen: &mut Vec<EdgeMask>,
    out: &mut Vec<EdgeCover>,
) {
    let union = chosen.iter().fold(0, |a, &b| a | b);
    if !chosen.is_empty() && union == full {
        out.push(EdgeCover::new(pattern, chosen.clone()));
    }
    if chosen.len() == max_blocks {
        return;
    }
    // non-decreasing subset indices give each multiset once
    for subset in min_subset..=full {
        chosen.push(subset);
        collect_covers(pattern, full, subset, max_blocks, chosen, out);
        chosen.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: u8,
    pub subject: String,
    pub cases_checked: u64,
    pub violations: Vec<String>,
    /// Cases where the base inequality holds with equality.
    pub equality_cases: u64,
}

impl LemmaReport {
    fn new(lemma: u8, subject: String) -> Self {
        LemmaReport {
            lemma,
            subject,
            cases_checked: 0,
            violations: Vec::new(),
            equality_cases: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// `lemma,cases_checked,violations`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            self.lemma,
            self.cases_checked,
            self.violations.len()
        )
    }
}

/// For every cover of a connected pattern:
/// `Σ(‖E‖-1) >= r-1`; with two blocks sharing two or more nodes,
/// `Σ(‖E‖-1) >= r`; with two blocks sharing an edge, `Σ|E| >= s+1`.
pub fn check_lemma1(pattern: &SubgraphPattern) -> Result<LemmaReport> {
    if !pattern.is_connected() {
        return Err(Error::InvalidPattern(
            "cover inequalities need a connected pattern".into(),
        ));
    }
    let r = pattern.node_count();
    let s = pattern.edge_count();
    let mut report = LemmaReport::new(1, pattern.to_string());
    for cover in enumerate_covers(pattern, MAX_COVER_BLOCKS)? {
        report.cases_checked += 1;
        let excess = cover.excess(pattern);
        if excess < r - 1 {
            report
                .violations
                .push(format!("{:?}: excess {excess} < {}", cover.blocks, r - 1));
        }
        if excess == r - 1 {
            report.equality_cases += 1;
        }
        if cover.has_overlapping_pair && excess < r {
            report.violations.push(format!(
                "{:?}: overlapping, excess {excess} < {r}",
                cover.blocks
            ));
        }
        if cover.has_shared_edge && cover.total_edges() < s + 1 {
            report.violations.push(format!(
                "{:?}: shared edge, total {} < {}",
                cover.blocks,
                cover.total_edges(),
                s + 1
            ));
        }
    }
    Ok(report)
}

/// The star with `k` edges and its partition into singletons, which meets
/// `Σ(‖E‖-1) = |V(R)| - 1` with equality. Returns `(excess, |V| - 1)`.
pub fn star_singleton_excess(k: usize) -> Result<(usize, usize)> {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    let star = SubgraphPattern::custom(&edges)?;
    let cover = EdgeCover::new(&star, (0..k).map(|i| 1 << i).collect());
    Ok((cover.excess(&star), star.node_count() - 1))
}

/// For every partition of `E(R1) ∪ E(R2)` (node-disjoint, connected parts):
/// `Σ(‖E‖-1) >= |V(R1)| + |V(R2)| - 2 + |E0|`, where `E0` are the blocks
/// meeting both edge sets.
pub fn check_lemma2(r1: &SubgraphPattern, r2: &SubgraphPattern) -> Result<LemmaReport> {
    if !r1.is_connected() || !r2.is_connected() {
        return Err(Error::InvalidPattern(
            "both patterns must be connected".into(),
        ));
    }
    check_lemma2_labeled(
        r1.edges(),
        r2.edges()
            .iter()
            .map(|&(u, v)| (u + r1.node_count(), v + r1.node_count()))
            .collect::<Vec<_>>()
            .as_slice(),
    )
}

/// As [`check_lemma2`], for two edge lists in a shared label space.
/// Inputs whose node sets intersect are rejected.
pub fn check_lemma2_labeled(
    first: &[(usize, usize)],
    second: &[(usize, usize)],
) -> Result<LemmaReport> {
    let nodes = |edges: &[(usize, usize)]| -> BTreeSet<usize> {
        edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    };
    let (v1, v2) = (nodes(first), nodes(second));
    if !v1.is_disjoint(&v2) {
        return Err(Error::InvalidPattern("the two patterns share nodes".into()));
    }
    let s1 = first.len();
    let s = s1 + second.len();
    if s > MAX_LEMMA2_EDGES {
        return Err(Error::SizeGuard(format!(
            "combined edge count {s} exceeds {MAX_LEMMA2_EDGES}"
        )));
    }
    // compact labels so the union fits the pattern node limit
    let index: Vec<usize> = v1.iter().chain(v2.iter()).copied().collect();
    let relabel = |x: usize| index.iter().position(|&y| y == x).unwrap();
    let edges: Vec<_> = first
        .iter()
        .chain(second.iter())
        .map(|&(u, v)| (relabel(u), relabel(v)))
        .collect();
    let r1 = SubgraphPattern::custom(&edges[..s1])?;
    let shifted: Vec<_> = edges[s1..]
        .iter()
        .map(|&(u, v)| (u - v1.len(), v - v1.len()))
        .collect();
    let r2 = SubgraphPattern::custom(&shifted)?;
    let union = SubgraphPattern::disjoint_union(&r1, &r2)?;
    // disjoint_union keeps r1's edges first, so bits 0..s1 are E(R1) iff sorting preserved the split
    let first_mask: EdgeMask = union
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, _))| u < r1.node_count())
        .fold(0, |acc, (i, _)| acc | 1 << i);
    let full: EdgeMask = (1 << s) - 1;
    let second_mask = full & !first_mask;
    let base = r1.node_count() + r2.node_count() - 2;

    let mut report = LemmaReport::new(2, format!("{r1} + {r2}"));
    for blocks in SetPartitions::new(s) {
        report.cases_checked += 1;
        let cover = EdgeCover::new(&union, blocks);
        let mixed = cover
            .blocks
            .iter()
            .filter(|&&b| b & first_mask != 0 && b & second_mask != 0)
            .count();
        let excess = cover.excess(&union);
        if excess < base + mixed {
            report.violations.push(format!(
                "{:?}: excess {excess} < {}",
                cover.blocks,
                base + mixed
            ));
        }
        if excess == base + mixed {
            report.equality_cases += 1;
        }
    }
    Ok(report)
}

/// Every partition of `E(K_r)` into two nonempty blocks has a block touching all `r` nodes.
pub fn check_lemma6(r: usize) -> Result<LemmaReport> {
    if !(3..=5).contains(&r) {
        return Err(Error::Domain(format!(
            "two-block clique check needs 3 <= r <= 5, got {r}"
        )));
    }
    let k = SubgraphPattern::clique(r)?;
    let s = k.edge_count();
    let full: EdgeMask = (1 << s) - 1;
    let mut report = LemmaReport::new(6, k.to_string());
    // unordered pairs {A, full \ A}: fix edge 0 inside A
    let mut a: EdgeMask = 1;
    while a < full {
        if a & 1 == 1 {
            report.cases_checked += 1;
            let b = full & !a;
            if k.incident_nodes_of_mask(a) != r && k.incident_nodes_of_mask(b) != r {
                report.violations.push(format!("{a:#b} | {b:#b}"));
            }
        }
        a += 1;
    }
    Ok(report)
}

/// All connected graphs with between 1 and `max_edges` edges and no isolated
/// nodes, one representative per isomorphism class.
pub fn connected_patterns(max_edges: usize) -> Result<Vec<SubgraphPattern>> {
    if max_edges > 7 {
        return Err(Error::SizeGuard(format!(
            "pattern census limited to 7 edges, got {max_edges}"
        )));
    }
    let mut out = Vec::new();
    // a connected graph with s edges has at most s + 1 nodes
    for r in 2..=max_edges + 1 {
        let all: Vec<(usize, usize)> = (0..r)
            .flat_map(|u| (u + 1..r).map(move |v| (u, v)))
            .collect();
        let mut seen = BTreeSet::new();
        for mask in 1u64..(1 << all.len()) {
            let s = mask.count_ones() as usize;
            if s > max_edges || s < r - 1 {
                continue;
            }
            let edges: Vec<_> = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            let Ok(p) = SubgraphPattern::custom(&edges) else {
                continue;
            };
            if p.node_count() != r {
                continue;
            }
            if seen.insert(canonical_form(r, &edges)) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Lexicographically smallest sorted edge list over all relabelings.
fn canonical_form(r: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..r).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut mapped: Vec<_> = edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u], perm[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        mapped.sort_unstable();
        if best.as_ref().is_none_or(|b| mapped < *b) {
            best = Some(mapped);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}
