//! Subgraph frequencies `N_R(G)`: the number of (not necessarily induced)
//! copies of a pattern in a host graph.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::pattern::SubgraphPattern;

/// Default upper limit on cycle length for [`count_cycles`].
pub const DEFAULT_MAX_CYCLE: usize = 8;

/// Brute-force counting is allowed on hosts up to this many nodes, or for
/// any host when the pattern has at most [`BRUTEFORCE_SMALL_PATTERN`] nodes.
pub const BRUTEFORCE_MAX_HOST: usize = 12;
pub const BRUTEFORCE_SMALL_PATTERN: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CountResult {
    pub pattern: SubgraphPattern,
    pub count: u64,
    pub elapsed: Duration,
}

/// Number of `r`-cliques.
pub fn count_cliques(g: &Graph, r: usize) -> Result<CountResult> {
    let pattern = SubgraphPattern::clique(r)?;
    let start = Instant::now();
    let count = match r {
        1 => g.node_count() as u64,
        2 => g.edge_count() as u64,
        _ => clique_count(g, r),
    };
    Ok(CountResult {
        pattern,
        count,
        elapsed: start.elapsed(),
    })
}

/// Degeneracy order via bucket peeling; returns each node's rank.
pub fn degeneracy_ranks(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let max_deg = g.max_degree();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut rank = vec![0; n];
    let mut next = 0;
    let mut d = 0;
    while next < n {
        // stale entries (degree changed since insertion) are skipped on pop
        let Some(v) = buckets[d].pop() else {
            d += 1;
            continue;
        };
        if removed[v] || deg[v] != d {
            continue;
        }
        removed[v] = true;
        rank[v] = next;
        next += 1;
        for &u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
                if deg[u] < d {
                    d = deg[u];
                }
            }
        }
    }
    rank
}

fn clique_count(g: &Graph, r: usize) -> u64 {
    let rank = degeneracy_ranks(g);
    // forward neighbors: later in the degeneracy order, sorted by node id
    let forward: Vec<Vec<NodeId>> = (0..g.node_count())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| rank[u] > rank[v])
                .collect()
        })
        .collect();
    let mut scratch: Vec<Vec<NodeId>> = vec![Vec::new(); r];
    let mut total = 0;
    for v in 0..g.node_count() {
        if forward[v].len() + 1 < r {
            continue;
        }
        total += extend_clique(&forward, &forward[v], r - 1, &mut scratch);
    }
    total
}

/// Counts ways to pick `need` more mutually adjacent nodes from `candidates`.
fn extend_clique(
    forward: &[Vec<NodeId>],
    candidates: &[NodeId],
    need: usize,
    scratch: &mut [Vec<NodeId>],
) -> u64 {
    if need == 1 {
        return candidates.len() as u64;
    }
    let (head, tail) = scratch.split_first_mut().expect("scratch depth");
    let mut total = 0;
    for &u in candidates {
        head.clear();
        intersect_sorted(candidates, &forward[u], head);
        if head.len() + 1 >= need {
            total += extend_clique(forward, head, need - 1, tail);
        }
    }
    total
}

fn intersect_sorted(a: &[NodeId], b: &[NodeId], out: &mut Vec<NodeId>) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// Number of simple `r`-cycles, `3 <= r <= DEFAULT_MAX_CYCLE`.
pub fn count_cycles(g: &Graph, r: usize) -> Result<CountResult> {
    count_cycles_capped(g, r, DEFAULT_MAX_CYCLE)
}

pub fn count_cycles_capped(g: &Graph, r: usize, max_len: usize) -> Result<CountResult> {
    if r < 3 {
        return Err(Error::Domain(format!(
            "cycle length {r} outside [3, {max_len}]"
        )));
    }
    if r > max_len {
        return Err(Error::SizeGuard(format!(
            "cycle length {r} outside [3, {max_len}]"
        )));
    }
    let pattern = SubgraphPattern::cycle(r)?;
    let start = Instant::now();
    let count = if r == 3 {
        clique_count(g, 3)
    } else {
        cycle_count(g, r)
    };
    Ok(CountResult {
        pattern,
        count,
        elapsed: start.elapsed(),
    })
}

struct CycleSearch<'a> {
    g: &'a Graph,
    r: usize,
    anchor: NodeId,
    /// Distance to the anchor inside the subgraph on nodes > anchor (plus the anchor).
    dist: Vec<usize>,
    stamp: Vec<usize>,
    on_path: Vec<bool>,
    queue: Vec<NodeId>,
    second: NodeId,
}

impl CycleSearch<'_> {
    fn bfs(&mut self, round: usize) {
        let horizon = self.r / 2;
        self.queue.clear();
        self.queue.push(self.anchor);
        self.stamp[self.anchor] = round;
        self.dist[self.anchor] = 0;
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            let d = self.dist[v];
            if d == horizon {
                continue;
            }
            for &u in self.g.neighbors(v) {
                if u > self.anchor && self.stamp[u] != round {
                    self.stamp[u] = round;
                    self.dist[u] = d + 1;
                    self.queue.push(u);
                }
            }
        }
    }

    fn reachable(&self, v: NodeId, hops: usize, round: usize) -> bool {
        // nodes beyond the BFS horizon are at distance > r/2 >= any remaining budget check
        self.stamp[v] == round && self.dist[v] <= hops
    }

    /// `v` is the path's last node; the path holds `len` nodes.
    fn extend(&mut self, v: NodeId, len: usize, round: usize) -> u64 {
        if len == self.r {
            let closes = self.g.neighbors(v).binary_search(&self.anchor).is_ok();
            return u64::from(closes && self.second < v);
        }
        let mut total = 0;
        let remaining_after = self.r - len - 1;
        for i in 0..self.g.neighbors(v).len() {
            let u = self.g.neighbors(v)[i];
            if u <= self.anchor || self.on_path[u] {
                continue;
            }
            // after stepping to u we still need remaining_after nodes and one closing hop
            if !self.reachable(u, remaining_after + 1, round) {
                continue;
            }
            if len == 1 {
                self.second = u;
            }
            self.on_path[u] = true;
            total += self.extend(u, len + 1, round);
            self.on_path[u] = false;
        }
        total
    }
}

fn cycle_count(g: &Graph, r: usize) -> u64 {
    let n = g.node_count();
    let mut search = CycleSearch {
        g,
        r,
        anchor: 0,
        dist: vec![0; n],
        stamp: vec![usize::MAX; n],
        on_path: vec![false; n],
        queue: Vec::new(),
        second: 0,
    };
    let mut total = 0;
    for anchor in 0..n {
        if g.degree(anchor) < 2 {
            continue;
        }
        search.anchor = anchor;
        search.bfs(anchor);
        search.on_path[anchor] = true;
        total += search.extend(anchor, 1, anchor);
        search.on_path[anchor] = false;
    }
    total
}

/// Exact `N_R(G)` as the number of edge-preserving injections `V(R) -> V(G)`
/// divided by `|Aut(R)|`.
pub fn count_pattern_bruteforce(g: &Graph, pattern: &SubgraphPattern) -> Result<CountResult> {
    if g.node_count() > BRUTEFORCE_MAX_HOST && pattern.node_count() > BRUTEFORCE_SMALL_PATTERN {
        return Err(Error::SizeGuard(format!(
            "brute force needs a host with at most {BRUTEFORCE_MAX_HOST} nodes or a pattern with at most \
             {BRUTEFORCE_SMALL_PATTERN} nodes (host {}, pattern {})",
            g.node_count(),
            pattern.node_count()
        )));
    }
    let start = Instant::now();
    let maps = count_injective_homomorphisms(g, pattern);
    let aut = pattern.automorphisms();
    assert_eq!(
        maps % aut,
        0,
        "embedding count {maps} not divisible by |Aut| = {aut}"
    );
    Ok(CountResult {
        pattern: pattern.clone(),
        count: maps / aut,
        elapsed: start.elapsed(),
    })
}

/// Number of injective maps `V(R) -> V(G)` sending every pattern edge to a host edge.
pub fn count_injective_homomorphisms(g: &Graph, pattern: &SubgraphPattern) -> u64 {
    let k = pattern.node_count();
    // order pattern nodes so each (within a component) follows one of its neighbors
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    let mut pattern_adj = vec![Vec::new(); k];
    for &(u, v) in pattern.edges() {
        pattern_adj[u].push(v);
        pattern_adj[v].push(u);
    }
    for root in 0..k {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            for &w in &pattern_adj[order[i]] {
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    let position: Vec<usize> = {
        let mut p = vec![0; k];
        for (i, &v) in order.iter().enumerate() {
            p[v] = i;
        }
        p
    };
    // for each step: one earlier neighbor to draw candidates from, and all earlier neighbors to check
    let steps: Vec<(Option<usize>, Vec<usize>)> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let earlier: Vec<usize> = pattern_adj[v]
                .iter()
                .copied()
                .filter(|&w| position[w] < i)
                .collect();
            (earlier.first().copied(), earlier)
        })
        .collect();

    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; g.node_count()];
    embed(g, &order, &steps, 0, &mut image, &mut used)
}

fn embed(
    g: &Graph,
    order: &[usize],
    steps: &[(Option<usize>, Vec<usize>)],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> u64 {
    if depth == order.len() {
        return 1;
    }
    let v = order[depth];
    let (anchor, earlier) = &steps[depth];
    let candidates: Vec<NodeId> = match anchor {
        Some(a) => g.neighbors(image[*a]).to_vec(),
        None => (0..g.node_count()).collect(),
    };
    let mut total = 0;
    for c in candidates {
        if used[c] || !earlier.iter().all(|&w| g.has_edge(image[w], c)) {
            continue;
        }
        used[c] = true;
        image[v] = c;
        total += embed(g, order, steps, depth + 1, image, used);
        used[c] = false;
    }
    image[v] = usize::MAX;
    total
}
