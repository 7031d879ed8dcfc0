//! Predicted subgraph frequencies and inclusion–exclusion bounds.
//!
//! For a fixed copy of `R` on the node set, let `A_φ` be the event that every
//! layer `k` contains the pattern edges `φ⁻¹(k)` assigned to it. Then
//! `f(R) = Pr(G ⊃ R)` lies in `[U - L/2, U]` where `U = Σ_φ Pr(A_φ)` and
//! `L = Σ_{φ≠ψ} Pr(A_φ ∩ A_ψ)`. A single layer covers an edge set `E` with
//! probability `(π)_{‖E‖,|E|} / (n)_{‖E‖}`, and layers are independent, so
//! both sums only depend on which edges share a layer. Summing over set
//! partitions with weight `(m)_t` for a `t`-block partition replaces the
//! `m^s` mapping enumeration.

use crate::cover::{EdgeMask, SetPartitions, MAX_PARTITION_EDGES};
use crate::error::{Error, Result};
use crate::layer::LayerDistribution;
use crate::math::{factorial, falling_factorial};
use crate::pattern::SubgraphPattern;

/// Reported alongside every leading-order value.
pub const CORRECTION_NOTE: &str =
    "leading term; true mean carries an unevaluated (1 + O(1/n)) factor";

pub const MAX_EXACT_L_EDGES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct TheoryPrediction {
    pub leading: f64,
    pub correction_note: &'static str,
    /// Caller-supplied rate `q_n`; carried for reporting only.
    pub q_rate: Option<f64>,
}

impl TheoryPrediction {
    fn new(leading: f64) -> Self {
        TheoryPrediction {
            leading,
            correction_note: CORRECTION_NOTE,
            q_rate: None,
        }
    }

    pub fn with_rate(mut self, q: f64) -> Self {
        self.q_rate = Some(q);
        self
    }
}

/// `m (π)_{r, r(r-1)/2} / r!`.
pub fn expected_cliques_leading(
    m: usize,
    dist: &LayerDistribution,
    r: usize,
) -> Result<TheoryPrediction> {
    if r < 2 {
        return Err(Error::Domain(format!(
            "clique size must be at least 2, got {r}"
        )));
    }
    let s = (r * (r - 1) / 2) as u32;
    let leading = m as f64 * dist.cross_moment(r as u32, s) / factorial(r as u32) as f64;
    Ok(TheoryPrediction::new(leading))
}

/// `m (π)_{r,r} / (2r)`.
pub fn expected_cycles_leading(
    m: usize,
    dist: &LayerDistribution,
    r: usize,
) -> Result<TheoryPrediction> {
    if r < 3 {
        return Err(Error::Domain(format!(
            "cycle length must be at least 3, got {r}"
        )));
    }
    let leading = m as f64 * dist.cross_moment(r as u32, r as u32) / (2 * r) as f64;
    Ok(TheoryPrediction::new(leading))
}

/// Leading term for a clique or cycle pattern; `None` for custom patterns.
pub fn leading_term(pattern: &SubgraphPattern, m: usize, dist: &LayerDistribution) -> Option<f64> {
    use crate::pattern::PatternKind;
    match pattern.kind() {
        PatternKind::Clique(1) => None,
        PatternKind::Clique(r) => expected_cliques_leading(m, dist, r).ok().map(|p| p.leading),
        PatternKind::Cycle(r) => expected_cycles_leading(m, dist, r).ok().map(|p| p.leading),
        PatternKind::Custom => None,
    }
}

/// Per-layer coverage probability `(π)_{‖E‖,|E|} / (n)_{‖E‖}` for every edge subset mask.
pub fn coverage_table(pattern: &SubgraphPattern, n: usize, dist: &LayerDistribution) -> Vec<f64> {
    let s = pattern.edge_count();
    (0..1u64 << s)
        .map(|mask| {
            let a = pattern.incident_nodes_of_mask(mask) as u32;
            let b = mask.count_ones();
            let denom = falling_factorial(n as f64, a);
            if denom == 0.0 {
                0.0
            } else {
                dist.cross_moment(a, b) / denom
            }
        })
        .collect()
}

fn check_domain(pattern: &SubgraphPattern, n: usize) -> Result<()> {
    if n < pattern.node_count() {
        return Err(Error::Domain(format!(
            "n = {n} is smaller than the pattern's {} nodes",
            pattern.node_count()
        )));
    }
    Ok(())
}

/// `U(R) = Σ_φ Pr(A_φ)`, exactly, by a sum over set partitions of `E(R)`.
pub fn exact_u(
    pattern: &SubgraphPattern,
    n: usize,
    m: usize,
    dist: &LayerDistribution,
) -> Result<f64> {
    let s = pattern.edge_count();
    if s > MAX_PARTITION_EDGES {
        return Err(Error::SizeGuard(format!(
            "exact U needs at most {MAX_PARTITION_EDGES} pattern edges, got {s}"
        )));
    }
    check_domain(pattern, n)?;
    let cover = coverage_table(pattern, n, dist);
    let total = SetPartitions::new(s)
        .map(|blocks| {
            let weight = falling_factorial(m as f64, blocks.len() as u32);
            if weight == 0.0 {
                return 0.0;
            }
            weight * blocks.iter().map(|&b| cover[b as usize]).product::<f64>()
        })
        .sum();
    Ok(total)
}

/// `L(R) = Σ_{φ≠ψ} Pr(A_φ ∩ A_ψ)`, exactly.
///
/// A pair `(φ, ψ)` is one map from `2s` labeled edge copies to the layers;
/// layer `k` must then cover the union of the edges of the copies it
/// receives. The sum runs over set partitions of the copies (weight `(m)_t`),
/// skipping partitions in which every edge's two copies share a block, which
/// are exactly the diagonal pairs `φ = ψ`.
pub fn exact_l(
    pattern: &SubgraphPattern,
    n: usize,
    m: usize,
    dist: &LayerDistribution,
) -> Result<f64> {
    let s = pattern.edge_count();
    if s > MAX_EXACT_L_EDGES {
        return Err(Error::SizeGuard(format!(
            "exact L needs at most {MAX_EXACT_L_EDGES} pattern edges, got {s}"
        )));
    }
    check_domain(pattern, n)?;
    let cover = coverage_table(pattern, n, dist);
    let mut walk = PairWalk {
        s,
        m,
        cover: &cover,
        weights: (0..=2 * s)
            .map(|t| falling_factorial(m as f64, t as u32))
            .collect(),
        block_of: vec![0; 2 * s],
        blocks: Vec::with_capacity(2 * s),
    };
    Ok(walk.descend(0, false))
}

struct PairWalk<'a> {
    s: usize,
    m: usize,
    cover: &'a [f64],
    weights: Vec<f64>,
    block_of: Vec<usize>,
    /// Union of underlying edges per block.
    blocks: Vec<EdgeMask>,
}

impl PairWalk<'_> {
    /// Copies `0..s` are φ's edges, `s..2s` are ψ's; copy `i` and `i + s` are the same edge.
    fn descend(&mut self, copy: usize, separated: bool) -> f64 {
        if copy == 2 * self.s {
            if !separated {
                return 0.0;
            }
            let t = self.blocks.len();
            return self.weights[t]
                * self
                    .blocks
                    .iter()
                    .map(|&b| self.cover[b as usize])
                    .product::<f64>();
        }
        let edge = copy % self.s;
        let bit: EdgeMask = 1 << edge;
        let mut total = 0.0;
        for b in 0..self.blocks.len() {
            let sep = separated || (copy >= self.s && self.block_of[edge] != b);
            let saved = self.blocks[b];
            self.blocks[b] |= bit;
            self.block_of[copy] = b;
            total += self.descend(copy + 1, sep);
            self.blocks[b] = saved;
        }
        // opening a block beyond m layers has zero weight
        if self.blocks.len() < self.m {
            let b = self.blocks.len();
            let sep = separated || copy >= self.s;
            self.blocks.push(bit);
            self.block_of[copy] = b;
            total += self.descend(copy + 1, sep);
            self.blocks.pop();
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub x: f64,
    pub y: f64,
    /// `max_E (π)_{‖E‖,|E|} / (x^‖E‖ y^|E|)`; derived from the distribution when unset.
    pub c: Option<f64>,
}

impl BoundParams {
    /// `x` = largest attainable size, `y` = largest attainable strength.
    pub fn default_for(dist: &LayerDistribution) -> Self {
        let x = dist.max_size() as f64;
        let y = dist.max_strength();
        BoundParams {
            x: if x > 0.0 { x } else { 1.0 },
            y: if y > 0.0 { y } else { 1.0 },
            c: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.x.is_finite()) {
            return Err(Error::Domain(format!(
                "bound parameter x = {} must be positive",
                self.x
            )));
        }
        if !(self.y > 0.0 && self.y <= 1.0) {
            return Err(Error::Domain(format!(
                "bound parameter y = {} must lie in (0, 1]",
                self.y
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma3Bounds {
    pub u_bound: f64,
    pub l_bound: f64,
    pub c: f64,
}

/// `c` over the distinct `(‖E‖, |E|)` profiles of nonempty `E ⊆ E(R)`.
pub fn profile_constant(
    pattern: &SubgraphPattern,
    dist: &LayerDistribution,
    x: f64,
    y: f64,
) -> f64 {
    let s = pattern.edge_count();
    let mut profiles = std::collections::BTreeSet::new();
    for mask in 1u64..(1 << s) {
        profiles.insert((
            pattern.incident_nodes_of_mask(mask) as u32,
            mask.count_ones(),
        ));
    }
    profiles
        .into_iter()
        .map(|(a, b)| dist.cross_moment(a, b) / (x.powi(a as i32) * y.powi(b as i32)))
        .fold(0.0, f64::max)
}

/// Closed-form upper bounds on `U(R)` and `L(R)`:
///
/// ```text
/// U <= (exp(r! c x m / n) - 1) s^s x^(r-1) y^s n^(1-r)
/// L <= (exp(r! c x m / n) - 1) (2s)^(2s) x^r y^(s+1) n^(-r)
/// ```
pub fn lemma3_bounds(
    pattern: &SubgraphPattern,
    n: usize,
    m: usize,
    dist: &LayerDistribution,
    bp: BoundParams,
) -> Result<Lemma3Bounds> {
    bp.validate()?;
    if (n as f64) < bp.x {
        return Err(Error::Domain(format!(
            "n = {n} is smaller than x = {}",
            bp.x
        )));
    }
    check_domain(pattern, n)?;
    let s = pattern.edge_count();
    if s > 20 {
        return Err(Error::SizeGuard(format!(
            "profile sweep limited to 20 edges, got {s}"
        )));
    }
    let r = pattern.node_count() as i32;
    let c =
        bp.c.unwrap_or_else(|| profile_constant(pattern, dist, bp.x, bp.y));
    let nf = n as f64;
    let sf = s as f64;
    let growth = (factorial(r as u32) as f64 * c * bp.x * m as f64 / nf).exp_m1();
    let u_bound = growth * sf.powf(sf) * bp.x.powi(r - 1) * bp.y.powf(sf) * nf.powi(1 - r);
    let l_bound =
        growth * (2.0 * sf).powf(2.0 * sf) * bp.x.powi(r) * bp.y.powf(sf + 1.0) * nf.powi(-r);
    Ok(Lemma3Bounds {
        u_bound,
        l_bound,
        c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LSource {
    Exact,
    Lemma3(BoundParams),
    /// Exact when the pattern is small enough, otherwise the closed form with default parameters.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionBounds {
    pub u_exact: f64,
    pub l_upper: f64,
    pub f_lower: f64,
    pub f_upper: f64,
}

impl InclusionBounds {
    pub fn from_terms(u: f64, l_upper: f64) -> Self {
        InclusionBounds {
            u_exact: u,
            l_upper,
            f_lower: (u - l_upper / 2.0).clamp(0.0, 1.0),
            f_upper: u.min(1.0),
        }
    }
}

/// `U(R)` and an upper bound on `L(R)` combined into a sandwich for `f(R)`.
pub fn inclusion_bounds(
    pattern: &SubgraphPattern,
    n: usize,
    m: usize,
    dist: &LayerDistribution,
    source: LSource,
) -> Result<InclusionBounds> {
    let u = exact_u(pattern, n, m, dist)?;
    let l = match source {
        LSource::Exact => exact_l(pattern, n, m, dist)?,
        LSource::Lemma3(bp) => lemma3_bounds(pattern, n, m, dist, bp)?.l_bound,
        LSource::Auto => {
            if pattern.edge_count() <= MAX_EXACT_L_EDGES {
                exact_l(pattern, n, m, dist)?
            } else {
                lemma3_bounds(pattern, n, m, dist, BoundParams::default_for(dist))?.l_bound
            }
        }
    };
    let mut b = InclusionBounds::from_terms(u, l);
    b.f_lower = b.f_lower.min(b.f_upper);
    Ok(b)
}

/// `(n)_r / |Aut(R)|`: the number of copies of `R` in `K_n`.
pub fn copies_in_complete_graph(pattern: &SubgraphPattern, n: usize) -> f64 {
    falling_factorial(n as f64, pattern.node_count() as u32) / pattern.automorphisms() as f64
}

/// Interval containing `E N_R(G_n) = (n)_r / |Aut(R)| · f(R)`.
pub fn expected_count_bracket(
    pattern: &SubgraphPattern,
    n: usize,
    m: usize,
    dist: &LayerDistribution,
    source: LSource,
) -> Result<(f64, f64)> {
    let b = inclusion_bounds(pattern, n, m, dist, source)?;
    let scale = copies_in_complete_graph(pattern, n);
    Ok((scale * b.f_lower, scale * b.f_upper))
}

/// Marginal edge probability `1 - (1 - (π)_{2,1} / (n)_2)^m` of the model.
pub fn matched_er_probability(n: usize, m: usize, dist: &LayerDistribution) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least two nodes, got {n}")));
    }
    let single = dist.cross_moment(2, 1) / falling_factorial(n as f64, 2);
    if !(0.0..=1.0).contains(&single) {
        return Err(Error::Domain(format!(
            "per-layer edge probability {single} outside [0, 1]"
        )));
    }
    Ok(1.0 - (1.0 - single).powf(m as f64))
}

/// First moment of `N_R` in `G(n, p)`: `(n)_r / |Aut(R)| · p^s`.
pub fn er_expected_count(n: usize, p: f64, pattern: &SubgraphPattern) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    Ok(copies_in_complete_graph(pattern, n) * p.powi(pattern.edge_count() as i32))
}
