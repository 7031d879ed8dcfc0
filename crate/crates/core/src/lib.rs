//! Random graphs built as the union of independent random layers
//! (overlapping communities), together with exact subgraph counters, the
//! leading-order frequency predictions, inclusion–exclusion bounds and a
//! seeded Monte Carlo harness that checks one against the other.

pub mod count;
pub mod cover;
pub mod edges;
pub mod error;
pub mod experiment;
pub mod generator;
pub mod graph;
pub mod layer;
pub mod math;
pub mod pattern;
pub mod seed;
pub mod theory;

pub use count::{count_cliques, count_cycles, count_pattern_bruteforce, CountResult};
pub use edges::{incident_node_count, Edge, EdgeSet};
pub use error::{Error, Result};
pub use generator::{generate, generate_layers, Layer, ModelParams};
pub use graph::Graph;
pub use layer::{LayerDistribution, LayerSample, TableEntry};
pub use math::falling_factorial;
pub use pattern::{automorphism_count, PatternKind, SubgraphPattern};
pub use theory::{BoundParams, InclusionBounds, LSource, TheoryPrediction};
