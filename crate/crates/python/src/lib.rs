use std::fs::File;
use std::io::{BufReader, BufWriter};

use overlap_graph_lab as core;
use overlap_graph_lab::cover;
use overlap_graph_lab::experiment::{self, ExperimentConfig};
use overlap_graph_lab::theory::{self, BoundParams, LSource};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        core::Error::SizeGuard(_) | core::Error::LayerTooLarge { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[pyclass(name = "Graph", module = "overlapgraph")]
struct PyGraph(core::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core::Graph::from_edges(n, &edges)
            .map(PyGraph)
            .map_err(to_py)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        let file = File::open(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))?;
        core::Graph::read_edge_list(BufReader::new(file))
            .map(PyGraph)
            .map_err(to_py)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        let file = File::create(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))?;
        self.0
            .write_edge_list(BufWriter::new(file))
            .map_err(|e| PyOSError::new_err(format!("{path}: {e}")))
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.0.node_count() {
            return Err(PyValueError::new_err(format!("node {v} out of range")));
        }
        Ok(self.0.neighbors(v).to_vec())
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_edge(u, v)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, edges={})",
            self.0.node_count(),
            self.0.edge_count()
        )
    }
}

/// Pattern graph: `clique:4`, `cycle:5` or `custom:0-1 1-2 2-0`.
#[pyclass(name = "Pattern", module = "overlapgraph")]
struct PyPattern(core::SubgraphPattern);

#[pymethods]
impl PyPattern {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(PyPattern).map_err(to_py)
    }

    #[staticmethod]
    fn clique(r: usize) -> PyResult<Self> {
        core::SubgraphPattern::clique(r)
            .map(PyPattern)
            .map_err(to_py)
    }

    #[staticmethod]
    fn cycle(r: usize) -> PyResult<Self> {
        core::SubgraphPattern::cycle(r)
            .map(PyPattern)
            .map_err(to_py)
    }

    #[staticmethod]
    fn custom(edges: Vec<(usize, usize)>) -> PyResult<Self> {
        core::SubgraphPattern::custom(&edges)
            .map(PyPattern)
            .map_err(to_py)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    #[getter]
    fn automorphisms(&self) -> u64 {
        self.0.automorphisms()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Pattern('{}')", self.0)
    }
}

/// Joint law of layer size and strength.
#[pyclass(name = "LayerDistribution", module = "overlapgraph")]
struct PyDistribution(core::LayerDistribution);

#[pymethods]
impl PyDistribution {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        spec.parse().map(PyDistribution).map_err(to_py)
    }

    #[staticmethod]
    fn point(size: u64, strength: f64) -> PyResult<Self> {
        core::LayerDistribution::point(size, strength)
            .map(PyDistribution)
            .map_err(to_py)
    }

    #[staticmethod]
    fn binomial(trials: u64, p: f64, strength: f64) -> PyResult<Self> {
        core::LayerDistribution::binomial(trials, p, strength)
            .map(PyDistribution)
            .map_err(to_py)
    }

    /// Entries are `(size, strength, weight)`.
    #[staticmethod]
    fn table(entries: Vec<(u64, f64, f64)>) -> PyResult<Self> {
        let entries = entries
            .into_iter()
            .map(|(size, strength, weight)| core::TableEntry {
                size,
                strength,
                weight,
            })
            .collect();
        core::LayerDistribution::table(entries)
            .map(PyDistribution)
            .map_err(to_py)
    }

    /// `E[(X)_r Y^s]`.
    fn cross_moment(&self, r: u32, s: u32) -> f64 {
        self.0.cross_moment(r, s)
    }

    fn truncated_cross_moment(&self, a: u32, b: u32, threshold: u64) -> f64 {
        self.0.truncated_cross_moment(a, b, threshold)
    }

    #[getter]
    fn max_size(&self) -> u64 {
        self.0.max_size()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LayerDistribution('{}')", self.0)
    }
}

#[pyfunction]
#[pyo3(signature = (n, m, dist, seed = 0))]
fn generate(
    py: Python<'_>,
    n: usize,
    m: usize,
    dist: &PyDistribution,
    seed: u64,
) -> PyResult<PyGraph> {
    let params = core::ModelParams::new(n, m, dist.0.clone(), seed);
    py.detach(|| core::generate(&params))
        .map(PyGraph)
        .map_err(to_py)
}

/// Layers as `(index, size, strength, nodes, edges)` tuples.
#[pyfunction]
#[pyo3(signature = (n, m, dist, seed = 0))]
#[allow(clippy::type_complexity)]
fn generate_layers(
    n: usize,
    m: usize,
    dist: &PyDistribution,
    seed: u64,
) -> PyResult<Vec<(usize, u64, f64, Vec<usize>, Vec<(usize, usize)>)>> {
    let params = core::ModelParams::new(n, m, dist.0.clone(), seed);
    let layers = core::generate_layers(&params).map_err(to_py)?;
    Ok(layers
        .into_iter()
        .map(|l| (l.index, l.sample.size, l.sample.strength, l.nodes, l.edges))
        .collect())
}

#[pyfunction]
fn count_cliques(py: Python<'_>, g: &PyGraph, r: usize) -> PyResult<u64> {
    py.detach(|| core::count_cliques(&g.0, r))
        .map(|c| c.count)
        .map_err(to_py)
}

#[pyfunction]
fn count_cycles(py: Python<'_>, g: &PyGraph, r: usize) -> PyResult<u64> {
    py.detach(|| core::count_cycles(&g.0, r))
        .map(|c| c.count)
        .map_err(to_py)
}

/// Dispatches to the clique, cycle or brute-force counter.
#[pyfunction]
fn count_pattern(py: Python<'_>, g: &PyGraph, pattern: &PyPattern) -> PyResult<u64> {
    py.detach(|| experiment::count_pattern(&g.0, &pattern.0))
        .map_err(to_py)
}

#[pyfunction]
fn count_bruteforce(g: &PyGraph, pattern: &PyPattern) -> PyResult<u64> {
    core::count_pattern_bruteforce(&g.0, &pattern.0)
        .map(|c| c.count)
        .map_err(to_py)
}

#[pyfunction]
fn leading_term(pattern: &PyPattern, m: usize, dist: &PyDistribution) -> Option<f64> {
    theory::leading_term(&pattern.0, m, &dist.0)
}

#[pyfunction]
fn exact_u(pattern: &PyPattern, n: usize, m: usize, dist: &PyDistribution) -> PyResult<f64> {
    theory::exact_u(&pattern.0, n, m, &dist.0).map_err(to_py)
}

#[pyfunction]
fn exact_l(pattern: &PyPattern, n: usize, m: usize, dist: &PyDistribution) -> PyResult<f64> {
    theory::exact_l(&pattern.0, n, m, &dist.0).map_err(to_py)
}

/// `(u_bound, l_bound, c)`; `x` and `y` default to the distribution's maxima.
#[pyfunction]
#[pyo3(signature = (pattern, n, m, dist, x = None, y = None, c = None))]
fn lemma3_bounds(
    pattern: &PyPattern,
    n: usize,
    m: usize,
    dist: &PyDistribution,
    x: Option<f64>,
    y: Option<f64>,
    c: Option<f64>,
) -> PyResult<(f64, f64, f64)> {
    let mut bp = BoundParams::default_for(&dist.0);
    bp.x = x.unwrap_or(bp.x);
    bp.y = y.unwrap_or(bp.y);
    bp.c = c;
    let b = theory::lemma3_bounds(&pattern.0, n, m, &dist.0, bp).map_err(to_py)?;
    Ok((b.u_bound, b.l_bound, b.c))
}

fn l_source(name: &str, dist: &core::LayerDistribution) -> PyResult<LSource> {
    match name {
        "exact" => Ok(LSource::Exact),
        "lemma3" => Ok(LSource::Lemma3(BoundParams::default_for(dist))),
        "auto" => Ok(LSource::Auto),
        other => Err(PyValueError::new_err(format!("unknown l_source `{other}`"))),
    }
}

/// `(U, L_upper, f_lower, f_upper)`.
#[pyfunction]
#[pyo3(signature = (pattern, n, m, dist, l_source = "auto"))]
fn inclusion_bounds(
    pattern: &PyPattern,
    n: usize,
    m: usize,
    dist: &PyDistribution,
    l_source: &str,
) -> PyResult<(f64, f64, f64, f64)> {
    let source = self::l_source(l_source, &dist.0)?;
    let b = theory::inclusion_bounds(&pattern.0, n, m, &dist.0, source).map_err(to_py)?;
    Ok((b.u_exact, b.l_upper, b.f_lower, b.f_upper))
}

#[pyfunction]
#[pyo3(signature = (pattern, n, m, dist, l_source = "auto"))]
fn expected_count_bracket(
    pattern: &PyPattern,
    n: usize,
    m: usize,
    dist: &PyDistribution,
    l_source: &str,
) -> PyResult<(f64, f64)> {
    let source = self::l_source(l_source, &dist.0)?;
    theory::expected_count_bracket(&pattern.0, n, m, &dist.0, source).map_err(to_py)
}

#[pyfunction]
fn matched_er_probability(n: usize, m: usize, dist: &PyDistribution) -> PyResult<f64> {
    theory::matched_er_probability(n, m, &dist.0).map_err(to_py)
}

#[pyfunction]
fn er_expected_count(n: usize, p: f64, pattern: &PyPattern) -> PyResult<f64> {
    theory::er_expected_count(n, p, &pattern.0).map_err(to_py)
}

/// Runs an exhaustive lemma check; returns `(cases_checked, violations)`.
#[pyfunction]
#[pyo3(signature = (lemma, pattern, pattern2 = None))]
fn verify_lemma(
    lemma: u8,
    pattern: &PyPattern,
    pattern2: Option<&PyPattern>,
) -> PyResult<(u64, Vec<String>)> {
    let report = match (lemma, pattern2) {
        (1, _) => cover::check_lemma1(&pattern.0),
        (2, Some(second)) => cover::check_lemma2(&pattern.0, &second.0),
        (2, None) => return Err(PyValueError::new_err("lemma 2 needs a second pattern")),
        (6, _) => cover::check_lemma6(pattern.0.node_count()),
        _ => return Err(PyValueError::new_err(format!("no check for lemma {lemma}"))),
    }
    .map_err(to_py)?;
    Ok((report.cases_checked, report.violations))
}

#[pyfunction]
fn seed_child(parent: u64, coords: Vec<u64>) -> u64 {
    core::seed::child(parent, &coords)
}

/// Runs an experiment described by config text; returns one dict per row.
#[pyfunction]
fn run_experiment<'py>(py: Python<'py>, config: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = ExperimentConfig::parse(config).map_err(to_py)?;
    let outcome = py
        .detach(|| experiment::run_experiment(&config))
        .map_err(to_py)?;
    outcome
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("n", r.n)?;
            d.set_item("m", r.m)?;
            d.set_item("pattern", &r.pattern)?;
            d.set_item("replicate", r.replicate)?;
            d.set_item("seed", r.seed)?;
            d.set_item("count", r.count)?;
            d.set_item("theory_leading", r.theory_leading)?;
            d.set_item("ratio", r.ratio)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (n, exponent, replicates, seed = 0))]
fn regime_demo<'py>(
    py: Python<'py>,
    n: usize,
    exponent: f64,
    replicates: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = py
        .detach(|| experiment::run_regime_demo(n, exponent, replicates, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("m", s.m)?;
    d.set_item("p", s.strength)?;
    d.set_item("mean_c4", s.mean_c4)?;
    d.set_item("mean_k4", s.mean_k4)?;
    d.set_item("leading_c4", s.leading_c4)?;
    d.set_item("leading_k4", s.leading_k4)?;
    d.set_item("warning", s.warning)?;
    Ok(d)
}

#[pymodule]
fn overlapgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPattern>()?;
    m.add_class::<PyDistribution>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_layers, m)?)?;
    m.add_function(wrap_pyfunction!(count_cliques, m)?)?;
    m.add_function(wrap_pyfunction!(count_cycles, m)?)?;
    m.add_function(wrap_pyfunction!(count_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(count_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(leading_term, m)?)?;
    m.add_function(wrap_pyfunction!(exact_u, m)?)?;
    m.add_function(wrap_pyfunction!(exact_l, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(inclusion_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(expected_count_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(matched_er_probability, m)?)?;
    m.add_function(wrap_pyfunction!(er_expected_count, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(seed_child, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(regime_demo, m)?)?;
    Ok(())
}
