//! Seeded Monte Carlo experiments comparing sampled subgraph counts with the
//! leading-order predictions.
//!
//! Replicate `i` at node count `n` uses the seed `seed::child(base, [n, i])`,
//! so output does not depend on the number of worker threads. Rows are
//! sorted by `(n, pattern, replicate)` before they are written.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::count::{count_cliques, count_cycles, count_pattern_bruteforce};
use crate::error::{Error, Result};
use crate::generator::{generate, ModelParams};
use crate::graph::Graph;
use crate::layer::LayerDistribution;
use crate::pattern::{PatternKind, SubgraphPattern};
use crate::seed;
use crate::theory::leading_term;

pub const CSV_VERSION_LINE: &str = "# overlap-graph-lab v1";
pub const CSV_COLUMNS: [&str; 9] = [
    "n",
    "m",
    "pattern",
    "replicate",
    "seed",
    "count",
    "theory_leading",
    "ratio",
    "elapsed_ms",
];

#[derive(Debug, Clone, PartialEq)]
pub enum MRule {
    /// One value for every `n`, or one per entry of `n_values`.
    Explicit(Vec<usize>),
    /// `m = round(ratio * n)`.
    Ratio(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_values: Vec<usize>,
    pub m_rule: MRule,
    pub dist: LayerDistribution,
    pub patterns: Vec<SubgraphPattern>,
    pub replicates: usize,
    pub base_seed: u64,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Fill the `elapsed_ms` column. Off by default so reruns are byte-identical.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(
        n_values: Vec<usize>,
        m_rule: MRule,
        dist: LayerDistribution,
        patterns: Vec<SubgraphPattern>,
    ) -> Self {
        ExperimentConfig {
            n_values,
            m_rule,
            dist,
            patterns,
            replicates: 1,
            base_seed: 0,
            output: None,
            threads: None,
            record_timing: false,
        }
    }

    /// Parses flat `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `n`, `m`, `m_ratio`, `dist`, `patterns` (separated by `|`),
    /// `replicates`, `seed`, `out`, `threads`, `timing`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut builder = ConfigBuilder::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            builder
                .set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        builder.build()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn m_for(&self, index: usize) -> Result<usize> {
        let n = self.n_values[index];
        match &self.m_rule {
            MRule::Explicit(list) if list.len() == 1 => Ok(list[0]),
            MRule::Explicit(list) if list.len() == self.n_values.len() => Ok(list[index]),
            MRule::Explicit(list) => Err(Error::Config(format!(
                "m has {} values but n has {}",
                list.len(),
                self.n_values.len()
            ))),
            MRule::Ratio(rho) => Ok((rho * n as f64).round() as usize),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() {
            return Err(Error::Config("no n values".into()));
        }
        if self.patterns.is_empty() {
            return Err(Error::Config("no patterns".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if let MRule::Ratio(rho) = self.m_rule {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(Error::Config(format!(
                    "m ratio must be positive, got {rho}"
                )));
            }
        }
        self.dist.validate()?;
        let max = self.dist.max_size();
        for i in 0..self.n_values.len() {
            let n = self.n_values[i];
            self.m_for(i)?;
            if (n as u64) < max {
                return Err(Error::Config(format!(
                    "n = {n} is below the largest layer size {max}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Default)]
struct ConfigBuilder {
    n: Option<Vec<usize>>,
    m: Option<MRule>,
    dist: Option<LayerDistribution>,
    patterns: Option<Vec<SubgraphPattern>>,
    replicates: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    threads: Option<usize>,
    timing: bool,
}

impl ConfigBuilder {
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<usize> {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad integer `{v}`")))
        };
        match key {
            "n" => self.n = Some(value.split(',').map(num).collect::<Result<_>>()?),
            "m" => {
                self.m = Some(MRule::Explicit(
                    value.split(',').map(num).collect::<Result<_>>()?,
                ))
            }
            "m_ratio" => {
                let rho = value
                    .parse()
                    .map_err(|_| Error::Config(format!("bad ratio `{value}`")))?;
                self.m = Some(MRule::Ratio(rho));
            }
            "dist" => self.dist = Some(value.parse()?),
            "patterns" => {
                self.patterns = Some(
                    value
                        .split('|')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?,
                )
            }
            "replicates" => self.replicates = Some(num(value)?),
            "seed" => {
                self.seed = Some(
                    value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad seed `{value}`")))?,
                )
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "threads" => self.threads = Some(num(value)?),
            "timing" => self.timing = matches!(value, "true" | "1" | "yes"),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    fn build(self) -> Result<ExperimentConfig> {
        let missing = |k: &str| Error::Config(format!("missing `{k}`"));
        let cfg = ExperimentConfig {
            n_values: self.n.ok_or_else(|| missing("n"))?,
            m_rule: self.m.ok_or_else(|| missing("m or m_ratio"))?,
            dist: self.dist.ok_or_else(|| missing("dist"))?,
            patterns: self.patterns.ok_or_else(|| missing("patterns"))?,
            replicates: self.replicates.unwrap_or(1),
            base_seed: self.seed.unwrap_or(0),
            output: self.out,
            threads: self.threads,
            record_timing: self.timing,
        };
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub m: usize,
    pub pattern_index: usize,
    pub pattern: String,
    pub replicate: usize,
    pub seed: u64,
    pub count: u64,
    pub theory_leading: Option<f64>,
    pub ratio: Option<f64>,
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub n: usize,
    pub m: usize,
    pub pattern: String,
    pub replicates: usize,
    pub mean_count: f64,
    pub sd_count: f64,
    pub mean_ratio: Option<f64>,
    pub sd_ratio: Option<f64>,
    /// Half-width of the 95% normal interval for the mean, relative to the mean.
    pub rel_half_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateFailure {
    pub n: usize,
    pub replicate: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub rows: Vec<ExperimentRow>,
    pub summary: Vec<SummaryRow>,
    pub failures: Vec<ReplicateFailure>,
}

/// Counts one pattern with the matching counter.
pub fn count_pattern(g: &Graph, pattern: &SubgraphPattern) -> Result<u64> {
    Ok(match pattern.kind() {
        PatternKind::Clique(r) => count_cliques(g, r)?.count,
        PatternKind::Cycle(r) => count_cycles(g, r)?.count,
        PatternKind::Custom => count_pattern_bruteforce(g, pattern)?.count,
    })
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Runs every replicate and returns sorted rows plus per-(n, pattern) summaries.
pub fn simulate(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let jobs: Vec<(usize, usize, usize)> = (0..config.n_values.len())
        .flat_map(|i| (0..config.replicates).map(move |rep| (i, config.n_values[i], rep)))
        .collect();
    let leading: Vec<Vec<Option<f64>>> = (0..config.n_values.len())
        .map(|i| {
            let m = config.m_for(i).expect("validated");
            config
                .patterns
                .iter()
                .map(|p| leading_term(p, m, &config.dist))
                .collect()
        })
        .collect();

    let results: Vec<std::result::Result<Vec<ExperimentRow>, ReplicateFailure>> =
        with_pool(config.threads, || {
            jobs.par_iter()
                .map(|&(i, n, rep)| {
                    let m = config.m_for(i).expect("validated");
                    let seed = seed::child(config.base_seed, &[n as u64, rep as u64]);
                    let fail = |e: Error| ReplicateFailure {
                        n,
                        replicate: rep,
                        message: e.to_string(),
                    };
                    let start = Instant::now();
                    let g = generate(&ModelParams::new(n, m, config.dist.clone(), seed))
                        .map_err(fail)?;
                    let gen_ms = start.elapsed().as_secs_f64() * 1e3;
                    let mut rows = Vec::with_capacity(config.patterns.len());
                    for (pi, pattern) in config.patterns.iter().enumerate() {
                        let t = Instant::now();
                        let count = count_pattern(&g, pattern).map_err(fail)?;
                        let theory = leading[i][pi];
                        rows.push(ExperimentRow {
                            n,
                            m,
                            pattern_index: pi,
                            pattern: pattern.to_string(),
                            replicate: rep,
                            seed,
                            count,
                            theory_leading: theory,
                            ratio: theory.filter(|&l| l > 0.0).map(|l| count as f64 / l),
                            elapsed_ms: config
                                .record_timing
                                .then(|| gen_ms + t.elapsed().as_secs_f64() * 1e3),
                        });
                    }
                    Ok(rows)
                })
                .collect()
        })?;

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(mut v) => rows.append(&mut v),
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by_key(|r| (r.n, r.pattern_index, r.replicate));
    let summary = summarize_rows(&rows);
    Ok(ExperimentOutcome {
        rows,
        summary,
        failures,
    })
}

/// Runs the experiment and writes the CSV to `config.output` when set. The
/// output file is created before any sampling starts.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let file = match &config.output {
        Some(path) => Some((
            path.clone(),
            File::create(path).map_err(|e| Error::io(path, e))?,
        )),
        None => None,
    };
    let outcome = simulate(config)?;
    if let Some((path, file)) = file {
        let mut w = BufWriter::new(file);
        write_rows(&mut w, &outcome.rows).map_err(|e| Error::io(&path, e))?;
        w.flush().map_err(|e| Error::io(&path, e))?;
    }
    Ok(outcome)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_rows<W: Write>(out: &mut W, rows: &[ExperimentRow]) -> std::io::Result<()> {
    writeln!(out, "{CSV_VERSION_LINE}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.pattern.clone(),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.count.to_string(),
            fmt_opt(r.theory_leading),
            fmt_opt(r.ratio),
            fmt_opt(r.elapsed_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / k;
    let sd = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

pub fn summarize_rows(rows: &[ExperimentRow]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, usize), Vec<&ExperimentRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((r.n, r.pattern_index)).or_default().push(r);
    }
    groups
        .into_values()
        .map(|g| {
            let counts: Vec<f64> = g.iter().map(|r| r.count as f64).collect();
            let ratios: Vec<f64> = g.iter().filter_map(|r| r.ratio).collect();
            let (mean_count, sd_count) = mean_sd(&counts);
            let (mean_ratio, sd_ratio) = if ratios.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_sd(&ratios);
                (Some(m), Some(s))
            };
            let rel_half_width = if mean_count > 0.0 {
                1.96 * sd_count / (counts.len() as f64).sqrt() / mean_count
            } else {
                f64::NAN
            };
            SummaryRow {
                n: g[0].n,
                m: g[0].m,
                pattern: g[0].pattern.clone(),
                replicates: g.len(),
                mean_count,
                sd_count,
                mean_ratio,
                sd_ratio,
                rel_half_width,
            }
        })
        .collect()
}

pub fn format_summary(summary: &[SummaryRow]) -> String {
    let mut out = String::from(
        "n,m,pattern,replicates,mean_count,sd_count,mean_ratio,sd_ratio,rel_half_width\n",
    );
    for s in summary {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.n,
            s.m,
            s.pattern,
            s.replicates,
            s.mean_count,
            s.sd_count,
            fmt_opt(s.mean_ratio),
            fmt_opt(s.sd_ratio),
            s.rel_half_width
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeSummary {
    pub n: usize,
    pub m: usize,
    pub strength: f64,
    pub replicates: usize,
    pub mean_c4: f64,
    pub mean_k4: f64,
    pub leading_c4: f64,
    pub leading_k4: f64,
    pub warning: Option<String>,
}

/// `m = n` layers of size 5 with strength `p = n^(-exponent)`; compares
/// 4-cycle and 4-clique counts. Exponents in `(1/8, 1/4)` put 4-cycles in
/// the observable range and 4-cliques below it.
pub fn run_regime_demo(
    n: usize,
    exponent: f64,
    replicates: usize,
    base_seed: u64,
) -> Result<RegimeSummary> {
    if n < 1000 {
        return Err(Error::Domain(format!(
            "regime demo needs n >= 1000, got {n}"
        )));
    }
    let p = (n as f64).powf(-exponent);
    let mut summary = run_regime_with_strength(n, p, replicates, base_seed)?;
    if !(exponent > 0.125 && exponent < 0.25) {
        summary.warning = Some(format!("exponent {exponent} is outside (1/8, 1/4)"));
    }
    Ok(summary)
}

/// The regime demo at an explicit strength `p`.
pub fn run_regime_with_strength(
    n: usize,
    p: f64,
    replicates: usize,
    base_seed: u64,
) -> Result<RegimeSummary> {
    if replicates == 0 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    let dist = LayerDistribution::point(5, p)?;
    let m = n;
    let c4 = SubgraphPattern::cycle(4)?;
    let k4 = SubgraphPattern::clique(4)?;
    let counts: Vec<(u64, u64)> = (0..replicates)
        .into_par_iter()
        .map(|rep| {
            let seed = seed::child(base_seed, &[n as u64, rep as u64]);
            let g = generate(&ModelParams::new(n, m, dist.clone(), seed))?;
            Ok((count_pattern(&g, &c4)?, count_pattern(&g, &k4)?))
        })
        .collect::<Result<_>>()?;
    let k = replicates as f64;
    let ff4 = 120.0;
    Ok(RegimeSummary {
        n,
        m,
        strength: p,
        replicates,
        mean_c4: counts.iter().map(|c| c.0 as f64).sum::<f64>() / k,
        mean_k4: counts.iter().map(|c| c.1 as f64).sum::<f64>() / k,
        leading_c4: m as f64 * ff4 * p.powi(4) / 8.0,
        leading_k4: m as f64 * ff4 * p.powi(6) / 24.0,
        warning: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergencePoint {
    pub n: usize,
    pub mean_ratio: f64,
    pub sd_ratio: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    pub pattern: String,
    pub points: Vec<ConvergencePoint>,
    /// SD of the ratio never increases with `n`.
    pub sd_non_increasing: bool,
}

/// Reads experiment CSVs and tabulates the ratio statistics per pattern and `n`.
pub fn summarize_convergence<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<ConvergenceSeries>> {
    let mut samples: BTreeMap<String, BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for path in paths {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(file);
        let headers = reader.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))
        };
        let (n_col, pattern_col, ratio_col) = (col("n")?, col("pattern")?, col("ratio")?);
        for record in reader.records() {
            let record = record?;
            let n: usize = record[n_col].parse().map_err(|_| {
                Error::Config(format!("{}: bad n `{}`", path.display(), &record[n_col]))
            })?;
            let entry = samples
                .entry(record[pattern_col].to_string())
                .or_default()
                .entry(n)
                .or_default();
            let ratio = record[ratio_col].trim();
            if !ratio.is_empty() {
                entry.push(ratio.parse().map_err(|_| {
                    Error::Config(format!("{}: bad ratio `{ratio}`", path.display()))
                })?);
            }
        }
    }
    let distinct: std::collections::BTreeSet<usize> =
        samples.values().flat_map(|m| m.keys().copied()).collect();
    if distinct.len() < 2 {
        return Err(Error::Config(format!(
            "convergence summary needs at least two distinct n values, found {}",
            distinct.len()
        )));
    }
    Ok(samples
        .into_iter()
        .map(|(pattern, by_n)| {
            let points: Vec<ConvergencePoint> = by_n
                .into_iter()
                .filter(|(_, v)| !v.is_empty())
                .map(|(n, v)| {
                    let (mean_ratio, sd_ratio) = mean_sd(&v);
                    ConvergencePoint {
                        n,
                        mean_ratio,
                        sd_ratio,
                        samples: v.len(),
                    }
                })
                .collect();
            let sd_non_increasing = points.windows(2).all(|w| w[1].sd_ratio <= w[0].sd_ratio);
            ConvergenceSeries {
                pattern,
                points,
                sd_non_increasing,
            }
        })
        .collect())
}

pub fn format_convergence(series: &[ConvergenceSeries]) -> String {
    let mut out = String::from("pattern,n,samples,mean_ratio,sd_ratio,sd_non_increasing\n");
    for s in series {
        for p in &s.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.pattern, p.n, p.samples, p.mean_ratio, p.sd_ratio, s.sd_non_increasing
            ));
        }
    }
    out
}
