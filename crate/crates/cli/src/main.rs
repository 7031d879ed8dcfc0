use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use overlap_graph_lab::cover::{self, LemmaReport};
use overlap_graph_lab::experiment::{self, ExperimentConfig, MRule};
use overlap_graph_lab::generator::{format_layers, generate_layers};
use overlap_graph_lab::theory::{self, BoundParams, LSource};
use overlap_graph_lab::{Error, Graph, LayerDistribution, ModelParams, SubgraphPattern};

#[derive(Parser)]
#[command(
    name = "overlap-graph-lab",
    version,
    about = "Overlapping-community random graphs: sampling, motif counts and theory"
)]
struct Cli {
    /// Base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for experiments.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Experiment config file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// e.g. `point:x=5,y=0.5`, `table:(2,1.0,0.5);(3,0.2,0.5)`, `binom:N=10,p=0.3,y=0.5`
    #[arg(long)]
    dist: LayerDistribution,
}

#[derive(Clone, Copy, ValueEnum)]
enum LMode {
    Exact,
    Lemma3,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and write it as an edge list.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        /// Also dump the layers as `k x y : nodes ; edges`.
        #[arg(long)]
        layers: Option<PathBuf>,
    },
    /// Count pattern copies in an edge-list graph.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        /// `clique:4`, `cycle:5` or `custom:0-1 1-2 2-0`; repeatable.
        #[arg(long, required = true)]
        pattern: Vec<SubgraphPattern>,
    },
    /// Leading terms, inclusion bounds and the matched G(n, p) probability.
    Theory {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, required = true)]
        pattern: Vec<SubgraphPattern>,
        /// Source of the bound on the overlap term.
        #[arg(long, value_enum, default_value = "auto")]
        l_source: LMode,
    },
    /// Closed-form upper bounds on the union and overlap terms.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, required = true)]
        pattern: Vec<SubgraphPattern>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Exhaustively check a cover lemma (1, 2 or 6).
    Verify {
        /// 1: excess bounds over edge covers of a connected pattern.
        /// 2: excess bound over partitions of two disjoint patterns.
        /// 6: every two-block edge partition of a clique has a block touching all nodes.
        #[arg(long, value_parser = ["1", "2", "6"])]
        lemma: String,
        /// Pattern to check. Lemma 1 without a pattern checks every connected pattern with up to 5 edges.
        #[arg(long)]
        pattern: Option<SubgraphPattern>,
        /// Second pattern for lemma 2.
        #[arg(long)]
        pattern2: Option<SubgraphPattern>,
    },
    /// Seeded Monte Carlo comparison of counts with the leading terms.
    Experiment {
        /// Node counts, comma separated.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Layer counts, one value or one per n.
        #[arg(long, value_delimiter = ',', conflicts_with = "m_ratio")]
        m: Vec<usize>,
        #[arg(long)]
        m_ratio: Option<f64>,
        #[arg(long)]
        dist: Option<LayerDistribution>,
        #[arg(long)]
        pattern: Vec<SubgraphPattern>,
        #[arg(long)]
        replicates: Option<usize>,
        /// Fill the elapsed_ms column.
        #[arg(long)]
        timing: bool,
    },
    /// 4-cycles against 4-cliques at strength p = n^(-exponent).
    RegimeDemo {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1875)]
        exponent: f64,
        #[arg(long, default_value_t = 50)]
        replicates: usize,
    },
    /// Ratio mean and spread per pattern and n across experiment CSVs.
    Summarize {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Guard(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeGuard(_) | Error::LayerTooLarge { .. } => Failure::Guard(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation) => ExitCode::from(2),
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn open_out(path: Option<&Path>) -> std::result::Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

struct Globals {
    seed: Option<u64>,
    threads: Option<usize>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Outcome {
    let Cli {
        seed,
        threads,
        config,
        out,
        command,
    } = cli;
    let cli = &Globals {
        seed,
        threads,
        config,
        out,
    };
    let out_path = cli.out.as_deref();
    match command {
        Command::Generate { model, layers } => {
            let params = ModelParams::new(model.n, model.m, model.dist, cli.seed.unwrap_or(0));
            let ls = generate_layers(&params)?;
            let edges: Vec<_> = ls.iter().flat_map(|l| l.edges.iter().copied()).collect();
            let g = Graph::from_edges_dedup(model.n, &edges)?;
            let mut w = open_out(out_path)?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
            if let Some(path) = layers {
                std::fs::write(&path, format_layers(&ls))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
        }
        Command::Count { input, pattern } => {
            let file = File::open(&input)
                .map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            let g = Graph::read_edge_list(BufReader::new(file))?;
            let mut w = open_out(out_path)?;
            writeln!(w, "pattern,count,elapsed_ms")?;
            for p in &pattern {
                let start = Instant::now();
                let count = experiment::count_pattern(&g, p)?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                writeln!(w, "{},{count},{ms:.3}", csv_field(&p.to_string()))?;
            }
            w.flush()?;
        }
        Command::Theory {
            model,
            pattern,
            l_source,
        } => {
            let source = match l_source {
                LMode::Exact => LSource::Exact,
                LMode::Lemma3 => LSource::Lemma3(BoundParams::default_for(&model.dist)),
                LMode::Auto => LSource::Auto,
            };
            let p_er = theory::matched_er_probability(model.n, model.m, &model.dist)?;
            let mut w = open_out(out_path)?;
            writeln!(
                w,
                "pattern,leading,U,L_upper,f_lower,f_upper,EN_lower,EN_upper,p_er"
            )?;
            for p in &pattern {
                let leading = theory::leading_term(p, model.m, &model.dist)
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                let b = theory::inclusion_bounds(p, model.n, model.m, &model.dist, source)?;
                let scale = theory::copies_in_complete_graph(p, model.n);
                writeln!(
                    w,
                    "{},{leading},{},{},{},{},{},{},{p_er}",
                    csv_field(&p.to_string()),
                    b.u_exact,
                    b.l_upper,
                    b.f_lower,
                    b.f_upper,
                    scale * b.f_lower,
                    scale * b.f_upper
                )?;
            }
            w.flush()?;
        }
        Command::Bounds {
            model,
            pattern,
            x,
            y,
            c,
        } => {
            let mut bp = BoundParams::default_for(&model.dist);
            bp.x = x.unwrap_or(bp.x);
            bp.y = y.unwrap_or(bp.y);
            bp.c = c;
            let mut w = open_out(out_path)?;
            writeln!(w, "pattern,x,y,c,u_bound,l_bound")?;
            for p in &pattern {
                let b = theory::lemma3_bounds(p, model.n, model.m, &model.dist, bp)?;
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    csv_field(&p.to_string()),
                    bp.x,
                    bp.y,
                    b.c,
                    b.u_bound,
                    b.l_bound
                )?;
            }
            w.flush()?;
        }
        Command::Verify {
            lemma,
            pattern,
            pattern2,
        } => {
            let reports = verify(&lemma, pattern, pattern2)?;
            let mut w = open_out(out_path)?;
            writeln!(w, "lemma,cases_checked,violations")?;
            for r in &reports {
                writeln!(w, "{}", r.csv_row())?;
            }
            w.flush()?;
            for r in &reports {
                for v in &r.violations {
                    eprintln!("violation ({}): {v}", r.subject);
                }
            }
            if reports.iter().any(|r| !r.passed()) {
                return Err(Failure::Violation);
            }
        }
        Command::Experiment {
            n,
            m,
            m_ratio,
            dist,
            pattern,
            replicates,
            timing,
        } => {
            let config = experiment_config(cli, n, m, m_ratio, dist, pattern, replicates, timing)?;
            let outcome = experiment::run_experiment(&config)?;
            if config.output.is_none() {
                let mut stdout = io::stdout().lock();
                experiment::write_rows(&mut stdout, &outcome.rows)?;
            }
            eprint!("{}", experiment::format_summary(&outcome.summary));
            for f in &outcome.failures {
                eprintln!(
                    "replicate failed: n={} replicate={}: {}",
                    f.n, f.replicate, f.message
                );
            }
            if !outcome.failures.is_empty() {
                return Err(Failure::Guard(format!(
                    "{} replicate(s) failed",
                    outcome.failures.len()
                )));
            }
        }
        Command::RegimeDemo {
            n,
            exponent,
            replicates,
        } => {
            let s = experiment::run_regime_demo(n, exponent, replicates, cli.seed.unwrap_or(0))?;
            if let Some(warning) = &s.warning {
                eprintln!("warning: {warning}");
            }
            let mut w = open_out(out_path)?;
            writeln!(w, "n,m,p,replicates,mean_c4,mean_k4,leading_c4,leading_k4")?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                s.n,
                s.m,
                s.strength,
                s.replicates,
                s.mean_c4,
                s.mean_k4,
                s.leading_c4,
                s.leading_k4
            )?;
            w.flush()?;
        }
        Command::Summarize { inputs } => {
            let series = experiment::summarize_convergence(&inputs)?;
            let mut w = open_out(out_path)?;
            write!(w, "{}", experiment::format_convergence(&series))?;
            w.flush()?;
        }
    }
    Ok(())
}

fn verify(
    lemma: &str,
    pattern: Option<SubgraphPattern>,
    pattern2: Option<SubgraphPattern>,
) -> std::result::Result<Vec<LemmaReport>, Failure> {
    Ok(match lemma {
        "1" => match pattern {
            Some(p) => vec![cover::check_lemma1(&p)?],
            None => cover::connected_patterns(5)?
                .iter()
                .map(cover::check_lemma1)
                .collect::<Result<_, _>>()?,
        },
        "2" => {
            let (Some(a), Some(b)) = (pattern, pattern2) else {
                return Err(Failure::Usage(
                    "lemma 2 needs --pattern and --pattern2".into(),
                ));
            };
            vec![cover::check_lemma2(&a, &b)?]
        }
        _ => {
            let r = match pattern {
                Some(p) => p.node_count(),
                None => return Err(Failure::Usage("lemma 6 needs --pattern clique:r".into())),
            };
            vec![cover::check_lemma6(r)?]
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn experiment_config(
    cli: &Globals,
    n: Vec<usize>,
    m: Vec<usize>,
    m_ratio: Option<f64>,
    dist: Option<LayerDistribution>,
    pattern: Vec<SubgraphPattern>,
    replicates: Option<usize>,
    timing: bool,
) -> std::result::Result<ExperimentConfig, Failure> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let dist = dist
                .clone()
                .ok_or_else(|| Failure::Usage("--dist is required without --config".into()))?;
            ExperimentConfig::new(Vec::new(), MRule::Ratio(1.0), dist, Vec::new())
        }
    };
    if !n.is_empty() {
        config.n_values = n;
    }
    if !m.is_empty() {
        config.m_rule = MRule::Explicit(m);
    }
    if let Some(rho) = m_ratio {
        config.m_rule = MRule::Ratio(rho);
    }
    if let Some(d) = dist {
        config.dist = d;
    }
    if !pattern.is_empty() {
        config.patterns = pattern;
    }
    if let Some(r) = replicates {
        config.replicates = r;
    }
    if let Some(s) = cli.seed {
        config.base_seed = s;
    }
    if cli.threads.is_some() {
        config.threads = cli.threads;
    }
    if cli.out.is_some() {
        config.output = cli.out.clone();
    }
    config.record_timing |= timing;
    config.validate()?;
    Ok(config)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
