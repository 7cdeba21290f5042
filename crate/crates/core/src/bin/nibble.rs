use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nibble::formats::{read_coloring, read_edge_list, read_lists, write_coloring, write_edge_list, write_lists};
use nibble::generators::{generate, generate_lists, GenSpec};
use nibble::graph::{find_conflict, find_list_violation, max_color_degree, max_metrics, validate_pair};
use nibble::lab::{generate_corpus, verify_inequality, verify_talagrand, Corpus};
use nibble::nibble::{NibbleConfig, OverrideParams};
use nibble::partition::{weak_vu_pipeline, WeakVuConfig};
use nibble::pipeline::{list_color, PipelineConfig};
use nibble::sparsify::{run_trials, trials_csv};
use nibble::{Error, Graph, PairParams};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PIPELINE: u8 = 3;

#[derive(Parser)]
#[command(name = "nibble", version, about = "List coloring by wasteful nibble rounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph (and optionally lists) from a JSON spec.
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Run nibble rounds and the finisher, or the partition pipeline with --zeta.
    Color(ColorArgs),
    /// Check a coloring for monochromatic edges and list membership.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Print maximum color-degree, codegree, list size and a pair report.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lists: PathBuf,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Activation probability for the pair report; defaults to ℓ/(8d).
        #[arg(long)]
        eta: Option<f64>,
    },
    /// Concentration lab: random corpora and exact tail checks.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Palette sparsification trials as CSV.
    Sparsify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Add wall-clock milliseconds per trial.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Subcommand)]
enum LabCommand {
    /// Check every structure and event pair of a corpus.
    Run {
        #[arg(long)]
        corpus: PathBuf,
        /// `start:end:step`, inclusive of `end`.
        #[arg(long, default_value = "0:100:1")]
        tau_grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random corpus.
    GenCorpus {
        #[arg(long, default_value_t = 30)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        talagrand: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 12)]
        max_m: usize,
        #[arg(long, default_value_t = 16)]
        max_n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Tuning {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 2)]
    s: usize,
    /// Fixed activation probability; defaults to ℓ/(8d) from the input.
    #[arg(long)]
    override_eta: Option<f64>,
    /// Codegree error exponent.
    #[arg(long, default_value_t = 2.0)]
    exp2: f64,
    /// List and degree error exponent.
    #[arg(long, default_value_t = 2.0)]
    exp5: f64,
    /// Follow the schedule with the full exponents; refuses when infeasible.
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 20)]
    max_retries: usize,
}

impl Tuning {
    fn nibble(&self) -> NibbleConfig {
        let mut cfg = if self.strict {
            NibbleConfig::strict(self.eps, self.s)
        } else {
            NibbleConfig::override_mode(self.eps, self.s, self.override_params())
        };
        cfg.max_retries = self.max_retries;
        cfg
    }

    fn override_params(&self) -> OverrideParams {
        OverrideParams {
            eta: self.override_eta,
            codegree_exponent: self.exp2,
            error_exponent: self.exp5,
        }
    }
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, required_unless_present = "zeta", conflicts_with = "zeta")]
    lists: Option<PathBuf>,
    /// Split by random bipartitions first and color parts from disjoint palettes.
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    /// One JSON line per accepted round.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    tuning: Tuning,
}

enum Failure {
    Usage(String),
    Verify(String),
    Pipeline(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Verify(_) => EXIT_VERIFY,
            Failure::Pipeline(_) => EXIT_PIPELINE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verify(m) | Failure::Pipeline(m) => m,
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn parse<T>(path: &Path, r: nibble::Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    parse(path, read_edge_list(&read_file(path)?))
}

fn load_lists(path: &Path, g: &Graph) -> std::result::Result<nibble::ListAssignment, Failure> {
    let l = parse(path, read_lists(&read_file(path)?))?;
    if l.n() != g.n() {
        return Err(Failure::Usage(format!(
            "{}: {} lists for a graph on {} vertices",
            path.display(),
            l.n(),
            g.n()
        )));
    }
    Ok(l)
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s}");
        s
    })
}

fn pipeline_failure(e: Error) -> Failure {
    match e {
        Error::Argument(_) | Error::InvalidVertex { .. } | Error::Parse { .. } => Failure::Usage(e.to_string()),
        e => Failure::Pipeline(e.to_string()),
    }
}

fn gen(spec: &Path, out: &Path, lists: Option<&Path>) -> CmdResult {
    let text = read_file(spec)?;
    let spec: GenSpec = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", spec.display())))?;
    let g = generate(&spec).map_err(pipeline_failure)?;
    write_file(out, &write_edge_list(&g))?;
    if let Some(path) = lists {
        let l = generate_lists(&spec, g.n())
            .map_err(pipeline_failure)?
            .ok_or_else(|| Failure::Usage("--lists given but the spec has no \"lists\" entry".into()))?;
        write_file(path, &write_lists(&l))?;
    }
    Ok(())
}

fn color(args: &ColorArgs) -> CmdResult {
    let g = load_graph(&args.graph)?;
    let seed = seed_or_entropy(args.seed);
    let mut trace = String::new();
    let (phi, summary) = if let Some(zeta) = args.zeta {
        let mut cfg = WeakVuConfig::new(zeta, args.tuning.eps, args.tuning.s);
        cfg.nibble = args.tuning.override_params();
        let out = weak_vu_pipeline(&g, &cfg, seed).map_err(pipeline_failure)?;
        let summary = format!(
            "{} parts, {} colors available, {} used",
            out.parts.len(),
            out.palette_total,
            out.coloring.colors_used()
        );
        (out.coloring, summary)
    } else {
        let path = args.lists.as_deref().expect("clap requires --lists without --zeta");
        let l = load_lists(path, &g)?;
        let out = list_color(&g, &l, &PipelineConfig::new(args.tuning.nibble()), seed).map_err(pipeline_failure)?;
        for r in &out.nibble.rounds {
            trace.push_str(&serde_json::to_string(r).expect("round records serialize"));
            trace.push('\n');
        }
        let summary = format!(
            "{} rounds ({} kept), stopped at {}, finisher sweeps {}, {} colors used",
            out.nibble.rounds.len(),
            out.rounds_kept,
            out.nibble.stop,
            out.finisher.sweeps,
            out.coloring.colors_used()
        );
        (out.coloring, summary)
    };
    if let Some((u, v)) = find_conflict(&g, &phi) {
        return Err(Failure::Pipeline(format!("edge {u}-{v} is monochromatic")));
    }
    if !phi.is_total() {
        return Err(Failure::Pipeline("coloring is not total".into()));
    }
    write_file(&args.out, &write_coloring(&phi))?;
    if let Some(path) = &args.trace {
        write_file(path, &trace)?;
    }
    eprintln!("{summary}");
    Ok(())
}

fn verify(graph: &Path, coloring: &Path, lists: Option<&Path>) -> CmdResult {
    let g = load_graph(graph)?;
    let phi = parse(coloring, read_coloring(&read_file(coloring)?))?;
    if phi.n() != g.n() {
        return Err(Failure::Usage(format!(
            "{}: coloring covers {} vertices, graph has {}",
            coloring.display(),
            phi.n(),
            g.n()
        )));
    }
    if let Some((u, v)) = find_conflict(&g, &phi) {
        return Err(Failure::Verify(format!(
            "improper: edge {u}-{v} has color {} at both ends",
            phi.get(u).unwrap()
        )));
    }
    if let Some(path) = lists {
        let l = load_lists(path, &g)?;
        if let Some(v) = find_list_violation(&l, &phi) {
            return Err(Failure::Verify(format!(
                "vertex {v} has color {} outside its list",
                phi.get(v).unwrap()
            )));
        }
    }
    println!("proper ({} of {} vertices colored, {} colors)", phi.domain_size(), g.n(), phi.colors_used());
    Ok(())
}

fn stats(graph: &Path, lists: &Path, s: usize, eta: Option<f64>) -> CmdResult {
    let g = load_graph(graph)?;
    let l = load_lists(lists, &g)?;
    if s < 2 {
        return Err(Failure::Usage("--s must be at least 2".into()));
    }
    let metrics = max_metrics(&g, &l, s);
    let d = max_color_degree(&g, &l).max(1) as f64;
    let ell = metrics.min_list_size;
    let eta = eta.unwrap_or_else(|| (ell as f64 / (8.0 * d)).min(0.5));
    let params = PairParams::new(d, ell, s, eta);
    let report = validate_pair(&g, &l, &params, false);
    let out = json!({
        "n": g.n(),
        "m": g.m(),
        "max_degree": g.max_degree(),
        "metrics": metrics,
        "pair_params": params,
        "pair_report": report,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("--tau-grid {spec:?}: expected start:end:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, end, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(end >= start) || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

fn lab_run(corpus: &Path, tau_grid: &str, out: Option<&Path>) -> CmdResult {
    let grid = parse_grid(tau_grid)?;
    let text = read_file(corpus)?;
    let corpus: Corpus = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", corpus.display())))?;
    let mut failures = 0;
    let structures: Vec<_> = corpus
        .structures
        .iter()
        .enumerate()
        .map(|(i, e)| match verify_inequality(&e.space, e.structure.as_dyn(), &grid) {
            Ok(r) => {
                failures += usize::from(!r.holds());
                json!({ "index": i, "report": r })
            }
            Err(err) => {
                failures += 1;
                json!({ "index": i, "error": err.to_string() })
            }
        })
        .collect();
    let talagrand: Vec<_> = corpus
        .talagrand
        .iter()
        .enumerate()
        .map(|(i, c)| match verify_talagrand(&c.space, &c.a, &c.b) {
            Ok(r) => {
                failures += usize::from(!r.holds);
                json!({ "index": i, "report": r })
            }
            Err(err) => {
                failures += 1;
                json!({ "index": i, "error": err.to_string() })
            }
        })
        .collect();
    let report = json!({ "structures": structures, "talagrand": talagrand, "failures": failures });
    let text = serde_json::to_string_pretty(&report).unwrap() + "\n";
    match out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} structures, {} pairs, {failures} failures",
        corpus.structures.len(),
        corpus.talagrand.len()
    );
    if failures > 0 {
        return Err(Failure::Verify(format!("{failures} corpus entries failed")));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen { spec, out, lists } => gen(&spec, &out, lists.as_deref()),
        Command::Color(args) => color(&args),
        Command::Verify { graph, coloring, lists } => verify(&graph, &coloring, lists.as_deref()),
        Command::Stats { graph, lists, s, eta } => stats(&graph, &lists, s, eta),
        Command::Lab(LabCommand::Run { corpus, tau_grid, out }) => lab_run(&corpus, &tau_grid, out.as_deref()),
        Command::Lab(LabCommand::GenCorpus {
            count,
            talagrand,
            seed,
            max_m,
            max_n,
            out,
        }) => {
            let seed = seed_or_entropy(seed);
            let corpus = generate_corpus(count, talagrand, seed, max_m, max_n).map_err(pipeline_failure)?;
            write_file(&out, &(serde_json::to_string_pretty(&corpus).unwrap() + "\n"))
        }
        Command::Sparsify {
            graph,
            q,
            ell,
            trials,
            seed,
            parallel,
            timing,
            tuning,
        } => {
            let g = load_graph(&graph)?;
            let seed = seed_or_entropy(seed);
            let cfg = PipelineConfig::new(tuning.nibble());
            let rows = run_trials(&g, q, ell, trials, seed, parallel, timing, &cfg).map_err(pipeline_failure)?;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(trials_csv(&rows).as_bytes())
                .map_err(|e| Failure::Usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
