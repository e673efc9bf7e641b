use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use chordtest::coloring::Verdict;
use chordtest::experiment::{
    generate_instance, run_experiment, run_trials, write_csv, ExperimentConfig, ExperimentKind, ExperimentResult,
    GeneratorSpec, Instance, TrialRow,
};
use chordtest::m2::{repair_to_m2_free, BipartiteView};
use chordtest::oracles::{find_induced_long_cycle, is_chordal};
use chordtest::pipeline::{analysis_events, budget_check, pinned_tester, PinnedMode, PinnedOutcome, TesterParams};
use chordtest::simplicial::{nearly_simplicial_repair, split_by_simpliciality};
use chordtest::tree::{clique_tree_representation, enumerate_minimal_representations, SubtreeFamily};
use chordtest::{Error, Graph, Guards, Result, VertexSet};

#[derive(Parser)]
#[command(name = "chordtest", version, about = "Property testers for chordality and related properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    sample_size: Option<usize>,
    /// Edge list: `n m` on the first line, then `m` lines `u v` with `u < v`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Parts file with `v L` / `v R` lines.
    #[arg(long)]
    parts: Option<PathBuf>,
    /// Generator spec such as `random-gnp:n=50,p=0.3`, used without `--input`.
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Experiment config in JSON; command-line flags given explicitly win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sampling,
    Repair,
}

#[derive(Subcommand)]
enum Command {
    /// Sample-and-check chordality tester.
    TestChordal(Common),
    /// Induced-matching tester on a bipartite view (`--input` with `--parts`).
    TestM2(Common),
    /// Set-coloring tester (`--input` is an instance in JSON).
    TestColoring(Common),
    /// Pinned tester on a fixed tree.
    TestPinned {
        #[command(flatten)]
        common: Common,
        /// Representation file whose tree (and gate marks) is used.
        #[arg(long)]
        tree: PathBuf,
        /// One pin per vertex, comma separated.
        #[arg(long, value_delimiter = ',')]
        pins: Vec<usize>,
        /// Extra gate nodes; defaults to the pins.
        #[arg(long, value_delimiter = ',')]
        gamma0: Vec<usize>,
        /// Leaf budget; defaults to the number of leaves of the tree.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m2_sample_size: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Sampling)]
        mode: Mode,
    },
    /// Nearly-simplicial repair, or M2-free repair when `--parts` is given.
    /// `--out` receives the repaired edge list.
    Repair(Common),
    /// All minimal representations of a small chordal graph.
    EnumerateReps(Common),
    /// Event analysis for chosen `S` and `U`.
    AnalyzeEvents {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        u: Vec<usize>,
    },
    /// Exact budget arithmetic at `--eps`.
    BudgetCheck(Common),
    /// Quick internal consistency checks.
    Selfcheck,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let matches = <Cli as clap::CommandFactory>::command().get_matches();
    let cli = <Cli as clap::FromArgMatches>::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let sub = matches.subcommand().map(|(_, m)| m.clone()).unwrap_or_default();
    match run(cli, &sub) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verdict_code(rejected: bool) -> ExitCode {
    if rejected {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn read_graph(c: &Common) -> Result<Graph> {
    let path = c.input.as_ref().ok_or_else(|| Error::InvalidParameter("--input is required".into()))?;
    Graph::parse_edge_list(&std::fs::read_to_string(path)?)
}

fn generator_of(c: &Common, kind: ExperimentKind) -> Result<Option<GeneratorSpec>> {
    Ok(match (&c.input, &c.generator) {
        (Some(_), Some(_)) => return Err(Error::InvalidParameter("give --input or --generator, not both".into())),
        (Some(path), None) => Some(match kind {
            ExperimentKind::Chordal => GeneratorSpec::EdgeList { path: path.clone() },
            ExperimentKind::M2 => GeneratorSpec::BipartiteFile {
                path: path.clone(),
                parts: c.parts.clone().ok_or_else(|| Error::InvalidParameter("--parts is required".into()))?,
            },
            ExperimentKind::Coloring => GeneratorSpec::ColoringFile { path: path.clone() },
        }),
        (None, Some(spec)) => Some(spec.parse()?),
        (None, None) => None,
    })
}

/// Config file first, then explicitly given flags on top.
fn experiment_config(c: &Common, kind: ExperimentKind, matches: &clap::ArgMatches) -> Result<ExperimentConfig> {
    let explicit = |id: &str| matches.value_source(id) == Some(clap::parser::ValueSource::CommandLine);
    let mut cfg = match &c.config {
        Some(path) => {
            let cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            if cfg.kind != kind {
                return Err(Error::InvalidParameter(format!("config is for a {:?} experiment", cfg.kind)));
            }
            cfg
        }
        None => {
            let generator = generator_of(c, kind)?
                .ok_or_else(|| Error::InvalidParameter("--input, --generator or --config is required".into()))?;
            ExperimentConfig {
                kind,
                eps: c.eps,
                trials: c.trials,
                sample_size: c.sample_size,
                seed: c.seed,
                generator,
                expect: Default::default(),
                out: c.out.clone(),
            }
        }
    };
    if c.config.is_some() {
        if explicit("eps") {
            cfg.eps = c.eps;
        }
        if explicit("trials") {
            cfg.trials = c.trials;
        }
        if explicit("seed") {
            cfg.seed = c.seed;
        }
        if c.sample_size.is_some() {
            cfg.sample_size = c.sample_size;
        }
        if c.out.is_some() {
            cfg.out = c.out.clone();
        }
        if let Some(g) = generator_of(c, kind)? {
            cfg.generator = g;
        }
    }
    Ok(cfg)
}

#[derive(serde::Serialize)]
struct Summary<'a> {
    n: usize,
    certificate: &'a chordtest::experiment::Certificate,
    trials: usize,
    rejections: usize,
    frequency: f64,
    ci_low: f64,
    ci_high: f64,
    first_witness: Option<&'a str>,
}

fn report(result: &ExperimentResult) -> Result<ExitCode> {
    let first = result.rows.iter().find(|r| r.verdict == Verdict::Reject).map(|r| r.witness.as_str());
    print_json(&Summary {
        n: result.n,
        certificate: &result.certificate,
        trials: result.rows.len(),
        rejections: result.rejections,
        frequency: result.frequency,
        ci_low: result.ci_low,
        ci_high: result.ci_high,
        first_witness: first,
    })?;
    Ok(verdict_code(result.rejections > 0))
}

fn run(cli: Cli, sub: &clap::ArgMatches) -> Result<ExitCode> {
    let guards = Guards::from_env()?;
    match cli.command {
        Command::TestChordal(c) => report(&run_experiment(&experiment_config(&c, ExperimentKind::Chordal, sub)?, &guards)?),
        Command::TestM2(c) => report(&run_experiment(&experiment_config(&c, ExperimentKind::M2, sub)?, &guards)?),
        Command::TestColoring(c) => {
            report(&run_experiment(&experiment_config(&c, ExperimentKind::Coloring, sub)?, &guards)?)
        }
        Command::TestPinned { common, tree, pins, gamma0, k, m2_sample_size, mode } => {
            let g = read_graph(&common)?;
            let family = SubtreeFamily::from_text(&std::fs::read_to_string(&tree)?)?;
            let tree = family.tree().clone();
            let nodes = tree.node_count();
            for &x in pins.iter().chain(&gamma0) {
                if x >= nodes {
                    return Err(Error::VertexOutOfRange { vertex: x, n: nodes });
                }
            }
            let gamma0 = if gamma0.is_empty() {
                VertexSet::from_iter(nodes, pins.iter().copied())
            } else {
                VertexSet::from_iter(nodes, gamma0.iter().chain(&pins).copied())
            };
            let params = TesterParams {
                eps: common.eps,
                k: k.unwrap_or_else(|| tree.leaves().len().max(2)),
                sample_size: common.sample_size,
                m2_sample_size,
                trials: common.trials,
                seed: common.seed,
            };
            let mode = match mode {
                Mode::Sampling => PinnedMode::Sampling,
                Mode::Repair => PinnedMode::Repair,
            };
            if mode == PinnedMode::Repair {
                let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                let out = pinned_tester(&g, &tree, &gamma0, &pins, &params, mode, &guards, &mut rng)?;
                print_json(&out)?;
                if let (PinnedOutcome::Repaired(r), Some(path)) = (&out, &common.out) {
                    std::fs::write(path, r.glued.family.to_text())?;
                }
                return Ok(ExitCode::SUCCESS);
            }
            let rows: Vec<TrialRow> = run_trials(common.trials, common.seed, |i, seed, rng| {
                let out = pinned_tester(&g, &tree, &gamma0, &pins, &params, mode, &guards, rng)?;
                let (verdict, witness, m) = match &out {
                    PinnedOutcome::Accept { sample } => (Verdict::Accept, String::new(), sample.len()),
                    PinnedOutcome::Reject { witness } => {
                        (Verdict::Reject, serde_json::to_string(witness)?, params.sample_size.unwrap_or(0))
                    }
                    PinnedOutcome::Repaired(_) => unreachable!("sampling mode"),
                };
                Ok(TrialRow {
                    trial: i,
                    seed,
                    sample_size: m,
                    verdict,
                    witness,
                    certificate: "none".into(),
                    certificate_value: 0,
                })
            })?;
            if let Some(path) = &common.out {
                write_csv(path, &rows)?;
            }
            let rejections = rows.iter().filter(|r| r.verdict == Verdict::Reject).count();
            print_json(&serde_json::json!({
                "trials": rows.len(),
                "rejections": rejections,
                "first_witness": rows.iter().find(|r| r.verdict == Verdict::Reject).map(|r| &r.witness),
            }))?;
            Ok(verdict_code(rejections > 0))
        }
        Command::Repair(c) => repair(&c),
        Command::EnumerateReps(c) => {
            let g = read_graph(&c)?;
            let reps = enumerate_minimal_representations(&g, &guards)?;
            let mut out = std::io::stdout().lock();
            let written = writeln!(out, "# {} minimal representations", reps.len())
                .and_then(|_| reps.iter().try_for_each(|r| writeln!(out, "{}", r.to_text())));
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                _ => Ok(ExitCode::SUCCESS),
            }
        }
        Command::AnalyzeEvents { common, s, u } => {
            let g = read_graph(&common)?;
            for &v in s.iter().chain(&u) {
                if v >= g.n() {
                    return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
                }
            }
            let s = VertexSet::from_iter(g.n(), s);
            let u = VertexSet::from_iter(g.n(), u);
            let report = analysis_events(&g, common.eps, &s, &u, &guards)?;
            print_json(&report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BudgetCheck(c) => {
            print_json(&budget_check(c.eps)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck => selfcheck(&guards),
    }
}

fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    Ok(std::fs::write(path, g.to_edge_list())?)
}

fn repair(c: &Common) -> Result<ExitCode> {
    let g = read_graph(c)?;
    let n = g.n();
    if let Some(parts) = &c.parts {
        let (left, right) = BipartiteView::parse_parts(&std::fs::read_to_string(parts)?)?;
        let view = BipartiteView::new(&g, left, right)?;
        let t = (c.eps * n as f64).floor() as usize;
        return match repair_to_m2_free(&view, t) {
            Some(r) => {
                if let Some(out) = &c.out {
                    write_graph(out, &r.repaired)?;
                }
                print_json(&serde_json::json!({ "peel_threshold": t, "edits": r.edits.len(), "peel_order": r.peel_order }))?;
                Ok(ExitCode::SUCCESS)
            }
            None => {
                print_json(&serde_json::json!({ "peel_threshold": t, "repaired": false }))?;
                Ok(ExitCode::from(1))
            }
        };
    }
    let threshold = (c.eps * (n * n) as f64).floor() as u64 + 1;
    let (x, y) = split_by_simpliciality(&g, threshold);
    let r = nearly_simplicial_repair(&g, &x, &y, c.eps)?;
    if let Some(out) = &c.out {
        write_graph(out, &r.graph)?;
    }
    print_json(&serde_json::json!({
        "x": x.to_vec(),
        "y": y.to_vec(),
        "edits": r.edits.len(),
        "bound": 6.0 * c.eps.sqrt() * (n * n) as f64,
        "chordal": is_chordal(&r.graph),
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn selfcheck(guards: &Guards) -> Result<ExitCode> {
    let mut ok = true;
    let mut line = |name: &str, pass: bool| {
        println!("{} {name}", if pass { "PASS" } else { "FAIL" });
        ok &= pass;
    };
    let oracle = (0..=5).all(|n| {
        chordtest::oracles::all_graphs(n).all(|g| is_chordal(&g) == find_induced_long_cycle(&g).is_none())
    });
    line("chordality oracle on all graphs with n <= 5", oracle);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let round_trip = (0..20).all(|i| {
        let g = chordtest::experiment::random_chordal(3 + i % 8, 0.5, &mut rng);
        clique_tree_representation(&g).map(|f| f.intersection_graph() == g).unwrap_or(false)
    });
    line("clique tree round trip", round_trip);
    let k2e2 = Graph::from_edges(4, &[(0, 1)])?;
    line("K2 + E2 has at least 4 minimal representations", enumerate_minimal_representations(&k2e2, guards)?.len() >= 4);
    line("budget delta at eps = 0.1", budget_check(0.1)?.delta == "1/14400");
    let spec: GeneratorSpec = "random-chordal:n=30,p=0.5".parse()?;
    let chordal = matches!(generate_instance(&spec, 5)?, Instance::Graph(g) if is_chordal(&g));
    line("random chordal generator", chordal);
    let cfg = ExperimentConfig {
        kind: ExperimentKind::Chordal,
        eps: 0.1,
        trials: 8,
        sample_size: Some(8),
        seed: 3,
        generator: "c4-blowup:part=3".parse()?,
        expect: Default::default(),
        out: None,
    };
    let a = run_experiment(&cfg, guards)?;
    let b = run_experiment(&cfg, guards)?;
    line("experiment determinism", a.rows == b.rows);
    Ok(verdict_code(!ok))
}
