//! `lapctrl`: generate graphs, inspect spectra, decide controllability and
//! run the verification sweeps.
//!
//! Exit codes: 0 success, 1 failed check or verification, 2 usage error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use lapctrl::compose::{
    chain_antiregular, composite, predict_composite, valid_chain_input, ChainSpec, CompositeSpec,
    Link,
};
use lapctrl::control::{
    gramian_check, kalman_verdict, pbh_verdict, ControlMatrix, GramianOptions, Verdict,
    DEFAULT_PBH_TOL,
};
use lapctrl::graph::{antiregular, complete, path, threshold, Creation, Graph};
use lapctrl::spectral::{check_majorization, default_gtol, eig_sym, eigenspaces, DEFAULT_RTOL};
use lapctrl::verify::{self, Suite, VerifyOptions};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "lapctrl", version, about = "Laplacian controllability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and print it as JSON.
    Gen(GenArgs),
    /// Eigenvalues, eigenvectors and eigenspaces of a graph Laplacian.
    Spectrum(GraphInput),
    /// Decide controllability for one or more input sets.
    Check(CheckArgs),
    /// Build a composite graph, optionally predicting controllability.
    Compose(ComposeArgs),
    /// Build an antiregular chain, optionally evaluating an input.
    Chain(ChainArgs),
    /// Run a verification sweep and print one JSON line per case.
    Verify(VerifyArgs),
    /// Write a graph as DOT or normalized JSON.
    Export(ExportArgs),
}

#[derive(Args)]
struct GraphInput {
    /// Graph JSON file, or `-` for standard input.
    graph: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Antiregular,
    Threshold,
    Complete,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Vertex count (path, antiregular, complete).
    #[arg(long)]
    k: Option<usize>,
    /// Creation sequence such as `UJUJ` (threshold).
    #[arg(long)]
    creation: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckMethod {
    Exact,
    Pbh,
    Gramian,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Controllable,
    Uncontrollable,
}

#[derive(Args)]
struct CheckArgs {
    /// Input set as comma-separated vertices; repeat for several sets.
    #[arg(long = "input", required = true)]
    inputs: Vec<String>,
    #[arg(long, value_enum, default_value = "exact")]
    method: CheckMethod,
    /// Exit with status 1 unless every input set gets this verdict.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
    /// Gramian horizon.
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Gramian quadrature steps.
    #[arg(long, default_value_t = 32)]
    steps: usize,
    /// PBH orthogonality tolerance.
    #[arg(long, default_value_t = DEFAULT_PBH_TOL)]
    tol: f64,
    graph: PathBuf,
}

#[derive(Args)]
struct ComposeArgs {
    /// Spec JSON `{"structure": .., "cell": .., "s": ..}`; replaces the
    /// three flags below.
    #[arg(long, conflicts_with_all = ["structure", "cell", "s"])]
    spec: Option<PathBuf>,
    #[arg(long, requires_all = ["cell", "s"])]
    structure: Option<PathBuf>,
    #[arg(long)]
    cell: Option<PathBuf>,
    #[arg(long)]
    s: Option<usize>,
    /// Print the prediction for this structure vertex instead of the graph.
    #[arg(long)]
    predict: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ChainArgs {
    /// Spec JSON; replaces the shape flags.
    #[arg(long, conflicts_with_all = ["c", "k2", "links", "tail", "tail_attach"])]
    spec: Option<PathBuf>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// One letter per junction: D (dominating) or T (terminal).
    #[arg(long, default_value = "")]
    links: String,
    #[arg(long, default_value_t = 0)]
    tail: usize,
    #[arg(long)]
    tail_attach: Option<usize>,
    /// Evaluate the block-1 input prediction and the exact test for this
    /// comma-separated vertex set instead of printing the graph.
    #[arg(long)]
    input: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// composite, cj, chain, chain-entries, tail-entries, majorization, showcase, agreement
    suite: String,
    /// Instances for the randomized suites.
    #[arg(long)]
    random: Option<usize>,
    /// Largest order for the randomized suites.
    #[arg(long)]
    maxk: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, value_enum, conflicts_with_all = ["dot", "json"])]
    format: Option<Format>,
    #[arg(long, conflicts_with = "json")]
    dot: bool,
    #[arg(long)]
    json: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    graph: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => cmd_gen(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Check(a) => cmd_check(a),
        Command::Compose(a) => cmd_compose(a),
        Command::Chain(a) => cmd_chain(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a),
    }
}

fn read_source(p: &PathBuf) -> Result<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else {
        fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))
    }
}

fn read_graph(p: &PathBuf) -> Result<Graph> {
    Graph::from_json(&read_source(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n"))
            .map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(usage)
        }
    }
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("serialization cannot fail")
}

fn parse_vertices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad vertex {t:?} in input set {s:?}")))
        })
        .collect()
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let need_k = || a.k.ok_or_else(|| usage("--k is required for this family"));
    let g = match a.family {
        Family::Path => path(need_k()?),
        Family::Antiregular => antiregular(need_k()?),
        Family::Complete => complete(need_k()?),
        Family::Threshold => {
            let seq = a
                .creation
                .as_deref()
                .ok_or_else(|| usage("--creation is required for threshold graphs"))?;
            Creation::parse_sequence(seq).and_then(|c| threshold(&c))
        }
    }
    .map_err(usage)?;
    emit(a.output.as_ref(), &g.to_json())
}

#[derive(Serialize)]
struct SpaceOut {
    value: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct SpectrumOut {
    values: Vec<f64>,
    modal: Vec<Vec<f64>>,
    eigenspaces: Vec<SpaceOut>,
    majorized: bool,
}

fn cmd_spectrum(a: GraphInput) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let dec = eig_sym(&g.laplacian().to_f64(), DEFAULT_RTOL).map_err(|e| CliError::Failed(e.to_string()))?;
    let spaces = eigenspaces(&dec, default_gtol(&dec.values))
        .into_iter()
        .map(|s| SpaceOut {
            value: s.value,
            multiplicity: s.multiplicity(),
        })
        .collect();
    let majorized = check_majorization(&dec.values, &g.degree_sequence().conjugate())
        .expect("lengths agree");
    let out = SpectrumOut {
        modal: dec.vectors.columns(),
        values: dec.values,
        eigenspaces: spaces,
        majorized,
    };
    emit(None, &to_json(&out))
}

#[derive(Serialize)]
struct AllOut {
    agreement: bool,
    controllable: bool,
    verdicts: Vec<Verdict>,
}

fn cmd_check(a: CheckArgs) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let l = g.laplacian();
    let gopts = GramianOptions {
        horizon: a.horizon,
        steps: a.steps,
        ..GramianOptions::default()
    };
    let mut failures = Vec::new();
    for set in &a.inputs {
        let vertices = parse_vertices(set)?;
        let b = ControlMatrix::from_vertices(g.order(), &vertices).map_err(usage)?;
        let one = |m: CheckMethod| -> Result<Verdict> {
            match m {
                CheckMethod::Exact => kalman_verdict(&l, &b).and_then(|mut v| {
                    // attach the PBH obstruction when both tests find one
                    if !v.controllable {
                        v.witness = pbh_verdict(&l, &b, a.tol)?.witness;
                    }
                    Ok(v)
                }),
                CheckMethod::Pbh => pbh_verdict(&l, &b, a.tol),
                CheckMethod::Gramian => gramian_check(&l, &b, &gopts).map(|r| {
                    let mut v = r.verdict();
                    v.advisory = Some(format!(
                        "min-eig {:e}, threshold {:e}, steps {}",
                        r.min_eigenvalue, r.threshold, r.steps
                    ));
                    v
                }),
                CheckMethod::All => unreachable!(),
            }
            .map_err(usage)
        };
        let (controllable, line) = if a.method == CheckMethod::All {
            let verdicts = [CheckMethod::Exact, CheckMethod::Pbh, CheckMethod::Gramian]
                .into_iter()
                .map(one)
                .collect::<Result<Vec<_>>>()?;
            let first = verdicts[0].controllable;
            let agreement = verdicts.iter().all(|v| v.controllable == first);
            if !agreement {
                failures.push(format!("methods disagree on input {set}"));
            }
            let out = AllOut {
                agreement,
                controllable: first,
                verdicts,
            };
            (first, to_json(&out))
        } else {
            let v = one(a.method)?;
            (v.controllable, v.to_json())
        };
        emit(None, &line)?;
        if let Some(e) = a.expect {
            if (e == Expect::Controllable) != controllable {
                failures.push(format!("input {set}: expected {}", expect_name(e)));
            }
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(failures.join("; ")))
    }
}

fn expect_name(e: Expect) -> &'static str {
    match e {
        Expect::Controllable => "controllable",
        Expect::Uncontrollable => "uncontrollable",
    }
}

fn cmd_compose(a: ComposeArgs) -> Result<()> {
    let spec: CompositeSpec = match (&a.spec, &a.structure) {
        (Some(p), _) => serde_json::from_str(&read_source(p)?).map_err(usage)?,
        (None, Some(sp)) => {
            let cell = a.cell.as_ref().expect("clap enforces --cell");
            CompositeSpec::new(read_graph(sp)?, read_graph(cell)?, a.s.expect("clap enforces --s"))
                .map_err(usage)?
        }
        (None, None) => return Err(usage("give --spec or --structure/--cell/--s")),
    };
    let text = match a.predict {
        Some(w) => to_json(&predict_composite(&spec, w).map_err(usage)?),
        None => composite(&spec).map_err(usage)?.to_json(),
    };
    emit(a.output.as_ref(), &text)
}

#[derive(Serialize)]
struct ChainInputOut {
    predicted: bool,
    exact: Verdict,
}

fn cmd_chain(a: ChainArgs) -> Result<()> {
    let spec: ChainSpec = match &a.spec {
        Some(p) => serde_json::from_str(&read_source(p)?).map_err(usage)?,
        None => {
            let c = a.c.ok_or_else(|| usage("--c is required"))?;
            let k2 = a.k2.ok_or_else(|| usage("--k2 is required"))?;
            let links = a
                .links
                .chars()
                .map(|ch| Link::parse(ch).ok_or_else(|| usage(format!("bad link {ch:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let spec = ChainSpec::new(c, k2, links).map_err(usage)?;
            let attach = a.tail_attach.unwrap_or(spec.tail_attach);
            spec.with_tail(a.tail, attach).map_err(usage)?
        }
    };
    let g = chain_antiregular(&spec).map_err(usage)?;
    let text = match &a.input {
        Some(set) => {
            let b = ControlMatrix::from_vertices(g.order(), &parse_vertices(set)?).map_err(usage)?;
            let predicted = valid_chain_input(&spec, &b).map_err(usage)?;
            let exact = kalman_verdict(&g.laplacian(), &b).map_err(usage)?;
            to_json(&ChainInputOut { predicted, exact })
        }
        None => g.to_json(),
    };
    emit(a.output.as_ref(), &text)
}

fn cmd_verify(a: VerifyArgs) -> Result<()> {
    let suite: Suite = a.suite.parse().map_err(usage)?;
    let defaults = VerifyOptions::default();
    let opts = VerifyOptions {
        random: a.random.unwrap_or(defaults.random),
        maxk: a.maxk.unwrap_or(defaults.maxk),
        seed: a.seed.unwrap_or(defaults.seed),
    };
    if opts.maxk == 0 {
        return Err(usage("--maxk must be positive"));
    }
    let reports = verify::run(suite, &opts);
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{}", r.to_json()).map_err(usage)?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    writeln!(
        out,
        "{}",
        to_json(&serde_json::json!({
            "suite": suite.name(),
            "cases": reports.len(),
            "failed": failed,
        }))
    )
    .map_err(usage)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} of {} cases failed", reports.len())))
    }
}

fn cmd_export(a: ExportArgs) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let format = match (a.format, a.dot, a.json) {
        (Some(f), _, _) => f,
        (None, true, _) => Format::Dot,
        (None, _, true) => Format::Json,
        (None, false, false) => return Err(usage("choose --format dot|json, --dot or --json")),
    };
    let text = match format {
        Format::Dot => g.to_dot(),
        Format::Json => g.to_json(),
    };
    emit(a.output.as_ref(), &text)
}
