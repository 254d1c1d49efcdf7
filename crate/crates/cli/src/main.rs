use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ncpoly::compatibility::{self, CompatibilityError};
use ncpoly::contextuality::{self, ContextualityError, TheoremReport};
use ncpoly::graphs::{self, Graph, GraphError};
use ncpoly::polytope::{self, Limits, Polytope, PolytopeError};
use ncpoly::Caps;

/// Seed used by sampled checks when none is given.
const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser)]
#[command(name = "ncpoly", version, about = "Exact stable-set polytopes and non-contextuality inequalities")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long, global = true, env = "NCPOLY_MAX_GRAPH_VERTICES")]
    max_graph_vertices: Option<usize>,
    #[arg(long, global = true, env = "NCPOLY_MAX_DIM")]
    max_dim: Option<usize>,
    #[arg(long, global = true, env = "NCPOLY_MAX_ORACLE_SUBSETS")]
    max_oracle_subsets: Option<u64>,
    #[arg(long, global = true, env = "NCPOLY_MAX_CYCLE_N")]
    max_cycle_n: Option<usize>,
    #[arg(long, global = true, env = "NCPOLY_MAX_ANTICYCLE_N")]
    max_anticycle_n: Option<usize>,
    #[arg(long, global = true, env = "NCPOLY_MAX_MEASUREMENTS")]
    max_measurements: Option<usize>,
}

impl CapArgs {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            max_graph_vertices: self.max_graph_vertices.unwrap_or(d.max_graph_vertices),
            max_dim: self.max_dim.unwrap_or(d.max_dim),
            max_oracle_subsets: self.max_oracle_subsets.unwrap_or(d.max_oracle_subsets),
            max_cycle_n: self.max_cycle_n.unwrap_or(d.max_cycle_n),
            max_anticycle_n: self.max_anticycle_n.unwrap_or(d.max_anticycle_n),
            max_measurements: self.max_measurements.unwrap_or(d.max_measurements),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Graph files.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Conversions between H and V descriptions.
    Polytope {
        #[command(subcommand)]
        command: PolytopeCommand,
    },
    /// Run a verifier and write its report.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    Gen {
        #[arg(long = "type", value_enum, env = "NCPOLY_TYPE")]
        kind: GraphKind,
        #[arg(long, env = "NCPOLY_N")]
        n: usize,
        /// Circulant offsets, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, env = "NCPOLY_OFFSETS")]
        offsets: Vec<i64>,
        #[arg(short, long, env = "NCPOLY_OUTPUT")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Cycle,
    Anticycle,
    Circulant,
}

#[derive(Subcommand)]
enum PolytopeCommand {
    /// H file to V file.
    Vertices {
        #[arg(short, long, env = "NCPOLY_INPUT")]
        input: PathBuf,
        #[arg(short, long, env = "NCPOLY_OUTPUT")]
        output: Option<PathBuf>,
    },
    /// V file to H file with one row per facet.
    Facets {
        #[arg(short, long, env = "NCPOLY_INPUT")]
        input: PathBuf,
        #[arg(short, long, env = "NCPOLY_OUTPUT")]
        output: Option<PathBuf>,
    },
    /// Stable-set polytope of a graph, as a V file.
    Stab {
        #[arg(short, long, env = "NCPOLY_GRAPH")]
        graph: PathBuf,
        #[arg(short, long, env = "NCPOLY_OUTPUT")]
        output: Option<PathBuf>,
    },
    /// Clique-constrained polytope of a graph, as an H file.
    Qstab {
        #[arg(short, long, env = "NCPOLY_GRAPH")]
        graph: PathBuf,
        #[arg(short, long, env = "NCPOLY_OUTPUT")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Claim {
    Fcnc,
    Fanc,
    Inheritance,
    Sandwich,
    CirculantBell,
    KcbsBridge,
    OddGamma,
    Oracle,
    CutMaps,
}

impl Claim {
    fn name(self) -> &'static str {
        match self {
            Claim::Fcnc => "fcnc",
            Claim::Fanc => "fanc",
            Claim::Inheritance => "inheritance",
            Claim::Sandwich => "sandwich",
            Claim::CirculantBell => "circulant-bell",
            Claim::KcbsBridge => "kcbs-bridge",
            Claim::OddGamma => "odd-gamma",
            Claim::Oracle => "oracle",
            Claim::CutMaps => "cut-maps",
        }
    }

    fn default_ns(self) -> Vec<usize> {
        match self {
            Claim::Fcnc => vec![5, 7, 9, 11],
            Claim::Fanc => vec![5, 7, 9],
            Claim::Inheritance | Claim::Sandwich => vec![5, 7],
            Claim::KcbsBridge | Claim::OddGamma | Claim::CutMaps => vec![5],
            Claim::CirculantBell | Claim::Oracle => vec![],
        }
    }

    fn default_samples(self) -> usize {
        match self {
            Claim::Oracle => 50,
            _ => 100,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    claim: Claim,
    /// Instance sizes, comma separated; each claim has its own default.
    #[arg(long, value_delimiter = ',', env = "NCPOLY_N")]
    n: Vec<usize>,
    /// Graph file for `inheritance` and `sandwich`, used instead of cycles.
    #[arg(short, long, env = "NCPOLY_GRAPH")]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED, env = "NCPOLY_SEED")]
    seed: u64,
    /// Sample count for the sampled claims.
    #[arg(long, env = "NCPOLY_SAMPLES")]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value = "json", env = "NCPOLY_FORMAT")]
    format: Format,
    #[arg(short, long, env = "NCPOLY_OUTPUT")]
    output: Option<PathBuf>,
    /// Include wall-clock times; reports are then no longer reproducible
    /// byte for byte.
    #[arg(long, env = "NCPOLY_TIMINGS")]
    timings: bool,
}

#[derive(Serialize)]
struct Bundle<'a> {
    tool: &'static str,
    version: &'static str,
    claim: &'static str,
    seed: u64,
    samples: Option<usize>,
    caps: Caps,
    inputs: Vec<Input>,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<Vec<f64>>,
    reports: &'a [TheoremReport],
}

#[derive(Serialize)]
struct Input {
    name: String,
    digest: String,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn graph_gen(kind: GraphKind, n: usize, offsets: &[i64], caps: &Caps) -> Result<Graph> {
    if n > caps.max_graph_vertices {
        return Err(GraphError::SizeLimit {
            n,
            cap: caps.max_graph_vertices,
        }
        .into());
    }
    Ok(match kind {
        GraphKind::Cycle => Graph::cycle(n),
        GraphKind::Anticycle => graphs::complement(&Graph::cycle(n)),
        GraphKind::Circulant => {
            if offsets.is_empty() {
                bail!("--offsets is required for a circulant graph");
            }
            graphs::make_circulant(n, offsets)?
        }
    })
}

fn run_polytope(cmd: PolytopeCommand, caps: &Caps) -> Result<()> {
    let limits = Limits::from(caps);
    let (out, output) = match cmd {
        PolytopeCommand::Vertices { input, output } => {
            let Polytope::H(h) = read_json::<Polytope>(&input)? else {
                bail!("{} is not an H-polytope file", input.display());
            };
            (Polytope::V(polytope::vertices_from_halfspaces(&h, &limits)?), output)
        }
        PolytopeCommand::Facets { input, output } => {
            let Polytope::V(v) = read_json::<Polytope>(&input)? else {
                bail!("{} is not a V-polytope file", input.display());
            };
            (Polytope::H(polytope::facets_from_vertices(&v, &limits)?), output)
        }
        PolytopeCommand::Stab { graph, output } => {
            let g: Graph = read_json(&graph)?;
            (Polytope::V(contextuality::stab(&g, caps)?), output)
        }
        PolytopeCommand::Qstab { graph, output } => {
            let g: Graph = read_json(&graph)?;
            (Polytope::H(contextuality::qstab(&g, caps)?), output)
        }
    };
    write_output(output.as_deref(), &to_json(&out)?)
}

fn run_claims(args: &VerifyArgs, caps: &Caps) -> Result<Vec<TheoremReport>> {
    let ns = if args.n.is_empty() { args.claim.default_ns() } else { args.n.clone() };
    let samples = args.samples.unwrap_or_else(|| args.claim.default_samples());
    let seed = args.seed;
    let mut reports = Vec::new();
    match args.claim {
        Claim::CirculantBell => reports.push(contextuality::circulant_bell_check(caps)?),
        Claim::Oracle => reports.push(contextuality::oracle_equivalence_check(seed, samples, caps)?),
        Claim::Inheritance | Claim::Sandwich if args.graph.is_some() => {
            let path = args.graph.as_deref().expect("checked");
            let g: Graph = read_json(path)?;
            let name = path.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
            reports.push(if args.claim == Claim::Inheritance {
                contextuality::facet_inheritance_check(&name, &g, caps)?
            } else {
                contextuality::sandwich_check(&name, &g, caps)?
            });
        }
        claim => {
            for &n in &ns {
                let r = match claim {
                    Claim::Fcnc => contextuality::verify_unique_fcnc(n, caps)?,
                    Claim::Fanc => contextuality::verify_unique_fanc(n, caps)?,
                    Claim::Inheritance => {
                        contextuality::facet_inheritance_check(&format!("C{n}"), &cycle(n, caps)?, caps)?
                    }
                    Claim::Sandwich => contextuality::sandwich_check(&format!("C{n}"), &cycle(n, caps)?, caps)?,
                    Claim::KcbsBridge => compatibility::kcbs_bridge_check(n, seed, samples, caps)?,
                    Claim::OddGamma => compatibility::odd_gamma_facets_check(n, caps)?,
                    Claim::CutMaps => compatibility::cut_maps_check(n, seed, samples, caps)?,
                    Claim::CirculantBell | Claim::Oracle => unreachable!(),
                };
                reports.push(r);
            }
        }
    }
    Ok(reports)
}

fn cycle(n: usize, caps: &Caps) -> Result<Graph> {
    graph_gen(GraphKind::Cycle, n, &[], caps)
}

fn uses_seed(claim: Claim) -> bool {
    matches!(claim, Claim::KcbsBridge | Claim::Oracle | Claim::CutMaps)
}

fn run_verify(args: VerifyArgs, caps: &Caps) -> Result<bool> {
    let started = Instant::now();
    let reports = run_claims(&args, caps)?;
    let passed = reports.iter().all(TheoremReport::passed);
    let seeded = uses_seed(args.claim);
    let bundle = Bundle {
        tool: "ncpoly",
        version: ncpoly::VERSION,
        claim: args.claim.name(),
        seed: args.seed,
        samples: seeded.then(|| args.samples.unwrap_or_else(|| args.claim.default_samples())),
        caps: *caps,
        inputs: reports
            .iter()
            .map(|r| Input {
                name: r.graph.name.clone(),
                digest: r.graph.digest.clone(),
            })
            .collect(),
        verdict: if passed { "pass" } else { "fail" },
        wall_time_ms: args.timings.then(|| reports.iter().map(|r| r.wall_time.as_secs_f64() * 1e3).collect()),
        reports: &reports,
    };
    let text = match args.format {
        Format::Json => to_json(&bundle)?,
        Format::Markdown => markdown(&bundle, args.timings.then(|| started.elapsed().as_secs_f64())),
    };
    write_output(args.output.as_deref(), &text)?;
    Ok(passed)
}

fn markdown(b: &Bundle<'_>, total_secs: Option<f64>) -> String {
    let mut out = format!(
        "# {} {}: {}\n\ntool {} {}, seed {}, caps `{}`\n\n",
        b.tool,
        b.claim,
        b.verdict.to_uppercase(),
        b.tool,
        b.version,
        b.seed,
        serde_json::to_string(&b.caps).unwrap_or_default()
    );
    for (i, r) in b.reports.iter().enumerate() {
        out.push_str(&r.to_markdown());
        if let Some(ms) = b.wall_time_ms.as_ref().and_then(|w| w.get(i)) {
            out.push_str(&format!("\nwall time: {ms:.1} ms\n"));
        }
        out.push('\n');
    }
    if let Some(s) = total_secs {
        out.push_str(&format!("total wall time: {s:.3} s\n"));
    }
    out
}

fn is_resource_error(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        if let Some(e) = e.downcast_ref::<ContextualityError>() {
            e.is_resource_limit()
        } else if let Some(e) = e.downcast_ref::<CompatibilityError>() {
            e.is_resource_limit()
        } else if let Some(e) = e.downcast_ref::<PolytopeError>() {
            matches!(e, PolytopeError::SizeLimit { .. })
        } else if let Some(e) = e.downcast_ref::<GraphError>() {
            matches!(e, GraphError::SizeLimit { .. })
        } else {
            false
        }
    })
}

fn run(cli: Cli) -> Result<bool> {
    let caps = cli.caps.caps();
    match cli.command {
        Command::Graph {
            command: GraphCommand::Gen { kind, n, offsets, output },
        } => {
            let g = graph_gen(kind, n, &offsets, &caps)?;
            write_output(output.as_deref(), &to_json(&g)?)?;
            Ok(true)
        }
        Command::Polytope { command } => run_polytope(command, &caps).map(|()| true),
        Command::Verify(args) => run_verify(args, &caps),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            let kind = if is_resource_error(&err) { "resource limit" } else { "error" };
            eprintln!("ncpoly: {kind}: {err:#}");
            ExitCode::from(2)
        }
    }
}
