//! Command-line front end.
//!
//! Exit codes: 0 success or matching found, 1 verification failure,
//! 2 invalid input, 3 proven absence of a perfect matching, 4 budget
//! exhausted before a decision.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperthresh::absorbing::{
    enumerate_over_all_splits, k_absorber_multiplicity_bound, pm_via_absorption, two_k_absorber_multiplicity_bound,
    AbsorberIndex, AbsorberList, PipelineParams, PipelineStatus, QSplit,
};
use hyperthresh::auxgraph::{structure_report, ColoringChoice};
use hyperthresh::extremal::{build, threshold, ExtremalSpec, Kind};
use hyperthresh::io::{parse_any, to_json, to_text, write_absorber_block};
use hyperthresh::lemmas::{
    df_density_margin, evensum_asymptotic_check, kk_clique_bound_check, parity_split_identities, parity_split_sums,
    t_profile, verify_profile_identities, CheckReport, ParitySplit, TProfile,
};
use hyperthresh::matching::{solve, SolveOutcome, SolverConfig};
use hyperthresh::suite::{run_criteria, Level, SuiteOptions};
use hyperthresh::{Error, Hypergraph, VertexSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const BUDGET_ENV: &str = "HYPERTHRESH_BUDGET";

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_ABSENT: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(name = "hyperthresh", version, about = "Perfect matchings and degree thresholds in k-uniform hypergraphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for commands that parallelize.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Include wall-clock timings (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a member of the extremal family, or a seeded random hypergraph with --p.
    Gen(GenArgs),
    /// Threshold report for the extremal family.
    Threshold {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    /// Search for a perfect matching.
    Solve(SolveArgs),
    /// List structured absorbers of a vertex set.
    Absorb(AbsorbArgs),
    /// Auxiliary-graph structure report.
    Structure(StructureArgs),
    /// Counting-lemma checks.
    Lemmas(LemmaArgs),
    /// Run the self-check suite.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Smoke)]
        level: LevelArg,
        /// Restrict to these criterion ids.
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Odd,
    Even,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, required_unless_present = "p")]
    size_a: Option<usize>,
    #[arg(long, value_enum, required_unless_present = "p")]
    kind: Option<KindArg>,
    /// Edge probability; switches to a seeded random hypergraph.
    #[arg(long, conflicts_with_all = ["size_a", "kind"])]
    p: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Use the absorbing pipeline instead of the plain exact search.
    #[arg(long)]
    pipeline: bool,
    /// Node cap per exact search; overrides HYPERTHRESH_BUDGET.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Remember dead cover states during the plain search.
    #[arg(long)]
    cache: bool,
    #[arg(long, default_value_t = 0.1)]
    xi: f64,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    /// Candidate checks per absorber search in the pipeline.
    #[arg(long, default_value_t = 100_000)]
    candidate_budget: u64,
    /// Report `unknown` instead of running the full solver when absorption fails.
    #[arg(long)]
    no_fallback: bool,
}

#[derive(Args)]
struct AbsorbArgs {
    file: PathBuf,
    /// The k vertices to absorb, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<usize>,
    /// The r′ vertices of Q forming the x part; all splits when omitted.
    #[arg(long, value_delimiter = ',')]
    split_x: Option<Vec<usize>>,
    /// Labeled structures to examine per split.
    #[arg(long)]
    budget: Option<u64>,
    /// Emit the hypergraph text layout with `# absorber-for:` headers.
    #[arg(long)]
    stream: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColoringArg {
    Raw,
    Balanced,
    Refined,
}

#[derive(Args)]
struct StructureArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    gamma: f64,
    #[arg(long, default_value_t = 0.01)]
    beta1: f64,
    #[arg(long, value_enum, default_value_t = ColoringArg::Refined)]
    coloring: ColoringArg,
}

#[derive(Args)]
struct LemmaArgs {
    /// An r-uniform family to check.
    #[arg(long, conflicts_with = "random")]
    family: Option<PathBuf>,
    /// A seeded random family `n,r,p`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    random: Option<Vec<String>>,
    /// Parity-split sums for `a,b,r`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    split: Option<Vec<usize>>,
    /// Asymptotic envelope for `c,r,n`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    envelope: Option<Vec<String>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Smoke,
    Full,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Display) -> Self {
        Failure { code: EXIT_INVALID, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::invalid(e)
    }
}

type CliResult = Result<u8, Failure>;

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: &Option<PathBuf>, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    emit(out, &text)
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_any(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Flag, then environment, then unbounded.
fn node_limit(flag: Option<u64>) -> Result<Option<u64>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Failure::invalid(format!("{BUDGET_ENV}={raw:?} is not a node count"))),
        Err(_) => Ok(None),
    }
}

fn parse_field<T: std::str::FromStr>(raw: &[String], i: usize, name: &str) -> Result<T, Failure> {
    raw.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Failure::invalid(format!("cannot read {name} from {raw:?}")))
}

fn vertex_set(indices: &[usize], n: usize) -> Result<VertexSet, Failure> {
    if let Some(v) = indices.iter().find(|&&v| v >= n) {
        return Err(Failure::invalid(format!("vertex {v} outside [0, {n})")));
    }
    let set = VertexSet::from_indices(indices.iter().copied())?;
    if set.len() != indices.len() {
        return Err(Failure::invalid(format!("repeated vertices in {indices:?}")));
    }
    Ok(set)
}

fn cmd_gen(args: GenArgs, g: &Global) -> CliResult {
    let mut text = String::new();
    let h = match args.p {
        Some(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Failure::invalid(format!("p = {p} must lie in [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            if matches!(args.format, Format::Text) {
                text.push_str(&format!("# random n={} k={} p={p} seed={}\n", args.n, args.k, g.seed));
            }
            Hypergraph::random(args.n, args.k, p, &mut rng)?
        }
        None => {
            let kind = match args.kind.expect("clap requires --kind without --p") {
                KindArg::Odd => Kind::Odd,
                KindArg::Even => Kind::Even,
            };
            let size_a = args.size_a.expect("clap requires --size-a without --p");
            build(&ExtremalSpec::canonical(args.n, args.k, size_a, kind)?)
        }
    };
    match args.format {
        Format::Text => text.push_str(&to_text(&h)),
        Format::Json => {
            text.push_str(&to_json(&h));
            text.push('\n');
        }
    }
    emit(&g.out, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SolveOutput {
    perfect: bool,
    edges: Vec<VertexSet>,
    status: &'static str,
    nodes: u64,
}

fn cmd_solve(args: SolveArgs, g: &Global) -> CliResult {
    let h = read_hypergraph(&args.file)?;
    let limit = node_limit(args.node_limit)?;
    if args.pipeline {
        let params = PipelineParams {
            xi: args.xi,
            gamma: args.gamma,
            seed: g.seed,
            fallback: !args.no_fallback,
            node_limit: limit,
            candidate_budget: Some(args.candidate_budget),
            record_timings: g.timings,
        };
        let report = pm_via_absorption(&h, params)?;
        emit_json(&g.out, &report)?;
        return Ok(match report.status {
            PipelineStatus::Perfect => 0,
            PipelineStatus::NotPerfect => EXIT_ABSENT,
            PipelineStatus::Unknown => EXIT_BUDGET,
        });
    }
    let (outcome, stats) = solve(&h, SolverConfig { node_limit: limit, transposition_cache: args.cache })?;
    let (edges, status, code) = match outcome {
        SolveOutcome::Found(m) => (m.edges().to_vec(), "found", 0),
        SolveOutcome::Absent => (Vec::new(), "absent", EXIT_ABSENT),
        SolveOutcome::Aborted => (Vec::new(), "aborted", EXIT_BUDGET),
    };
    emit_json(&g.out, &SolveOutput { perfect: code == 0, edges, status, nodes: stats.nodes })?;
    Ok(code)
}

#[derive(Serialize)]
struct AbsorbOutput {
    q: VertexSet,
    splits: Vec<QSplit>,
    k_absorbers: AbsorberList,
    two_k_absorbers: AbsorberList,
    k_multiplicity_bound: u64,
    two_k_multiplicity_bound: u64,
}

fn cmd_absorb(args: AbsorbArgs, g: &Global) -> CliResult {
    let h = read_hypergraph(&args.file)?;
    let k = h.k();
    let q = vertex_set(&args.q, h.n())?;
    let (splits, singles, doubles) = match &args.split_x {
        Some(x) => {
            let split = QSplit::new(q, vertex_set(x, h.n())?, k)?;
            let index = AbsorberIndex::new(&h);
            let singles = index.ksets(&split, args.budget)?;
            let doubles = index.two_ksets(&split, args.budget)?;
            (vec![split], singles, doubles)
        }
        None => (
            QSplit::all(q, k)?,
            enumerate_over_all_splits(&h, q, false, args.budget)?,
            enumerate_over_all_splits(&h, q, true, args.budget)?,
        ),
    };
    let truncated = singles.truncated || doubles.truncated;
    if args.stream {
        let mut text = String::new();
        if truncated {
            text.push_str("# truncated: budget exhausted\n");
        }
        write_absorber_block(&mut text, h.n(), q, k, &singles.sets);
        write_absorber_block(&mut text, h.n(), q, 2 * k, &doubles.sets);
        emit(&g.out, &text)?;
    } else {
        emit_json(
            &g.out,
            &AbsorbOutput {
                q,
                splits,
                k_absorbers: singles,
                two_k_absorbers: doubles,
                k_multiplicity_bound: k_absorber_multiplicity_bound(k),
                two_k_multiplicity_bound: two_k_absorber_multiplicity_bound(k),
            },
        )?;
    }
    Ok(if truncated { EXIT_BUDGET } else { 0 })
}

fn cmd_structure(args: StructureArgs, g: &Global) -> CliResult {
    let h = read_hypergraph(&args.file)?;
    let choice = match args.coloring {
        ColoringArg::Raw => ColoringChoice::Raw,
        ColoringArg::Balanced => ColoringChoice::Balanced,
        ColoringArg::Refined => ColoringChoice::Refined,
    };
    emit_json(&g.out, &structure_report(&h, args.gamma, args.beta1, choice)?)?;
    Ok(0)
}

#[derive(Serialize, Default)]
struct LemmaOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<TProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<ParitySplit>,
    checks: Vec<CheckReport>,
}

fn family_checks(f: &Hypergraph, out: &mut LemmaOutput) {
    out.profile = Some(t_profile(f));
    out.checks.extend(verify_profile_identities(f));
    out.checks.push(kk_clique_bound_check(f));
    out.checks.push(df_density_margin(f));
}

fn cmd_lemmas(args: LemmaArgs, g: &Global) -> CliResult {
    let mut out = LemmaOutput::default();
    if let Some(path) = &args.family {
        family_checks(&read_hypergraph(path)?, &mut out);
    }
    if let Some(raw) = &args.random {
        let (n, r, p) = (parse_field(raw, 0, "n")?, parse_field(raw, 1, "r")?, parse_field::<f64>(raw, 2, "p")?);
        if !(0.0..=1.0).contains(&p) || raw.len() != 3 {
            return Err(Failure::invalid("--random takes n,r,p with p in [0, 1]"));
        }
        let f = Hypergraph::random(n, r, p, &mut ChaCha8Rng::seed_from_u64(g.seed))?;
        out.seed = Some(g.seed);
        family_checks(&f, &mut out);
    }
    if let Some(v) = &args.split {
        let [a, b, r] = v[..] else {
            return Err(Failure::invalid("--split takes a,b,r"));
        };
        out.split = Some(parity_split_sums(a, b, r)?);
        out.checks.extend(parity_split_identities(a, b, r)?);
    }
    if let Some(raw) = &args.envelope {
        if raw.len() != 3 {
            return Err(Failure::invalid("--envelope takes c,r,n"));
        }
        let (c, r, n) = (parse_field::<f64>(raw, 0, "c")?, parse_field(raw, 1, "r")?, parse_field(raw, 2, "n")?);
        out.checks.extend(evensum_asymptotic_check(c, r, n)?);
    }
    if out.checks.is_empty() {
        return Err(Failure::invalid("nothing to check; pass --family, --random, --split or --envelope"));
    }
    emit_json(&g.out, &out)?;
    Ok(0)
}

fn cmd_verify(level: LevelArg, criteria: Vec<usize>, g: &Global) -> CliResult {
    let opts = SuiteOptions {
        level: match level {
            LevelArg::Smoke => Level::Smoke,
            LevelArg::Full => Level::Full,
        },
        seed: g.seed,
        jobs: g.jobs,
        record_timings: g.timings,
    };
    let ids = if criteria.is_empty() { (1..=9).collect() } else { criteria };
    let report = run_criteria(&ids, opts)?;
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    emit_json(&g.out, &report)?;
    Ok(if report.passed { 0 } else { EXIT_VERIFY_FAILED })
}

fn run(cli: Cli) -> CliResult {
    let g = cli.global;
    if g.jobs == 0 {
        return Err(Failure::invalid("--jobs must be at least 1"));
    }
    match cli.command {
        Command::Gen(args) => cmd_gen(args, &g),
        Command::Threshold { n, k, l } => {
            emit_json(&g.out, &threshold(n, k, l)?)?;
            Ok(0)
        }
        Command::Solve(args) => cmd_solve(args, &g),
        Command::Absorb(args) => cmd_absorb(args, &g),
        Command::Structure(args) => cmd_structure(args, &g),
        Command::Lemmas(args) => cmd_lemmas(args, &g),
        Command::Verify { level, criteria } => cmd_verify(level, criteria, &g),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("hyperthresh: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
