//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 malformed input or
//! arguments, 3 a builder or check precondition was violated.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rigidlab_core::builders::{
    affine_rigidity, bar_joint, cofactor, hyperconnectivity, polynomial_matrix, skew_jacobian, AffineVariant,
    BasisChoice, RigidityMatrix,
};
use rigidlab_core::geometry::DEFAULT_BOUND;
use rigidlab_core::graph::Graph;
use rigidlab_core::matroid::{generic_rank, BasisFamily, BuilderKind, LinearMatroid, DEFAULT_TRIALS};
use rigidlab_core::verify::{probe_conjectures, Status, PROBE_MAX_N};
use rigidlab_core::{Edge, Params, PointConfig, Rational};
use serde::Serialize;

use crate::envelope::ReportEnvelope;
use crate::formats::{parse_edge_list, parse_graph, parse_params, parse_points, parse_rational_list, write_matrix};
use crate::suite::{parse_manifest, run_suite, RunContext, SuiteError};

#[derive(Debug, Parser)]
#[command(name = "rigidlab", version, about = "Exact rigidity matrices and their matroids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a rigidity matrix and write it in the matrix text format.
    BuildMatrix {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank, corank and matroid predicates of an edge set.
    Rank {
        #[command(flatten)]
        source: Source,
        /// Edge set `u-v,...`; defaults to the edges of the graph.
        #[arg(long)]
        subset: Option<String>,
        /// Sample a generic configuration instead of reading one.
        #[arg(long)]
        generic: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        suite: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Compare matroids exhaustively on grounds of at most this many edges.
        #[arg(long, default_value_t = 16)]
        exhaustive_limit: usize,
        /// Random subsets per sampled comparison.
        #[arg(long, default_value_t = 256)]
        subset_samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for counterexamples to the conjectured order of the matroids.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// bar_joint, hyper, cofactor, poly, affine_lifted, affine_homogeneous or skew.
    #[arg(long)]
    builder: String,
    /// Graph file; not needed for `skew`.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Point configuration file.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Parameter file.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Parameters inline, `t1,t2,...`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Block width, for cofactor and polynomial matrices.
    #[arg(long)]
    d: Option<usize>,
    /// Polynomial basis: monomial, bar_joint or cofactor.
    #[arg(long, default_value = "monomial")]
    basis: String,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Precondition(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

fn input(m: impl std::fmt::Display) -> CliError {
    CliError::Input(m.to_string())
}

fn pre(m: impl std::fmt::Display) -> CliError {
    CliError::Precondition(m.to_string())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let command_line = args.join(" ");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, command_line) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rigidlab: {e}");
            e.code()
        }
    }
}

fn dispatch(command: Command, command_line: String) -> Result<i32, CliError> {
    match command {
        Command::BuildMatrix { source, out } => {
            let (rm, notes) = build(&source)?;
            emit(&write_matrix(rm.matrix(), &notes), out.as_deref())?;
            Ok(0)
        }
        Command::Rank { source, subset, generic, seed } => rank(&source, subset.as_deref(), generic, seed),
        Command::Verify { suite, seed, exhaustive_limit, subset_samples, out } => {
            let text = read(&suite)?;
            let invocations = parse_manifest(&text).map_err(input)?;
            let ctx = RunContext { seed, exhaustive_limit, subset_samples };
            let checks = run_suite(&invocations, &ctx).map_err(|e| match e {
                SuiteError::Input { .. } => input(e),
                SuiteError::Precondition { .. } => pre(e),
            })?;
            let envelope = ReportEnvelope::new(command_line, checks);
            emit(&envelope.to_json(), out.as_deref())?;
            for c in envelope.checks.iter().filter(|c| c.status == Status::Fail) {
                let w = c.witness.as_ref().expect("failed checks carry a witness");
                let edges: Vec<String> = w.edges.iter().map(ToString::to_string).collect();
                eprintln!("FAIL {} (line {}): {} [{}]", c.name, c.inputs["line"], w.description, edges.join(" "));
            }
            Ok(if envelope.passed() { 0 } else { 1 })
        }
        Command::Probe { n, d, samples, seed, out } => {
            if !(2..=PROBE_MAX_N).contains(&n) || d == 0 {
                return Err(input(format!("probe needs 2 <= n <= {PROBE_MAX_N} and d >= 1")));
            }
            let report = probe_conjectures(n, d, samples, seed).map_err(pre)?;
            emit(&ReportEnvelope::new(command_line, vec![report]).to_json(), out.as_deref())?;
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn basis(name: &str) -> Result<(BasisChoice, BasisFamily), CliError> {
    match name {
        "monomial" => Ok((BasisChoice::Monomial, BasisFamily::Monomial)),
        "bar_joint" => Ok((BasisChoice::BarJoint, BasisFamily::BarJoint)),
        "cofactor" => Ok((BasisChoice::Cofactor, BasisFamily::Cofactor)),
        other => Err(input(format!("unknown basis `{other}`"))),
    }
}

fn load_graph(source: &Source) -> Result<Graph, CliError> {
    let path = source.graph.as_ref().ok_or_else(|| input(format!("--graph is required for {}", source.builder)))?;
    parse_graph(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_points(source: &Source) -> Result<PointConfig, CliError> {
    let path = source.points.as_ref().ok_or_else(|| input(format!("--points is required for {}", source.builder)))?;
    parse_points(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_params(source: &Source) -> Result<Params, CliError> {
    match (&source.params, &source.t) {
        (Some(path), _) => parse_params(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display()))),
        (None, Some(t)) => Params::new(parse_rational_list(t).map_err(input)?).map_err(input),
        (None, None) => Err(input(format!("--params or --t is required for {}", source.builder))),
    }
}

fn need_d(source: &Source) -> Result<usize, CliError> {
    source.d.ok_or_else(|| input(format!("--d is required for {}", source.builder)))
}

type Factors = (Vec<Vec<Rational>>, Vec<Vec<Rational>>);

fn factors(p: &PointConfig) -> Result<Factors, CliError> {
    if p.dim() == 0 || !p.dim().is_multiple_of(2) {
        return Err(input("skew points need an even dimension 2k holding (a_1, b_1, ..., a_k, b_k)"));
    }
    let k = p.dim() / 2;
    let col = |c: usize| p.points().iter().map(|x| x[c].clone()).collect::<Vec<_>>();
    Ok(((0..k).map(|l| col(2 * l)).collect(), (0..k).map(|l| col(2 * l + 1)).collect()))
}

/// Builds the matrix on `g` (or on `K_n` for skew) from the source files.
fn build_on(source: &Source, g: Option<&Graph>) -> Result<RigidityMatrix, CliError> {
    let graph = || g.ok_or_else(|| input(format!("--graph is required for {}", source.builder)));
    let built = match source.builder.as_str() {
        "bar_joint" | "r" => bar_joint(graph()?, &load_points(source)?),
        "hyper" | "hyperconnectivity" | "h" => hyperconnectivity(graph()?, &load_points(source)?),
        "cofactor" | "c" => cofactor(graph()?, &load_points(source)?, need_d(source)?),
        "poly" | "p" => polynomial_matrix(graph()?, &load_params(source)?, need_d(source)?, &[basis(&source.basis)?.0]),
        "affine_lifted" => affine_rigidity(graph()?, &load_points(source)?, AffineVariant::Lifted),
        "affine_homogeneous" => affine_rigidity(graph()?, &load_points(source)?, AffineVariant::Homogeneous),
        "skew" => {
            let (a, b) = factors(&load_points(source)?)?;
            skew_jacobian(&a, &b)
        }
        other => return Err(input(format!("unknown builder `{other}`"))),
    };
    built.map_err(pre)
}

fn build(source: &Source) -> Result<(RigidityMatrix, Vec<String>), CliError> {
    let g = if source.builder == "skew" { None } else { Some(load_graph(source)?) };
    let rm = build_on(source, g.as_ref())?;
    let mut header = format!("builder={} n={} d={} rows={}", rm.builder(), rm.n(), rm.d(), rm.edges().len());
    for (key, path) in [("graph", &source.graph), ("points", &source.points), ("params", &source.params)] {
        if let Some(p) = path {
            header.push_str(&format!(" {key}={}", p.display()));
        }
    }
    if let Some(t) = &source.t {
        header.push_str(&format!(" t={t}"));
    }
    if source.builder == "poly" || source.builder == "p" {
        header.push_str(&format!(" basis={}", source.basis));
    }
    let mut notes = vec![header];
    if !rm.note().is_empty() {
        notes.push(rm.note().to_string());
    }
    let labels: Vec<String> = rm.edges().iter().map(ToString::to_string).collect();
    notes.push(format!("rows: {}", labels.join(" ")));
    Ok((rm, notes))
}

#[derive(Serialize)]
struct RankOutput {
    rank: usize,
    corank: usize,
    independent: bool,
    spanning: bool,
    circuit: bool,
    edges: usize,
    ground: usize,
    builder: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn rank(source: &Source, subset: Option<&str>, generic: bool, seed: u64) -> Result<i32, CliError> {
    let g = load_graph(source)?;
    let (ground, used_seed) = if generic {
        let d = need_d(source)?;
        let kind = match crate::suite::parse_builder_kind(&source.builder) {
            Some(BuilderKind::Polynomial(_)) => BuilderKind::Polynomial(basis(&source.basis)?.1),
            Some(k) => k,
            None => return Err(input(format!("builder `{}` has no generic sampler", source.builder))),
        };
        let k = Graph::complete(g.n());
        let best = generic_rank(kind, &k, d, DEFAULT_TRIALS, seed).map_err(pre)?.best_seed;
        (kind.sample(&k, d, best, DEFAULT_BOUND).map_err(pre)?, Some(best))
    } else {
        let k = match source.builder.as_str() {
            "affine_lifted" | "affine_homogeneous" => {
                let bip = g.bipartition().ok_or_else(|| pre("affine builders need a bipartition line `B:`"))?;
                Graph::complete_bipartite_on(bip.clone())
            }
            _ => Graph::complete(g.n()),
        };
        (build_on(source, Some(&k))?, None)
    };
    let m = LinearMatroid::from(&ground);
    let edges: Vec<Edge> = match subset {
        Some(s) => {
            let pairs = parse_edge_list(s).map_err(input)?;
            let mut out = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                if a == b {
                    return Err(input(format!("loop {a}-{b} in subset")));
                }
                out.push(Edge::new(a, b));
            }
            out.sort();
            out.dedup();
            out
        }
        None => g.edge_list(),
    };
    let r = m.rank_of(&edges).map_err(input)?;
    let out = RankOutput {
        rank: r,
        corank: edges.len() - r,
        independent: r == edges.len(),
        spanning: r == m.rank(),
        circuit: m.is_circuit(&edges).map_err(input)?,
        edges: edges.len(),
        ground: m.len(),
        builder: ground.builder().to_string(),
        seed: used_seed,
    };
    println!("{}", serde_json::to_string(&out).expect("serializable"));
    Ok(0)
}
