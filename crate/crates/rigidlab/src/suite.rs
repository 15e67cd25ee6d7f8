//! Verification suites: one check per line, `check_name key=value ...`.
//!
//! Every invocation is parsed and validated before anything runs. Checks
//! then run in parallel and their reports come back in manifest order.
//! Unless a line sets `seed=`, its seed is derived from the run seed and
//! the line's position among the checks.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use rayon::prelude::*;
use rigidlab_core::geometry::{moment_curve, random_generic, Params, Position, DEFAULT_BOUND};
use rigidlab_core::graph::{Bipartition, Graph, NeighborPartition, SplitKind};
use rigidlab_core::instances;
use rigidlab_core::matroid::{BasisFamily, BuilderKind, CompareMode};
use rigidlab_core::seed;
use rigidlab_core::verify::{self, CheckReport, Claim, Theory, VerifyError};
use thiserror::Error;

use crate::formats::{parse_edge_list, parse_rational_list, parse_usize_list, FormatError};

pub const CHECKS: &[&str] = &[
    "coincidence",
    "scaling_invariance",
    "h2_parametrization",
    "bipartite_rank",
    "bipartite_general_rank",
    "bipartite_coincidence",
    "bipartite_subgraphs",
    "skew_jacobian",
    "split",
    "random_splits",
    "h2_oracle",
    "quadrics",
    "abstract_rigidity",
    "generic_rank",
    "property",
    "probe",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub line: usize,
    pub check: String,
    pub args: BTreeMap<String, String>,
}

pub fn parse_manifest(text: &str) -> Result<Vec<Invocation>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut words = content.split_whitespace();
        let Some(check) = words.next() else { continue };
        if !CHECKS.contains(&check) {
            return Err(FormatError { line, message: format!("unknown check `{check}`") });
        }
        let mut args = BTreeMap::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .filter(|(k, v)| !k.is_empty() && !v.is_empty())
                .ok_or_else(|| FormatError { line, message: format!("expected key=value, found `{w}`") })?;
            if args.insert(k.to_string(), v.to_string()).is_some() {
                return Err(FormatError { line, message: format!("duplicate key `{k}`") });
            }
        }
        out.push(Invocation { line, check: check.to_string(), args });
    }
    Ok(out)
}

/// Run-wide settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunContext {
    pub seed: u64,
    /// Grounds with at most this many edges are compared exhaustively.
    pub exhaustive_limit: usize,
    /// Number of random subsets for sampled comparisons.
    pub subset_samples: usize,
}

impl Default for RunContext {
    fn default() -> Self {
        RunContext { seed: 42, exhaustive_limit: rigidlab_core::matroid::DEFAULT_EXHAUSTIVE_LIMIT, subset_samples: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("line {line}: {message}")]
    Input { line: usize, message: String },
    #[error("line {line}: {source}")]
    Precondition { line: usize, source: VerifyError },
}

/// How a check compares matroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compare {
    /// Exhaustive up to the run's limit, sampled above it.
    Auto,
    Sampled,
    Off,
}

impl FromStr for Compare {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "auto" => Ok(Compare::Auto),
            "sampled" => Ok(Compare::Sampled),
            "none" | "off" => Ok(Compare::Off),
            _ => Err(()),
        }
    }
}

impl Compare {
    fn mode(self, ground: usize, ctx: &RunContext, seed: u64) -> Option<CompareMode> {
        let sampled = CompareMode::Sampled { count: ctx.subset_samples, seed: seed::derive(seed, 99) };
        match self {
            Compare::Auto => Some(CompareMode::for_ground(ground, ctx.exhaustive_limit, ctx.subset_samples, seed::derive(seed, 99))),
            Compare::Sampled => Some(sampled),
            Compare::Off => None,
        }
    }
}

pub fn parse_builder_kind(s: &str) -> Option<BuilderKind> {
    Some(match s {
        "bar_joint" | "r" => BuilderKind::BarJoint,
        "hyper" | "hyperconnectivity" | "h" => BuilderKind::Hyperconnectivity,
        "cofactor" | "c" => BuilderKind::Cofactor,
        "poly" | "poly_barjoint" | "p" => BuilderKind::Polynomial(BasisFamily::BarJoint),
        "poly_monomial" => BuilderKind::Polynomial(BasisFamily::Monomial),
        "poly_cofactor" => BuilderKind::Polynomial(BasisFamily::Cofactor),
        _ => return None,
    })
}

/// `K<n>`, `K<a>,<b>` (parts `1..=a` and the rest), `cone<k>:<graph>`, or
/// an edge list `u-v,...` on `n` vertices (default: the largest label).
pub fn parse_graph_spec(s: &str, n: Option<usize>) -> Result<Graph, String> {
    if let Some(rest) = s.strip_prefix("cone") {
        let (k, inner) = rest.split_once(':').ok_or("cone needs `cone<k>:<graph>`")?;
        let k = k.parse().map_err(|_| format!("bad cone count `{k}`"))?;
        return Ok(parse_graph_spec(inner, None)?.cone(k));
    }
    if let Some(rest) = s.strip_prefix('K') {
        let sizes = parse_usize_list(rest)?;
        return match sizes[..] {
            [n] => Ok(Graph::complete(n)),
            [a, b] => Ok(Graph::complete_bipartite(a, b)),
            _ => Err(format!("bad complete graph `{s}`")),
        };
    }
    let edges = parse_edge_list(s)?;
    let max = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0);
    Graph::from_edges(n.unwrap_or(max), edges).map_err(|e| e.to_string())
}

/// Argument map that remembers which keys were read.
struct Args<'a> {
    inv: &'a Invocation,
    used: RefCell<BTreeSet<&'a str>>,
}

impl<'a> Args<'a> {
    fn new(inv: &'a Invocation) -> Self {
        Args { inv, used: RefCell::new(BTreeSet::new()) }
    }

    fn err(&self, message: impl Into<String>) -> SuiteError {
        SuiteError::Input { line: self.inv.line, message: message.into() }
    }

    fn raw(&self, key: &'a str) -> Option<&'a str> {
        self.used.borrow_mut().insert(key);
        self.inv.args.get(key).map(String::as_str)
    }

    fn opt<T: FromStr>(&self, key: &'a str) -> Result<Option<T>, SuiteError> {
        self.raw(key).map(|v| v.parse().map_err(|_| self.err(format!("bad value `{v}` for `{key}`")))).transpose()
    }

    fn get<T: FromStr>(&self, key: &'a str, default: T) -> Result<T, SuiteError> {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn req<T: FromStr>(&self, key: &'a str) -> Result<T, SuiteError> {
        self.opt(key)?.ok_or_else(|| self.err(format!("missing `{key}`")))
    }

    fn kind(&self) -> Result<BuilderKind, SuiteError> {
        let v: String = self.req("builder")?;
        parse_builder_kind(&v).ok_or_else(|| self.err(format!("unknown builder `{v}`")))
    }

    fn graph(&self) -> Result<Graph, SuiteError> {
        let spec: String = self.req("graph")?;
        let n = self.opt("n")?;
        parse_graph_spec(&spec, n).map_err(|m| self.err(m))
    }

    fn list(&self, key: &'a str) -> Result<Vec<usize>, SuiteError> {
        match self.raw(key) {
            None => Ok(Vec::new()),
            Some(v) => parse_usize_list(v).map_err(|m| self.err(m)),
        }
    }

    fn finish(self) -> Result<(), SuiteError> {
        let used = self.used.borrow();
        match self.inv.args.keys().find(|k| !used.contains(k.as_str())) {
            Some(k) => Err(self.err(format!("unknown key `{k}` for {}", self.inv.check))),
            None => Ok(()),
        }
    }
}

/// A validated invocation, ready to run.
#[derive(Debug, Clone)]
pub struct Task {
    pub line: usize,
    pub seed: u64,
    spec: Spec,
}

#[derive(Debug, Clone)]
enum Spec {
    Coincidence { d: usize, n: usize, params: Option<Params>, trials: usize, compare: Compare },
    Scaling { d: usize, n: usize, instances: usize, compare: Compare },
    H2Parametrization { n: usize, instances: usize },
    BipartiteRank { n1: usize, n2: usize, d: usize, theory: Theory, moment: bool },
    BipartiteGeneralRank { n1: usize, n2: usize, d: usize, d1: usize, d2: usize },
    BipartiteCoincidence { n1: usize, n2: usize, d: usize, trials: usize, compare: Compare },
    BipartiteSubgraphs { n1: usize, n2: usize, d: usize, compare: Compare },
    Skew { k: usize, n: usize, trials: usize },
    Split { kind: BuilderKind, graph: Graph, d: usize, split: SplitKind, vertex: usize, parts: NeighborPartition },
    RandomSplits { kind: BuilderKind, d: usize, n: usize, count: usize },
    H2Oracle { n: usize },
    Quadrics { d: usize, n: usize },
    AbstractRigidity { kind: BuilderKind, d: usize, n_max: usize },
    GenericRank { kind: BuilderKind, graph: Graph, d: usize, expected: usize },
    Property { kind: BuilderKind, graph: Graph, d: usize, claim: Claim },
    Probe { n: usize, d: usize, samples: usize },
}

pub fn plan(inv: &Invocation, index: usize, ctx: &RunContext) -> Result<Task, SuiteError> {
    let a = Args::new(inv);
    let seed = a.opt("seed")?.unwrap_or_else(|| seed::derive(ctx.seed, index as u64));
    let spec = match inv.check.as_str() {
        "coincidence" => {
            let params = match a.raw("params") {
                None => None,
                Some(v) => {
                    let t = parse_rational_list(v).map_err(|m| a.err(m))?;
                    Some(Params::new(t).map_err(|e| a.err(e.to_string()))?)
                }
            };
            let n = match &params {
                Some(p) => p.len(),
                None => a.req("n")?,
            };
            Spec::Coincidence { d: a.req("d")?, n, params, trials: a.get("trials", 1)?, compare: a.get("compare", Compare::Auto)? }
        }
        "scaling_invariance" => Spec::Scaling {
            d: a.req("d")?,
            n: a.req("n")?,
            instances: a.get("instances", 1)?,
            compare: a.get("compare", Compare::Auto)?,
        },
        "h2_parametrization" => Spec::H2Parametrization { n: a.req("n")?, instances: a.get("instances", 1)? },
        "bipartite_rank" => {
            let theory = match a.get("theory", String::from("h"))?.as_str() {
                "h" | "hyper" => Theory::H,
                "r" | "bar_joint" => Theory::R,
                t => return Err(a.err(format!("unknown theory `{t}`"))),
            };
            let moment = match a.get("points", String::from("generic"))?.as_str() {
                "generic" => false,
                "moment" => true,
                p => return Err(a.err(format!("unknown point family `{p}`"))),
            };
            Spec::BipartiteRank { n1: a.req("n1")?, n2: a.req("n2")?, d: a.req("d")?, theory, moment }
        }
        "bipartite_general_rank" => {
            let d = a.req("d")?;
            Spec::BipartiteGeneralRank { n1: a.req("n1")?, n2: a.req("n2")?, d, d1: a.get("d1", d)?, d2: a.get("d2", d)? }
        }
        "bipartite_coincidence" => Spec::BipartiteCoincidence {
            n1: a.req("n1")?,
            n2: a.req("n2")?,
            d: a.req("d")?,
            trials: a.get("trials", 1)?,
            compare: a.get("compare", Compare::Auto)?,
        },
        "bipartite_subgraphs" => Spec::BipartiteSubgraphs {
            n1: a.req("n1")?,
            n2: a.req("n2")?,
            d: a.req("d")?,
            compare: a.get("compare", Compare::Auto)?,
        },
        "skew_jacobian" => Spec::Skew { k: a.req("k")?, n: a.req("n")?, trials: a.get("trials", 1)? },
        "split" => {
            let split = match a.get("kind", String::from("vertex"))?.as_str() {
                "vertex" => SplitKind::Vertex,
                "diamond" => SplitKind::Diamond,
                k => return Err(a.err(format!("unknown split `{k}`"))),
            };
            let parts = NeighborPartition::new(a.list("a")?, a.list("b")?, a.list("c")?);
            Spec::Split { kind: a.kind()?, graph: a.graph()?, d: a.req("d")?, split, vertex: a.req("vertex")?, parts }
        }
        "random_splits" => Spec::RandomSplits { kind: a.kind()?, d: a.req("d")?, n: a.req("n")?, count: a.get("count", 100)? },
        "h2_oracle" => Spec::H2Oracle { n: a.get("n", 5)? },
        "quadrics" => Spec::Quadrics { d: a.req("d")?, n: a.opt("n")?.unwrap_or(0) },
        "abstract_rigidity" => Spec::AbstractRigidity { kind: a.kind()?, d: a.req("d")?, n_max: a.req("n_max")? },
        "generic_rank" => Spec::GenericRank { kind: a.kind()?, graph: a.graph()?, d: a.req("d")?, expected: a.req("expected")? },
        "property" => {
            let claim: String = a.req("claim")?;
            let claim = claim.parse().map_err(|_| a.err(format!("unknown claim `{claim}`")))?;
            Spec::Property { kind: a.kind()?, graph: a.graph()?, d: a.req("d")?, claim }
        }
        "probe" => Spec::Probe { n: a.req("n")?, d: a.req("d")?, samples: a.get("samples", 20)? },
        other => return Err(a.err(format!("unknown check `{other}`"))),
    };
    a.finish()?;
    Ok(Task { line: inv.line, seed, spec })
}

fn repeat(
    name: &str,
    trials: usize,
    seed: u64,
    mut one: impl FnMut(u64) -> Result<CheckReport, VerifyError>,
) -> Result<CheckReport, VerifyError> {
    if trials == 1 {
        return one(seed::derive(seed, 0));
    }
    let mut report = CheckReport::new(name).with_input("trials", trials);
    for i in 0..trials {
        let mut sub = one(seed::derive(seed, i as u64))?;
        sub.name = format!("trial{i}");
        report.merge(sub);
    }
    Ok(report)
}

impl Task {
    pub fn run(&self, ctx: &RunContext) -> Result<CheckReport, VerifyError> {
        let seed = self.seed;
        let mut report = match &self.spec {
            Spec::Coincidence { d, n, params, trials, compare } => {
                let ground = n * n.saturating_sub(1) / 2;
                repeat("coincidence", *trials, seed, |s| {
                    let t = params.clone().unwrap_or_else(|| instances::rational_params(*n, s));
                    let mut r = verify::check_coincidence(&t, *d, compare.mode(ground, ctx, s))?;
                    r.input("params", format!("{:?}", t.values().iter().map(ToString::to_string).collect::<Vec<_>>()));
                    Ok(r)
                })?
            }
            Spec::Scaling { d, n, instances: count, compare } => repeat("scaling_invariance", *count, seed, |s| {
                let p = random_generic(*d, *n, seed::derive(s, 0), 1000, Position::Linear)?;
                let alphas = instances::nonzero_scalars(*n, seed::derive(s, 1));
                let l = instances::invertible_matrix(*d, seed::derive(s, 2));
                verify::check_scaling_invariance(&p, &alphas, &l, compare.mode(n * n.saturating_sub(1) / 2, ctx, s))
            })?,
            Spec::H2Parametrization { n, instances: count } => repeat("h2_parametrization", *count, seed, |s| {
                verify::check_h2_parametrization(&instances::unit_circle_points(*n, s))
            })?,
            Spec::BipartiteRank { n1, n2, d, theory, moment } => {
                let p = if *moment {
                    moment_curve(*d, &instances::rational_params(n1 + n2, seed))?
                } else {
                    let mode = if *theory == Theory::H { Position::Linear } else { Position::Affine };
                    random_generic(*d, n1 + n2, seed, DEFAULT_BOUND, mode)?
                };
                verify::check_bipartite_rank(*n1, *n2, &p, *theory)?
            }
            Spec::BipartiteGeneralRank { n1, n2, d, d1, d2 } => {
                let xs = instances::subspace_points(*d, *d1, *n1, seed::derive(seed, 0))?;
                let ys = instances::subspace_points(*d, *d2, *n2, seed::derive(seed, 1))?;
                let mut pts = xs.points().to_vec();
                pts.extend(ys.points().iter().cloned());
                let p = rigidlab_core::PointConfig::new(*d, pts)?;
                let bip = Bipartition::new(n1 + n2, 1..=*n1)?;
                verify::check_bipartite_general_rank(&p, &bip)?
            }
            Spec::BipartiteCoincidence { n1, n2, d, trials, compare } => {
                if *d < 2 {
                    return Err(VerifyError::Precondition("d must be at least 2".into()));
                }
                let bip = Bipartition::new(n1 + n2, 1..=*n1)?;
                repeat("bipartite_coincidence", *trials, seed, |s| {
                    let p = random_generic(d - 1, n1 + n2, s, DEFAULT_BOUND, Position::Affine)?;
                    let mode = compare.mode(n1 * n2, ctx, s).unwrap_or(CompareMode::Sampled { count: 0, seed: s });
                    verify::check_bipartite_coincidence(&p, &bip, mode)
                })?
            }
            Spec::BipartiteSubgraphs { n1, n2, d, compare } => {
                let mode = compare.mode(n1 * n2, ctx, seed).unwrap_or(CompareMode::Sampled { count: 0, seed });
                verify::check_bipartite_subgraphs(*n1, *n2, *d, mode, seed)?
            }
            Spec::Skew { k, n, trials } => repeat("skew_jacobian", *trials, seed, |s| {
                let (a, b) = instances::integer_factors(*k, *n, s);
                verify::check_skew_jacobian(&a, &b)
            })?,
            Spec::Split { kind, graph, d, split, vertex, parts } => {
                verify::check_split_monotonicity(*kind, graph, *d, *split, *vertex, parts, seed)?
            }
            Spec::RandomSplits { kind, d, n, count } => verify::check_random_splits(*kind, *d, *n, *count, seed)?,
            Spec::H2Oracle { n } => verify::check_h2_oracle(*n, seed)?,
            Spec::Quadrics { d, n } => {
                let n = (*n).max((d + 1) * (d + 2) / 2);
                verify::check_moment_quadrics(*d, &instances::rational_params(n, seed))?
            }
            Spec::AbstractRigidity { kind, d, n_max } => verify::check_abstract_rigidity(*kind, *d, *n_max, seed)?,
            Spec::GenericRank { kind, graph, d, expected } => verify::check_generic_rank(*kind, graph, *d, *expected, seed)?,
            Spec::Property { kind, graph, d, claim } => verify::check_property(*kind, graph, *d, *claim, seed)?,
            Spec::Probe { n, d, samples } => verify::probe_conjectures(*n, *d, *samples, seed)?,
        };
        report.input("line", self.line);
        report.input("seed", seed);
        Ok(report)
    }
}

/// Plans every invocation (failing on the first malformed one), then runs
/// them in parallel, returning results in manifest order.
pub fn run_suite(invocations: &[Invocation], ctx: &RunContext) -> Result<Vec<CheckReport>, SuiteError> {
    let tasks = invocations.iter().enumerate().map(|(i, inv)| plan(inv, i, ctx)).collect::<Result<Vec<_>, _>>()?;
    tasks
        .par_iter()
        .map(|t| t.run(ctx).map_err(|source| SuiteError::Precondition { line: t.line, source }))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rigidlab_core::verify::Status;

    fn run(text: &str) -> Result<Vec<CheckReport>, SuiteError> {
        let inv = parse_manifest(text).map_err(|e| SuiteError::Input { line: e.line, message: e.message })?;
        run_suite(&inv, &RunContext::default())
    }

    #[test]
    fn manifest_syntax() {
        let inv = parse_manifest("# header\n\ncoincidence d=2 n=4  # trailing\nprobe n=6 d=2\n").unwrap();
        assert_eq!(inv.len(), 2);
        assert_eq!((inv[0].line, inv[0].args["n"].as_str()), (3, "4"));
        assert_eq!(parse_manifest("bogus x=1").unwrap_err().line, 1);
        assert!(parse_manifest("probe n").is_err());
        assert!(parse_manifest("probe n=1 n=2").is_err());
    }

    #[test]
    fn planning_rejects_bad_arguments() {
        for bad in [
            "coincidence n=4",
            "coincidence d=2 n=four",
            "coincidence d=2 n=4 colour=red",
            "property builder=nope graph=K4 d=2 claim=independent",
            "property builder=r graph=K4 d=2 claim=wobbly",
            "generic_rank builder=r graph=1-1 d=2 expected=0",
            "bipartite_rank n1=2 n2=2 d=2 theory=q",
        ] {
            assert!(matches!(run(bad), Err(SuiteError::Input { line: 1, .. })), "{bad}");
        }
    }

    #[test]
    fn graph_specs() {
        assert_eq!(parse_graph_spec("K4", None).unwrap().num_edges(), 6);
        assert_eq!(parse_graph_spec("K3,4", None).unwrap().num_edges(), 12);
        assert_eq!(parse_graph_spec("cone1:K3,3", None).unwrap().n(), 7);
        assert_eq!(parse_graph_spec("1-2,2-3", Some(5)).unwrap().n(), 5);
        assert!(parse_graph_spec("K", None).is_err());
    }

    #[test]
    fn negative_control_fails_with_witness() {
        let reports = run("property builder=bar_joint graph=K4 d=2 claim=independent\n").unwrap();
        assert_eq!(reports[0].status, Status::Fail);
        assert_eq!(reports[0].witness.as_ref().unwrap().edges.len(), 6);
    }

    #[test]
    fn precondition_errors_are_reported() {
        assert!(matches!(run("probe n=30 d=2"), Err(SuiteError::Precondition { line: 1, .. })));
    }

    #[test]
    fn seeds_depend_on_position_only() {
        let ctx = RunContext::default();
        let a = parse_manifest("h2_oracle n=4\nquadrics d=2\n").unwrap();
        let b = parse_manifest("quadrics d=2\nh2_oracle n=4\n").unwrap();
        assert_eq!(plan(&a[0], 0, &ctx).unwrap().seed, plan(&b[0], 0, &ctx).unwrap().seed);
        assert_eq!(plan(&parse_manifest("quadrics d=2 seed=7").unwrap()[0], 0, &ctx).unwrap().seed, 7);
    }

    #[test]
    fn limit_zero_forces_sampling() {
        let inv = parse_manifest("coincidence d=2 n=4\n").unwrap();
        let ctx = RunContext { exhaustive_limit: 0, subset_samples: 20, ..RunContext::default() };
        let reports = run_suite(&inv, &ctx).unwrap();
        assert_eq!(reports[0].status, Status::ProbabilisticPass);
        let reports = run_suite(&inv, &RunContext::default()).unwrap();
        assert_eq!(reports[0].status, Status::Pass);
    }
}
