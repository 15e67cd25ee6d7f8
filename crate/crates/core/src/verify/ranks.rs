//! Rank claims about generic matroids, evaluated on sampled instances.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::combinatorial::h2_independent_combinatorial;
use super::{precondition, CheckReport, VerifyError, Witness};
use crate::builders::quadric_count;
use crate::geometry::{moment_curve, Params};
use crate::graph::{Graph, NeighborPartition, SplitKind};
use crate::matroid::{
    abstract_rank, circuits_up_to, generic_matroid, generic_rank, BuilderKind, GenericRank, LinearMatroid,
    DEFAULT_TRIALS, EXHAUSTIVE_MAX,
};
use crate::seed;

fn record_rank(report: &mut CheckReport, key: &str, r: &GenericRank) {
    report.measure(key, r.rank);
    if r.disagreement() {
        report.detail(format!("{key}: trials disagree {:?}, maximum kept", r.trial_ranks));
    }
}

/// For `n = d+1 ..= n_max`: `K_n` has rank `n d - (d+1 choose 2)`,
/// `K_{d+2}` is a circuit and `K_{d+1}` is independent.
pub fn check_abstract_rigidity(kind: BuilderKind, d: usize, n_max: usize, seed: u64) -> Result<CheckReport, VerifyError> {
    if d == 0 {
        return Err(precondition("d must be at least 1"));
    }
    if n_max < d + 2 {
        return Err(precondition("n_max must be at least d + 2"));
    }
    let mut report = CheckReport::new("abstract_rigidity")
        .with_input("builder", kind.label())
        .with_input("d", d)
        .with_input("n_max", n_max)
        .with_input("seed", seed);
    let mut best = Vec::new();
    for n in d + 1..=n_max {
        let g = Graph::complete(n);
        let r = generic_rank(kind, &g, d, DEFAULT_TRIALS, seed::derive(seed, n as u64))?;
        let want = abstract_rank(n, d).expect("n > d");
        record_rank(&mut report, &format!("rank_k{n}"), &r);
        report.require(r.rank == want, || Witness::new(format!("rank of K_{n} is {}, expected {want}", r.rank), g.edge_list()));
        best.push(r.best_seed);
    }
    let k1 = Graph::complete(d + 1);
    let m = generic_matroid(kind, &k1, d, best[0])?;
    report.require(m.is_independent(&k1.edge_list())?, || Witness::new(format!("K_{} is dependent", d + 1), k1.edge_list()));
    let k2 = Graph::complete(d + 2);
    let m = generic_matroid(kind, &k2, d, best[1])?;
    report.require(m.is_circuit(&k2.edge_list())?, || Witness::new(format!("K_{} is not a circuit", d + 2), k2.edge_list()));
    report.sampled_instance(seed);
    Ok(report)
}

/// Generic rank of `g` equals `expected`.
pub fn check_generic_rank(kind: BuilderKind, g: &Graph, d: usize, expected: usize, seed: u64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("generic_rank")
        .with_input("builder", kind.label())
        .with_input("d", d)
        .with_input("n", g.n())
        .with_input("edges", g.num_edges())
        .with_input("seed", seed);
    let r = generic_rank(kind, g, d, DEFAULT_TRIALS, seed)?;
    record_rank(&mut report, "rank", &r);
    report.measure("expected", expected);
    report.require(r.rank == expected, || Witness::new(format!("generic rank {}, expected {expected}", r.rank), g.edge_list()));
    report.sampled_instance(r.best_seed);
    Ok(report)
}

/// A matroid property of an edge set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Independent,
    Dependent,
    Circuit,
    /// Spanning in the matroid of `K_n`.
    Spanning,
    Basis,
}

impl FromStr for Claim {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "independent" => Claim::Independent,
            "dependent" => Claim::Dependent,
            "circuit" => Claim::Circuit,
            "spanning" | "rigid" => Claim::Spanning,
            "basis" | "isostatic" => Claim::Basis,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Independent => "independent",
            Claim::Dependent => "dependent",
            Claim::Circuit => "circuit",
            Claim::Spanning => "spanning",
            Claim::Basis => "basis",
        })
    }
}

/// Checks `claim` for the edge set of `g` in the generic matroid of `kind`.
/// A failed independence claim is witnessed by a circuit when one can be
/// enumerated.
pub fn check_property(kind: BuilderKind, g: &Graph, d: usize, claim: Claim, seed: u64) -> Result<CheckReport, VerifyError> {
    let mut report = CheckReport::new("property")
        .with_input("builder", kind.label())
        .with_input("d", d)
        .with_input("n", g.n())
        .with_input("claim", claim)
        .with_input("seed", seed);
    let r = generic_rank(kind, g, d, DEFAULT_TRIALS, seed)?;
    record_rank(&mut report, "rank", &r);
    let m = generic_matroid(kind, g, d, r.best_seed)?;
    let edges = g.edge_list();
    let rank = m.rank();
    let full = || -> Result<usize, VerifyError> {
        Ok(generic_rank(kind, &Graph::complete(g.n()), d, DEFAULT_TRIALS, seed)?.rank)
    };
    let holds = match claim {
        Claim::Independent => rank == edges.len(),
        Claim::Dependent => rank < edges.len(),
        Claim::Circuit => m.is_circuit(&edges)?,
        Claim::Spanning => rank == full()?,
        Claim::Basis => rank == edges.len() && rank == full()?,
    };
    report.measure("corank", edges.len() - rank);
    if !holds {
        let witness = match claim {
            Claim::Independent | Claim::Basis if rank < edges.len() && m.len() <= EXHAUSTIVE_MAX => {
                circuits_up_to(&m, m.len())?.into_iter().next().unwrap_or_else(|| edges.clone())
            }
            _ => edges.clone(),
        };
        report.fail(Witness::new(format!("{} is not {claim}: rank {rank} on {} edges", g_label(g), edges.len()), witness));
    }
    report.sampled_instance(r.best_seed);
    Ok(report)
}

fn g_label(g: &Graph) -> alloc::string::String {
    format!("graph on {} vertices", g.n())
}

fn corank(kind: BuilderKind, g: &Graph, d: usize, seed: u64) -> Result<usize, VerifyError> {
    Ok(g.num_edges() - generic_rank(kind, g, d, DEFAULT_TRIALS, seed)?.rank)
}

/// Generic corank does not increase under the given split.
pub fn check_split_monotonicity(
    kind: BuilderKind,
    g: &Graph,
    d: usize,
    split: SplitKind,
    v: usize,
    parts: &NeighborPartition,
    seed: u64,
) -> Result<CheckReport, VerifyError> {
    let split_graph = g.split(split, v, parts, d)?;
    let mut report = CheckReport::new("split")
        .with_input("builder", kind.label())
        .with_input("d", d)
        .with_input("split", format!("{split:?}").to_lowercase())
        .with_input("vertex", v)
        .with_input("seed", seed);
    let before = corank(kind, g, d, seed::derive(seed, 0))?;
    let after = corank(kind, &split_graph, d, seed::derive(seed, 1))?;
    report.measure("corank_before", before);
    report.measure("corank_after", after);
    report.require(after <= before, || {
        Witness::new(format!("corank rose from {before} to {after}"), split_graph.edge_list())
    });
    report.sampled_instance(seed);
    Ok(report)
}

fn random_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(0.5) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    g
}

/// `count` random splits of random graphs on `n` vertices, alternating
/// vertex and diamond splits. Every other base graph is first reduced to a
/// greedy basis of its edges, so independent inputs are always covered.
pub fn check_random_splits(kind: BuilderKind, d: usize, n: usize, count: usize, seed: u64) -> Result<CheckReport, VerifyError> {
    if d == 0 || n < d + 2 {
        return Err(precondition("need d >= 1 and n >= d + 2"));
    }
    let mut report = CheckReport::new("random_splits")
        .with_input("builder", kind.label())
        .with_input("d", d)
        .with_input("n", n)
        .with_input("count", count)
        .with_input("seed", seed);
    let (mut independent, mut done) = (0, 0);
    for i in 0..count as u64 {
        let mut rng = seed::stream(seed, i);
        let split = if i % 2 == 0 { SplitKind::Vertex } else { SplitKind::Diamond };
        let (g, v, parts) = loop {
            let mut g = random_graph(n, &mut rng);
            if i % 4 >= 2 {
                let m = generic_matroid(kind, &g, d, rng.gen())?;
                let order: Vec<usize> = (0..m.len()).collect();
                let basis = m.edges_of(&m.greedy_basis(&order));
                g = g.spanning_subgraph(&basis)?;
            }
            let mut candidates: Vec<usize> = (1..=n).filter(|&v| g.degree(v) >= split.b_size(d)).collect();
            candidates.shuffle(&mut rng);
            if let Some(&v) = candidates.first() {
                let parts = NeighborPartition::random(&g, v, split, d, &mut rng).expect("degree checked");
                break (g, v, parts);
            }
        };
        let g2 = g.split(split, v, &parts, d)?;
        let before = corank(kind, &g, d, rng.gen())?;
        let after = corank(kind, &g2, d, rng.gen())?;
        if before == 0 {
            independent += 1;
        }
        done += 1;
        if after > before {
            report.fail(Witness::new(format!("split {i}: corank rose from {before} to {after}"), g2.edge_list()));
        }
    }
    report.measure("splits", done);
    report.measure("independent_inputs", independent);
    report.sampled_instance(seed);
    Ok(report)
}

/// Combinatorial independence agrees with generic `H_2` rank on every
/// subgraph of `K_n`.
pub fn check_h2_oracle(n: usize, seed: u64) -> Result<CheckReport, VerifyError> {
    let k = Graph::complete(n);
    if k.num_edges() > 16 {
        return Err(precondition("at most 16 edges in K_n"));
    }
    let mut report = CheckReport::new("h2_oracle").with_input("n", n).with_input("seed", seed);
    let r = generic_rank(BuilderKind::Hyperconnectivity, &k, 2, DEFAULT_TRIALS, seed)?;
    let m: LinearMatroid = generic_matroid(BuilderKind::Hyperconnectivity, &k, 2, r.best_seed)?;
    let all = k.edge_list();
    let mut independent = 0;
    for mask in 0u64..1 << all.len() {
        let subset: Vec<_> = (0..all.len()).filter(|&i| mask >> i & 1 == 1).map(|i| all[i]).collect();
        let g = k.spanning_subgraph(&subset)?;
        let oracle = m.rank_of_mask(mask) == subset.len();
        let combinatorial = h2_independent_combinatorial(&g)?;
        independent += usize::from(oracle);
        if oracle != combinatorial {
            report.fail(Witness::new(format!("rank oracle says {oracle}, orientations say {combinatorial}"), subset));
            break;
        }
    }
    report.measure("subgraphs", 1u64 << all.len());
    report.measure("independent", independent);
    report.sampled_instance(r.best_seed);
    Ok(report)
}

/// Points of the moment curve in `R^d` lie on exactly `(d choose 2)`
/// independent quadrics once there are at least `(d+2 choose 2)` of them.
pub fn check_moment_quadrics(d: usize, params: &Params) -> Result<CheckReport, VerifyError> {
    let need = (d + 1) * (d + 2) / 2;
    if params.len() < need {
        return Err(precondition(format!("need at least {need} parameters")));
    }
    let mut report = CheckReport::new("quadrics").with_input("d", d).with_input("n", params.len());
    let count = quadric_count(&moment_curve(d, params)?);
    let want = d * d.saturating_sub(1) / 2;
    report.measure("quadrics", count);
    report.require(count == want, || Witness::new(format!("{count} quadrics, expected {want}"), Vec::new()));
    Ok(report)
}
