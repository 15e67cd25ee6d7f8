//! Search for counterexamples to the conjectured order
//! `H_d <= R_d <= C` and to `P_d = H_d` among small graphs.
//!
//! A probe never proves anything: passing means no counterexample was
//! found for the sampled graphs and configurations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use super::{precondition, CheckReport, VerifyError, Witness};
use crate::graph::Graph;
use crate::matroid::{generic_rank, BasisFamily, BuilderKind, DEFAULT_TRIALS};
use crate::seed;

pub const PROBE_MAX_N: usize = 16;

const KINDS: [(&str, BuilderKind); 4] = [
    ("h", BuilderKind::Hyperconnectivity),
    ("r", BuilderKind::BarJoint),
    ("c", BuilderKind::Cofactor),
    ("p", BuilderKind::Polynomial(BasisFamily::BarJoint)),
];

fn fixtures(n: usize, d: usize) -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    let mut push = |name: String, g: Graph| {
        if g.n() <= n && !out.iter().any(|(m, _)| *m == name) {
            out.push((name, g));
        }
    };
    push(format!("k{}_{}", d + 1, d + 1), Graph::complete_bipartite(d + 1, d + 1));
    let wide = d * (d + 1) / 2;
    push(format!("k{}_{}", d + 1, wide), Graph::complete_bipartite(d + 1, wide));
    if d >= 4 {
        push(format!("cone{}_k6_7", d - 4), Graph::complete_bipartite(6, 7).cone(d - 4));
    }
    out
}

/// Ranks in `H`, `R`, `C`, `P` order.
fn ranks(g: &Graph, d: usize, seed: u64) -> Result<[usize; 4], VerifyError> {
    let mut out = [0; 4];
    for (k, (_, kind)) in KINDS.iter().enumerate() {
        out[k] = generic_rank(*kind, g, d, DEFAULT_TRIALS, seed::derive(seed, k as u64))?.rank;
    }
    Ok(out)
}

fn findings(r: &[usize; 4]) -> Vec<String> {
    let [h, rr, c, p] = *r;
    let mut out = Vec::new();
    if h > rr {
        out.push(format!("rank_H {h} > rank_R {rr}"));
    }
    if rr > c {
        out.push(format!("rank_R {rr} > rank_C {c}"));
    }
    if p != h {
        out.push(format!("rank_P {p} != rank_H {h}"));
    }
    out
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

/// Samples `samples` random graphs on `n` vertices plus the fixtures that
/// fit, and compares their generic ranks in the four theories. Any
/// violation of the conjectured order, or any difference between `P` and
/// `H`, fails the report with the graph as witness.
pub fn probe_conjectures(n: usize, d: usize, samples: usize, seed: u64) -> Result<CheckReport, VerifyError> {
    if n > PROBE_MAX_N {
        return Err(precondition(format!("n must be at most {PROBE_MAX_N}")));
    }
    if d == 0 || n < 2 {
        return Err(precondition("need d >= 1 and n >= 2"));
    }
    let mut report = CheckReport::new("probe")
        .with_input("n", n)
        .with_input("d", d)
        .with_input("samples", samples)
        .with_input("seed", seed);
    let mut strict = 0;
    for i in 0..samples as u64 {
        let mut rng = seed::stream(seed, i);
        let g = random_graph(n, &mut rng);
        let r = ranks(&g, d, rng.gen())?;
        if r[0] < r[1] {
            strict += 1;
        }
        for f in findings(&r) {
            report.fail(Witness::new(format!("sample {i}: {f}"), g.edge_list()));
        }
    }
    report.measure("samples_with_h_below_r", strict);
    for (k, (name, g)) in fixtures(n, d).into_iter().enumerate() {
        let r = ranks(&g, d, seed::derive(seed, u64::MAX - k as u64))?;
        for (j, (label, _)) in KINDS.iter().enumerate() {
            report.measure(&format!("{name}.rank_{label}"), r[j]);
        }
        report.measure(&format!("{name}.edges"), g.num_edges());
        report.detail(format!(
            "{name} ({} edges): H {}, R {}, C {}, P {}",
            g.num_edges(),
            r[0],
            r[1],
            r[2],
            r[3]
        ));
        for f in findings(&r) {
            report.fail(Witness::new(format!("{name}: {f}"), g.edge_list()));
        }
    }
    report.detail("non-decisive: no counterexample among the sampled graphs and configurations proves nothing");
    report.mark_probabilistic();
    Ok(report)
}
