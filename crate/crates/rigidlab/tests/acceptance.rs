//! Acceptance criteria, one `[PASS]` / `[FAIL]` line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use rigidlab_core::geometry::{moment_curve, random_generic, Position, DEFAULT_BOUND};
use rigidlab_core::graph::{Bipartition, Graph, NeighborPartition, SplitKind};
use rigidlab_core::instances::{integer_factors, invertible_matrix, nonzero_scalars, rational_params};
use rigidlab_core::matroid::{abstract_rank, generic_matroid, generic_rank, BasisFamily, BuilderKind, CompareMode, DEFAULT_TRIALS};
use rigidlab_core::seed::derive;
use rigidlab_core::verify::{self, CheckReport, Claim, Status, Theory};

const SEED: u64 = 42;
const P: BuilderKind = BuilderKind::Polynomial(BasisFamily::BarJoint);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn expect_pass(r: &CheckReport) -> Result<(), String> {
    if r.status == Status::Fail {
        let w = r.witness.as_ref().map(|w| w.description.clone()).unwrap_or_default();
        return Err(format!("{} failed: {w} {:?}", r.name, r.inputs));
    }
    Ok(())
}

fn expect_exact(r: &CheckReport) -> Result<(), String> {
    expect_pass(r)?;
    if r.status != Status::Pass {
        return Err(format!("{} is only probabilistic", r.name));
    }
    Ok(())
}

fn measured(r: &CheckReport, key: &str) -> Result<i64, String> {
    r.measurements.get(key).copied().ok_or_else(|| format!("{} has no measurement `{key}`", r.name))
}

fn expect_eq(what: &str, got: i64, want: i64) -> Result<(), String> {
    if got != want {
        return Err(format!("{what}: got {got}, expected {want}"));
    }
    Ok(())
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn worked_example() -> Graph {
    Graph::from_edges(6, [(1, 2), (2, 3), (3, 4), (1, 4), (1, 5), (2, 5), (3, 5), (4, 6), (5, 6)]).unwrap()
}

fn coincidence_identities() -> Outcome {
    let mut count = 0;
    for d in 1..=4 {
        for n in d + 1..=8 {
            for k in 0..5 {
                let t = rational_params(n, derive(SEED, (100 * d + 10 * n + k) as u64));
                let r = verify::check_coincidence(&t, d, None).map_err(err)?;
                expect_exact(&r)?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} parameter sets, legs (a), (b), (c) bit-exact"))
}

fn coincidence_matroids() -> Outcome {
    for d in 2..=3 {
        for k in 0..3 {
            let t = rational_params(5, derive(SEED, 1000 + 10 * d + k));
            let r = verify::check_coincidence(&t, d as usize, Some(CompareMode::Exhaustive)).map_err(err)?;
            expect_exact(&r)?;
            expect_eq("bar_joint_vs_hyper subsets", measured(&r, "bar_joint_vs_hyper.subsets_checked")?, 1024)?;
            expect_eq("cofactor_vs_hyper subsets", measured(&r, "cofactor_vs_hyper.subsets_checked")?, 1024)?;
        }
    }
    Ok("d in {2,3}, n = 5, 3 sets: 1024 subsets equal in all three matroids".into())
}

fn abstract_rigidity() -> Outcome {
    let kinds = [BuilderKind::BarJoint, BuilderKind::Hyperconnectivity, BuilderKind::Cofactor, P];
    for kind in kinds {
        for d in 1..=4 {
            let r = verify::check_abstract_rigidity(kind, d, d + 3, derive(SEED, d as u64)).map_err(err)?;
            expect_pass(&r)?;
        }
    }
    Ok("R, H, C, P for d = 1..4: rank(K_n) = nd - (d+1 choose 2), K_{d+2} circuit, K_{d+1} independent".into())
}

fn bipartite_h_ranks() -> Outcome {
    let cases = [(2, 5, 10), (4, 4, 15), (4, 6, 21)];
    let mut kernels = 0;
    for (i, (n1, n2, want)) in cases.into_iter().enumerate() {
        let p = random_generic(3, n1 + n2, derive(SEED, i as u64), DEFAULT_BOUND, Position::Linear).map_err(err)?;
        let r = verify::check_bipartite_rank(n1, n2, &p, Theory::H).map_err(err)?;
        expect_exact(&r)?;
        expect_eq(&format!("rank H_3(K_{n1},{n2})"), measured(&r, "rank")?, want)?;
        kernels += r.measurements.get("kernel_vectors").copied().unwrap_or(0);
    }
    let k44 = Graph::complete_bipartite(4, 4);
    let g = generic_rank(BuilderKind::Hyperconnectivity, &k44, 3, DEFAULT_TRIALS, SEED).map_err(err)?;
    let m = generic_matroid(BuilderKind::Hyperconnectivity, &k44, 3, g.best_seed).map_err(err)?;
    if !m.is_circuit(&k44.edge_list()).map_err(err)? {
        return Err("K_{4,4} is not a circuit in H_3".into());
    }
    if kernels == 0 {
        return Err("no tensor kernel vectors were checked".into());
    }
    Ok(format!("K_2,5 -> 10, K_4,4 -> 15 (circuit), K_4,6 -> 21; {kernels} tensor kernel vectors orthogonal to all columns"))
}

fn quadrics() -> Outcome {
    for d in 2..=5 {
        let n = (d + 1) * (d + 2) / 2;
        let r = verify::check_moment_quadrics(d, &rational_params(n, derive(SEED, d as u64))).map_err(err)?;
        expect_exact(&r)?;
        expect_eq(&format!("quadrics d={d}"), measured(&r, "quadrics")?, (d * (d - 1) / 2) as i64)?;
    }
    let p = moment_curve(3, &rational_params(10, derive(SEED, 77))).map_err(err)?;
    let r = verify::check_bipartite_rank(4, 6, &p, Theory::R).map_err(err)?;
    expect_exact(&r)?;
    let (n, d) = (10, 3);
    let want = n * d - d * (d + 1) / 2 - d * (d - 1) / 2;
    expect_eq("n d - (d+1 choose 2) - (d choose 2) = n d - d^2", want as i64, (n * d - d * d) as i64)?;
    expect_eq("rank R_3(K_4,6) on the moment curve", measured(&r, "rank")?, want as i64)?;
    expect_eq("quadrics through the K_4,6 points", measured(&r, "quadrics")?, 3)?;
    Ok("(d choose 2) quadrics for d = 2..5; K_4,6 on the moment curve has rank 30 - 6 - 3 = 21".into())
}

fn bipartite_coincidence() -> Outcome {
    let bip = Bipartition::new(6, 1..=3).unwrap();
    for d in 2..=3usize {
        for k in 0..3 {
            let p = random_generic(d - 1, 6, derive(SEED, (10 * d + k) as u64), DEFAULT_BOUND, Position::Affine).map_err(err)?;
            let r = verify::check_bipartite_coincidence(&p, &bip, CompareMode::Exhaustive).map_err(err)?;
            expect_exact(&r)?;
            expect_eq("subsets", measured(&r, "subsets_checked")?, 512)?;
        }
    }
    Ok("K_3,3, d in {2,3}, 3 configurations: change of basis exact, 512 subsets agree".into())
}

fn skew() -> Outcome {
    let mut count = 0;
    for k in 1..=2 {
        for n in 4..=7 {
            let (a, b) = integer_factors(k, n, derive(SEED, (10 * k + n) as u64));
            expect_exact(&verify::check_skew_jacobian(&a, &b).map_err(err)?)?;
            count += 1;
        }
    }
    Ok(format!("{count} (k, n) pairs: Jacobian equals the hyperconnectivity matrix entry for entry"))
}

fn scaling() -> Outcome {
    for i in 0..20u64 {
        let d = 2 + (i % 2) as usize;
        let s = derive(SEED, i);
        let p = random_generic(d, 4, derive(s, 0), 1000, Position::Linear).map_err(err)?;
        let r = verify::check_scaling_invariance(
            &p,
            &nonzero_scalars(4, derive(s, 1)),
            &invertible_matrix(d, derive(s, 2)),
            Some(CompareMode::Exhaustive),
        )
        .map_err(err)?;
        expect_exact(&r)?;
        expect_eq("subsets", measured(&r, "matroids.subsets_checked")?, 64)?;
    }
    Ok("20 instances: H(q) = D H(p) C bit-exact, matroids equal on all 64 subsets of K_4".into())
}

fn splits() -> Outcome {
    let h = BuilderKind::Hyperconnectivity;
    let g = worked_example();
    expect_pass(&verify::check_property(h, &g, 2, Claim::Basis, SEED).map_err(err)?)?;
    let parts = NeighborPartition::new([1, 3], [6], [2]);
    let r = verify::check_split_monotonicity(h, &g, 2, SplitKind::Vertex, 5, &parts, SEED).map_err(err)?;
    expect_pass(&r)?;
    expect_eq("example corank after split", measured(&r, "corank_after")?, 0)?;
    let split = g.vertex_split(5, &parts, 2).map_err(err)?;
    expect_pass(&verify::check_property(h, &split, 2, Claim::Basis, SEED).map_err(err)?)?;

    let k33 = Graph::complete_bipartite(3, 3);
    let parts = NeighborPartition::new([4], [5], [6]);
    let r = verify::check_split_monotonicity(h, &k33, 2, SplitKind::Vertex, 1, &parts, SEED).map_err(err)?;
    expect_pass(&r)?;
    expect_eq("K_3,3 corank before", measured(&r, "corank_before")?, 1)?;
    expect_eq("K_3,3 corank after", measured(&r, "corank_after")?, 0)?;

    for (i, kind) in [h, P].into_iter().enumerate() {
        let r = verify::check_random_splits(kind, 3, 7, 100, derive(SEED, i as u64)).map_err(err)?;
        expect_pass(&r)?;
        expect_eq("random splits", measured(&r, "splits")?, 100)?;
    }
    Ok("example basis stays a basis, K_3,3 corank 1 -> 0, 100 random splits each in H_3 and P_3".into())
}

fn h2_oracle() -> Outcome {
    let r = verify::check_h2_oracle(5, SEED).map_err(err)?;
    expect_pass(&r)?;
    expect_eq("subgraphs", measured(&r, "subgraphs")?, 1024)?;
    let fixtures = [
        ("K_3,3", Graph::complete_bipartite(3, 3), false),
        ("K_4", Graph::complete(4), false),
        ("example", worked_example(), true),
        ("prism", Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6), (1, 4), (2, 5), (3, 6)]).unwrap(), true),
    ];
    for (name, g, want) in fixtures {
        let oracle = generic_rank(BuilderKind::Hyperconnectivity, &g, 2, DEFAULT_TRIALS, SEED).map_err(err)?.rank == g.num_edges();
        let comb = verify::h2_independent_combinatorial(&g).map_err(err)?;
        if oracle != want || comb != want {
            return Err(format!("{name}: oracle {oracle}, orientations {comb}, expected {want}"));
        }
    }
    Ok("all 1024 subgraphs of K_5 agree; fixtures K_3,3, K_4, example, prism agree".into())
}

fn separations() -> Outcome {
    let rank = |kind, g: &Graph, d, want| -> Result<(), String> {
        let r = verify::check_generic_rank(kind, g, d, want, SEED).map_err(err)?;
        expect_pass(&r)
    };
    let k33 = Graph::complete_bipartite(3, 3);
    expect_pass(&verify::check_property(BuilderKind::BarJoint, &k33, 2, Claim::Basis, SEED).map_err(err)?)?;
    expect_pass(&verify::check_property(BuilderKind::Hyperconnectivity, &k33, 2, Claim::Circuit, SEED).map_err(err)?)?;
    let k46 = Graph::complete_bipartite(4, 6);
    rank(BuilderKind::BarJoint, &k46, 3, 24)?;
    rank(BuilderKind::Cofactor, &k46, 3, 24)?;
    rank(BuilderKind::Hyperconnectivity, &k46, 3, 21)?;
    rank(P, &k46, 3, 21)?;
    let k67 = Graph::complete_bipartite(6, 7);
    expect_eq("K_6,7 edges vs abstract rank", k67.num_edges() as i64, abstract_rank(13, 4).unwrap() as i64)?;
    expect_pass(&verify::check_property(BuilderKind::Cofactor, &k67, 4, Claim::Basis, SEED).map_err(err)?)?;
    expect_pass(&verify::check_property(BuilderKind::BarJoint, &k67, 4, Claim::Dependent, SEED).map_err(err)?)?;
    Ok("K_3,3 basis in R_2 / circuit in H_2; K_4,6 24 in R_3, C vs 21 in H_3, P_3; K_6,7 C-basis, R-dependent".into())
}

fn negative_control() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let manifest = dir.path().join("false.suite");
    std::fs::write(&manifest, "property builder=bar_joint graph=K4 d=2 claim=independent\n").map_err(err)?;
    let out = Command::new(env!("CARGO_BIN_EXE_rigidlab")).arg("verify").arg(&manifest).output().map_err(err)?;
    if out.status.code() != Some(1) {
        return Err(format!("exit code {:?}, expected 1", out.status.code()));
    }
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let witness = &report["checks"][0]["witness"];
    let edges = witness["edges"].as_array().map(Vec::len).unwrap_or(0);
    if report["status"] != "fail" || edges == 0 {
        return Err(format!("report lacks a failing witness: {report}"));
    }
    Ok(format!("exit 1, witness: {} ({edges} edges)", witness["description"].as_str().unwrap_or("")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("coincidence identities", coincidence_identities),
        ("coincidence matroids", coincidence_matroids),
        ("abstract rigidity", abstract_rigidity),
        ("bipartite ranks in H_d", bipartite_h_ranks),
        ("quadric counts", quadrics),
        ("bipartite coincidence", bipartite_coincidence),
        ("skew-symmetric Jacobian", skew),
        ("scaling invariance", scaling),
        ("split monotonicity", splits),
        ("planar combinatorial oracle", h2_oracle),
        ("separations", separations),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("[PASS] {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
