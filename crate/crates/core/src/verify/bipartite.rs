//! Ranks of complete bipartite frameworks and the bipartite coincidence.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::Serialize;

use super::identities::{row_mismatch, solve_block_change};
use super::{precondition, CheckReport, VerifyError, Witness};
use crate::builders::{affine_rigidity, bar_joint, hyperconnectivity, quadric_count, AffineVariant};
use crate::geometry::{general_position, homogenize, lift_bipartite, PointConfig, Position};
use crate::graph::{Bipartition, Edge, Graph};
use crate::linalg::{Matrix, Rational};
use crate::matroid::{
    abstract_rank, freer_than, generic_matroid, matroids_equal, BuilderKind, CompareMode, Comparison, Freeness,
    LinearMatroid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    /// Hyperconnectivity.
    H,
    /// Bar-and-joint.
    R,
}

fn zero_based(s: &alloc::collections::BTreeSet<usize>) -> Vec<usize> {
    s.iter().map(|v| v - 1).collect()
}

/// Rank of `K_{n1,n2}` (parts `1..=n1` and the rest) at `p`.
///
/// For `H`, with `p` in linear general position: `n1 n2` when
/// `min(n1, n2) <= d`, otherwise `d n - d^2`. The lower bound is witnessed by
/// an independent spanning subgraph (`K_{d,d}` with every further vertex
/// joined to `d` vertices of it), the upper bound by `(n1-d)(n2-d)`
/// independent vectors `l ⊗ m` in the left kernel built from linear
/// dependences `l` of the points of one part and `m` of the other.
///
/// For `R`, with each part affinely spanning: `n d - (d+1 choose 2) - q`
/// where `q` counts independent quadrics through `p`.
pub fn check_bipartite_rank(n1: usize, n2: usize, p: &PointConfig, theory: Theory) -> Result<CheckReport, VerifyError> {
    let d = p.dim();
    let n = n1 + n2;
    if p.len() != n {
        return Err(precondition(format!("{} points for {n} vertices", p.len())));
    }
    let g = Graph::complete_bipartite(n1, n2);
    let mut report = CheckReport::new("bipartite_rank")
        .with_input("n1", n1)
        .with_input("n2", n2)
        .with_input("d", d)
        .with_input("theory", format!("{theory:?}"));
    let xs: Vec<usize> = (0..n1).collect();
    let ys: Vec<usize> = (n1..n).collect();
    match theory {
        Theory::H => {
            if !general_position(p, Position::Linear) {
                return Err(precondition("points are not in linear general position"));
            }
            let h = hyperconnectivity(&g, p)?;
            let rank = h.rank();
            let expected = if n1.min(n2) <= d { n1 * n2 } else { d * n - d * d };
            report.measure("rank", rank);
            report.measure("expected", expected);
            report.require(rank == expected, || {
                Witness::new(format!("rank {rank}, expected {expected}"), g.edge_list())
            });
            let m = LinearMatroid::from(&h);
            let lower = lower_bound_edges(n1, n2, d);
            report.measure("lower_bound_edges", lower.len());
            report.require(lower.len() == expected && m.is_independent(&lower)?, || {
                Witness::new("lower-bound subgraph is dependent or of the wrong size", lower.clone())
            });
            if n1.min(n2) > d {
                let lx = p.column_matrix(&xs).nullspace();
                let my = p.column_matrix(&ys).nullspace();
                let mut kernel = Vec::new();
                for l in &lx {
                    for mv in &my {
                        kernel.push(g.edges().map(|e| &l[e.u() - 1] * &mv[e.v() - 1 - n1]).collect::<Vec<Rational>>());
                    }
                }
                let k = Matrix::from_rows_with_cols(kernel, g.num_edges())?;
                let orthogonal = k.multiply(h.matrix())?.is_zero();
                report.measure("kernel_vectors", k.rows());
                report.require(orthogonal, || Witness::new("tensor vector not orthogonal to the columns", Vec::new()));
                let independent = k.rank() == (n1 - d) * (n2 - d) && k.rows() == (n1 - d) * (n2 - d);
                report.require(independent, || Witness::new("tensor vectors are not independent", Vec::new()));
            }
        }
        Theory::R => {
            let hom = homogenize(p);
            if hom.span_dim(&xs) != d + 1 || hom.span_dim(&ys) != d + 1 {
                return Err(precondition("each part must affinely span the ambient space"));
            }
            let rank = bar_joint(&g, p)?.rank();
            let quadrics = quadric_count(p);
            let base = abstract_rank(n, d).expect("n > d");
            report.measure("rank", rank);
            report.measure("quadrics", quadrics);
            let expected = base.checked_sub(quadrics);
            report.require(expected == Some(rank), || {
                Witness::new(format!("rank {rank}, expected {base} - {quadrics}"), g.edge_list())
            });
        }
    }
    Ok(report)
}

/// `K_{d,d}` on the first `d` vertices of each part, every other vertex
/// joined to those `d` vertices of the opposite part. All of `K_{n1,n2}`
/// when a part has at most `d` vertices.
fn lower_bound_edges(n1: usize, n2: usize, d: usize) -> Vec<Edge> {
    let g = Graph::complete_bipartite(n1, n2);
    if n1.min(n2) <= d {
        return g.edge_list();
    }
    g.edges().filter(|e| e.u() <= d || e.v() - n1 <= d).collect()
}

/// `rank H(p)` on the complete bipartite graph of `bip` equals
/// `n1 n2 - (n1 - d1)(n2 - d2)`, `d1`, `d2` the dimensions of the linear
/// spans of the two parts.
pub fn check_bipartite_general_rank(p: &PointConfig, bip: &Bipartition) -> Result<CheckReport, VerifyError> {
    if bip.n() != p.len() {
        return Err(precondition(format!("bipartition on {} vertices, {} points", bip.n(), p.len())));
    }
    let g = Graph::complete_bipartite_on(bip.clone());
    let (xs, ys) = (zero_based(bip.x()), zero_based(bip.y()));
    let (n1, n2) = (xs.len(), ys.len());
    let (d1, d2) = (p.span_dim(&xs), p.span_dim(&ys));
    let rank = hyperconnectivity(&g, p)?.rank();
    let expected = n1 * n2 - (n1 - d1) * (n2 - d2);
    let mut report = CheckReport::new("bipartite_general_rank")
        .with_input("n1", n1)
        .with_input("n2", n2)
        .with_input("d", p.dim());
    report.measure("d1", d1);
    report.measure("d2", d2);
    report.measure("rank", rank);
    report.measure("expected", expected);
    report.require(rank == expected, || Witness::new(format!("rank {rank}, expected {expected}"), g.edge_list()));
    Ok(report)
}

/// Bar-joint on `lift_bipartite(p)` and hyperconnectivity on
/// `homogenize(p)` have the same matroid on the complete bipartite graph of
/// `bip`. Checked as the exact chain
/// `R(lift) = A_lifted S`, `A_lifted = A_homogeneous C`, `A_homogeneous = D H(hom)`
/// with `S = diag(-I on X, I on Y)`, `C` a solved block-diagonal change of
/// basis and `D` a diagonal of row signs, then by comparing subset ranks.
pub fn check_bipartite_coincidence(p: &PointConfig, bip: &Bipartition, mode: CompareMode) -> Result<CheckReport, VerifyError> {
    if !p.has_distinct_points() {
        return Err(precondition("points must be distinct"));
    }
    if bip.n() != p.len() {
        return Err(precondition(format!("bipartition on {} vertices, {} points", bip.n(), p.len())));
    }
    let g = Graph::complete_bipartite_on(bip.clone());
    let d = p.dim() + 1;
    let mut report = CheckReport::new("bipartite_coincidence")
        .with_input("n1", bip.x().len())
        .with_input("n2", bip.y().len())
        .with_input("d", d);

    let lifted = affine_rigidity(&g, p, AffineVariant::Lifted)?;
    let homog = affine_rigidity(&g, p, AffineVariant::Homogeneous)?;
    let r = bar_joint(&g, &lift_bipartite(p, bip)?)?;
    let h = hyperconnectivity(&g, &homogenize(p))?;

    let signs: Vec<Rational> =
        (1..=g.n()).map(|v| if bip.in_x(v) { -Rational::one() } else { Rational::one() }).collect();
    let s_blocks: Vec<Matrix> = signs.iter().map(|s| Matrix::diagonal(&vec![s.clone(); d])).collect();
    let lifted_s = lifted.matrix().multiply(&Matrix::block_diagonal(&s_blocks))?;
    if let Some(w) = row_mismatch("R(lift) = A_lifted S", &lifted_s, r.matrix(), r.edges()) {
        report.fail(w);
    }

    let analytic = |v: usize| {
        // (x - p_v, ±1) = M_v (x, 1) with M_v = [[I, -p_v], [0, ±1]]
        let mut m = Matrix::identity(d);
        for (k, c) in p.vertex(v).iter().enumerate() {
            m.set(k, d - 1, -c.clone());
        }
        m.set(d - 1, d - 1, if bip.in_x(v) { Rational::one() } else { -Rational::one() });
        m.transpose()
    };
    match solve_block_change(&homog, &lifted, analytic) {
        Ok(change) => report.measure("solved_blocks", change.solved),
        Err(w) => report.fail(w),
    }

    let row_signs: Vec<Rational> =
        g.edges().map(|e| if bip.in_x(e.u()) { Rational::one() } else { -Rational::one() }).collect();
    if let Some(w) = row_mismatch("A_homogeneous = D H(hom)", homog.matrix(), &h.matrix().scale_rows(&row_signs)?, h.edges()) {
        report.fail(w);
    }
    debug_assert!(row_signs.iter().all(|s| !s.is_zero()));

    match matroids_equal(&LinearMatroid::from(&r), &LinearMatroid::from(&h), mode)? {
        Comparison::Equal { subsets_checked } => {
            report.measure("subsets_checked", subsets_checked);
            if mode.is_probabilistic() {
                report.mark_probabilistic();
            }
        }
        Comparison::Differ { subset, left_rank, right_rank } => {
            report.fail(Witness::new(format!("subset ranks {left_rank} (lifted R) and {right_rank} (H) differ"), subset))
        }
    }
    report.measure("rank", r.rank());
    Ok(report)
}

/// On subgraphs of `K_{n1,n2}`: the generic `H_d` rank never exceeds the
/// generic `R_d` rank, and `K_{n1,n2}` is not spanning in `H_d`.
pub fn check_bipartite_subgraphs(n1: usize, n2: usize, d: usize, mode: CompareMode, seed: u64) -> Result<CheckReport, VerifyError> {
    let g = Graph::complete_bipartite(n1, n2);
    let n = n1 + n2;
    if n < d {
        return Err(precondition("need at least d vertices"));
    }
    let mut report = CheckReport::new("bipartite_subgraphs")
        .with_input("n1", n1)
        .with_input("n2", n2)
        .with_input("d", d)
        .with_input("seed", seed);
    let h = generic_matroid(BuilderKind::Hyperconnectivity, &g, d, crate::seed::derive(seed, 0))?;
    let r = generic_matroid(BuilderKind::BarJoint, &g, d, crate::seed::derive(seed, 1))?;
    match freer_than(&h, &r, mode)? {
        Freeness::Freer { subsets_checked } => {
            report.measure("subsets_checked", subsets_checked);
            if mode.is_probabilistic() {
                report.mark_probabilistic();
            }
        }
        Freeness::Witness { subset } => report.fail(Witness::new("independent in H, dependent in R", subset)),
    }
    let full = abstract_rank(n, d).expect("n >= d");
    report.measure("rank_h", h.rank());
    report.measure("rank_r", r.rank());
    report.require(h.rank() < full, || Witness::new(format!("bipartite graph spans H_{d}"), g.edge_list()));
    report.sampled_instance(seed);
    Ok(report)
}
