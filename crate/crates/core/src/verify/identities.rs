//! Bit-exact identities between rigidity matrices.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{precondition, CheckReport, VerifyError, Witness};
use crate::builders::{
    bar_joint, cofactor, hyperconnectivity, polynomial_matrix, skew_jacobian, skew_points, BasisChoice, RigidityMatrix,
};
use crate::geometry::{general_position, moment_curve, monomial_vectors, parabola, Params, PointConfig, Position};
use crate::graph::{Edge, Graph};
use crate::linalg::{pow, Matrix, Rational};
use crate::matroid::{matroids_equal, CompareMode, Comparison, LinearMatroid};

/// Block-diagonal change of basis between two matrices on the same rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockChange {
    pub blocks: Vec<Matrix>,
    /// Blocks determined by the incident rows; the rest came from the fallback.
    pub solved: usize,
}

/// First row where `a` and `b` differ, as a witness.
pub(crate) fn row_mismatch(what: &str, a: &Matrix, b: &Matrix, edges: &[Edge]) -> Option<Witness> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Some(Witness::new(
            format!("{what}: shapes {}x{} and {}x{} differ", a.rows(), a.cols(), b.rows(), b.cols()),
            Vec::new(),
        ));
    }
    (0..a.rows())
        .find(|&r| a.row(r) != b.row(r))
        .map(|r| Witness::new(format!("{what}: row {} differs", edges[r]), vec![edges[r]]))
}

/// Solves `from * diag(C_1, ..., C_n) = to` block by block, using the rows
/// incident to each vertex. Blocks those rows do not determine are taken
/// from `fallback`. The product is then checked exactly and every block
/// must be invertible.
pub fn solve_block_change(
    from: &RigidityMatrix,
    to: &RigidityMatrix,
    fallback: impl Fn(usize) -> Matrix,
) -> Result<BlockChange, Witness> {
    if from.edges() != to.edges() || from.n() != to.n() || from.d() != to.d() {
        return Err(Witness::new("change of basis: row labels or block shape differ", Vec::new()));
    }
    let (n, d) = (from.n(), from.d());
    let mut blocks = Vec::with_capacity(n);
    let mut solved = 0;
    for v in 1..=n {
        let rows: Vec<usize> = (0..from.edges().len()).filter(|&r| from.edges()[r].contains(v)).collect();
        let cols = (v - 1) * d..v * d;
        let a = from.matrix().select_rows(&rows).select_cols(cols.clone());
        let b = to.matrix().select_rows(&rows).select_cols(cols);
        match a.solve(&b) {
            Ok(x) => {
                solved += 1;
                blocks.push(x);
            }
            Err(crate::linalg::LinalgError::Underdetermined) => blocks.push(fallback(v)),
            Err(_) => {
                let edges = rows.iter().map(|&r| from.edges()[r]).collect();
                return Err(Witness::new(format!("change of basis: block {v} has no solution"), edges));
            }
        }
    }
    if let Some(v) = blocks.iter().position(|c| !c.is_invertible()) {
        return Err(Witness::new(format!("change of basis: block {} is singular", v + 1), Vec::new()));
    }
    let product = from.matrix().multiply(&Matrix::block_diagonal(&blocks)).expect("block sizes match");
    if let Some(w) = row_mismatch("change of basis", &product, to.matrix(), to.edges()) {
        return Err(w);
    }
    Ok(BlockChange { blocks, solved })
}

/// `q_i = alpha_i * l(p_i)`.
pub fn scaled_configuration(p: &PointConfig, alphas: &[Rational], l: &Matrix) -> PointConfig {
    let lp = p.transform(l);
    let points = lp.points().iter().zip(alphas).map(|(x, a)| x.iter().map(|c| c * a).collect()).collect();
    PointConfig::new(l.rows(), points).expect("points have l.rows() coordinates")
}

fn compare_into(report: &mut CheckReport, label: &str, a: &RigidityMatrix, b: &RigidityMatrix, mode: CompareMode) -> Result<(), VerifyError> {
    let (ma, mb) = (LinearMatroid::from(a), LinearMatroid::from(b));
    match matroids_equal(&ma, &mb, mode)? {
        Comparison::Equal { subsets_checked } => {
            report.measure(&format!("{label}.subsets_checked"), subsets_checked);
            if mode.is_probabilistic() {
                report.mark_probabilistic();
            }
        }
        Comparison::Differ { subset, left_rank, right_rank } => report.fail(Witness::new(
            format!("{label}: subset ranks {left_rank} and {right_rank} differ"),
            subset,
        )),
    }
    Ok(())
}

/// `H(q) = D * H(p) * C` on `K_n` for `q_i = alpha_i * l(p_i)`, where `D`
/// multiplies row `(i, j)` by `alpha_i alpha_j` and block `i` of `C` is
/// `l^T / alpha_i`. With `mode`, the two matroids are also compared subset
/// by subset.
pub fn check_scaling_invariance(
    p: &PointConfig,
    alphas: &[Rational],
    l: &Matrix,
    mode: Option<CompareMode>,
) -> Result<CheckReport, VerifyError> {
    let (n, d) = (p.len(), p.dim());
    if alphas.len() != n {
        return Err(precondition(format!("{} scalars for {n} points", alphas.len())));
    }
    if let Some(i) = alphas.iter().position(Zero::is_zero) {
        return Err(precondition(format!("scalar for vertex {} is zero", i + 1)));
    }
    if l.rows() != d || l.cols() != d || !l.is_invertible() {
        return Err(precondition(format!("linear map must be an invertible {d}x{d} matrix")));
    }
    let mut report = CheckReport::new("scaling_invariance").with_input("n", n).with_input("d", d);
    let g = Graph::complete(n);
    let hp = hyperconnectivity(&g, p)?;
    let q = scaled_configuration(p, alphas, l);
    let hq = hyperconnectivity(&g, &q)?;
    let row_scale: Vec<Rational> = g.edges().map(|e| &alphas[e.u() - 1] * &alphas[e.v() - 1]).collect();
    let lt = l.transpose();
    let blocks: Vec<Matrix> = alphas.iter().map(|a| lt.scale_rows(&vec![a.recip(); d]).expect("square")).collect();
    let product = hp.matrix().scale_rows(&row_scale)?.multiply(&Matrix::block_diagonal(&blocks))?;
    if let Some(w) = row_mismatch("H(q) = D H(p) C", &product, hq.matrix(), hq.edges()) {
        report.fail(w);
    }
    report.measure("rank", hp.rank());
    if let Some(mode) = mode {
        compare_into(&mut report, "matroids", &hp, &hq, mode)?;
    }
    Ok(report)
}

/// Scalars `b_i / a_i^2` taking `p_i = (a_i, b_i)` to `(t_i, t_i^2)` with
/// `t_i = b_i / a_i`.
pub fn h2_alphas(p: &PointConfig) -> Result<Vec<Rational>, VerifyError> {
    if p.dim() != 2 {
        return Err(precondition("points must be planar"));
    }
    p.points()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            if x[0].is_zero() || x[1].is_zero() {
                Err(precondition(format!("point {} has a zero coordinate", i + 1)))
            } else {
                Ok(&x[1] / (&x[0] * &x[0]))
            }
        })
        .collect()
}

/// Rescales planar `p` onto the parabola and then to `(1, t_i)`, checking
/// each step as a scaling identity, so `H_2(p)` has the matroid of the
/// monomial polynomial matrix at `t_i = b_i / a_i`.
pub fn check_h2_parametrization(p: &PointConfig) -> Result<CheckReport, VerifyError> {
    let alphas = h2_alphas(p)?;
    let t: Vec<Rational> = p.points().iter().map(|x| &x[1] / &x[0]).collect();
    let params = Params::new(t.clone()).map_err(|_| precondition("ratios b_i / a_i must be distinct"))?;
    let mut report = CheckReport::new("h2_parametrization").with_input("n", p.len());
    let id = Matrix::identity(2);
    report.merge(rename(check_scaling_invariance(p, &alphas, &id, None)?, "to_parabola"));
    let q = scaled_configuration(p, &alphas, &id);
    let curve = moment_curve(2, &params)?;
    report.require(q == curve, || Witness::new("rescaled points are not (t, t^2)", Vec::new()));
    let mono = monomial_vectors(2, &params)?;
    report.merge(rename(check_scaling_invariance(&mono, &t, &id, None)?, "from_monomial"));
    let g = Graph::complete(p.len());
    let h = hyperconnectivity(&g, &mono)?;
    let poly = polynomial_matrix(&g, &params, 2, &[BasisChoice::Monomial])?;
    if let Some(w) = row_mismatch("H(1, t) = P(monomial)", h.matrix(), poly.matrix(), h.edges()) {
        report.fail(w);
    }
    Ok(report)
}

fn rename(mut r: CheckReport, name: &str) -> CheckReport {
    r.name = name.into();
    r
}

fn basis_label(b: &BasisChoice) -> &'static str {
    match b {
        BasisChoice::Monomial => "monomial",
        BasisChoice::BarJoint => "bar_joint",
        BasisChoice::Cofactor => "cofactor",
        BasisChoice::Custom(_) => "custom",
    }
}

/// Coincidence of the bar-joint, cofactor and hyperconnectivity matroids
/// along the moment curve, as row-scaling identities on `K_n`:
///
/// - `R(t, ..., t^d)` row `(i, j)` is `(t_i - t_j)` times the polynomial
///   matrix row with bar-joint bases;
/// - `C_d(t, t^2)` row `(i, j)` is `(t_i - t_j)^(d-1)` times the row with
///   cofactor bases;
/// - `H(1, t, ..., t^(d-1))` equals the matrix with monomial bases.
///
/// The polynomial matrices are then related by solved block-diagonal
/// changes of basis. When no parameter is zero, `H(t, ..., t^d)` is also
/// checked as a rescaling of `H(1, ..., t^(d-1))`.
pub fn check_coincidence(params: &Params, d: usize, mode: Option<CompareMode>) -> Result<CheckReport, VerifyError> {
    if d == 0 {
        return Err(precondition("d must be at least 1"));
    }
    let n = params.len();
    let mut report = CheckReport::new("coincidence").with_input("n", n).with_input("d", d);
    let g = Graph::complete(n);
    let t = params.values();
    let gap = |e: Edge| &t[e.u() - 1] - &t[e.v() - 1];

    let r = bar_joint(&g, &moment_curve(d, params)?)?;
    let p_bar = polynomial_matrix(&g, params, d, &[BasisChoice::BarJoint])?;
    let scale: Vec<Rational> = g.edges().map(gap).collect();
    if let Some(w) = row_mismatch("leg a", r.matrix(), &p_bar.matrix().scale_rows(&scale)?, r.edges()) {
        report.fail(w);
    }

    let para = parabola(params)?;
    let c = cofactor(&g, &para, d)?;
    let p_cof = polynomial_matrix(&g, params, d, &[BasisChoice::Cofactor])?;
    for e in g.edges() {
        let (i, j) = (e.u() - 1, e.v() - 1);
        let dx = &para.points()[i][0] - &para.points()[j][0];
        let dy = &para.points()[i][1] - &para.points()[j][1];
        let sum = &t[i] + &t[j];
        let ok = (1..=d).all(|k| pow(&dx, d - k) * pow(&dy, k - 1) == pow(&gap(e), d - 1) * pow(&sum, k - 1));
        report.require(ok, || Witness::new(format!("cofactor entry identity fails on {e}"), vec![e]));
    }
    let scale: Vec<Rational> = g.edges().map(|e| pow(&gap(e), d - 1)).collect();
    if let Some(w) = row_mismatch("leg b", c.matrix(), &p_cof.matrix().scale_rows(&scale)?, c.edges()) {
        report.fail(w);
    }

    let h = hyperconnectivity(&g, &monomial_vectors(d, params)?)?;
    let p_mono = polynomial_matrix(&g, params, d, &[BasisChoice::Monomial])?;
    if let Some(w) = row_mismatch("leg c", h.matrix(), p_mono.matrix(), h.edges()) {
        report.fail(w);
    }

    let family = [(BasisChoice::Monomial, &p_mono), (BasisChoice::BarJoint, &p_bar), (BasisChoice::Cofactor, &p_cof)];
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            let ((ba, ma), (bb, mb)) = (&family[a], &family[b]);
            let label = format!("{}->{}", basis_label(ba), basis_label(bb));
            let analytic = |v: usize| {
                let own = params.of(v);
                let from = ba.coefficients(own, d).inverse().expect("basis coefficients are invertible");
                bb.coefficients(own, d).multiply(&from).expect("square").transpose()
            };
            match solve_block_change(ma, mb, analytic) {
                Ok(change) => {
                    report.measure(&format!("{label}.solved_blocks"), change.solved);
                    let agrees = change.blocks.iter().enumerate().all(|(v, blk)| *blk == analytic(v + 1));
                    report.require(agrees, || {
                        Witness::new(format!("{label}: solved blocks differ from the basis coefficients"), Vec::new())
                    });
                }
                Err(w) => report.fail(Witness::new(format!("{label}: {}", w.description), w.edges)),
            }
        }
    }

    if t.iter().all(|x| !x.is_zero()) {
        let mono = monomial_vectors(d, params)?;
        let id = Matrix::identity(d);
        report.merge(rename(check_scaling_invariance(&mono, t, &id, None)?, "rescaling"));
        let curve = moment_curve(d, params)?;
        report.require(scaled_configuration(&mono, t, &id) == curve, || {
            Witness::new("t_i (1, ..., t_i^(d-1)) is not the moment curve", Vec::new())
        });
    } else {
        report.detail("rescaling leg skipped: a parameter is zero");
    }

    report.measure("rank", h.rank());
    if let Some(mode) = mode {
        compare_into(&mut report, "bar_joint_vs_hyper", &r, &h, mode)?;
        compare_into(&mut report, "cofactor_vs_hyper", &c, &h, mode)?;
    }
    Ok(report)
}

/// The Jacobian of the skew-symmetric parametrization equals the
/// hyperconnectivity matrix of `(b_{1,i}, -a_{1,i}, ..., b_{k,i}, -a_{k,i})`.
pub fn check_skew_jacobian(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<CheckReport, VerifyError> {
    let j = skew_jacobian(a, b)?;
    let p = skew_points(a, b)?;
    let (n, k) = (p.len(), a.len());
    let mut report = CheckReport::new("skew_jacobian").with_input("n", n).with_input("k", k);
    let h = hyperconnectivity(&Graph::complete(n), &p)?;
    if let Some(w) = row_mismatch("jacobian = H(p)", j.matrix(), h.matrix(), h.edges()) {
        report.fail(w);
    }
    let rank = j.rank();
    report.measure("rank", rank);
    let dim = 2 * k;
    if n >= dim && general_position(&p, Position::Linear) {
        let expected = n * dim - dim * (dim + 1) / 2;
        report.measure("expected_rank", expected);
        report.require(rank == expected, || {
            Witness::new(format!("jacobian rank {rank}, expected {expected}"), h.edges().to_vec())
        });
    } else {
        report.detail("rank formula not asserted: points not in linear general position or n < 2k");
    }
    Ok(report)
}
