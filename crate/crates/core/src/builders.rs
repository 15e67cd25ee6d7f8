//! Rigidity matrices restricted to the rows of a framework's edges.
//!
//! Every builder returns rows in lexicographic edge order and columns in `n`
//! blocks of width `d`, block `v - 1` belonging to vertex `v`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{GeometryError, Params, PointConfig};
use crate::graph::{Edge, Graph};
use crate::linalg::{pow, LinalgError, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("vertex {0} has no point")]
    MissingPoint(usize),
    #[error("vertex {0} has no parameter")]
    MissingParameter(usize),
    #[error("cofactor matrices need planar points, got dimension {0}")]
    NotPlanar(usize),
    #[error("endpoints of edge {0} coincide")]
    CoincidentPoints(Edge),
    #[error("basis for vertex {0} is singular or not {1}x{1}")]
    SingularBasis(usize, usize),
    #[error("expected {expected} bases, got {found}")]
    BasisCount { expected: usize, found: usize },
    #[error("graph carries no bipartition")]
    MissingBipartition,
    #[error("edge {0} does not cross the bipartition")]
    NotBipartite(Edge),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("factor vectors must be {k} pairs of length {n}")]
    FactorShape { k: usize, n: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which construction produced a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Builder {
    BarJoint,
    Hyperconnectivity,
    Cofactor,
    Polynomial,
    AffineLifted,
    AffineHomogeneous,
    SkewJacobian,
}

impl fmt::Display for Builder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Builder::BarJoint => "bar_joint",
            Builder::Hyperconnectivity => "hyperconnectivity",
            Builder::Cofactor => "cofactor",
            Builder::Polynomial => "polynomial",
            Builder::AffineLifted => "affine_lifted",
            Builder::AffineHomogeneous => "affine_homogeneous",
            Builder::SkewJacobian => "skew_jacobian",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityMatrix {
    matrix: Matrix,
    edges: Vec<Edge>,
    n: usize,
    d: usize,
    builder: Builder,
    note: String,
}

impl RigidityMatrix {
    fn assemble(
        edges: Vec<Edge>,
        n: usize,
        d: usize,
        builder: Builder,
        note: String,
        mut row: impl FnMut(Edge, &mut [Rational], &mut [Rational]) -> Result<(), BuildError>,
    ) -> Result<Self, BuildError> {
        let mut matrix = Matrix::zeros(edges.len(), n * d);
        for (r, &e) in edges.iter().enumerate() {
            let (i, j) = (e.u(), e.v());
            let mut bi = vec![Rational::zero(); d];
            let mut bj = vec![Rational::zero(); d];
            row(e, &mut bi, &mut bj)?;
            let out = matrix.row_mut(r);
            out[(i - 1) * d..i * d].clone_from_slice(&bi);
            out[(j - 1) * d..j * d].clone_from_slice(&bj);
        }
        Ok(RigidityMatrix { matrix, edges, n, d, builder, note })
    }

    /// Wraps an existing matrix; columns must form `n` blocks of width `d`.
    pub fn from_parts(matrix: Matrix, edges: Vec<Edge>, n: usize, d: usize, builder: Builder) -> Result<Self, BuildError> {
        if matrix.rows() != edges.len() || matrix.cols() != n * d {
            return Err(BuildError::Linalg(LinalgError::Shape("rows must match edges and columns n*d")));
        }
        Ok(RigidityMatrix { matrix, edges, n, d, builder, note: String::new() })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Block width.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn builder(&self) -> &Builder {
        &self.builder
    }

    /// Free-form description of the inputs.
    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn row_of(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    /// Entries of `row` in the block of 1-based vertex `v`.
    pub fn block(&self, row: usize, v: usize) -> &[Rational] {
        &self.matrix.row(row)[(v - 1) * self.d..v * self.d]
    }

    /// Vertices whose block is non-zero in `row`.
    pub fn support(&self, row: usize) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.block(row, v).iter().any(|x| !x.is_zero())).collect()
    }

    /// Every row is zero outside the blocks of its edge's endpoints.
    pub fn respects_edge_support(&self) -> bool {
        self.edges.iter().enumerate().all(|(r, e)| self.support(r).iter().all(|&v| e.contains(v)))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

fn check_points(g: &Graph, p: &PointConfig) -> Result<(), BuildError> {
    if p.len() < g.n() {
        return Err(BuildError::MissingPoint(p.len() + 1));
    }
    Ok(())
}

/// Row `(i, j)`: `p_i - p_j` in block `i`, `p_j - p_i` in block `j`.
pub fn bar_joint(g: &Graph, p: &PointConfig) -> Result<RigidityMatrix, BuildError> {
    check_points(g, p)?;
    RigidityMatrix::assemble(g.edge_list(), g.n(), p.dim(), Builder::BarJoint, String::new(), |e, bi, bj| {
        for (k, (a, b)) in p.vertex(e.u()).iter().zip(p.vertex(e.v())).enumerate() {
            bi[k] = a - b;
            bj[k] = b - a;
        }
        Ok(())
    })
}

/// Row `(i, j)`, `i < j`: `p_j` in block `i`, `-p_i` in block `j`.
pub fn hyperconnectivity(g: &Graph, p: &PointConfig) -> Result<RigidityMatrix, BuildError> {
    check_points(g, p)?;
    RigidityMatrix::assemble(g.edge_list(), g.n(), p.dim(), Builder::Hyperconnectivity, String::new(), |e, bi, bj| {
        for (k, (a, b)) in p.vertex(e.u()).iter().zip(p.vertex(e.v())).enumerate() {
            bi[k] = b.clone();
            bj[k] = -a.clone();
        }
        Ok(())
    })
}

/// `c(x, y) = (x^(d-1), x^(d-2) y, ..., y^(d-1))`.
pub fn cofactor_vector(x: &Rational, y: &Rational, d: usize) -> Vec<Rational> {
    (0..d).map(|k| pow(x, d - 1 - k) * pow(y, k)).collect()
}

/// Row `(i, j)`: `c(q_i - q_j)` in block `i`, its negative in block `j`.
pub fn cofactor(g: &Graph, q: &PointConfig, d: usize) -> Result<RigidityMatrix, BuildError> {
    if q.dim() != 2 {
        return Err(BuildError::NotPlanar(q.dim()));
    }
    if d == 0 {
        return Err(BuildError::ZeroDimension);
    }
    check_points(g, q)?;
    let note = format!("degree={}", d - 1);
    RigidityMatrix::assemble(g.edge_list(), g.n(), d, Builder::Cofactor, note, |e, bi, bj| {
        let (a, b) = (q.vertex(e.u()), q.vertex(e.v()));
        if a == b {
            return Err(BuildError::CoincidentPoints(e));
        }
        let c = cofactor_vector(&(&a[0] - &b[0]), &(&a[1] - &b[1]), d);
        for (k, x) in c.into_iter().enumerate() {
            bj[k] = -x.clone();
            bi[k] = x;
        }
        Ok(())
    })
}

/// A basis of the polynomials of degree `< d`, chosen per vertex. The
/// `BarJoint` and `Cofactor` families depend on the vertex's own parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisChoice {
    /// `(1, t, ..., t^(d-1))`.
    Monomial,
    /// `((s^k - t^k) / (s - t))_{k=1..d}` for own parameter `s`.
    BarJoint,
    /// `((s + t)^(k-1))_{k=1..d}` for own parameter `s`.
    Cofactor,
    /// `d x d` coefficients, row `k` holding basis polynomial `k` in the
    /// monomial basis (column `m` is the coefficient of `t^m`).
    Custom(Matrix),
}

impl BasisChoice {
    /// Evaluates the basis at `t`; `own` is the vertex's parameter.
    pub fn evaluate(&self, own: &Rational, t: &Rational, d: usize) -> Vec<Rational> {
        match self {
            BasisChoice::Monomial => (0..d).map(|k| pow(t, k)).collect(),
            BasisChoice::BarJoint => {
                if own == t {
                    // limit of the difference quotient
                    (1..=d).map(|k| Rational::from_integer(k.into()) * pow(own, k - 1)).collect()
                } else {
                    let gap = own - t;
                    (1..=d).map(|k| (pow(own, k) - pow(t, k)) / &gap).collect()
                }
            }
            BasisChoice::Cofactor => {
                let s = own + t;
                (0..d).map(|k| pow(&s, k)).collect()
            }
            BasisChoice::Custom(coeffs) => (0..d)
                .map(|k| {
                    coeffs.row(k).iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
                })
                .collect(),
        }
    }

    /// Coefficient matrix in the monomial basis (rows = basis polynomials).
    pub fn coefficients(&self, own: &Rational, d: usize) -> Matrix {
        let mut m = Matrix::zeros(d, d);
        match self {
            BasisChoice::Monomial => return Matrix::identity(d),
            BasisChoice::BarJoint => {
                // (s^k - t^k)/(s - t) = sum_{m<k} s^(k-1-m) t^m
                for k in 1..=d {
                    for e in 0..k {
                        m.set(k - 1, e, pow(own, k - 1 - e));
                    }
                }
            }
            BasisChoice::Cofactor => {
                for k in 0..d {
                    let mut binom = Rational::one();
                    for e in 0..=k {
                        m.set(k, e, &binom * pow(own, k - e));
                        binom = binom * Rational::from_integer((k - e).into()) / Rational::from_integer((e + 1).into());
                    }
                }
            }
            BasisChoice::Custom(c) => return c.clone(),
        }
        m
    }

    fn label(&self) -> &'static str {
        match self {
            BasisChoice::Monomial => "monomial",
            BasisChoice::BarJoint => "bar_joint",
            BasisChoice::Cofactor => "cofactor",
            BasisChoice::Custom(_) => "custom",
        }
    }
}

/// Row `(i, j)`: `F^i(t_j)` in block `i`, `-F^j(t_i)` in block `j`.
/// `bases` holds one choice per vertex, or a single choice used for all.
pub fn polynomial_matrix(g: &Graph, params: &Params, d: usize, bases: &[BasisChoice]) -> Result<RigidityMatrix, BuildError> {
    if d == 0 {
        return Err(BuildError::ZeroDimension);
    }
    if params.len() < g.n() {
        return Err(BuildError::MissingParameter(params.len() + 1));
    }
    if bases.len() != 1 && bases.len() != g.n() {
        return Err(BuildError::BasisCount { expected: g.n(), found: bases.len() });
    }
    let basis = |v: usize| if bases.len() == 1 { &bases[0] } else { &bases[v - 1] };
    for v in 1..=g.n() {
        if let BasisChoice::Custom(c) = basis(v) {
            if c.rows() != d || c.cols() != d || !c.is_invertible() {
                return Err(BuildError::SingularBasis(v, d));
            }
        }
    }
    let note = if bases.len() == 1 { format!("bases={}", bases[0].label()) } else { String::from("bases=mixed") };
    RigidityMatrix::assemble(g.edge_list(), g.n(), d, Builder::Polynomial, note, |e, bi, bj| {
        let (i, j) = (e.u(), e.v());
        let fi = basis(i).evaluate(params.of(i), params.of(j), d);
        let fj = basis(j).evaluate(params.of(j), params.of(i), d);
        for k in 0..d {
            bi[k] = fi[k].clone();
            bj[k] = -fj[k].clone();
        }
        Ok(())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AffineVariant {
    /// `F^i(x) = (x - p_i, 1)` on `X`, `(x - p_j, -1)` on `Y`.
    Lifted,
    /// `F^i(x) = (x, 1)` everywhere.
    Homogeneous,
}

/// Affine rigidity matrix of a bipartite framework with points in
/// `R^(d-1)`. Each row is oriented from its `X` endpoint `i` to its `Y`
/// endpoint `j`: `F^i(p_j)` in block `i`, `-F^j(p_i)` in block `j`.
pub fn affine_rigidity(g: &Graph, p: &PointConfig, variant: AffineVariant) -> Result<RigidityMatrix, BuildError> {
    let bip = g.bipartition().ok_or(BuildError::MissingBipartition)?;
    check_points(g, p)?;
    let d = p.dim() + 1;
    let eval = |owner: usize, x: &[Rational]| -> Vec<Rational> {
        let mut out: Vec<Rational> = match variant {
            AffineVariant::Lifted => x.iter().zip(p.vertex(owner)).map(|(a, b)| a - b).collect(),
            AffineVariant::Homogeneous => x.to_vec(),
        };
        let last = match variant {
            AffineVariant::Lifted if !bip.in_x(owner) => -Rational::one(),
            _ => Rational::one(),
        };
        out.push(last);
        out
    };
    let builder = match variant {
        AffineVariant::Lifted => Builder::AffineLifted,
        AffineVariant::Homogeneous => Builder::AffineHomogeneous,
    };
    RigidityMatrix::assemble(g.edge_list(), g.n(), d, builder, String::new(), |e, bu, bv| {
        if !bip.crosses(e) {
            return Err(BuildError::NotBipartite(e));
        }
        let (x, y) = if bip.in_x(e.u()) { (e.u(), e.v()) } else { (e.v(), e.u()) };
        let fx = eval(x, p.vertex(y));
        let fy: Vec<Rational> = eval(y, p.vertex(x)).into_iter().map(|v| -v).collect();
        let (bx, by) = if x == e.u() { (bu, bv) } else { (bv, bu) };
        bx.clone_from_slice(&fx);
        by.clone_from_slice(&fy);
        Ok(())
    })
}

/// Values `sum_l (a_{l,i} b_{l,j} - a_{l,j} b_{l,i})` for `i < j`, lexicographic.
pub fn skew_parametrization(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(a.iter().zip(b).map(|(al, bl)| &al[i] * &bl[j] - &al[j] * &bl[i]).sum());
        }
    }
    out
}

/// `p_i = (b_{1,i}, -a_{1,i}, ..., b_{k,i}, -a_{k,i})`.
pub fn skew_points(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<PointConfig, BuildError> {
    let (k, n) = check_factors(a, b)?;
    let points = (0..n)
        .map(|i| (0..k).flat_map(|l| [b[l][i].clone(), -a[l][i].clone()]).collect())
        .collect();
    Ok(PointConfig::new(2 * k, points)?)
}

fn check_factors(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<(usize, usize), BuildError> {
    let k = a.len();
    let n = a.first().map_or(0, Vec::len);
    if k == 0 || b.len() != k || a.iter().chain(b).any(|v| v.len() != n) {
        return Err(BuildError::FactorShape { k, n });
    }
    Ok((k, n))
}

/// Jacobian of [`skew_parametrization`] at `(a_1, b_1, ..., a_k, b_k)`.
///
/// Columns are grouped per vertex `i` as
/// `(d/da_{1,i}, d/db_{1,i}, ..., d/da_{k,i}, d/db_{k,i})`. Each column is the
/// unit-step difference quotient of the parametrization, which is exact
/// because every coordinate is affine in each single variable.
pub fn skew_jacobian(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<RigidityMatrix, BuildError> {
    let (k, n) = check_factors(a, b)?;
    let base = skew_parametrization(a, b);
    let g = Graph::complete(n);
    let mut m = Matrix::zeros(base.len(), 2 * k * n);
    for i in 0..n {
        for l in 0..k {
            for (slot, which_b) in [(2 * l, false), (2 * l + 1, true)] {
                let (mut a2, mut b2) = (a.to_vec(), b.to_vec());
                let target = if which_b { &mut b2[l][i] } else { &mut a2[l][i] };
                *target += Rational::one();
                let bumped = skew_parametrization(&a2, &b2);
                let col = i * 2 * k + slot;
                for (r, (hi, lo)) in bumped.iter().zip(&base).enumerate() {
                    m.set(r, col, hi - lo);
                }
            }
        }
    }
    let mut rm = RigidityMatrix::from_parts(m, g.edge_list(), n, 2 * k, Builder::SkewJacobian)?;
    rm.note = format!("k={k}");
    Ok(rm)
}

/// Row `i`: `(1, x_1..x_d, x_a x_b for a <= b)` evaluated at point `i`.
pub fn quadric_matrix(p: &PointConfig) -> Matrix {
    let d = p.dim();
    let rows = p
        .points()
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity((d + 1) * (d + 2) / 2);
            row.push(Rational::one());
            row.extend(x.iter().cloned());
            for a in 0..d {
                for b in a..d {
                    row.push(&x[a] * &x[b]);
                }
            }
            row
        })
        .collect();
    Matrix::from_rows_with_cols(rows, (d + 1) * (d + 2) / 2).expect("uniform row length")
}

/// Dimension of the space of polynomials of degree at most 2 vanishing on `p`.
pub fn quadric_count(p: &PointConfig) -> usize {
    let m = quadric_matrix(p);
    m.cols() - m.rank()
}
