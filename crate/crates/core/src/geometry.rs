//! Point configurations: curve embeddings, random generic samples, bipartite
//! lifts and general-position predicates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Bipartition;
use crate::linalg::{int, Matrix, Rational};

/// Coordinate bound used for generic samples unless a caller overrides it.
pub const DEFAULT_BOUND: i64 = 1 << 20;

/// Resampling budget for [`random_generic`].
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("parameters {0} and {1} coincide")]
    DuplicateParameter(usize, usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    WrongLength { index: usize, found: usize, expected: usize },
    #[error("bipartition covers {found} vertices but the configuration has {expected}")]
    BipartitionMismatch { expected: usize, found: usize },
    #[error("bound {bound} too small for {n} distinct values")]
    BoundTooSmall { bound: i64, n: usize },
    #[error("no sample in general position after {0} attempts")]
    SamplingExhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    t: Vec<Rational>,
}

impl Params {
    pub fn new(t: Vec<Rational>) -> Result<Self, GeometryError> {
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                if t[i] == t[j] {
                    return Err(GeometryError::DuplicateParameter(i + 1, j + 1));
                }
            }
        }
        Ok(Params { t })
    }

    pub fn from_ints(t: &[i64]) -> Result<Self, GeometryError> {
        Self::new(t.iter().map(|&x| int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.t
    }

    /// Parameter of 1-based vertex `v`.
    pub fn of(&self, v: usize) -> &Rational {
        &self.t[v - 1]
    }
}

/// `n` labelled vectors of length `d`. Vertex `v` (1-based) owns entry `v - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfig {
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl PointConfig {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<Self, GeometryError> {
        if d == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        if let Some((index, p)) = points.iter().enumerate().find(|(_, p)| p.len() != d) {
            return Err(GeometryError::WrongLength { index, found: p.len(), expected: d });
        }
        Ok(PointConfig { d, points })
    }

    pub fn from_ints(d: usize, points: &[&[i64]]) -> Result<Self, GeometryError> {
        Self::new(d, points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    /// Coordinates of 1-based vertex `v`.
    pub fn vertex(&self, v: usize) -> &[Rational] {
        &self.points[v - 1]
    }

    pub fn has_distinct_points(&self) -> bool {
        let set: BTreeSet<&Vec<Rational>> = self.points.iter().collect();
        set.len() == self.points.len()
    }

    /// `d x n` matrix with the selected points (0-based indices) as columns.
    pub fn column_matrix(&self, indices: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.d, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            for (r, x) in self.points[i].iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    /// Dimension of the linear span of the selected points (0-based).
    pub fn span_dim(&self, indices: &[usize]) -> usize {
        self.column_matrix(indices).rank()
    }

    /// Drops the last coordinate.
    pub fn project_last(&self) -> Result<PointConfig, GeometryError> {
        PointConfig::new(self.d - 1, self.points.iter().map(|p| p[..self.d - 1].to_vec()).collect())
    }

    /// Applies the linear map `l` (acting on column vectors) to every point.
    pub fn transform(&self, l: &Matrix) -> PointConfig {
        let points = self
            .points
            .iter()
            .map(|p| (0..l.rows()).map(|r| l.row(r).iter().zip(p).map(|(a, x)| a * x).sum()).collect())
            .collect();
        PointConfig { d: l.rows(), points }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    /// Every `min(n, d)` points are linearly independent.
    Linear,
    /// Every `min(n, d + 1)` points are affinely independent.
    Affine,
}

fn powers(t: &Rational, from: usize, to: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(to - from + 1);
    let mut acc = crate::linalg::pow(t, from);
    for _ in from..=to {
        out.push(acc.clone());
        acc *= t;
    }
    out
}

/// Points `(t, t^2, ..., t^d)`.
pub fn moment_curve(d: usize, params: &Params) -> Result<PointConfig, GeometryError> {
    if d == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    Ok(PointConfig { d, points: params.values().iter().map(|t| powers(t, 1, d)).collect() })
}

/// Points `(t, t^2)`.
pub fn parabola(params: &Params) -> Result<PointConfig, GeometryError> {
    moment_curve(2, params)
}

/// Vectors `(1, t, ..., t^(d-1))`.
pub fn monomial_vectors(d: usize, params: &Params) -> Result<PointConfig, GeometryError> {
    if d == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    Ok(PointConfig { d, points: params.values().iter().map(|t| powers(t, 0, d - 1)).collect() })
}

/// Integer points uniform in `[-bound, bound]^d`, resampled until they are in
/// general position for `mode`.
pub fn random_generic(d: usize, n: usize, seed: u64, bound: i64, mode: Position) -> Result<PointConfig, GeometryError> {
    if d == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    if bound < 1 {
        return Err(GeometryError::BoundTooSmall { bound, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let points =
            (0..n).map(|_| (0..d).map(|_| int(rng.gen_range(-bound..=bound))).collect()).collect();
        let p = PointConfig { d, points };
        if general_position(&p, mode) {
            return Ok(p);
        }
    }
    Err(GeometryError::SamplingExhausted(MAX_ATTEMPTS))
}

/// `n` distinct integers uniform in `[-bound, bound]`.
pub fn random_params(n: usize, seed: u64, bound: i64) -> Result<Params, GeometryError> {
    if bound < 0 || (n > 0 && (bound as u64) < n as u64) {
        return Err(GeometryError::BoundTooSmall { bound, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut t = Vec::with_capacity(n);
    let mut attempts = 0;
    while t.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * n.max(1) {
            return Err(GeometryError::SamplingExhausted(attempts));
        }
        let x = rng.gen_range(-bound..=bound);
        if seen.insert(x) {
            t.push(int(x));
        }
    }
    Ok(Params { t })
}

/// Appends 0 to the points of `X` and 1 to the points of `Y`.
pub fn lift_bipartite(p: &PointConfig, bip: &Bipartition) -> Result<PointConfig, GeometryError> {
    if bip.n() != p.len() {
        return Err(GeometryError::BipartitionMismatch { expected: p.len(), found: bip.n() });
    }
    let points = p
        .points
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut q = x.clone();
            q.push(if bip.in_x(i + 1) { Rational::zero() } else { Rational::one() });
            q
        })
        .collect();
    Ok(PointConfig { d: p.d + 1, points })
}

/// Appends 1 to every point.
pub fn homogenize(p: &PointConfig) -> PointConfig {
    let points = p
        .points
        .iter()
        .map(|x| {
            let mut q = x.clone();
            q.push(Rational::one());
            q
        })
        .collect();
    PointConfig { d: p.d + 1, points }
}

/// Brute force over all subsets of the critical size.
pub fn general_position(p: &PointConfig, mode: Position) -> bool {
    let n = p.len();
    match mode {
        Position::Linear => {
            let k = n.min(p.d);
            all_subsets(n, k, |s| p.span_dim(s) == k)
        }
        Position::Affine => {
            let h = homogenize(p);
            let k = n.min(p.d + 1);
            all_subsets(n, k, |s| h.span_dim(s) == k)
        }
    }
}

/// Runs `f` on every `k`-subset of `0..n` until it returns false.
fn all_subsets(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k == 0 {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
