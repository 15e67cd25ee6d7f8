//! Linear matroids on the rows of edge-labelled rigidity matrices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, RngCore};
use serde::Serialize;
use spin::Mutex;
use thiserror::Error;

use crate::builders::{self, BasisChoice, BuildError, RigidityMatrix};
use crate::geometry::{self, GeometryError, Position, DEFAULT_BOUND};
use crate::graph::{Edge, Graph};
use crate::linalg::Matrix;
use crate::seed;

/// Largest ground set accepted by exhaustive enumeration.
pub const EXHAUSTIVE_MAX: usize = 20;

/// Ground sizes up to this use exhaustive comparison when the caller does not choose.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;

pub const DEFAULT_TRIALS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error("edge {0} is not in the ground set")]
    UnknownEdge(Edge),
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("ground set of {0} elements is too large for exhaustive enumeration")]
    GroundTooLarge(usize),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Rank oracle over the rows of a matrix, one ground element per row.
#[derive(Debug)]
pub struct LinearMatroid {
    ground: Vec<Edge>,
    index: BTreeMap<Edge, usize>,
    matrix: Matrix,
    n: usize,
    d: usize,
    rank: usize,
    // subset ranks keyed by bitmask; only used for grounds of at most 64 elements
    cache: Mutex<BTreeMap<u64, usize>>,
}

impl Clone for LinearMatroid {
    fn clone(&self) -> Self {
        LinearMatroid {
            ground: self.ground.clone(),
            index: self.index.clone(),
            matrix: self.matrix.clone(),
            n: self.n,
            d: self.d,
            rank: self.rank,
            cache: Mutex::new(self.cache.lock().clone()),
        }
    }
}

impl From<RigidityMatrix> for LinearMatroid {
    fn from(rm: RigidityMatrix) -> Self {
        LinearMatroid::from_rows(rm.edges().to_vec(), rm.matrix().clone(), rm.n(), rm.d())
    }
}

impl From<&RigidityMatrix> for LinearMatroid {
    fn from(rm: &RigidityMatrix) -> Self {
        LinearMatroid::from_rows(rm.edges().to_vec(), rm.matrix().clone(), rm.n(), rm.d())
    }
}

impl LinearMatroid {
    /// `ground[r]` labels row `r` of `matrix`. Labels must be distinct.
    pub fn from_rows(ground: Vec<Edge>, matrix: Matrix, n: usize, d: usize) -> Self {
        assert_eq!(ground.len(), matrix.rows(), "one label per row");
        let index: BTreeMap<Edge, usize> = ground.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        assert_eq!(index.len(), ground.len(), "row labels must be distinct");
        let rank = matrix.rank();
        LinearMatroid { ground, index, matrix, n, d, rank, cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn ground(&self) -> &[Edge] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `n d - (d+1 choose 2)` when `n >= d`.
    pub fn rank_bound(&self) -> Option<usize> {
        abstract_rank(self.n, self.d)
    }

    pub fn indices_of(&self, s: &[Edge]) -> Result<Vec<usize>, MatroidError> {
        s.iter().map(|e| self.index.get(e).copied().ok_or(MatroidError::UnknownEdge(*e))).collect()
    }

    pub fn edges_of(&self, idx: &[usize]) -> Vec<Edge> {
        idx.iter().map(|&i| self.ground[i]).collect()
    }

    pub fn rank_of(&self, s: &[Edge]) -> Result<usize, MatroidError> {
        Ok(self.rank_of_indices(&self.indices_of(s)?))
    }

    pub fn corank_of(&self, s: &[Edge]) -> Result<usize, MatroidError> {
        Ok(s.len() - self.rank_of(s)?)
    }

    /// Rank of a set of row indices; duplicates are ignored.
    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        if self.ground.len() <= 64 {
            let mask = idx.iter().fold(0u64, |m, &i| m | (1 << i));
            return self.rank_of_mask(mask);
        }
        let mut rows = idx.to_vec();
        rows.sort_unstable();
        rows.dedup();
        self.matrix.select_rows(&rows).rank()
    }

    /// Rank of the rows selected by `mask`; grounds of at most 64 elements.
    pub fn rank_of_mask(&self, mask: u64) -> usize {
        if let Some(&r) = self.cache.lock().get(&mask) {
            return r;
        }
        let rows: Vec<usize> = (0..self.ground.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let r = self.matrix.select_rows(&rows).rank();
        self.cache.lock().insert(mask, r);
        r
    }

    pub fn is_independent(&self, s: &[Edge]) -> Result<bool, MatroidError> {
        Ok(self.rank_of(s)? == s.len())
    }

    /// Dependent, and every single deletion is independent.
    pub fn is_circuit(&self, s: &[Edge]) -> Result<bool, MatroidError> {
        let idx = self.indices_of(s)?;
        Ok(self.is_circuit_indices(&idx))
    }

    fn is_circuit_indices(&self, idx: &[usize]) -> bool {
        if idx.is_empty() || self.rank_of_indices(idx) == idx.len() {
            return false;
        }
        (0..idx.len()).all(|skip| {
            let rest: Vec<usize> = idx.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
            self.rank_of_indices(&rest) == rest.len()
        })
    }

    pub fn is_spanning(&self, s: &[Edge]) -> Result<bool, MatroidError> {
        Ok(self.rank_of(s)? == self.rank)
    }

    pub fn is_basis(&self, s: &[Edge]) -> Result<bool, MatroidError> {
        Ok(self.is_independent(s)? && self.is_spanning(s)?)
    }

    /// Greedy maximal independent subset of `idx`, in the given order.
    pub fn greedy_basis(&self, idx: &[usize]) -> Vec<usize> {
        let mut basis = Vec::new();
        for &i in idx {
            basis.push(i);
            if self.rank_of_indices(&basis) < basis.len() {
                basis.pop();
            }
        }
        basis
    }

    /// Restriction to a subset of the ground set, keeping its order.
    pub fn restrict(&self, s: &[Edge]) -> Result<LinearMatroid, MatroidError> {
        let idx = self.indices_of(s)?;
        Ok(LinearMatroid::from_rows(s.to_vec(), self.matrix.select_rows(&idx), self.n, self.d))
    }
}

/// `n d - (d+1 choose 2)`, the rank of an abstract rigidity matroid, for `n >= d`.
pub fn abstract_rank(n: usize, d: usize) -> Option<usize> {
    (n >= d).then(|| n * d - d * (d + 1) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum CompareMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

impl CompareMode {
    /// Exhaustive when the ground has at most `limit` elements, sampled otherwise.
    pub fn for_ground(len: usize, limit: usize, count: usize, seed: u64) -> Self {
        if len <= limit.min(EXHAUSTIVE_MAX) {
            CompareMode::Exhaustive
        } else {
            CompareMode::Sampled { count, seed }
        }
    }

    pub fn is_probabilistic(&self) -> bool {
        matches!(self, CompareMode::Sampled { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Comparison {
    Equal { subsets_checked: usize },
    Differ { subset: Vec<Edge>, left_rank: usize, right_rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Freeness {
    Freer { subsets_checked: usize },
    /// Independent in the matroid claimed less free, dependent in the other.
    Witness { subset: Vec<Edge> },
}

/// Visits subsets (as sorted index lists) in order of increasing size, or a
/// random sample, until `f` returns `false`. Returns the number visited.
fn for_each_subset(len: usize, mode: CompareMode, mut f: impl FnMut(&[usize]) -> bool) -> Result<usize, MatroidError> {
    let mut visited = 0;
    match mode {
        CompareMode::Exhaustive => {
            if len > EXHAUSTIVE_MAX {
                return Err(MatroidError::GroundTooLarge(len));
            }
            let mut idx = Vec::with_capacity(len);
            for size in 0..=len {
                // Gosper's hack over masks of fixed popcount
                let mut mask: u64 = (1u64 << size) - 1;
                let end = 1u64 << len;
                while mask < end {
                    idx.clear();
                    idx.extend((0..len).filter(|&i| mask >> i & 1 == 1));
                    visited += 1;
                    if !f(&idx) {
                        return Ok(visited);
                    }
                    if mask == 0 {
                        break;
                    }
                    let c = mask & mask.wrapping_neg();
                    let r = mask + c;
                    mask = (((r ^ mask) >> 2) / c) | r;
                }
            }
        }
        CompareMode::Sampled { count, seed } => {
            let mut rng = seed::stream(seed, 0);
            let mut idx = Vec::with_capacity(len);
            for _ in 0..count {
                idx.clear();
                idx.extend((0..len).filter(|_| rng.gen_bool(0.5)));
                visited += 1;
                if !f(&idx) {
                    return Ok(visited);
                }
            }
        }
    }
    Ok(visited)
}

pub fn matroids_equal(a: &LinearMatroid, b: &LinearMatroid, mode: CompareMode) -> Result<Comparison, MatroidError> {
    if a.ground != b.ground {
        return Err(MatroidError::GroundMismatch);
    }
    let mut witness = None;
    let checked = for_each_subset(a.len(), mode, |idx| {
        let (ra, rb) = (a.rank_of_indices(idx), b.rank_of_indices(idx));
        if ra != rb {
            witness = Some(Comparison::Differ { subset: a.edges_of(idx), left_rank: ra, right_rank: rb });
            return false;
        }
        true
    })?;
    Ok(witness.unwrap_or(Comparison::Equal { subsets_checked: checked }))
}

/// Whether `big` is freer than `small`: `rank_small <= rank_big` on every
/// visited subset.
pub fn freer_than(small: &LinearMatroid, big: &LinearMatroid, mode: CompareMode) -> Result<Freeness, MatroidError> {
    if small.ground != big.ground {
        return Err(MatroidError::GroundMismatch);
    }
    let mut witness = None;
    let checked = for_each_subset(small.len(), mode, |idx| {
        if small.rank_of_indices(idx) > big.rank_of_indices(idx) {
            // a basis of idx in `small` is dependent in `big`
            let basis = small.greedy_basis(idx);
            witness = Some(Freeness::Witness { subset: small.edges_of(&basis) });
            return false;
        }
        true
    })?;
    Ok(witness.unwrap_or(Freeness::Freer { subsets_checked: checked }))
}

/// All circuits with at most `max_size` elements, by increasing size.
pub fn circuits_up_to(m: &LinearMatroid, max_size: usize) -> Result<Vec<Vec<Edge>>, MatroidError> {
    if m.len() > EXHAUSTIVE_MAX {
        return Err(MatroidError::GroundTooLarge(m.len()));
    }
    let mut found: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for_each_subset(m.len(), CompareMode::Exhaustive, |idx| {
        if idx.len() > max_size {
            return false;
        }
        let mask = idx.iter().fold(0u64, |acc, &i| acc | (1 << i));
        if found.iter().any(|&c| c & !mask == 0) {
            return true;
        }
        if m.is_circuit_indices(idx) {
            found.push(mask);
            out.push(m.edges_of(idx));
        }
        true
    })?;
    Ok(out)
}

/// Polynomial basis family, applied uniformly to every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisFamily {
    Monomial,
    BarJoint,
    Cofactor,
}

impl BasisFamily {
    pub fn choice(self) -> BasisChoice {
        match self {
            BasisFamily::Monomial => BasisChoice::Monomial,
            BasisFamily::BarJoint => BasisChoice::BarJoint,
            BasisFamily::Cofactor => BasisChoice::Cofactor,
        }
    }
}

/// A rigidity theory together with how its generic instances are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BuilderKind {
    /// Points in affine general position in `R^d`.
    BarJoint,
    /// Points in linear general position in `R^d`.
    Hyperconnectivity,
    /// Planar points in affine general position, cofactor degree `d - 1`.
    Cofactor,
    /// Distinct integer parameters.
    Polynomial(BasisFamily),
}

impl BuilderKind {
    pub fn label(self) -> &'static str {
        match self {
            BuilderKind::BarJoint => "bar_joint",
            BuilderKind::Hyperconnectivity => "hyper",
            BuilderKind::Cofactor => "cofactor",
            BuilderKind::Polynomial(BasisFamily::Monomial) => "poly_monomial",
            BuilderKind::Polynomial(BasisFamily::BarJoint) => "poly_barjoint",
            BuilderKind::Polynomial(BasisFamily::Cofactor) => "poly_cofactor",
        }
    }

    /// The rigidity matrix of `g` at the sample drawn from `seed`.
    pub fn sample(self, g: &Graph, d: usize, seed: u64, bound: i64) -> Result<RigidityMatrix, MatroidError> {
        let n = g.n();
        Ok(match self {
            BuilderKind::BarJoint => builders::bar_joint(g, &geometry::random_generic(d, n, seed, bound, Position::Affine)?)?,
            BuilderKind::Hyperconnectivity => {
                builders::hyperconnectivity(g, &geometry::random_generic(d, n, seed, bound, Position::Linear)?)?
            }
            BuilderKind::Cofactor => builders::cofactor(g, &geometry::random_generic(2, n, seed, bound, Position::Affine)?, d)?,
            BuilderKind::Polynomial(family) => {
                builders::polynomial_matrix(g, &geometry::random_params(n, seed, bound)?, d, &[family.choice()])?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericRank {
    pub rank: usize,
    pub trial_ranks: Vec<usize>,
    pub trial_seeds: Vec<u64>,
    pub best_seed: u64,
}

impl GenericRank {
    /// Trials returned different ranks, so at least one sample was degenerate.
    pub fn disagreement(&self) -> bool {
        self.trial_ranks.iter().any(|&r| r != self.rank)
    }
}

/// Maximum rank of `g`'s edge set over `trials` sampled configurations.
/// Trial `i` uses the sub-seed `seed::derive(seed, i)`.
pub fn generic_rank(kind: BuilderKind, g: &Graph, d: usize, trials: usize, seed: u64) -> Result<GenericRank, MatroidError> {
    if trials == 0 {
        return Err(MatroidError::NoTrials);
    }
    let mut out = GenericRank { rank: 0, trial_ranks: Vec::new(), trial_seeds: Vec::new(), best_seed: 0 };
    for trial in 0..trials {
        let s = seed::derive(seed, trial as u64);
        let r = kind.sample(g, d, s, DEFAULT_BOUND)?.rank();
        if trial == 0 || r > out.rank {
            out.rank = r;
            out.best_seed = s;
        }
        out.trial_ranks.push(r);
        out.trial_seeds.push(s);
    }
    Ok(out)
}

/// Matroid of a sampled generic instance.
pub fn generic_matroid(kind: BuilderKind, g: &Graph, d: usize, seed: u64) -> Result<LinearMatroid, MatroidError> {
    Ok(kind.sample(g, d, seed, DEFAULT_BOUND)?.into())
}

/// Random subset of `0..len`, each element kept with probability 1/2.
pub fn random_subset<R: RngCore>(len: usize, rng: &mut R) -> Vec<usize> {
    (0..len).filter(|_| rng.gen_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{bar_joint, hyperconnectivity};
    use crate::geometry::{monomial_vectors, moment_curve, random_generic, Params};

    fn generic(kind: BuilderKind, g: &Graph, d: usize) -> LinearMatroid {
        generic_matroid(kind, g, d, 2024).unwrap()
    }

    #[test]
    fn empty_subset() {
        let m = generic(BuilderKind::BarJoint, &Graph::complete(4), 2);
        assert_eq!(m.rank_of(&[]).unwrap(), 0);
        assert!(m.is_independent(&[]).unwrap());
        assert!(!m.is_circuit(&[]).unwrap());
        assert_eq!(m.rank_of(&[Edge::new(1, 5)]), Err(MatroidError::UnknownEdge(Edge::new(1, 5))));
    }

    #[test]
    fn bipartite_ranks_in_h3() {
        let k44 = Graph::complete_bipartite(4, 4);
        let m = generic(BuilderKind::Hyperconnectivity, &k44, 3);
        let all = k44.edge_list();
        assert_eq!(m.rank_of(&all).unwrap(), 15);
        assert_eq!(m.corank_of(&all).unwrap(), 1);
        let k25 = Graph::complete_bipartite(2, 5);
        let m = generic(BuilderKind::Hyperconnectivity, &k25, 3);
        assert_eq!(m.rank_of(&k25.edge_list()).unwrap(), 10);
        assert_eq!(m.corank_of(&k25.edge_list()).unwrap(), 0);
    }

    #[test]
    fn predicates_on_named_graphs() {
        let k4 = Graph::complete(4);
        assert!(generic(BuilderKind::BarJoint, &k4, 2).is_circuit(&k4.edge_list()).unwrap());
        let k33 = Graph::complete_bipartite(3, 3);
        let r = generic(BuilderKind::BarJoint, &Graph::complete(6), 2);
        assert!(r.is_basis(&k33.edge_list()).unwrap());
        let h = generic(BuilderKind::Hyperconnectivity, &k33, 2);
        assert!(h.is_circuit(&k33.edge_list()).unwrap());
        assert!(!h.is_spanning(&k33.edge_list()[..7]).unwrap());
    }

    #[test]
    fn generic_ranks() {
        let r = generic_rank(BuilderKind::BarJoint, &Graph::complete(5), 3, 3, 1).unwrap();
        assert_eq!(r.rank, 9);
        assert!(!r.disagreement());
        let k46 = Graph::complete_bipartite(4, 6);
        assert_eq!(generic_rank(BuilderKind::Polynomial(BasisFamily::BarJoint), &k46, 3, 3, 1).unwrap().rank, 21);
        assert_eq!(generic_rank(BuilderKind::BarJoint, &k46, 3, 3, 1).unwrap().rank, 24);
        assert_eq!(generic_rank(BuilderKind::BarJoint, &k46, 3, 0, 1), Err(MatroidError::NoTrials));
    }

    #[test]
    fn generic_rank_monotone_in_trials() {
        let g = Graph::complete_bipartite(3, 4);
        let mut prev = 0;
        for trials in 1..=4 {
            let r = generic_rank(BuilderKind::Hyperconnectivity, &g, 3, trials, 9).unwrap().rank;
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn moment_curve_matroids_equal_on_k4() {
        let t = Params::from_ints(&[1, 2, 3, 4]).unwrap();
        let g = Graph::complete(4);
        let r: LinearMatroid = bar_joint(&g, &moment_curve(2, &t).unwrap()).unwrap().into();
        let h: LinearMatroid = hyperconnectivity(&g, &monomial_vectors(2, &t).unwrap()).unwrap().into();
        assert!(matches!(matroids_equal(&r, &r, CompareMode::Exhaustive).unwrap(), Comparison::Equal { .. }));
        assert_eq!(matroids_equal(&r, &h, CompareMode::Exhaustive).unwrap(), Comparison::Equal { subsets_checked: 64 });
    }

    #[test]
    fn k33_separates_r2_and_h2() {
        let g = Graph::complete_bipartite(3, 3);
        let r = generic(BuilderKind::BarJoint, &g, 2);
        let h = generic(BuilderKind::Hyperconnectivity, &g, 2);
        let all = g.edge_list();
        assert_eq!(
            matroids_equal(&r, &h, CompareMode::Exhaustive).unwrap(),
            Comparison::Differ { subset: all.clone(), left_rank: 9, right_rank: 8 }
        );
        assert!(matches!(freer_than(&h, &r, CompareMode::Exhaustive).unwrap(), Freeness::Freer { .. }));
        assert!(matches!(freer_than(&r, &r, CompareMode::Exhaustive).unwrap(), Freeness::Freer { .. }));
        assert_eq!(freer_than(&r, &h, CompareMode::Exhaustive).unwrap(), Freeness::Witness { subset: all });
    }

    #[test]
    fn sampled_mode_and_mismatch() {
        let g = Graph::complete(5);
        let a = generic(BuilderKind::BarJoint, &g, 2);
        let b = generic_matroid(BuilderKind::BarJoint, &g, 2, 77).unwrap();
        let mode = CompareMode::Sampled { count: 50, seed: 3 };
        assert_eq!(matroids_equal(&a, &b, mode).unwrap(), Comparison::Equal { subsets_checked: 50 });
        let other = generic(BuilderKind::BarJoint, &Graph::complete(4), 2);
        assert_eq!(matroids_equal(&a, &other, mode), Err(MatroidError::GroundMismatch));
        let big = generic(BuilderKind::BarJoint, &Graph::complete(7), 2);
        assert_eq!(matroids_equal(&big, &big, CompareMode::Exhaustive), Err(MatroidError::GroundTooLarge(21)));
    }

    #[test]
    fn circuit_inventories() {
        let k4 = Graph::complete(4);
        let h = generic(BuilderKind::Hyperconnectivity, &k4, 2);
        assert_eq!(circuits_up_to(&h, 6).unwrap(), [k4.edge_list()]);
        let k3 = Graph::complete(3);
        let r1 = generic(BuilderKind::BarJoint, &k3, 1);
        assert_eq!(circuits_up_to(&r1, 3).unwrap(), [k3.edge_list()]);
        let indep = generic(BuilderKind::BarJoint, &k3, 2);
        assert!(circuits_up_to(&indep, 3).unwrap().is_empty());
    }

    #[test]
    fn circuit_implies_corank_one() {
        let g = Graph::complete(5);
        let m = generic(BuilderKind::BarJoint, &g, 2);
        for c in circuits_up_to(&m, 10).unwrap() {
            assert_eq!(m.corank_of(&c).unwrap(), 1);
        }
    }

    #[test]
    fn rank_bound_holds() {
        for d in 1..=3 {
            for n in d..=6 {
                let g = Graph::complete(n);
                let p = random_generic(d, n, 5, DEFAULT_BOUND, Position::Affine).unwrap();
                let m: LinearMatroid = bar_joint(&g, &p).unwrap().into();
                assert!(m.rank() <= m.rank_bound().unwrap());
            }
        }
    }

    #[test]
    fn submodular_on_samples() {
        let g = Graph::complete(6);
        let m = generic(BuilderKind::Hyperconnectivity, &g, 2);
        let mut rng = seed::stream(5, 1);
        for _ in 0..40 {
            let a = random_subset(m.len(), &mut rng);
            let b = random_subset(m.len(), &mut rng);
            let union: Vec<usize> = {
                let mut u = a.clone();
                u.extend(&b);
                u.sort_unstable();
                u.dedup();
                u
            };
            let inter: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
            let (ra, rb) = (m.rank_of_indices(&a), m.rank_of_indices(&b));
            assert!(ra + rb >= m.rank_of_indices(&union) + m.rank_of_indices(&inter));
            assert!(m.rank_of_indices(&union) >= ra.max(rb));
        }
    }
}
