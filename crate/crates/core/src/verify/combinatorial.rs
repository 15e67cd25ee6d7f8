//! Orientation criterion for independence in the two-dimensional
//! hyperconnectivity matroid.
//!
//! An alternating closed trail in an orientation is a closed sequence of
//! distinct arcs in which consecutive arcs share their head or their tail,
//! the two kinds alternating around the trail. Splitting every vertex `v`
//! into `v_out` and `v_in` and turning each arc `u -> v` into the edge
//! `u_out v_in`, these trails are exactly the cycles of the split graph.

use alloc::vec::Vec;

use super::{precondition, VerifyError};
use crate::graph::Graph;

pub const COMBINATORIAL_MAX_EDGES: usize = 20;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// False if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// Whether the orientation given by `arcs` (pairs `tail, head`, 1-based on
/// `n` vertices) contains an alternating closed trail.
pub fn has_alternating_closed_trail(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut uf = UnionFind::new(2 * (n + 1));
    arcs.iter().any(|&(tail, head)| !uf.union(2 * tail, 2 * head + 1))
}

fn is_acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = alloc::vec![0usize; n + 1];
    let mut out: Vec<Vec<usize>> = alloc::vec![Vec::new(); n + 1];
    for &(t, h) in arcs {
        indeg[h] += 1;
        out[t].push(h);
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

/// `g` admits an acyclic orientation without alternating closed trails.
pub fn h2_independent_combinatorial(g: &Graph) -> Result<bool, VerifyError> {
    let edges = g.edge_list();
    let m = edges.len();
    if m > COMBINATORIAL_MAX_EDGES {
        return Err(precondition("at most 20 edges"));
    }
    // a graph with more than 2n - 3 edges cannot pass; skip the search
    if g.n() >= 2 && m > 2 * g.n() - 3 {
        return Ok(false);
    }
    let mut arcs = Vec::with_capacity(m);
    for mask in 0u32..1 << m {
        arcs.clear();
        arcs.extend(edges.iter().enumerate().map(|(k, e)| if mask >> k & 1 == 0 { (e.u(), e.v()) } else { (e.v(), e.u()) }));
        if is_acyclic(g.n(), &arcs) && !has_alternating_closed_trail(g.n(), &arcs) {
            return Ok(true);
        }
    }
    Ok(m == 0)
}
