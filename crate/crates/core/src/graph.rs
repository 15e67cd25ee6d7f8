//! Simple graphs on the vertex set `1..=n`, the standard generators, and the
//! vertex / diamond split operations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

/// Unordered vertex pair `{u, v}` stored with `u < v`. Vertices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge(usize, usize);

impl Edge {
    /// Normalises the order of the endpoints. Panics on a loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b, "loop at vertex {a}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> usize {
        self.0
    }

    pub fn v(&self) -> usize {
        self.1
    }

    pub fn contains(&self, w: usize) -> bool {
        self.0 == w || self.1 == w
    }

    pub fn other(&self, w: usize) -> Option<usize> {
        if self.0 == w {
            Some(self.1)
        } else if self.1 == w {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("edge {0} listed twice")]
    DuplicateEdge(Edge),
    #[error("bipartition does not split 1..={0} into two disjoint covering sides")]
    InvalidBipartition(usize),
    #[error("edge {0} lies inside one side of the bipartition")]
    NotBipartite(Edge),
    #[error("A, B, C do not partition the neighbourhood of vertex {0}")]
    InvalidPartition(usize),
    #[error("|B| = {found}, the split requires |B| = {expected}")]
    WrongSplitSize { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    x: BTreeSet<usize>,
    y: BTreeSet<usize>,
}

impl Bipartition {
    /// `x` is one side; the other side is the rest of `1..=n`.
    pub fn new(n: usize, x: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        let x: BTreeSet<usize> = x.into_iter().collect();
        if x.iter().any(|&v| v == 0 || v > n) {
            return Err(GraphError::InvalidBipartition(n));
        }
        let y = (1..=n).filter(|v| !x.contains(v)).collect();
        Ok(Bipartition { x, y })
    }

    pub fn x(&self) -> &BTreeSet<usize> {
        &self.x
    }

    pub fn y(&self) -> &BTreeSet<usize> {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len() + self.y.len()
    }

    pub fn in_x(&self, v: usize) -> bool {
        self.x.contains(&v)
    }

    pub fn crosses(&self, e: Edge) -> bool {
        self.in_x(e.u()) != self.in_x(e.v())
    }

    /// Complete bipartite edge set between the two sides, lexicographic.
    pub fn complete_edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> =
            self.x.iter().flat_map(|&a| self.y.iter().map(move |&b| Edge::new(a, b))).collect();
        edges.sort();
        edges
    }
}

/// How the neighbours of the split vertex are distributed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NeighborPartition {
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub c: BTreeSet<usize>,
}

impl NeighborPartition {
    pub fn new(
        a: impl IntoIterator<Item = usize>,
        b: impl IntoIterator<Item = usize>,
        c: impl IntoIterator<Item = usize>,
    ) -> Self {
        NeighborPartition { a: a.into_iter().collect(), b: b.into_iter().collect(), c: c.into_iter().collect() }
    }

    /// Uniformly random `B` of the size `kind` needs, remaining neighbours
    /// tossed between `A` and `C`. `None` if `v` has too few neighbours.
    pub fn random<R: Rng + ?Sized>(g: &Graph, v: usize, kind: SplitKind, d: usize, rng: &mut R) -> Option<Self> {
        let mut nbrs: Vec<usize> = g.neighbors(v).into_iter().collect();
        let need = kind.b_size(d);
        if nbrs.len() < need {
            return None;
        }
        nbrs.shuffle(rng);
        let mut part = NeighborPartition::default();
        for (i, w) in nbrs.into_iter().enumerate() {
            if i < need {
                part.b.insert(w);
            } else if rng.gen_bool(0.5) {
                part.a.insert(w);
            } else {
                part.c.insert(w);
            }
        }
        Some(part)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    /// `|B| = d - 1`, new vertex joined to `B ∪ C ∪ {v}`.
    Vertex,
    /// `|B| = d`, new vertex joined to `B ∪ C` only.
    Diamond,
}

impl SplitKind {
    pub fn b_size(self, d: usize) -> usize {
        match self {
            SplitKind::Vertex => d.saturating_sub(1),
            SplitKind::Diamond => d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    bipartition: Option<Bipartition>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: BTreeSet::new(), bipartition: None }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<Edge, GraphError> {
        for v in [a, b] {
            if v == 0 || v > self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        if a == b {
            return Err(GraphError::Loop(a));
        }
        let e = Edge::new(a, b);
        if let Some(bip) = &self.bipartition {
            if !bip.crosses(e) {
                return Err(GraphError::NotBipartite(e));
            }
        }
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        Ok(e)
    }

    /// Attaches a bipartition; every edge must cross it.
    pub fn with_bipartition(mut self, bip: Bipartition) -> Result<Self, GraphError> {
        if bip.n() != self.n {
            return Err(GraphError::InvalidBipartition(self.n));
        }
        if let Some(&e) = self.edges.iter().find(|&&e| !bip.crosses(e)) {
            return Err(GraphError::NotBipartite(e));
        }
        self.bipartition = Some(bip);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    /// Edges in lexicographic order.
    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.iter().copied().collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn bipartition(&self) -> Option<&Bipartition> {
        self.bipartition.as_ref()
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        self.edges.iter().filter_map(|e| e.other(v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Same vertex set, only the listed edges (which must belong to `self`).
    pub fn spanning_subgraph(&self, edges: &[Edge]) -> Result<Graph, GraphError> {
        let mut g = Graph { n: self.n, edges: BTreeSet::new(), bipartition: self.bipartition.clone() };
        for &e in edges {
            if !self.edges.contains(&e) {
                return Err(GraphError::VertexOutOfRange { vertex: e.v(), n: self.n });
            }
            g.edges.insert(e);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for a in 1..=n {
            for b in a + 1..=n {
                g.edges.insert(Edge(a, b));
            }
        }
        g
    }

    /// `K_{n1,n2}` with `X = {1..=n1}`.
    pub fn complete_bipartite(n1: usize, n2: usize) -> Graph {
        let n = n1 + n2;
        let bip = Bipartition::new(n, 1..=n1).expect("sides in range");
        let edges = bip.complete_edges().into_iter().collect();
        Graph { n, edges, bipartition: Some(bip) }
    }

    /// Complete bipartite graph between the two sides of `bip`.
    pub fn complete_bipartite_on(bip: Bipartition) -> Graph {
        let edges = bip.complete_edges().into_iter().collect();
        Graph { n: bip.n(), edges, bipartition: Some(bip) }
    }

    /// Iterated cone: each of `k` apexes is joined to every vertex present
    /// when it is added, earlier apexes included.
    pub fn cone(&self, k: usize) -> Graph {
        let mut g = Graph { n: self.n, edges: self.edges.clone(), bipartition: None };
        if k == 0 {
            g.bipartition = self.bipartition.clone();
        }
        for _ in 0..k {
            let apex = g.n + 1;
            for w in 1..=g.n {
                g.edges.insert(Edge(w, apex));
            }
            g.n = apex;
        }
        g
    }

    fn check_partition(&self, v: usize, parts: &NeighborPartition) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        let nbrs = self.neighbors(v);
        let total = parts.a.len() + parts.b.len() + parts.c.len();
        let union: BTreeSet<usize> = parts.a.iter().chain(&parts.b).chain(&parts.c).copied().collect();
        if total != union.len() || union != nbrs {
            return Err(GraphError::InvalidPartition(v));
        }
        Ok(())
    }

    pub fn split(&self, kind: SplitKind, v: usize, parts: &NeighborPartition, d: usize) -> Result<Graph, GraphError> {
        match kind {
            SplitKind::Vertex => self.vertex_split(v, parts, d),
            SplitKind::Diamond => self.diamond_split(v, parts, d),
        }
    }

    /// Vertex `d`-split: drops `v w` for `w ∈ C` and adds vertex `n + 1`
    /// adjacent to `B ∪ C ∪ {v}`.
    pub fn vertex_split(&self, v: usize, parts: &NeighborPartition, d: usize) -> Result<Graph, GraphError> {
        self.check_partition(v, parts)?;
        let expected = SplitKind::Vertex.b_size(d);
        if parts.b.len() != expected || d == 0 {
            return Err(GraphError::WrongSplitSize { expected, found: parts.b.len() });
        }
        let mut g = self.split_base(v, parts);
        let new = g.n;
        g.edges.insert(Edge::new(v, new));
        g.bipartition = None;
        Ok(g)
    }

    /// Diamond `d`-split: as the vertex split but with `|B| = d` and without
    /// the edge `v v'`. Keeps a bipartition, placing `v'` on `v`'s side.
    pub fn diamond_split(&self, v: usize, parts: &NeighborPartition, d: usize) -> Result<Graph, GraphError> {
        self.check_partition(v, parts)?;
        if parts.b.len() != d {
            return Err(GraphError::WrongSplitSize { expected: d, found: parts.b.len() });
        }
        let mut g = self.split_base(v, parts);
        g.bipartition = self.bipartition.as_ref().map(|bip| {
            let mut x = bip.x.clone();
            if bip.in_x(v) {
                x.insert(g.n);
            }
            Bipartition::new(g.n, x).expect("sides in range")
        });
        Ok(g)
    }

    fn split_base(&self, v: usize, parts: &NeighborPartition) -> Graph {
        let new = self.n + 1;
        let mut edges = self.edges.clone();
        for &w in &parts.c {
            edges.remove(&Edge::new(v, w));
        }
        for &w in parts.b.iter().chain(&parts.c) {
            edges.insert(Edge::new(w, new));
        }
        Graph { n: new, edges, bipartition: None }
    }

    /// Two-colouring of the vertices if one exists.
    pub fn find_bipartition(&self) -> Option<Bipartition> {
        let mut side = alloc::vec![None; self.n + 1];
        for start in 1..=self.n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(true);
            let mut stack = alloc::vec![start];
            while let Some(u) = stack.pop() {
                let su = side[u].unwrap();
                for w in self.neighbors(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            stack.push(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Bipartition::new(self.n, (1..=self.n).filter(|&v| side[v] == Some(true))).ok()
    }
}
