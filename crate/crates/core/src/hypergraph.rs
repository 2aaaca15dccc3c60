//! 3-uniform hypergraphs on dense vertex ids.
//!
//! Edges are kept twice: as a sorted set of sorted triples (the canonical
//! edge list) and as one neighbour bitset per ordered pair, so that
//! `N(a,b) ∩ N(a,c) ∩ N(b,c)` is three word-wise ANDs.

use std::collections::BTreeSet;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::AuxGraph;
use crate::{Triple, Vertex};

#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph3 {
    n: usize,
    edges: BTreeSet<Triple>,
    // index u * n + v; both orders are stored
    pair_neighbors: Vec<VertexSet>,
}

#[inline]
pub fn sort3(t: Triple) -> Triple {
    let [mut a, mut b, mut c] = t;
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    [a, b, c]
}

impl Hypergraph3 {
    /// The edgeless hypergraph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Hypergraph3 {
            n,
            edges: BTreeSet::new(),
            pair_neighbors: vec![VertexSet::new(n); n * n],
        }
    }

    /// Builds a hypergraph from a list of triples. Duplicate triples (in any
    /// vertex order) are rejected, as are degenerate or out-of-range ones.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut h = Self::empty(n);
        for e in edges {
            h.check_triple(e)?;
            if !h.insert_edge(e) {
                let [a, b, c] = sort3(e);
                return Err(Error::arg(format!("duplicate edge {a} {b} {c}")));
            }
        }
        Ok(h)
    }

    fn check_triple(&self, e: Triple) -> Result<()> {
        for &v in &e {
            self.check_vertex(v)?;
        }
        if e[0] == e[1] || e[0] == e[2] || e[1] == e[2] {
            return Err(Error::arg(format!("edge {e:?} repeats a vertex")));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Adds `e`; returns `false` if it was already present. The caller
    /// guarantees `e` has three distinct in-range vertices.
    pub(crate) fn insert_edge(&mut self, e: Triple) -> bool {
        let s = sort3(e);
        if !self.edges.insert(s) {
            return false;
        }
        let [a, b, c] = s;
        let n = self.n;
        for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.pair_neighbors[u * n + v].insert(w);
            self.pair_neighbors[v * n + u].insert(w);
        }
        true
    }

    pub(crate) fn remove_edge(&mut self, e: Triple) -> bool {
        let s = sort3(e);
        if !self.edges.remove(&s) {
            return false;
        }
        let [a, b, c] = s;
        let n = self.n;
        for (u, v, w) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.pair_neighbors[u * n + v].remove(w);
            self.pair_neighbors[v * n + u].remove(w);
        }
        true
    }

    /// A copy of `self` with the given triples deleted (absent ones are ignored).
    pub fn without_edges(&self, edges: &[Triple]) -> Self {
        let mut h = self.clone();
        for &e in edges {
            h.remove_edge(e);
        }
        h
    }

    /// A copy of `self` with every vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::arg("permutation length differs from vertex count"));
        }
        let mut seen = VertexSet::new(self.n);
        for &p in perm {
            self.check_vertex(p)?;
            if !seen.insert(p) {
                return Err(Error::arg("relabelling is not a permutation"));
            }
        }
        Self::from_edges(self.n, self.edges.iter().map(|&[a, b, c]| [perm[a], perm[b], perm[c]]))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted triples, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Triple> + '_ {
        self.edges.iter().copied()
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        a < self.n && b < self.n && a != b && self.pair_neighbors[a * self.n + b].contains(c)
    }

    /// `N(u,v)`; both vertices must be in range.
    #[inline]
    pub fn neighbors(&self, u: Vertex, v: Vertex) -> &VertexSet {
        &self.pair_neighbors[u * self.n + v]
    }

    pub fn pair_degree(&self, u: Vertex, v: Vertex) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::arg("pair degree needs two distinct vertices"));
        }
        Ok(self.neighbors(u, v).len())
    }

    pub fn min_pair_degree(&self) -> Result<usize> {
        if self.n < 2 {
            return Err(Error::arg("minimum pair degree needs at least 2 vertices"));
        }
        let mut best = usize::MAX;
        for u in 0..self.n {
            for v in u + 1..self.n {
                best = best.min(self.neighbors(u, v).len());
            }
        }
        Ok(best)
    }

    /// The pair achieving the minimum pair degree (first in lexicographic order).
    pub fn min_pair_degree_witness(&self) -> Result<(Vertex, Vertex, usize)> {
        let d = self.min_pair_degree()?;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.neighbors(u, v).len() == d {
                    return Ok((u, v, d));
                }
            }
        }
        unreachable!("minimum is attained")
    }

    pub fn vertex_degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        let twice: usize = (0..self.n)
            .filter(|&u| u != v)
            .map(|u| self.neighbors(u, v).len())
            .sum();
        Ok(twice / 2)
    }

    /// `L_v`: the graph on all of `V` with `ab` an edge iff `vab ∈ E`.
    pub fn link_graph(&self, v: Vertex) -> Result<AuxGraph> {
        self.check_vertex(v)?;
        let mut g = AuxGraph::new(VertexSet::full(self.n));
        for a in 0..self.n {
            if a == v {
                continue;
            }
            for b in self.neighbors(v, a).iter().filter(|&b| b > a) {
                g.add_edge(a, b);
            }
        }
        Ok(g)
    }

    /// `N(a,b) ∩ N(a,c) ∩ N(b,c)`, i.e. every `x` with `abcx` a tetrahedron.
    pub fn joint_neighborhood3(&self, a: Vertex, b: Vertex, c: Vertex) -> Result<VertexSet> {
        for v in [a, b, c] {
            self.check_vertex(v)?;
        }
        if a == b || a == c || b == c {
            return Err(Error::arg("joint neighbourhood needs three distinct vertices"));
        }
        Ok(self.joint3(a, b, c))
    }

    /// Unchecked variant of [`Self::joint_neighborhood3`] for hot loops.
    #[inline]
    pub(crate) fn joint3(&self, a: Vertex, b: Vertex, c: Vertex) -> VertexSet {
        let mut s = self.neighbors(a, b).intersection(self.neighbors(a, c));
        s.intersect_with(self.neighbors(b, c));
        // a, b, c can never be in their own pair neighbourhoods, but be explicit
        s.remove(a);
        s.remove(b);
        s.remove(c);
        s
    }

    /// `true` iff the four vertices are distinct and span a tetrahedron.
    pub fn is_k4(&self, w: Vertex, x: Vertex, y: Vertex, z: Vertex) -> bool {
        let vs = [w, x, y, z];
        if vs.iter().any(|&v| v >= self.n) {
            return false;
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if vs[i] == vs[j] {
                    return false;
                }
            }
        }
        self.has_edge(w, x, y) && self.has_edge(w, x, z) && self.has_edge(w, y, z) && self.has_edge(x, y, z)
    }

    /// Every tetrahedron as a sorted 4-tuple, in lexicographic order.
    pub fn tetrahedra(&self) -> Vec<[Vertex; 4]> {
        let mut out = Vec::new();
        for &[a, b, c] in &self.edges {
            for d in self.joint3(a, b, c).iter().filter(|&d| d > c) {
                out.push([a, b, c, d]);
            }
        }
        out
    }
}

impl std::fmt::Debug for Hypergraph3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hypergraph3")
            .field("n", &self.n)
            .field("edges", &self.edges.len())
            .finish()
    }
}
