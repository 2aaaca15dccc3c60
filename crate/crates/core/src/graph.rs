use serde::Serialize;

use crate::bitset::VertexSet;
use crate::Vertex;

/// Simple undirected graph on a subset of `0..n`.
///
/// Used for link graphs and for the auxiliary graphs `G3`, `Gv` and `Gvw`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    vertices: VertexSet,
    adj: Vec<VertexSet>,
}

impl AuxGraph {
    /// Edgeless graph on `vertices`; the universe is `vertices.universe()`.
    pub fn new(vertices: VertexSet) -> Self {
        let n = vertices.universe();
        AuxGraph {
            adj: vec![VertexSet::new(n); n],
            vertices,
        }
    }

    /// Graph on `0..n` from an edge list. Panics on loops or out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut g = Self::new(VertexSet::full(n));
        for (a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) {
        assert!(a != b, "loop at {a}");
        assert!(
            self.vertices.contains(a) && self.vertices.contains(b),
            "edge {a}{b} leaves the vertex set"
        );
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn universe(&self) -> usize {
        self.vertices.universe()
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a < self.adj.len() && self.adj[a].contains(b)
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// Minimum degree over the vertex set; `None` for the empty graph.
    pub fn min_degree(&self) -> Option<usize> {
        self.vertices.iter().map(|v| self.degree(v)).min()
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for a in self.vertices.iter() {
            for b in self.adj[a].iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.vertices.iter().all(|a| {
            !self.adj[a].contains(a)
                && self.adj[a].is_subset(&self.vertices)
                && self.adj[a].iter().all(|b| self.adj[b].contains(a))
        })
    }
}

#[derive(Serialize)]
struct AuxGraphView {
    n: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Serialize for AuxGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AuxGraphView {
            n: self.universe(),
            vertices: self.vertices.to_vec(),
            edges: self.edges(),
        }
        .serialize(serializer)
    }
}
