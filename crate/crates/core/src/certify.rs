//! Ground-truth predicates for squared paths, walks, cycles and absorbers.
//!
//! A sequence is *squared* when every 3-subset of every window of four
//! consecutive vertices is an edge, which is the same as every window being
//! a tetrahedron. Everything the search modules produce is checked here.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::{Triple, Vertex};

/// An ordered vertex sequence: a path or walk when open, a cycle when closed.
///
/// Text form: space separated ids, prefixed with `C ` when closed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSeq {
    pub vertices: Vec<Vertex>,
    pub closed: bool,
}

impl VertexSeq {
    pub fn path(vertices: Vec<Vertex>) -> Self {
        VertexSeq { vertices, closed: false }
    }

    pub fn cycle(vertices: Vec<Vertex>) -> Self {
        VertexSeq { vertices, closed: true }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// First three vertices. Panics if there are fewer than three.
    pub fn start_triple(&self) -> Triple {
        [self.vertices[0], self.vertices[1], self.vertices[2]]
    }

    /// Last three vertices, in sequence order.
    pub fn end_triple(&self) -> Triple {
        let k = self.vertices.len();
        [self.vertices[k - 3], self.vertices[k - 2], self.vertices[k - 1]]
    }

    /// Vertices strictly between the two end-triples.
    pub fn interior(&self) -> &[Vertex] {
        let k = self.vertices.len();
        if k <= 6 {
            &[]
        } else {
            &self.vertices[3..k - 3]
        }
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        VertexSeq { vertices: v, closed: self.closed }
    }

    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        VertexSeq { vertices: v, closed: self.closed }
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(universe, self.vertices.iter().copied())
    }

    fn all_distinct(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.vertices.len());
        self.vertices.iter().all(|v| seen.insert(*v))
    }
}

impl fmt::Display for VertexSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.closed {
            f.write_str("C")?;
            if !self.vertices.is_empty() {
                f.write_str(" ")?;
            }
        }
        let mut first = true;
        for v in &self.vertices {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for VertexSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace().peekable();
        let closed = tokens.peek() == Some(&"C");
        if closed {
            tokens.next();
        }
        let vertices = tokens
            .map(|t| {
                t.parse::<Vertex>()
                    .map_err(|_| Error::Parse { line: 1, msg: format!("bad vertex id `{t}`") })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexSeq { vertices, closed })
    }
}

fn check_in_range(h: &Hypergraph3, vs: &[Vertex]) -> Result<()> {
    vs.iter().try_for_each(|&v| h.check_vertex(v))
}

#[inline]
fn window_ok(h: &Hypergraph3, w: &[Vertex]) -> bool {
    h.is_k4(w[0], w[1], w[2], w[3])
}

/// Squared path check on a raw slice. Length 3 counts iff the triple is an edge.
pub(crate) fn squared_path_slice(h: &Hypergraph3, vs: &[Vertex]) -> bool {
    if vs.len() < 3 || vs.iter().any(|&v| v >= h.n()) {
        return false;
    }
    let mut seen = VertexSet::new(h.n());
    if !vs.iter().all(|&v| seen.insert(v)) {
        return false;
    }
    if vs.len() == 3 {
        return h.has_edge(vs[0], vs[1], vs[2]);
    }
    vs.windows(4).all(|w| window_ok(h, w))
}

pub fn is_squared_path(h: &Hypergraph3, s: &VertexSeq) -> Result<bool> {
    if s.closed {
        return Err(Error::arg("is_squared_path expects an open sequence"));
    }
    if s.len() < 3 {
        return Err(Error::arg("a squared path has at least 3 vertices"));
    }
    check_in_range(h, &s.vertices)?;
    Ok(squared_path_slice(h, &s.vertices))
}

pub fn is_squared_walk(h: &Hypergraph3, s: &VertexSeq) -> Result<bool> {
    if s.closed {
        return Err(Error::arg("is_squared_walk expects an open sequence"));
    }
    if s.len() < 3 {
        return Err(Error::arg("a squared walk has at least 3 vertices"));
    }
    check_in_range(h, &s.vertices)?;
    let v = &s.vertices;
    if v.len() == 3 {
        return Ok(h.has_edge(v[0], v[1], v[2]));
    }
    // a window with a repeated vertex fails is_k4, as it must
    Ok(v.windows(4).all(|w| window_ok(h, w)))
}

pub fn is_squared_cycle(h: &Hypergraph3, s: &VertexSeq) -> Result<bool> {
    if !s.closed {
        return Err(Error::arg("is_squared_cycle expects a closed sequence"));
    }
    let k = s.len();
    if k < 5 {
        return Err(Error::arg(format!("a squared cycle has length at least 5, got {k}")));
    }
    check_in_range(h, &s.vertices)?;
    if !s.all_distinct() {
        return Ok(false);
    }
    let v = &s.vertices;
    Ok((0..k).all(|i| h.is_k4(v[i], v[(i + 1) % k], v[(i + 2) % k], v[(i + 3) % k])))
}

/// Squared cycle through every vertex of `h`.
pub fn certify_hamiltonian(h: &Hypergraph3, s: &VertexSeq) -> Result<bool> {
    if !is_squared_cycle(h, s)? {
        return Ok(false);
    }
    Ok(s.len() == h.n() && s.vertex_set(h.n()).len() == h.n())
}

/// `a,b,c,interior,x,y,z` is a tight walk in `h` and a squared walk in the
/// link graph of `v`.
pub fn is_squared_v_walk(
    h: &Hypergraph3,
    v: Vertex,
    abc: Triple,
    xyz: Triple,
    interior: &[Vertex],
) -> Result<bool> {
    h.check_vertex(v)?;
    check_in_range(h, &abc)?;
    check_in_range(h, &xyz)?;
    check_in_range(h, interior)?;
    if !h.has_edge(abc[0], abc[1], abc[2]) {
        return Err(Error::pre(format!("{abc:?} is not an edge")));
    }
    if !h.has_edge(xyz[0], xyz[1], xyz[2]) {
        return Err(Error::pre(format!("{xyz:?} is not an edge")));
    }
    let seq: Vec<Vertex> = abc.iter().chain(interior).chain(xyz.iter()).copied().collect();
    if seq.contains(&v) {
        return Err(Error::pre(format!("walk passes through its link vertex {v}")));
    }
    let tight = seq.windows(3).all(|w| h.has_edge(w[0], w[1], w[2]));
    let linked = (0..seq.len()).all(|i| {
        (1..=2).all(|d| i + d >= seq.len() || h.has_edge(v, seq[i], seq[i + d]))
    });
    Ok(tight && linked)
}

/// `(a..f)` are distinct, avoid `v`, and both `abcdef` and `abcvdef` are squared paths.
pub fn is_v_absorber(h: &Hypergraph3, v: Vertex, t: &[Vertex; 6]) -> bool {
    if v >= h.n() || t.contains(&v) {
        return false;
    }
    let with_v = [t[0], t[1], t[2], v, t[3], t[4], t[5]];
    squared_path_slice(h, t) && squared_path_slice(h, &with_v)
}
