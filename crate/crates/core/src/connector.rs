//! Connecting squared paths between two end-triples, and the vertex reservoir
//! that connections are routed through.
//!
//! The search runs breadth-first over states `(p, q, r)`, the last three
//! vertices placed. A state extends to `(q, r, u)` when `pqru` is a
//! tetrahedron, and it closes onto `(x, y, z)` when the three windows
//! `pqrx`, `qrxy`, `rxyz` are tetrahedra.

use std::collections::HashSet;

use rand::Rng;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::generators::{derive_seed, rng};
use crate::hypergraph::Hypergraph3;
use crate::{Triple, VertexSeq, Vertex};

/// Default cap on states expanded per BFS depth.
pub const DEFAULT_BUDGET: usize = 1_000_000;

fn validate_ends(h: &Hypergraph3, abc: Triple, xyz: Triple) -> Result<()> {
    for &v in abc.iter().chain(&xyz) {
        h.check_vertex(v)?;
    }
    let six = [abc[0], abc[1], abc[2], xyz[0], xyz[1], xyz[2]];
    for i in 0..6 {
        for j in i + 1..6 {
            if six[i] == six[j] {
                return Err(Error::arg(format!("end-triples {abc:?} and {xyz:?} share vertex {}", six[i])));
            }
        }
    }
    if !h.has_edge(abc[0], abc[1], abc[2]) {
        return Err(Error::arg(format!("start triple {abc:?} is not an edge")));
    }
    if !h.has_edge(xyz[0], xyz[1], xyz[2]) {
        return Err(Error::arg(format!("end triple {xyz:?} is not an edge")));
    }
    Ok(())
}

#[inline]
fn closes(h: &Hypergraph3, s: Triple, xyz: Triple) -> bool {
    let [p, q, r] = s;
    let [x, y, z] = xyz;
    h.is_k4(p, q, r, x) && h.is_k4(q, r, x, y) && h.is_k4(r, x, y, z)
}

struct Node {
    state: Triple,
    parent: usize,
}

const ROOT: usize = usize::MAX;

fn on_branch(nodes: &[Node], mut idx: usize, u: Vertex) -> bool {
    while idx != ROOT {
        if nodes[idx].state[2] == u {
            return true;
        }
        idx = nodes[idx].parent;
    }
    false
}

fn interior_of(nodes: &[Node], mut idx: usize) -> Vec<Vertex> {
    let mut out = Vec::new();
    while nodes[idx].parent != ROOT {
        out.push(nodes[idx].state[2]);
        idx = nodes[idx].parent;
    }
    out.reverse();
    out
}

/// BFS for the interior of a connection; interior vertices come from `pool`.
/// Returns the shortest interior found (fewer than `cap_m` vertices).
fn search(h: &Hypergraph3, abc: Triple, xyz: Triple, pool: &VertexSet, cap_m: usize, budget: usize) -> Option<Vec<Vertex>> {
    let mut nodes = vec![Node { state: abc, parent: ROOT }];
    let mut seen: HashSet<Triple> = HashSet::from([abc]);
    let mut frontier = vec![0usize];
    for depth in 0..cap_m {
        for &i in &frontier {
            if closes(h, nodes[i].state, xyz) {
                return Some(interior_of(&nodes, i));
            }
        }
        if depth + 1 >= cap_m {
            break;
        }
        let mut next = Vec::new();
        'expand: for &i in &frontier {
            let [p, q, r] = nodes[i].state;
            let mut cand = h.joint3(p, q, r);
            cand.intersect_with(pool);
            for u in cand.iter() {
                if on_branch(&nodes, i, u) {
                    continue;
                }
                let state = [q, r, u];
                if !seen.insert(state) {
                    continue;
                }
                nodes.push(Node { state, parent: i });
                next.push(nodes.len() - 1);
                if next.len() >= budget {
                    break 'expand;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

fn assemble(abc: Triple, interior: Vec<Vertex>, xyz: Triple) -> VertexSeq {
    let mut v = abc.to_vec();
    v.extend(interior);
    v.extend(xyz);
    VertexSeq::path(v)
}

/// A squared path `a,b,c,u1..um,x,y,z` with `m < cap_m` and no interior vertex
/// in `forbidden`, or `None` if the bounded search finds none.
pub fn connect(
    h: &Hypergraph3,
    abc: Triple,
    xyz: Triple,
    forbidden: &VertexSet,
    cap_m: usize,
    budget: usize,
) -> Result<Option<VertexSeq>> {
    validate_ends(h, abc, xyz)?;
    if let Some(&v) = abc.iter().chain(&xyz).find(|&&v| forbidden.contains(v)) {
        return Err(Error::arg(format!("end vertex {v} is forbidden")));
    }
    let mut pool = forbidden.complement();
    for v in abc.iter().chain(&xyz) {
        pool.remove(*v);
    }
    Ok(search(h, abc, xyz, &pool, cap_m, budget).map(|int| assemble(abc, int, xyz)))
}

/// Exact number of interior tuples `(u1..um)` completing a squared path from
/// `abc` to `xyz`. Refuses when `n^m` exceeds `10^8`.
pub fn count_connections(h: &Hypergraph3, abc: Triple, xyz: Triple, m: usize) -> Result<u64> {
    validate_ends(h, abc, xyz)?;
    if (h.n() as f64).powi(m as i32) > 1e8 {
        return Err(Error::Resource(format!("n^m = {}^{m} exceeds 10^8", h.n())));
    }
    let mut pool = VertexSet::full(h.n());
    for v in abc.iter().chain(&xyz) {
        pool.remove(*v);
    }
    fn rec(h: &Hypergraph3, state: Triple, xyz: Triple, left: usize, pool: &mut VertexSet) -> u64 {
        if left == 0 {
            return closes(h, state, xyz) as u64;
        }
        let [p, q, r] = state;
        let mut cand = h.joint3(p, q, r);
        cand.intersect_with(pool);
        let mut total = 0;
        for u in cand.iter() {
            pool.remove(u);
            total += rec(h, [q, r, u], xyz, left - 1, pool);
            pool.insert(u);
        }
        total
    }
    Ok(rec(h, abc, xyz, m, &mut pool))
}

/// Vertices set aside for routing connections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reservoir {
    pub members: VertexSet,
    /// members already consumed by connections
    pub used: VertexSet,
}

impl Reservoir {
    pub fn new(members: VertexSet) -> Self {
        let used = VertexSet::new(members.universe());
        Reservoir { members, used }
    }

    pub fn available(&self) -> VertexSet {
        self.members.difference(&self.used)
    }
}

/// Per-vertex inclusion probability `(1 - 3/(10M)) · ϑ*²`.
pub fn inclusion_probability(cfg: &Config) -> f64 {
    (1.0 - 3.0 / (10.0 * cfg.cap_m as f64)) * cfg.theta_star * cfg.theta_star
}

const RESERVOIR_RETRIES: u64 = 1000;

/// Samples every vertex independently with [`inclusion_probability`],
/// resampling with the next seed while the size exceeds `ϑ*² · n`.
pub fn sample_reservoir(h: &Hypergraph3, cfg: &Config) -> Result<Reservoir> {
    cfg.validate()?;
    let n = h.n();
    let p = inclusion_probability(cfg).clamp(0.0, 1.0);
    let bound = cfg.theta_star * cfg.theta_star * n as f64;
    for attempt in 0..RESERVOIR_RETRIES {
        let mut rng = rng(derive_seed(cfg.seed.wrapping_add(attempt), 0x5e5e));
        let members = VertexSet::from_iter_in(n, (0..n).filter(|_| rng.gen_bool(p)));
        if members.len() as f64 <= bound + 1e-9 {
            return Ok(Reservoir::new(members));
        }
    }
    Err(Error::Resource(format!(
        "no reservoir of size <= {bound:.2} after {RESERVOIR_RETRIES} samples"
    )))
}

/// Like [`connect`], with interior vertices drawn from the unused part of the
/// reservoir. On success the interior is marked used.
pub fn connect_through_reservoir(
    h: &Hypergraph3,
    r: &mut Reservoir,
    abc: Triple,
    xyz: Triple,
    cap_m: usize,
    budget: usize,
) -> Result<Option<VertexSeq>> {
    validate_ends(h, abc, xyz)?;
    let mut pool = r.available();
    for v in abc.iter().chain(&xyz) {
        pool.remove(*v);
    }
    let found = search(h, abc, xyz, &pool, cap_m, budget);
    Ok(found.map(|int| {
        for &u in &int {
            r.used.insert(u);
        }
        assemble(abc, int, xyz)
    }))
}
