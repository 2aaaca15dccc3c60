//! Exhaustive ground-truth solvers for small instances.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::certify::certify_hamiltonian;
use crate::hypergraph::Hypergraph3;
use crate::tiling::{W2, W3, W4};
use crate::{Vertex, VertexSeq};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict<T> {
    Yes(T),
    No,
    Timeout,
}

impl<T> Verdict<T> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No => "no",
            Verdict::Timeout => "timeout",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
    expired: bool,
}

impl Clock {
    fn new(limit: Duration) -> Self {
        Clock { deadline: Instant::now().checked_add(limit), ticks: 0, expired: false }
    }

    fn expired(&mut self) -> bool {
        if !self.expired {
            self.ticks = self.ticks.wrapping_add(1);
            if self.ticks % 4096 == 0 {
                self.expired = self.deadline.is_some_and(|d| Instant::now() >= d);
            }
        }
        self.expired
    }
}

struct CycleSearch<'a> {
    h: &'a Hypergraph3,
    seq: Vec<Vertex>,
    unused: VertexSet,
    clock: Clock,
}

impl CycleSearch<'_> {
    fn closes(&self) -> bool {
        let s = &self.seq;
        let n = s.len();
        let w = |i: usize| s[i % n];
        (n - 3..n).all(|i| self.h.is_k4(w(i), w(i + 1), w(i + 2), w(i + 3)))
    }

    fn rec(&mut self) -> Option<bool> {
        if self.clock.expired() {
            return None;
        }
        let n = self.h.n();
        let k = self.seq.len();
        if k == n {
            return Some(self.closes());
        }
        // the last vertex must close the window around vertex 0
        let (v1, v2) = (self.seq[1], self.seq[2]);
        let mut closing = self.h.joint3(0, v1, v2);
        closing.intersect_with(&self.unused);
        if !closing.iter().any(|v| v > v1) {
            return Some(false);
        }
        let mut cands = self.h.joint3(self.seq[k - 3], self.seq[k - 2], self.seq[k - 1]);
        cands.intersect_with(&self.unused);
        if k == n - 1 {
            cands.intersect_with(&closing);
        }
        for u in cands.iter() {
            if k == n - 1 && u < v1 {
                continue;
            }
            self.seq.push(u);
            self.unused.remove(u);
            let r = self.rec();
            if r != Some(false) {
                return r;
            }
            self.unused.insert(u);
            self.seq.pop();
        }
        Some(false)
    }
}

/// Exhaustive search for a squared Hamiltonian cycle, with vertex 0 first and
/// second vertex smaller than the last.
pub fn oracle_has_squared_hamiltonian(h: &Hypergraph3, time_limit: Duration) -> Verdict<VertexSeq> {
    let n = h.n();
    if n < 5 {
        return Verdict::No;
    }
    // every vertex of a squared cycle lies in a tetrahedron
    let mut in_k4 = VertexSet::new(n);
    for t in h.tetrahedra() {
        for v in t {
            in_k4.insert(v);
        }
    }
    if in_k4.len() < n {
        return Verdict::No;
    }
    let mut s = CycleSearch {
        h,
        seq: vec![0],
        unused: VertexSet::full(n),
        clock: Clock::new(time_limit),
    };
    s.unused.remove(0);
    for v1 in 1..n {
        for v2 in h.neighbors(0, v1).iter() {
            s.seq.truncate(1);
            s.seq.extend([v1, v2]);
            s.unused = VertexSet::full(n);
            for v in [0, v1, v2] {
                s.unused.remove(v);
            }
            match s.rec() {
                None => return Verdict::Timeout,
                Some(true) => {
                    let c = VertexSeq::cycle(s.seq.clone());
                    debug_assert!(certify_hamiltonian(h, &c).unwrap_or(false));
                    return Verdict::Yes(c);
                }
                Some(false) => {}
            }
        }
    }
    Verdict::No
}

fn tile_rec(
    h: &Hypergraph3,
    free: &mut VertexSet,
    tiles: &mut Vec<[Vertex; 4]>,
    clock: &mut Clock,
) -> Option<bool> {
    if clock.expired() {
        return None;
    }
    let Some(a) = free.first() else { return Some(true) };
    free.remove(a);
    for b in free.clone().iter() {
        let mut cs = h.neighbors(a, b).intersection(free);
        cs.remove(b);
        for c in cs.iter().filter(|&c| c > b) {
            let mut ds = h.joint3(a, b, c);
            ds.intersect_with(free);
            for d in ds.iter().filter(|&d| d > c) {
                for v in [b, c, d] {
                    free.remove(v);
                }
                tiles.push([a, b, c, d]);
                match tile_rec(h, free, tiles, clock) {
                    Some(false) => {}
                    r => return r,
                }
                tiles.pop();
                for v in [b, c, d] {
                    free.insert(v);
                }
            }
        }
    }
    free.insert(a);
    Some(false)
}

/// Exact cover by tetrahedra, branching on the first uncovered vertex.
pub fn oracle_has_perfect_k4_tiling(h: &Hypergraph3, time_limit: Duration) -> Verdict<Vec<[Vertex; 4]>> {
    let n = h.n();
    if n % 4 != 0 {
        return Verdict::No;
    }
    let mut tiles = Vec::new();
    match tile_rec(h, &mut VertexSet::full(n), &mut tiles, &mut Clock::new(time_limit)) {
        Some(true) => Verdict::Yes(tiles),
        Some(false) => Verdict::No,
        None => Verdict::Timeout,
    }
}

/// Maximum of `2ℓ2 + 6ℓ3 + 11ℓ4` over all good tilings of `domain`, by
/// dynamic programming over subsets. Practical up to about 20 vertices.
pub fn max_tiling_weight(h: &Hypergraph3, domain: &[Vertex], bad: impl Fn(Vertex, Vertex) -> bool) -> u64 {
    let t = domain.len();
    assert!(t <= 24, "exhaustive tiling limited to 24 vertices");
    let good = |i: usize, j: usize| !bad(domain[i], domain[j]);
    let mut best = vec![0u64; 1 << t];
    for mask in 1usize..1 << t {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut b = best[rest];
        let others: Vec<usize> = (i + 1..t).filter(|&j| rest >> j & 1 == 1 && good(i, j)).collect();
        for (x, &j) in others.iter().enumerate() {
            b = b.max(W2 + best[rest & !(1 << j)]);
            for (y, &k) in others.iter().enumerate().skip(x + 1) {
                if !good(j, k) || !h.has_edge(domain[i], domain[j], domain[k]) {
                    continue;
                }
                b = b.max(W3 + best[rest & !(1 << j) & !(1 << k)]);
                for &l in &others[y + 1..] {
                    if good(j, l) && good(k, l) && h.is_k4(domain[i], domain[j], domain[k], domain[l]) {
                        b = b.max(W4 + best[rest & !(1 << j) & !(1 << k) & !(1 << l)]);
                    }
                }
            }
        }
        best[mask] = b;
    }
    best[(1 << t) - 1]
}
