//! `v`-absorbers, the absorber family, the absorbing path, and absorption.
//!
//! A 6-tuple `(a,b,c,d,e,f)` is a `v`-absorber when both `abcdef` and
//! `abcvdef` are squared paths. Inside a host path, such a tuple lets `v` be
//! inserted between `c` and `d` without touching anything else.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::certify::{is_v_absorber, squared_path_slice};
use crate::config::Config;
use crate::connector::{connect, Reservoir, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::generators::{ceil_fraction, derive_seed, rng};
use crate::hypergraph::Hypergraph3;
use crate::{VertexSeq, Vertex};

pub type Tuple6 = [Vertex; 6];

/// Cap on search nodes per [`enumerate_v_absorbers`] call, so hopeless
/// instances return quickly instead of exploring `n^6` prefixes.
const ENUMERATION_NODE_BUDGET: usize = 2_000_000;

struct AbsorberSearch<'a> {
    h: &'a Hypergraph3,
    v: Vertex,
    free: VertexSet,
    limit: usize,
    rng: rand_chacha::ChaCha8Rng,
    out: Vec<Tuple6>,
    nodes: usize,
}

impl AbsorberSearch<'_> {
    fn inter(&mut self, pairs: &[(Vertex, Vertex)], chosen: &[Vertex]) -> Vec<Vertex> {
        let mut s = self.free.clone();
        for &(x, y) in pairs {
            s.intersect_with(self.h.neighbors(x, y));
        }
        for &c in chosen {
            s.remove(c);
        }
        let mut cands = s.to_vec();
        cands.shuffle(&mut self.rng);
        cands
    }

    fn done(&self) -> bool {
        self.out.len() >= self.limit || self.nodes >= ENUMERATION_NODE_BUDGET
    }

    // Vertices in alphabetic order; each choice closes the triples that
    // become fully determined by it.
    fn run(&mut self) {
        let v = self.v;
        let mut a_cands = self.free.to_vec();
        a_cands.shuffle(&mut self.rng);
        for a in a_cands {
            let bs = self.inter(&[(v, a)], &[a]);
            for b in bs {
                let cs = self.inter(&[(a, b), (v, b), (v, a)], &[a, b]);
                for c in cs {
                    let ds = self.inter(&[(a, b), (a, c), (b, c), (b, v), (c, v)], &[a, b, c]);
                    for d in ds {
                        let es = self.inter(&[(b, c), (b, d), (c, d), (c, v), (v, d)], &[a, b, c, d]);
                        for e in es {
                            let fs = self.inter(&[(c, d), (c, e), (d, e), (v, d), (v, e)], &[a, b, c, d, e]);
                            for f in fs {
                                let t = [a, b, c, d, e, f];
                                debug_assert!(is_v_absorber(self.h, v, &t));
                                self.out.push(t);
                                if self.out.len() >= self.limit {
                                    return;
                                }
                            }
                            self.nodes += 1;
                            if self.done() {
                                return;
                            }
                        }
                        self.nodes += 1;
                        if self.done() {
                            return;
                        }
                    }
                    self.nodes += 1;
                    if self.done() {
                        return;
                    }
                }
            }
        }
    }
}

/// Up to `limit` distinct `v`-absorbers avoiding `exclude ∪ {v}`, found by a
/// depth-first search choosing `a, b, .., f` in turn with seeded candidate order.
pub fn enumerate_v_absorbers(
    h: &Hypergraph3,
    v: Vertex,
    exclude: &VertexSet,
    limit: usize,
    seed: u64,
) -> Vec<Tuple6> {
    if v >= h.n() || limit == 0 {
        return Vec::new();
    }
    let mut free = exclude.complement();
    free.remove(v);
    if free.len() < 6 {
        return Vec::new();
    }
    let mut search = AbsorberSearch {
        h,
        v,
        free,
        limit,
        rng: rng(seed),
        out: Vec::new(),
        nodes: 0,
    };
    search.run();
    search.out
}

/// Pairwise disjoint absorbers selected greedily by least-covered vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsorberFamily {
    pub tuples: Vec<Tuple6>,
    /// For each vertex, indices of the tuples that are absorbers for it.
    pub per_vertex_index: Vec<Vec<usize>>,
    /// Absorbers each vertex was meant to receive.
    pub target: usize,
    /// Some vertex ended below `target`.
    pub degraded: bool,
}

impl AbsorberFamily {
    pub fn min_coverage(&self) -> usize {
        self.per_vertex_index.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn vertex_set(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(universe, self.tuples.iter().flatten().copied())
    }
}

/// `max(1, ⌈2 ϑ*² n⌉)`.
pub fn coverage_target(cfg: &Config, n: usize) -> usize {
    ceil_fraction(2.0 * cfg.theta_star * cfg.theta_star, n).max(1)
}

pub fn build_absorber_family(h: &Hypergraph3, r: &Reservoir, cfg: &Config) -> Result<AbsorberFamily> {
    build_absorber_family_with_target(h, r, cfg, coverage_target(cfg, h.n()))
}

/// Greedy selection: repeatedly serve the vertex with the fewest absorbers
/// (lowest id on ties) with a fresh absorber disjoint from the family and the
/// reservoir. A vertex that cannot be served is skipped from then on.
pub fn build_absorber_family_with_target(
    h: &Hypergraph3,
    r: &Reservoir,
    cfg: &Config,
    target: usize,
) -> Result<AbsorberFamily> {
    cfg.validate()?;
    let n = h.n();
    let mut family = AbsorberFamily {
        tuples: Vec::new(),
        per_vertex_index: vec![Vec::new(); n],
        target,
        degraded: false,
    };
    let mut blocked = r.members.clone();
    let mut stalled = VertexSet::new(n);
    let mut round = 0u64;
    loop {
        let next = (0..n)
            .filter(|&v| !stalled.contains(v) && family.per_vertex_index[v].len() < target)
            .min_by_key(|&v| (family.per_vertex_index[v].len(), v));
        let Some(v) = next else { break };
        round += 1;
        let found = enumerate_v_absorbers(h, v, &blocked, 1, derive_seed(cfg.seed, round));
        let Some(&t) = found.first() else {
            stalled.insert(v);
            continue;
        };
        let idx = family.tuples.len();
        family.tuples.push(t);
        for &x in &t {
            blocked.insert(x);
        }
        for u in 0..n {
            if is_v_absorber(h, u, &t) {
                family.per_vertex_index[u].push(idx);
            }
        }
    }
    family.degraded = family.per_vertex_index.iter().any(|ix| ix.len() < target);
    Ok(family)
}

/// Chains the tuples in selection order, joining consecutive end-triples with
/// [`connect`] while avoiding the reservoir and every vertex already placed.
pub fn build_absorbing_path(
    h: &Hypergraph3,
    f: &AbsorberFamily,
    r: &Reservoir,
    cfg: &Config,
) -> Result<VertexSeq> {
    cfg.validate()?;
    let Some(first) = f.tuples.first() else {
        return Err(Error::pre("absorber family is empty"));
    };
    let n = h.n();
    let mut seq: Vec<Vertex> = first.to_vec();
    let mut reserved = r.members.union(&f.vertex_set(n));
    for (i, t) in f.tuples.iter().enumerate().skip(1) {
        let end = [seq[seq.len() - 3], seq[seq.len() - 2], seq[seq.len() - 1]];
        let start = [t[0], t[1], t[2]];
        let mut forbidden = reserved.clone();
        for &v in &seq {
            forbidden.insert(v);
        }
        for v in end.iter().chain(&start) {
            forbidden.remove(*v);
        }
        let joined = connect(h, end, start, &forbidden, cfg.cap_m, DEFAULT_BUDGET)?.ok_or_else(|| {
            Error::Construction(format!("cannot join absorber {} to absorber {i}", i - 1))
        })?;
        let interior = &joined.vertices[3..joined.len() - 3];
        for &u in interior {
            reserved.insert(u);
        }
        seq.extend_from_slice(interior);
        seq.extend_from_slice(t);
    }
    debug_assert!(seq.len() <= (cfg.cap_m + 6) * f.tuples.len());
    debug_assert!(squared_path_slice(h, &seq));
    Ok(VertexSeq::path(seq))
}

/// Kuhn's augmenting-path matching of `xs` into tuples; `None` names the
/// first vertex left unmatched.
fn match_to_absorbers(
    h: &Hypergraph3,
    xs: &[Vertex],
    tuples: &[Tuple6],
) -> std::result::Result<Vec<usize>, Vertex> {
    let options: Vec<Vec<usize>> = xs
        .iter()
        .map(|&v| (0..tuples.len()).filter(|&i| is_v_absorber(h, v, &tuples[i])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; tuples.len()];
    fn augment(
        x: usize,
        options: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        // first unused absorber if any; re-route earlier vertices only when stuck
        if let Some(&t) = options[x].iter().find(|&&t| owner[t].is_none()) {
            owner[t] = Some(x);
            return true;
        }
        for &t in &options[x] {
            if seen[t] {
                continue;
            }
            seen[t] = true;
            if owner[t].is_none_or(|y| augment(y, options, owner, seen)) {
                owner[t] = Some(x);
                return true;
            }
        }
        false
    }
    for x in 0..xs.len() {
        let mut seen = vec![false; tuples.len()];
        if !augment(x, &options, &mut owner, &mut seen) {
            return Err(xs[x]);
        }
    }
    let mut assignment = vec![usize::MAX; xs.len()];
    for (t, o) in owner.iter().enumerate() {
        if let Some(x) = o {
            assignment[*x] = t;
        }
    }
    Ok(assignment)
}

/// Inserts every vertex of `x` into its own absorber inside `pa`, between the
/// absorber's third and fourth vertices. End-triples are unchanged.
pub fn absorb(h: &Hypergraph3, pa: &VertexSeq, f: &AbsorberFamily, x: &[Vertex]) -> Result<VertexSeq> {
    if pa.closed {
        return Err(Error::pre("absorbing path must be open"));
    }
    let n = h.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in pa.vertices.iter().enumerate() {
        h.check_vertex(v)?;
        pos[v] = i;
    }
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    for &v in &xs {
        h.check_vertex(v)?;
        if pos[v] != usize::MAX {
            return Err(Error::pre(format!("vertex {v} already lies on the absorbing path")));
        }
    }
    let mut starts = Vec::with_capacity(f.tuples.len());
    for t in &f.tuples {
        let s = pos[t[0]];
        if s == usize::MAX || s + 6 > pa.len() || pa.vertices[s..s + 6] != t[..] {
            return Err(Error::pre(format!("absorber {t:?} is not a subpath of the absorbing path")));
        }
        starts.push(s);
    }
    let assignment = match_to_absorbers(h, &xs, &f.tuples).map_err(Error::Absorption)?;
    // insert_after[i] = vertex placed right after position i
    let mut insert_after: Vec<Option<Vertex>> = vec![None; pa.len()];
    for (&v, &t) in xs.iter().zip(&assignment) {
        insert_after[starts[t] + 2] = Some(v);
    }
    let mut out = Vec::with_capacity(pa.len() + xs.len());
    for (i, &u) in pa.vertices.iter().enumerate() {
        out.push(u);
        if let Some(v) = insert_after[i] {
            out.push(v);
        }
    }
    Ok(VertexSeq::path(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::is_squared_path;
    use crate::generators::{complete, dense_random};
    use std::collections::HashSet;

    #[test]
    fn enumerate_complete_counts_everything() {
        let k12 = complete(12).unwrap();
        let all = enumerate_v_absorbers(&k12, 0, &VertexSet::new(12), usize::MAX, 1);
        assert_eq!(all.len(), 11 * 10 * 9 * 8 * 7 * 6);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|t| !t.contains(&0)));
    }

    #[test]
    fn enumerate_edge_cases() {
        assert!(enumerate_v_absorbers(&Hypergraph3::empty(12), 0, &VertexSet::new(12), 10, 1).is_empty());
        let k12 = complete(12).unwrap();
        let exclude = VertexSet::from_iter_in(12, 0..8);
        assert!(enumerate_v_absorbers(&k12, 8, &exclude, 10, 1).is_empty());
        let found = enumerate_v_absorbers(&k12, 0, &VertexSet::new(12), 5, 9);
        assert_eq!(found.len(), 5);
    }

    #[test]
    fn enumerate_matches_brute_force_on_dense_instance() {
        let h = dense_random(9, 0.7, 4).unwrap();
        let found: HashSet<Tuple6> =
            enumerate_v_absorbers(&h, 8, &VertexSet::new(9), usize::MAX, 2).into_iter().collect();
        let mut brute = HashSet::new();
        let mut t = [0usize; 6];
        fn rec(h: &Hypergraph3, t: &mut Tuple6, k: usize, out: &mut HashSet<Tuple6>) {
            if k == 6 {
                if is_v_absorber(h, 8, t) {
                    out.insert(*t);
                }
                return;
            }
            for v in 0..8 {
                t[k] = v;
                rec(h, t, k + 1, out);
            }
        }
        rec(&h, &mut t, 0, &mut brute);
        assert_eq!(found, brute);
    }

    #[test]
    fn family_on_complete_graph() {
        let k40 = complete(40).unwrap();
        let cfg = Config::default();
        let r = Reservoir::new(VertexSet::new(40));
        let f = build_absorber_family(&k40, &r, &cfg).unwrap();
        assert!(!f.degraded);
        assert!(f.min_coverage() >= 1);
        let used = f.vertex_set(40);
        assert_eq!(used.len(), 6 * f.tuples.len());
        assert_eq!(f, build_absorber_family(&k40, &r, &cfg).unwrap());
    }

    #[test]
    fn family_avoids_reservoir() {
        let h = dense_random(30, 0.85, 2).unwrap();
        let r = Reservoir::new(VertexSet::from_iter_in(30, [0, 7, 13]));
        let f = build_absorber_family(&h, &r, &Config::default()).unwrap();
        assert!(f.vertex_set(30).is_disjoint(&r.members));
        for (i, t) in f.tuples.iter().enumerate() {
            assert!(squared_path_slice(&h, t));
            for v in 0..30 {
                assert_eq!(f.per_vertex_index[v].contains(&i), is_v_absorber(&h, v, t));
            }
        }
    }

    #[test]
    fn family_on_empty_graph_is_degraded() {
        let h = Hypergraph3::empty(12);
        let f = build_absorber_family(&h, &Reservoir::new(VertexSet::new(12)), &Config::default()).unwrap();
        assert!(f.tuples.is_empty());
        assert!(f.degraded);
    }

    fn family_of(tuples: Vec<Tuple6>, h: &Hypergraph3) -> AbsorberFamily {
        let per_vertex_index = (0..h.n())
            .map(|v| (0..tuples.len()).filter(|&i| is_v_absorber(h, v, &tuples[i])).collect())
            .collect();
        AbsorberFamily { tuples, per_vertex_index, target: 1, degraded: false }
    }

    #[test]
    fn absorbing_path_on_complete_graph() {
        let k40 = complete(40).unwrap();
        let cfg = Config::default();
        let f = family_of(vec![[0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11], [12, 13, 14, 15, 16, 17]], &k40);
        let r = Reservoir::new(VertexSet::new(40));
        let pa = build_absorbing_path(&k40, &f, &r, &cfg).unwrap();
        assert_eq!(pa.vertices, (0..18).collect::<Vec<_>>());
        assert!(is_squared_path(&k40, &pa).unwrap());

        let single = family_of(vec![[5, 4, 3, 2, 1, 0]], &k40);
        let pa = build_absorbing_path(&k40, &single, &r, &cfg).unwrap();
        assert_eq!(pa.vertices, vec![5, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn absorbing_path_join_failure_is_reported() {
        let mut edges = Vec::new();
        for off in [0, 6] {
            for a in 0..6 {
                for b in a + 1..6 {
                    for c in b + 1..6 {
                        edges.push([a + off, b + off, c + off]);
                    }
                }
            }
        }
        let h = Hypergraph3::from_edges(12, edges).unwrap();
        let f = family_of(vec![[0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11]], &h);
        let err = build_absorbing_path(&h, &f, &Reservoir::new(VertexSet::new(12)), &Config::default());
        assert!(matches!(err, Err(Error::Construction(_))));
        let empty = family_of(vec![], &h);
        assert!(build_absorbing_path(&h, &empty, &Reservoir::new(VertexSet::new(12)), &Config::default()).is_err());
    }

    #[test]
    fn absorb_examples() {
        let k20 = complete(20).unwrap();
        let f = family_of(vec![[0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11]], &k20);
        let pa = VertexSeq::path((0..12).collect());
        let out = absorb(&k20, &pa, &f, &[18, 19]).unwrap();
        assert!(is_squared_path(&k20, &out).unwrap());
        assert_eq!(out.len(), 14);
        assert_eq!(out.start_triple(), pa.start_triple());
        assert_eq!(out.end_triple(), pa.end_triple());
        assert_eq!(out.vertices, vec![0, 1, 2, 18, 3, 4, 5, 6, 7, 8, 19, 9, 10, 11]);

        assert_eq!(absorb(&k20, &pa, &f, &[]).unwrap(), pa);
        assert!(matches!(absorb(&k20, &pa, &f, &[17, 18, 19]), Err(Error::Absorption(_))));
        assert!(matches!(absorb(&k20, &pa, &f, &[3]), Err(Error::Precondition(_))));
    }

    #[test]
    fn absorb_uses_matching_not_first_fit() {
        // 13 has an absorber only in the first tuple; 12 fits both
        let k14 = complete(14).unwrap();
        let h = k14.without_edges(&[[13, 8, 9]]);
        let f = family_of(vec![[0, 1, 2, 3, 4, 5], [6, 7, 8, 9, 10, 11]], &h);
        assert!(!is_v_absorber(&h, 13, &f.tuples[1]));
        let pa = VertexSeq::path((0..12).collect());
        let out = absorb(&h, &pa, &f, &[12, 13]).unwrap();
        assert!(is_squared_path(&h, &out).unwrap());
    }
}
