//! Weighted `{K2, K3, K4}` tilings, bad-pair pruning, almost-`K4`-factors and
//! the greedy squared-path cover.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::certify::squared_path_slice;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::generators::{ceil_fraction, rng};
use crate::hypergraph::Hypergraph3;
use crate::{Vertex, VertexSeq};

pub const W2: u64 = 2;
pub const W3: u64 = 6;
pub const W4: u64 = 11;

fn tile_weight(size: usize) -> u64 {
    match size {
        2 => W2,
        3 => W3,
        4 => W4,
        _ => 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tiling {
    /// Sorted tiles in lexicographic order.
    pub tiles: Vec<Vec<Vertex>>,
    pub weight: u64,
}

impl Tiling {
    pub fn count(&self, size: usize) -> usize {
        self.tiles.iter().filter(|t| t.len() == size).count()
    }

    pub fn covered(&self, universe: usize) -> VertexSet {
        VertexSet::from_iter_in(universe, self.tiles.iter().flatten().copied())
    }
}

/// Pairs whose degree falls below a threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPairOracle {
    pub threshold: usize,
    bad: Vec<VertexSet>,
}

impl GoodPairOracle {
    pub fn is_bad(&self, u: Vertex, v: Vertex) -> bool {
        self.bad[u].contains(v)
    }

    pub fn is_good(&self, u: Vertex, v: Vertex) -> bool {
        u != v && !self.is_bad(u, v)
    }

    /// Vertices forming a bad pair with `u`.
    pub fn bad_partners(&self, u: Vertex) -> &VertexSet {
        &self.bad[u]
    }

    /// Unordered bad pairs `(u, v)` with `u < v`, lexicographically.
    pub fn bad_pairs(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for (u, row) in self.bad.iter().enumerate() {
            out.extend(row.iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn bad_pair_count(&self) -> usize {
        self.bad.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    /// Whether `vs` spans a complete good subhypergraph: every pair good,
    /// and the set is an edge (3 vertices) or a tetrahedron (4 vertices).
    pub fn is_good_clique(&self, h: &Hypergraph3, vs: &[Vertex]) -> bool {
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.is_good(u, v) {
                    return false;
                }
            }
        }
        match vs.len() {
            2 => true,
            3 => h.has_edge(vs[0], vs[1], vs[2]),
            4 => h.is_k4(vs[0], vs[1], vs[2], vs[3]),
            _ => false,
        }
    }
}

impl Serialize for GoodPairOracle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GoodPairOracle", 2)?;
        st.serialize_field("threshold", &self.threshold)?;
        st.serialize_field("bad_pairs", &self.bad_pairs())?;
        st.end()
    }
}

pub fn classify_pairs(h: &Hypergraph3, threshold: usize) -> GoodPairOracle {
    let n = h.n();
    let mut bad = vec![VertexSet::new(n); n];
    for u in 0..n {
        for v in u + 1..n {
            if h.neighbors(u, v).len() < threshold {
                bad[u].insert(v);
                bad[v].insert(u);
            }
        }
    }
    GoodPairOracle { threshold, bad }
}

/// Repeatedly deletes the vertex in the most bad pairs inside the current set
/// (lowest id on ties) while that count is at least `√tau · n`.
pub fn prune_bad_vertices(h: &Hypergraph3, tau: f64, oracle: &GoodPairOracle) -> Result<VertexSet> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::arg(format!("tau {tau} outside (0, 1)")));
    }
    let n = h.n();
    let limit = tau.sqrt() * n as f64;
    let mut keep = VertexSet::full(n);
    loop {
        let worst = keep
            .iter()
            .map(|v| (oracle.bad[v].intersection_len(&keep), v))
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match worst {
            Some((count, v)) if count as f64 >= limit => {
                keep.remove(v);
            }
            _ => return Ok(keep),
        }
    }
}

struct LocalSearch<'a> {
    h: &'a Hypergraph3,
    oracle: &'a GoodPairOracle,
    domain: VertexSet,
    tiles: Vec<Vec<Vertex>>,
    owner: Vec<Option<usize>>,
}

/// Weight gained by adding one vertex to a tile of the given size.
fn gain(size: usize) -> i64 {
    (tile_weight(size + 1) - tile_weight(size)) as i64
}

/// Weight lost when one vertex leaves a tile of the given size.
fn loss(size: usize) -> i64 {
    match size {
        2 => W2 as i64,
        _ => (tile_weight(size) - tile_weight(size - 1)) as i64,
    }
}

impl LocalSearch<'_> {
    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tiles.len()).filter(|&i| !self.tiles[i].is_empty())
    }

    fn connects(&self, t: usize, x: Vertex) -> bool {
        let f = &self.tiles[t];
        if f.len() > 3 || f.contains(&x) || !f.iter().all(|&u| self.oracle.is_good(u, x)) {
            return false;
        }
        match f.len() {
            2 => self.h.has_edge(f[0], f[1], x),
            3 => self.h.is_k4(f[0], f[1], f[2], x),
            _ => false,
        }
    }

    fn leave_cost(&self, x: Vertex) -> i64 {
        self.owner[x].map_or(0, |t| loss(self.tiles[t].len()))
    }

    fn detach(&mut self, x: Vertex) {
        let Some(t) = self.owner[x].take() else { return };
        self.tiles[t].retain(|&u| u != x);
        if self.tiles[t].len() == 1 {
            let rest = self.tiles[t].pop().unwrap();
            self.owner[rest] = None;
        }
    }

    fn attach(&mut self, t: usize, x: Vertex) {
        debug_assert!(self.connects(t, x));
        self.tiles[t].push(x);
        self.owner[x] = Some(t);
    }

    /// Tiles other than `from` that `x` connects to, with their gains, best
    /// first; only the top `k` are kept since at most `k` vertices move at once.
    fn targets(&self, x: Vertex, from: usize, k: usize) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = self
            .live()
            .filter(|&t| t != from && self.connects(t, x))
            .map(|t| (gain(self.tiles[t].len()), t))
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        out.truncate(k);
        out
    }

    /// Best assignment of `xs` into pairwise distinct tiles, by total gain.
    fn best_assignment(&self, xs: &[Vertex], from: usize) -> Option<(i64, Vec<usize>)> {
        let opts: Vec<Vec<(i64, usize)>> = xs.iter().map(|&x| self.targets(x, from, xs.len())).collect();
        let mut best: Option<(i64, Vec<usize>)> = None;
        let mut pick = Vec::with_capacity(xs.len());
        fn rec(
            i: usize,
            opts: &[Vec<(i64, usize)>],
            pick: &mut Vec<usize>,
            acc: i64,
            best: &mut Option<(i64, Vec<usize>)>,
        ) {
            if i == opts.len() {
                if best.as_ref().is_none_or(|b| acc > b.0) {
                    *best = Some((acc, pick.clone()));
                }
                return;
            }
            for &(g, t) in &opts[i] {
                if !pick.contains(&t) {
                    pick.push(t);
                    rec(i + 1, opts, pick, acc + g, best);
                    pick.pop();
                }
            }
        }
        rec(0, &opts, &mut pick, 0, &mut best);
        best
    }

    // (i) a vertex joins a smaller tile it connects to
    fn try_grow(&mut self) -> bool {
        let ts: Vec<usize> = self.live().filter(|&t| self.tiles[t].len() <= 3).collect();
        for t in ts {
            for x in self.domain.iter() {
                if self.owner[x] != Some(t) && self.connects(t, x) && gain(self.tiles[t].len()) > self.leave_cost(x) {
                    self.detach(x);
                    self.attach(t, x);
                    return true;
                }
            }
        }
        false
    }

    // (ii)-(iv) several vertices of one tile move into distinct smaller tiles
    fn try_break(&mut self, size: usize, movers: usize) -> bool {
        let ts: Vec<usize> = self.live().filter(|&t| self.tiles[t].len() == size).collect();
        for f in ts {
            let mut members = self.tiles[f].clone();
            members.sort_unstable();
            let remaining = size - movers;
            let penalty = (tile_weight(size) - if remaining >= 2 { tile_weight(remaining) } else { 0 }) as i64;
            for xs in subsets(&members, movers) {
                if let Some((g, targets)) = self.best_assignment(&xs, f) {
                    if g > penalty {
                        for (&x, &t) in xs.iter().zip(&targets) {
                            self.detach(x);
                            self.attach(t, x);
                        }
                        return true;
                    }
                }
            }
        }
        false
    }

    // (v) two uncovered vertices forming a good pair
    fn try_create(&mut self) -> bool {
        for x in self.domain.iter() {
            if self.owner[x].is_some() {
                continue;
            }
            for y in self.domain.iter().filter(|&y| y > x) {
                if self.owner[y].is_none() && self.oracle.is_good(x, y) {
                    self.tiles.push(vec![x, y]);
                    let t = self.tiles.len() - 1;
                    self.owner[x] = Some(t);
                    self.owner[y] = Some(t);
                    return true;
                }
            }
        }
        false
    }

    // (vi) re-tile the union of at most three tiles and the uncovered
    // vertices optimally, when that union is small enough to solve exactly
    fn try_retile(&mut self) -> bool {
        let uncovered: Vec<Vertex> = self.domain.iter().filter(|&x| self.owner[x].is_none()).collect();
        if uncovered.len() > RETILE_MAX {
            return false;
        }
        let live: Vec<usize> = self.live().collect();
        for k in 1..=3.min(live.len()) {
            for group in subsets(&live, k) {
                let mut verts = uncovered.clone();
                verts.extend(group.iter().flat_map(|&t| self.tiles[t].iter().copied()));
                if verts.len() > RETILE_MAX {
                    continue;
                }
                let current: u64 = group.iter().map(|&t| tile_weight(self.tiles[t].len())).sum();
                let (w, tiles) = exact_tiling(self.h, self.oracle, &verts);
                if w > current {
                    for &t in &group {
                        for x in std::mem::take(&mut self.tiles[t]) {
                            self.owner[x] = None;
                        }
                    }
                    for tile in tiles {
                        self.tiles.push(tile);
                        let i = self.tiles.len() - 1;
                        for &x in &self.tiles[i] {
                            self.owner[x] = Some(i);
                        }
                    }
                    return true;
                }
            }
        }
        false
    }

    fn weight(&self) -> u64 {
        self.tiles.iter().map(|t| tile_weight(t.len())).sum()
    }

    fn run(&mut self) {
        loop {
            let before = self.weight();
            let moved = self.try_grow()
                || self.try_break(4, 2)
                || self.try_break(3, 2)
                || self.try_break(4, 3)
                || self.try_create()
                || self.try_retile();
            if !moved {
                break;
            }
            debug_assert!(self.weight() > before);
        }
    }

    fn finish(self) -> Tiling {
        let mut tiles: Vec<Vec<Vertex>> = self.tiles.into_iter().filter(|t| !t.is_empty()).collect();
        for t in &mut tiles {
            t.sort_unstable();
        }
        tiles.sort();
        let weight = tiles.iter().map(|t| tile_weight(t.len())).sum();
        Tiling { tiles, weight }
    }
}

/// Largest vertex set handed to the exact re-tiling move.
const RETILE_MAX: usize = 10;

/// Maximum-weight good tiling of `verts`, by memoised search over subsets.
fn exact_tiling(h: &Hypergraph3, oracle: &GoodPairOracle, verts: &[Vertex]) -> (u64, Vec<Vec<Vertex>>) {
    let k = verts.len();
    let full = (1usize << k) - 1;
    // best[mask] = (weight, tile chosen for the lowest vertex as a bitmask, 0 = left out)
    let mut best: Vec<(u64, usize)> = vec![(0, 0); 1 << k];
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut b = (best[rest].0, 0);
        let mut sub = rest;
        // every subset of `rest` of size 1..=3 joined with i
        while sub > 0 {
            let size = sub.count_ones() as usize;
            if size <= 3 {
                let tile: Vec<Vertex> = std::iter::once(verts[i])
                    .chain((0..k).filter(|&j| sub >> j & 1 == 1).map(|j| verts[j]))
                    .collect();
                let w = tile_weight(size + 1) + best[rest & !sub].0;
                if w > b.0 && oracle.is_good_clique(h, &tile) {
                    b = (w, sub | 1 << i);
                }
            }
            sub = (sub - 1) & rest;
        }
        best[mask] = b;
    }
    let mut tiles = Vec::new();
    let mut mask = full;
    while mask > 0 {
        let i = mask.trailing_zeros() as usize;
        let chosen = best[mask].1;
        if chosen == 0 {
            mask &= !(1 << i);
        } else {
            tiles.push((0..k).filter(|&j| chosen >> j & 1 == 1).map(|j| verts[j]).collect());
            mask &= !chosen;
        }
    }
    (best[full].0, tiles)
}

fn subsets(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[Vertex], k: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Local search for a heavy good tiling of `domain`: a seeded greedy `K2`
/// matching, then improving exchange moves until none applies.
pub fn weighted_tiling(
    h: &Hypergraph3,
    domain: &VertexSet,
    oracle: &GoodPairOracle,
    seed: u64,
) -> Result<Tiling> {
    let n = h.n();
    if domain.universe() != n {
        return Err(Error::arg("domain universe differs from vertex count"));
    }
    let mut ls = LocalSearch {
        h,
        oracle,
        domain: domain.clone(),
        tiles: Vec::new(),
        owner: vec![None; n],
    };
    let mut order = domain.to_vec();
    order.shuffle(&mut rng(seed));
    for (i, &x) in order.iter().enumerate() {
        if ls.owner[x].is_some() {
            continue;
        }
        if let Some(&y) = order[i + 1..].iter().find(|&&y| ls.owner[y].is_none() && oracle.is_good(x, y)) {
            ls.tiles.push(vec![x, y]);
            ls.owner[x] = Some(ls.tiles.len() - 1);
            ls.owner[y] = Some(ls.tiles.len() - 1);
        }
    }
    ls.run();
    Ok(ls.finish())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct K4Factor {
    pub tetrads: Vec<[Vertex; 4]>,
    pub leftover: VertexSet,
    /// `2√tau · n + 14`.
    pub leftover_bound: f64,
    pub within_bound: bool,
    /// Vertices removed by bad-pair pruning (part of `leftover`).
    pub pruned: usize,
}

pub fn almost_k4_factor(h: &Hypergraph3, cfg: &Config) -> Result<K4Factor> {
    cfg.validate()?;
    let n = h.n();
    let oracle = classify_pairs(h, ceil_fraction(0.75 + cfg.alpha, n));
    let kept = prune_bad_vertices(h, cfg.tau, &oracle)?;
    let tiling = weighted_tiling(h, &kept, &oracle, cfg.seed)?;
    let tetrads: Vec<[Vertex; 4]> = tiling
        .tiles
        .iter()
        .filter(|t| t.len() == 4)
        .map(|t| [t[0], t[1], t[2], t[3]])
        .collect();
    let covered = VertexSet::from_iter_in(n, tetrads.iter().flatten().copied());
    let leftover = covered.complement();
    let leftover_bound = 2.0 * cfg.tau.sqrt() * n as f64 + 14.0;
    Ok(K4Factor {
        within_bound: leftover.len() as f64 <= leftover_bound,
        pruned: n - kept.len(),
        tetrads,
        leftover,
        leftover_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub paths: Vec<VertexSeq>,
    pub uncovered: usize,
    /// `uncovered ≤ mu · |domain|`.
    pub within_bound: bool,
}

const COVER_NODE_BUDGET: usize = 50_000;

/// Extends `seq` at its end through `free` until it has `q` vertices.
fn grow_path(
    h: &Hypergraph3,
    seq: &mut Vec<Vertex>,
    free: &mut VertexSet,
    q: usize,
    nodes: &mut usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> bool {
    if seq.len() == q {
        return true;
    }
    *nodes += 1;
    if *nodes > COVER_NODE_BUDGET {
        return false;
    }
    let k = seq.len();
    let mut cands = h.joint3(seq[k - 3], seq[k - 2], seq[k - 1]);
    cands.intersect_with(free);
    let mut cands = cands.to_vec();
    cands.shuffle(rng);
    for u in cands {
        seq.push(u);
        free.remove(u);
        if grow_path(h, seq, free, q, nodes, rng) {
            return true;
        }
        free.insert(u);
        seq.pop();
    }
    false
}

fn first_tetrad(h: &Hypergraph3, free: &VertexSet, tried: &std::collections::BTreeSet<[Vertex; 4]>) -> Option<[Vertex; 4]> {
    for a in free.iter() {
        for b in free.iter().filter(|&b| b > a) {
            let mut cs = h.neighbors(a, b).intersection(free);
            for c in cs.clone().iter().filter(|&c| c > b) {
                cs = h.joint3(a, b, c);
                cs.intersect_with(free);
                if let Some(d) = cs.iter().find(|&d| d > c && !tried.contains(&[a, b, c, d])) {
                    return Some([a, b, c, d]);
                }
            }
        }
    }
    None
}

pub fn cover_with_squared_paths(h: &Hypergraph3, q: usize, mu: f64, seed: u64) -> Result<CoverReport> {
    cover_with_squared_paths_in(h, &VertexSet::full(h.n()), q, mu, seed)
}

/// Greedy cover of `domain` by disjoint squared paths on exactly `q` vertices.
/// Seeds are the tetrads of a weighted tiling first, then any tetrad left.
pub fn cover_with_squared_paths_in(
    h: &Hypergraph3,
    domain: &VertexSet,
    q: usize,
    mu: f64,
    seed: u64,
) -> Result<CoverReport> {
    if q < 4 || q % 4 != 0 {
        return Err(Error::arg(format!("path length q = {q} must be a positive multiple of 4")));
    }
    if domain.universe() != h.n() {
        return Err(Error::arg("domain universe differs from vertex count"));
    }
    let mut free = domain.clone();
    let mut rng = rng(seed);
    let tiled = weighted_tiling(h, domain, &classify_pairs(h, 0), seed)?;
    let mut seeds: Vec<[Vertex; 4]> = tiled
        .tiles
        .iter()
        .filter(|t| t.len() == 4)
        .map(|t| [t[0], t[1], t[2], t[3]])
        .collect();
    seeds.reverse();
    let mut tried = std::collections::BTreeSet::new();
    let mut paths = Vec::new();
    loop {
        let next = loop {
            match seeds.pop() {
                Some(t) if t.iter().all(|&v| free.contains(v)) => break Some(t),
                Some(_) => continue,
                None => break first_tetrad(h, &free, &tried),
            }
        };
        let Some(t) = next else { break };
        tried.insert(t);
        let mut seq = t.to_vec();
        let mut nodes = 0;
        for &v in &t {
            free.remove(v);
        }
        if grow_path(h, &mut seq, &mut free, q, &mut nodes, &mut rng) {
            debug_assert!(squared_path_slice(h, &seq));
            paths.push(VertexSeq::path(seq));
        } else {
            for &v in &t {
                free.insert(v);
            }
        }
    }
    let uncovered = free.len();
    Ok(CoverReport {
        paths,
        uncovered,
        within_bound: uncovered as f64 <= mu * domain.len() as f64,
    })
}
