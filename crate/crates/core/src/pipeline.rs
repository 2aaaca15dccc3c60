//! End-to-end construction: reservoir, absorbers, cover, connect, absorb.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::absorber::{absorb, build_absorber_family_with_target, build_absorbing_path, coverage_target};
use crate::bitset::VertexSet;
use crate::certify::certify_hamiltonian;
use crate::config::Config;
use crate::connector::{connect_through_reservoir, sample_reservoir, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::tiling::cover_with_squared_paths_in;
use crate::{Vertex, VertexSeq};

/// Reseeded attempts before a failure is reported.
pub const ATTEMPTS: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Reservoir,
    Absorbers,
    AbsorbingPath,
    Cover,
    Connect,
    Absorb,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Reservoir => "reservoir",
            Stage::Absorbers => "absorbers",
            Stage::AbsorbingPath => "absorbing_path",
            Stage::Cover => "cover",
            Stage::Connect => "connect",
            Stage::Absorb => "absorb",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Cycle { cycle: VertexSeq },
    Failure { stage: Stage, detail: String },
}

/// Sizes from the last attempt.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub attempts: u64,
    pub reservoir: usize,
    pub reservoir_used: usize,
    pub absorbers: usize,
    pub absorber_min_coverage: usize,
    pub absorbers_degraded: bool,
    pub absorbing_path: usize,
    pub paths: usize,
    pub uncovered: usize,
    pub skipped_paths: usize,
    pub leftover: usize,
    /// `cap_m · |W| ≤ theta_star⁴ · n`.
    pub reservoir_budget_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub outcome: Outcome,
    pub stats: Stats,
    /// Milliseconds per stage, summed over attempts.
    pub timings: Vec<(Stage, f64)>,
}

impl ConstructionReport {
    pub fn cycle(&self) -> Option<&VertexSeq> {
        match &self.outcome {
            Outcome::Cycle { cycle } => Some(cycle),
            Outcome::Failure { .. } => None,
        }
    }
}

struct Fail(Stage, String);

struct Timer(Vec<(Stage, f64)>);

impl Timer {
    fn time<T>(&mut self, stage: Stage, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match self.0.iter_mut().find(|(s, _)| *s == stage) {
            Some(slot) => slot.1 += ms,
            None => self.0.push((stage, ms)),
        }
        out
    }
}

fn attempt(h: &Hypergraph3, cfg: &Config, extra: usize, stats: &mut Stats, timer: &mut Timer) -> std::result::Result<VertexSeq, Fail> {
    let n = h.n();
    let fail = |s: Stage| move |e: Error| Fail(s, e.to_string());

    let mut r = timer.time(Stage::Reservoir, || sample_reservoir(h, cfg)).map_err(fail(Stage::Reservoir))?;
    stats.reservoir = r.members.len();

    let target = coverage_target(cfg, n) + extra;
    let family = timer
        .time(Stage::Absorbers, || build_absorber_family_with_target(h, &r, cfg, target))
        .map_err(fail(Stage::Absorbers))?;
    stats.absorbers = family.tuples.len();
    stats.absorber_min_coverage = family.min_coverage();
    stats.absorbers_degraded = family.degraded;
    if family.tuples.is_empty() {
        return Err(Fail(Stage::Absorbers, "no absorber found for any vertex".into()));
    }

    let pa = timer
        .time(Stage::AbsorbingPath, || build_absorbing_path(h, &family, &r, cfg))
        .map_err(fail(Stage::AbsorbingPath))?;
    stats.absorbing_path = pa.len();

    let mut domain = r.members.union(&pa.vertex_set(n)).complement();
    let mut paths = Vec::new();
    timer.time(Stage::Cover, || -> std::result::Result<(), Fail> {
        // second pass with q = 4 picks up what the long paths left behind
        for q in [cfg.q, 4] {
            let cover = cover_with_squared_paths_in(h, &domain, q, cfg.mu, cfg.seed).map_err(fail(Stage::Cover))?;
            for p in cover.paths {
                for &v in &p.vertices {
                    domain.remove(v);
                }
                paths.push(p);
            }
            if q == 4 {
                break;
            }
        }
        Ok(())
    })?;
    stats.paths = paths.len();
    stats.uncovered = domain.len();
    stats.reservoir_budget_ok =
        (cfg.cap_m * paths.len()) as f64 <= cfg.theta_star.powi(4) * n as f64;

    // P_A first, then every path that can be attached, then back to P_A
    let mut cycle: Vec<Vertex> = pa.vertices.clone();
    let mut skipped = 0;
    timer.time(Stage::Connect, || -> std::result::Result<(), Fail> {
        let ends = |seq: &[Vertex]| [seq[seq.len() - 3], seq[seq.len() - 2], seq[seq.len() - 1]];
        for p in &paths {
            let mut joined = false;
            for cand in [p.clone(), p.reversed()] {
                let link = connect_through_reservoir(h, &mut r, ends(&cycle), cand.start_triple(), cfg.cap_m, DEFAULT_BUDGET)
                    .map_err(fail(Stage::Connect))?;
                if let Some(link) = link {
                    cycle.extend_from_slice(link.interior());
                    cycle.extend_from_slice(&cand.vertices);
                    joined = true;
                    break;
                }
            }
            skipped += usize::from(!joined);
        }
        let close = connect_through_reservoir(h, &mut r, ends(&cycle), pa.start_triple(), cfg.cap_m, DEFAULT_BUDGET)
            .map_err(fail(Stage::Connect))?
            .ok_or_else(|| Fail(Stage::Connect, "cannot close the cycle back to the absorbing path".into()))?;
        cycle.extend_from_slice(close.interior());
        Ok(())
    })?;
    stats.skipped_paths = skipped;
    stats.reservoir_used = r.used.len();

    let on_cycle = VertexSet::from_iter_in(n, cycle.iter().copied());
    let leftover = on_cycle.complement().to_vec();
    stats.leftover = leftover.len();
    let absorbed = timer
        .time(Stage::Absorb, || absorb(h, &pa, &family, &leftover))
        .map_err(fail(Stage::Absorb))?;

    let mut out = absorbed.vertices;
    out.extend_from_slice(&cycle[pa.len()..]);
    Ok(VertexSeq::cycle(out))
}

/// Runs the construction up to [`ATTEMPTS`] times, attempt `k` with seed
/// `seed + k` and per-vertex absorber target raised by `k`. A cycle outcome
/// is always certified.
pub fn construct_squared_hamiltonian(h: &Hypergraph3, cfg: &Config) -> Result<ConstructionReport> {
    if h.n() < 5 {
        return Err(Error::arg(format!("construction needs n >= 5, got {}", h.n())));
    }
    cfg.validate()?;
    let mut timer = Timer(Vec::new());
    let mut last = None;
    let mut stats = Stats::default();
    for k in 0..ATTEMPTS {
        stats = Stats { attempts: k + 1, ..Stats::default() };
        let c = cfg.clone().with_seed(cfg.seed.wrapping_add(k));
        match attempt(h, &c, k as usize, &mut stats, &mut timer) {
            Ok(cycle) => {
                assert!(
                    certify_hamiltonian(h, &cycle).unwrap_or(false),
                    "pipeline produced an uncertified cycle"
                );
                return Ok(ConstructionReport { outcome: Outcome::Cycle { cycle }, stats, timings: timer.0 });
            }
            Err(Fail(stage, detail)) => last = Some(Outcome::Failure { stage, detail }),
        }
    }
    Ok(ConstructionReport { outcome: last.expect("at least one attempt"), stats, timings: timer.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, dense_random, pikhurko};

    #[test]
    fn complete_cases_succeed() {
        for n in [20, 23, 29, 31, 40] {
            let r = construct_squared_hamiltonian(&complete(n).unwrap(), &Config::default()).unwrap();
            let c = r.cycle().unwrap_or_else(|| panic!("n={n}: {:?}", r.outcome));
            assert_eq!(c.len(), n);
        }
    }

    #[test]
    fn empty_and_extremal_fail() {
        let r = construct_squared_hamiltonian(&Hypergraph3::empty(12), &Config::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Failure { stage: Stage::Absorbers, .. }));
        let r = construct_squared_hamiltonian(&pikhurko(16).unwrap().0, &Config::default()).unwrap();
        assert!(r.cycle().is_none());
        assert!(construct_squared_hamiltonian(&complete(4).unwrap(), &Config::default()).is_err());
    }

    #[test]
    fn deterministic() {
        let h = dense_random(30, 0.9, 5).unwrap();
        let cfg = Config::default().with_seed(11);
        let a = construct_squared_hamiltonian(&h, &cfg).unwrap();
        let b = construct_squared_hamiltonian(&h, &cfg).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.stats, b.stats);
    }
}
