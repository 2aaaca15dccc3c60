//! Instance sources. Randomised generators are deterministic in their seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;
use crate::Vertex;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a master seed with a stream index (splitmix64 finaliser).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `⌈f · n⌉`, robust to the float noise in products like `0.85 * 20`.
pub fn ceil_fraction(f: f64, n: usize) -> usize {
    let x = f * n as f64;
    (x - 1e-9).ceil().max(0.0) as usize
}

pub fn complete(n: usize) -> Result<Hypergraph3> {
    if n < 3 {
        return Err(Error::arg(format!("complete hypergraph needs n >= 3, got {n}")));
    }
    let mut h = Hypergraph3::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                h.insert_edge([a, b, c]);
            }
        }
    }
    Ok(h)
}

/// The balanced four-part vertex partition of the extremal construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PikhurkoPartition {
    pub parts: [Vec<Vertex>; 4],
}

impl PikhurkoPartition {
    /// Index of the part containing `v`.
    pub fn part_of(&self, v: Vertex) -> usize {
        v % 4
    }
}

/// Whether the triple is an edge of the extremal construction, given the
/// part index (0..4) of each vertex.
pub(crate) fn pikhurko_rule(parts: [usize; 3]) -> bool {
    let mut count = [0usize; 4];
    for p in parts {
        count[p] += 1;
    }
    match count[0] {
        2 => true,
        // one vertex in A0, the other two in distinct parts among A1..A3
        1 => (1..4).filter(|&i| count[i] == 1).count() == 2,
        0 => {
            // inside one part, or split 2 + 1 over two parts; one per part is not an edge
            (1..4).any(|i| count[i] == 3) || (1..4).any(|i| count[i] == 2)
        }
        _ => false,
    }
}

/// Extremal construction with no squared Hamiltonian cycle. Vertex `v`
/// belongs to part `v mod 4`.
pub fn pikhurko(n: usize) -> Result<(Hypergraph3, PikhurkoPartition)> {
    if n < 8 {
        return Err(Error::arg(format!("extremal construction needs n >= 8, got {n}")));
    }
    let mut h = Hypergraph3::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if pikhurko_rule([a % 4, b % 4, c % 4]) {
                    h.insert_edge([a, b, c]);
                }
            }
        }
    }
    let parts = std::array::from_fn(|i| (0..n).filter(|v| v % 4 == i).collect());
    Ok((h, PikhurkoPartition { parts }))
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::arg(format!("probability {p} outside [0, 1]")))
    }
}

/// Binomial random hypergraph: every triple, in lexicographic order, is kept
/// with probability `p`.
pub fn random_hypergraph(n: usize, p: f64, seed: u64) -> Result<Hypergraph3> {
    check_probability(p)?;
    let mut rng = rng(seed);
    let mut h = Hypergraph3::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.gen_bool(p) {
                    h.insert_edge([a, b, c]);
                }
            }
        }
    }
    Ok(h)
}

/// Random hypergraph with minimum pair degree at least `⌈delta2_target · n⌉`.
///
/// The base is `random_hypergraph(n, delta2_target, seed)`; see
/// [`dense_random_with_base`] for the repair step.
pub fn dense_random(n: usize, delta2_target: f64, seed: u64) -> Result<Hypergraph3> {
    if !(delta2_target > 0.0 && delta2_target < 1.0) {
        return Err(Error::arg(format!("delta2 target {delta2_target} outside (0, 1)")));
    }
    let need = ceil_fraction(delta2_target, n);
    dense_random_with_base(n, need, delta2_target, seed)
}

/// Starts from `random_hypergraph(n, base_p, seed)` and, scanning pairs in
/// lexicographic order, adds uniformly random missing triples through each
/// pair until its degree reaches `min_degree`. Edges are only ever added.
pub fn dense_random_with_base(
    n: usize,
    min_degree: usize,
    base_p: f64,
    seed: u64,
) -> Result<Hypergraph3> {
    if n < 3 {
        return Err(Error::arg("dense_random needs n >= 3"));
    }
    if min_degree > n - 2 {
        return Err(Error::arg(format!(
            "pair degree {min_degree} unreachable on {n} vertices (max {})",
            n - 2
        )));
    }
    let mut h = random_hypergraph(n, base_p, seed)?;
    let mut rng = rng(derive_seed(seed, 1));
    for u in 0..n {
        for v in u + 1..n {
            let have = h.neighbors(u, v).len();
            if have >= min_degree {
                continue;
            }
            let mut missing: Vec<Vertex> = (0..n)
                .filter(|&w| w != u && w != v && !h.neighbors(u, v).contains(w))
                .collect();
            missing.shuffle(&mut rng);
            for &w in missing.iter().take(min_degree - have) {
                h.insert_edge([u, v, w]);
            }
        }
    }
    Ok(h)
}
