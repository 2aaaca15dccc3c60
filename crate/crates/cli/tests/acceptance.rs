//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p hypersquare-cli --test acceptance`.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use hypersquare_core::absorber::{absorb, build_absorber_family, build_absorbing_path};
use hypersquare_core::auxgraphs::{build_g3, build_gv, build_gvw, count_walks};
use hypersquare_core::certify::{certify_hamiltonian, is_squared_path};
use hypersquare_core::connector::{connect, DEFAULT_BUDGET};
use hypersquare_core::generators::{complete, dense_random, pikhurko, random_hypergraph};
use hypersquare_core::oracle::{
    max_tiling_weight, oracle_has_perfect_k4_tiling, oracle_has_squared_hamiltonian, Verdict,
};
use hypersquare_core::pipeline::construct_squared_hamiltonian;
use hypersquare_core::tiling::{classify_pairs, cover_with_squared_paths, weighted_tiling};
use hypersquare_core::{AuxGraph, Config, Hypergraph3, Reservoir, VertexSeq, VertexSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_LIMIT: Duration = Duration::from_secs(120);

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Check {
    Check { ok, detail: detail.into() }
}

/// Pair degrees by scanning every vertex, without the adjacency bitsets.
fn brute_min_pair_degree(h: &Hypergraph3) -> usize {
    let n = h.n();
    let mut min = usize::MAX;
    for u in 0..n {
        for v in u + 1..n {
            let d = (0..n).filter(|&w| w != u && w != v && h.has_edge(u, v, w)).count();
            min = min.min(d);
        }
    }
    min
}

fn is_k4_brute(h: &Hypergraph3, q: [usize; 4]) -> bool {
    let [a, b, c, d] = q;
    h.has_edge(a, b, c) && h.has_edge(a, b, d) && h.has_edge(a, c, d) && h.has_edge(b, c, d)
}

fn c1_extremal() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [8usize, 12] {
        let start = Instant::now();
        let (h, _) = pikhurko(n).unwrap();
        let cycle = oracle_has_squared_hamiltonian(&h, ORACLE_LIMIT);
        let tiling = oracle_has_perfect_k4_tiling(&h, ORACLE_LIMIT);
        let measured = h.min_pair_degree().unwrap();
        let brute = brute_min_pair_degree(&h);
        let expected = 3 * n / 4 - 2;
        let secs = start.elapsed().as_secs_f64();
        ok &= cycle == Verdict::No && tiling == Verdict::No && measured == expected && brute == expected && secs < 120.0;
        notes.push(format!(
            "n={n}: cycle={} tiling={} δ2={measured} (brute {brute}, expected {expected}) {secs:.2}s",
            cycle.label(),
            tiling.label()
        ));
    }
    check(ok, notes.join("; "))
}

fn c2_structural() -> Check {
    let mut total = 0;
    let mut bad = 0;
    for n in [8usize, 12, 16] {
        let (h, part) = pikhurko(n).unwrap();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if is_k4_brute(&h, [a, b, c, d]) {
                            total += 1;
                            let in_a0 = [a, b, c, d].iter().filter(|&&v| part.part_of(v) == 0).count();
                            if in_a0 != 0 && in_a0 != 2 {
                                bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    check(bad == 0, format!("{total} tetrahedra enumerated, {bad} meet A0 in 1, 3 or 4 vertices"))
}

fn disjoint(paths: &[VertexSeq], n: usize) -> bool {
    let mut seen = VertexSet::new(n);
    paths.iter().flat_map(|p| &p.vertices).all(|&v| seen.insert(v))
}

fn c3_soundness() -> Check {
    let mut violations = Vec::new();
    let mut produced = [0usize; 5];
    let cfg = Config::default();
    for i in 0..200u64 {
        let n = 6 + (i % 5) as usize;
        let p = [0.5, 0.8, 1.0][(i / 5 % 3) as usize];
        let h = random_hypergraph(n, p, i).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(i);

        let edges: Vec<_> = h.edges().collect();
        if edges.len() >= 2 {
            let e = *edges.choose(&mut rng).unwrap();
            if let Some(f) = edges.iter().find(|f| f.iter().all(|v| !e.contains(v))) {
                if let Some(s) = connect(&h, e, *f, &VertexSet::new(n), cfg.cap_m, DEFAULT_BUDGET).unwrap() {
                    produced[0] += 1;
                    let ends_ok = s.start_triple() == e && s.end_triple() == *f;
                    if !is_squared_path(&h, &s).unwrap() || !ends_ok {
                        violations.push(format!("connect #{i}"));
                    }
                }
            }
        }

        let c = cover_with_squared_paths(&h, 4, cfg.mu, i).unwrap();
        produced[1] += c.paths.len();
        if !c.paths.iter().all(|p| p.len() == 4 && is_squared_path(&h, p).unwrap()) || !disjoint(&c.paths, n) {
            violations.push(format!("cover #{i}"));
        }

        let r = Reservoir::new(VertexSet::new(n));
        let fam = build_absorber_family(&h, &r, &cfg.clone().with_seed(i)).unwrap();
        if !fam.tuples.is_empty() {
            if let Ok(pa) = build_absorbing_path(&h, &fam, &r, &cfg) {
                produced[2] += 1;
                if !is_squared_path(&h, &pa).unwrap() {
                    violations.push(format!("absorbing path #{i}"));
                }
                let off: Vec<usize> = pa.vertex_set(n).complement().iter().take(fam.min_coverage()).collect();
                if let Ok(after) = absorb(&h, &pa, &fam, &off) {
                    produced[3] += 1;
                    let same_ends = after.start_triple() == pa.start_triple() && after.end_triple() == pa.end_triple();
                    if !is_squared_path(&h, &after).unwrap() || !same_ends || after.len() != pa.len() + off.len() {
                        violations.push(format!("absorb #{i}"));
                    }
                }
            }
        }

        let rep = construct_squared_hamiltonian(&h, &cfg.clone().with_seed(i)).unwrap();
        if let Some(cyc) = rep.cycle() {
            produced[4] += 1;
            if !certify_hamiltonian(&h, cyc).unwrap() {
                violations.push(format!("construct #{i}"));
            }
        }
    }
    check(
        violations.is_empty(),
        format!(
            "outputs checked: connect {} / cover paths {} / absorbing paths {} / absorptions {} / cycles {}; violations {:?}",
            produced[0], produced[1], produced[2], produced[3], produced[4], violations
        ),
    )
}

fn c4_oracle_agreement() -> Check {
    let (mut yes, mut pipeline_yes, mut conflicts, mut timeouts) = (0, 0, 0, 0);
    for seed in 0..50u64 {
        let h = dense_random(10, 0.8, seed).unwrap();
        let oracle = oracle_has_squared_hamiltonian(&h, ORACLE_LIMIT);
        let rep = construct_squared_hamiltonian(&h, &Config::default().with_seed(seed)).unwrap();
        match oracle {
            Verdict::Yes(_) => {
                yes += 1;
                pipeline_yes += usize::from(rep.cycle().is_some());
            }
            Verdict::No => conflicts += usize::from(rep.cycle().is_some()),
            Verdict::Timeout => timeouts += 1,
        }
    }
    check(
        conflicts == 0 && timeouts == 0,
        format!("oracle yes on {yes}/50; pipeline success on oracle-yes {pipeline_yes}/{yes}; conflicts {conflicts}; timeouts {timeouts}"),
    )
}

fn brute_walks(g: &AuxGraph, x: usize, y: usize, s: usize) -> u128 {
    if s == 0 {
        return u128::from(x == y);
    }
    g.neighbors(x).iter().map(|z| brute_walks(g, z, y, s - 1)).sum()
}

fn c5_walks() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    let mut comparisons = 0;
    for _ in 0..50 {
        let k = rng.gen_range(1..=6);
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if rng.gen_bool(0.5) {
                    edges.push((a, b));
                }
            }
        }
        let g = AuxGraph::from_edges(k, edges);
        for s in 0..=5 {
            for x in 0..k {
                for y in 0..k {
                    comparisons += 1;
                    if count_walks(&g, x, y, s).unwrap() != brute_walks(&g, x, y, s) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(mismatches == 0 && secs < 5.0, format!("{comparisons} counts, {mismatches} mismatches, {secs:.2}s"))
}

fn c6_aux_degrees() -> Check {
    let n = 40;
    let beta = 0.005;
    let mut ok = true;
    let mut worst = (usize::MAX, usize::MAX, f64::INFINITY);
    let mut slowest: f64 = 0.0;
    for seed in 0..5u64 {
        let start = Instant::now();
        let h = dense_random(n, 0.85, seed).unwrap();
        let d3 = build_g3(&h, beta).min_degree().unwrap_or(0);
        ok &= d3 * 4 >= n;
        worst.0 = worst.0.min(d3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            let v = rng.gen_range(0..n);
            let dv = build_gv(&h, v, beta).unwrap().min_degree().unwrap_or(0);
            ok &= dv * 4 >= n;
            worst.1 = worst.1.min(dv);
        }
        for _ in 0..5 {
            let v = rng.gen_range(0..n);
            let w = (v + rng.gen_range(1..n)) % n;
            let g = build_gvw(&h, v, w).unwrap();
            let ratio = g.min_degree().unwrap_or(0) as f64 / g.order() as f64;
            ok &= ratio >= 0.5;
            worst.2 = worst.2.min(ratio);
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= secs < 30.0;
        slowest = slowest.max(secs);
    }
    check(
        ok,
        format!(
            "min δ(G3)={} δ(Gv)={} (need ≥ {}), min δ(Gvw)/|N(v,w)|={:.3} (need ≥ 0.5), slowest instance {slowest:.2}s",
            worst.0,
            worst.1,
            n as f64 / 4.0,
            worst.2
        ),
    )
}

fn c7_tiling() -> Check {
    let mut mismatches = Vec::new();
    for i in 0..100u64 {
        let t = 2 + (i % 6) as usize;
        let p = [0.3, 0.6, 0.9][(i / 6 % 3) as usize];
        let h = random_hypergraph(t, p, 100 + i).unwrap();
        let oracle = classify_pairs(&h, (i / 18 % 3) as usize);
        let got = weighted_tiling(&h, &VertexSet::full(t), &oracle, i).unwrap().weight;
        let best = max_tiling_weight(&h, &(0..t).collect::<Vec<_>>(), |u, v| oracle.is_bad(u, v));
        if got != best {
            mismatches.push((i, got, best));
        }
    }
    let k12 = complete(12).unwrap();
    let w12 = weighted_tiling(&k12, &VertexSet::full(12), &classify_pairs(&k12, 0), 0).unwrap().weight;
    check(
        mismatches.is_empty() && w12 == 33,
        format!("100 instances with t ≤ 7: mismatches {mismatches:?}; complete(12) weight {w12}"),
    )
}

fn c8_connection() -> Check {
    let start = Instant::now();
    let n = 30;
    let h = dense_random(n, 0.85, 8).unwrap();
    let edges: Vec<_> = h.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut ok_count, mut longest) = (0, 0);
    let mut tried = 0;
    while tried < 50 {
        let e = *edges.choose(&mut rng).unwrap();
        let f = *edges.choose(&mut rng).unwrap();
        if e.iter().any(|v| f.contains(v)) {
            continue;
        }
        tried += 1;
        if let Some(s) = connect(&h, e, f, &VertexSet::new(n), 5, DEFAULT_BUDGET).unwrap() {
            if is_squared_path(&h, &s).unwrap() {
                ok_count += 1;
                longest = longest.max(s.len() - 6);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        ok_count == 50 && secs < 60.0,
        format!("{ok_count}/50 pairs connected, largest interior {longest}, {secs:.2}s"),
    )
}

fn c9_complete() -> Check {
    let start = Instant::now();
    let mut failed = Vec::new();
    for n in 20..=40 {
        let h = complete(n).unwrap();
        let rep = construct_squared_hamiltonian(&h, &Config::default()).unwrap();
        match rep.cycle() {
            Some(c) if certify_hamiltonian(&h, c).unwrap() => {}
            _ => failed.push(n),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(failed.is_empty() && secs < 120.0, format!("n = 20..=40, failures {failed:?}, {secs:.2}s"))
}

fn run_cli(args: &[String], stdin: Option<&[u8]>) -> (Vec<u8>, i32) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hypersquare"))
        .args(args)
        .env_remove("HYPERSQUARE_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("spawn hypersquare");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    (out.stdout, out.status.code().unwrap_or(-1))
}

/// argv recorded in the manifest of a text or JSON output.
fn manifest_argv(out: &[u8]) -> Vec<String> {
    let text = String::from_utf8_lossy(out);
    let manifest: serde_json::Value = match text.lines().find_map(|l| l.strip_prefix("# manifest: ")) {
        Some(line) => serde_json::from_str(line).unwrap(),
        None => serde_json::from_str::<serde_json::Value>(&text).unwrap()["manifest"].clone(),
    };
    manifest["argv"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect()
}

fn c10_determinism() -> Check {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let (dense, _) = run_cli(&s(&["gen", "dense", "24", "--delta2", "0.85", "--seed", "4"]), None);
    let (small, _) = run_cli(&s(&["gen", "dense", "12", "--delta2", "0.8", "--seed", "2"]), None);
    let cases: Vec<(Vec<String>, Option<&[u8]>)> = vec![
        (s(&["gen", "random", "12", "--p", "0.6", "--seed", "9"]), None),
        (s(&["gen", "dense", "16", "--delta2", "0.8", "--seed", "3"]), None),
        (s(&["construct", "--seed", "7"]), Some(&dense)),
        (s(&["--json", "construct", "--seed", "7"]), Some(&dense)),
        (s(&["tile", "--seed", "5"]), Some(&dense)),
        (s(&["cover", "--q", "8", "--seed", "5"]), Some(&dense)),
        (s(&["aux", "expansion", "--graph", "g3", "--effort", "8", "--seed", "3"]), Some(&dense)),
        (s(&["absorb", "--demo", "--seed", "2"]), None),
        (s(&["oracle", "cycle"]), Some(&small)),
        (s(&["probe", "--n", "10", "--grid", "0.7,0.8", "--trials", "3", "--seed", "1", "--jobs", "2"]), None),
    ];
    let mut bad = Vec::new();
    for (args, stdin) in &cases {
        let (first, code) = run_cli(args, *stdin);
        let replay = manifest_argv(&first);
        let same = (0..2).all(|_| run_cli(&replay, *stdin) == (first.clone(), code));
        if !same || code == 1 || first.is_empty() {
            bad.push(args.join(" "));
        }
    }
    check(
        bad.is_empty(),
        format!("{} commands x 3 runs replayed from their manifests; differing: {bad:?}", cases.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 extremal construction", c1_extremal),
        ("2 structural fact", c2_structural),
        ("3 soundness sweep", c3_soundness),
        ("4 oracle agreement", c4_oracle_agreement),
        ("5 walk counting", c5_walks),
        ("6 auxiliary-graph degrees", c6_aux_degrees),
        ("7 tiling optimality", c7_tiling),
        ("8 connection feasibility", c8_connection),
        ("9 end-to-end complete case", c9_complete),
        ("10 determinism", c10_determinism),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let r = f();
        failures += usize::from(!r.ok);
        println!(
            "{} criterion {name}: {} [{:.2}s]",
            if r.ok { "PASS" } else { "FAIL" },
            r.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/10 criteria passed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
