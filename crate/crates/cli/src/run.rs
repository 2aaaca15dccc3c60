use std::fmt::Write as _;
use std::io::Read;
use std::time::Duration;

use hypersquare_core::absorber::{absorb, build_absorber_family, build_absorbing_path};
use hypersquare_core::auxgraphs::{build_g3, build_gv, build_gvw, expansion_report, walk_count_table};
use hypersquare_core::certify::{
    certify_hamiltonian, is_squared_cycle, is_squared_path, is_squared_walk, is_v_absorber,
};
use hypersquare_core::connector::{connect, DEFAULT_BUDGET};
use hypersquare_core::generators::{complete, dense_random, pikhurko, random_hypergraph};
use hypersquare_core::io::{parse_hypergraph, write_hypergraph};
use hypersquare_core::oracle::{oracle_has_perfect_k4_tiling, oracle_has_squared_hamiltonian};
use hypersquare_core::pipeline::construct_squared_hamiltonian;
use hypersquare_core::probe::{threshold_probe, ProbeParams};
use hypersquare_core::tiling::{almost_k4_factor, classify_pairs, cover_with_squared_paths};
use hypersquare_core::{
    AuxGraph, Config, Error, Hypergraph3, Outcome, ProbeMode, Reservoir, Verdict, VertexSeq, VertexSet,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::manifest::RunManifest;

/// Exit code 2: the command ran but its outcome is a failure or timeout.
pub const EXIT_FAILURE_OUTCOME: i32 = 2;

pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

pub enum CliError {
    /// Exit code 1.
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Res<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

struct Ctx<'a> {
    json: bool,
    timings: bool,
    argv: &'a [String],
}

impl Ctx<'_> {
    fn manifest(&self, command: &str) -> RunManifest {
        RunManifest::new(command, self.argv)
    }

    /// JSON object with the manifest merged in, or the text with a manifest
    /// comment line in front.
    fn emit(&self, m: &RunManifest, value: impl Serialize, text: impl FnOnce() -> String) -> String {
        if self.json {
            let mut v = serde_json::to_value(value).expect("result serialises");
            if !self.timings {
                if let Value::Object(map) = &mut v {
                    map.remove("timings");
                }
            }
            let v = match v {
                Value::Object(mut map) => {
                    map.insert("manifest".into(), serde_json::to_value(m).expect("manifest serialises"));
                    Value::Object(map)
                }
                other => json!({ "manifest": m, "result": other }),
            };
            let mut s = serde_json::to_string_pretty(&v).expect("json");
            s.push('\n');
            s
        } else {
            format!("{}\n{}", m.comment(), text())
        }
    }
}

fn read_input(input: &Input) -> Res<(Hypergraph3, Vec<u8>)> {
    let bytes = match &input.input {
        Some(path) => std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = Vec::new();
            std::io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let text = String::from_utf8(bytes.clone()).map_err(|_| usage("input is not UTF-8"))?;
    Ok((parse_hypergraph(&text)?, bytes))
}

fn require_seed(seed: Option<u64>) -> Res<u64> {
    seed.ok_or_else(|| usage("this generator is randomized: pass --seed or set HYPERSQUARE_SEED"))
}

fn checked_config(c: &ConfigArgs) -> Res<Config> {
    let cfg = c.config();
    cfg.validate()?;
    Ok(cfg)
}

fn secs(s: f64) -> Res<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| usage(format!("invalid time limit {s}")))
}

pub fn run(cli: Cli, argv: &[String]) -> Res<Output> {
    let ctx = Ctx { json: cli.json, timings: cli.timings, argv };
    match cli.command {
        Command::Gen { kind } => gen(&ctx, kind),
        Command::Check(a) => check(&ctx, a),
        Command::Aux { kind } => aux(&ctx, kind),
        Command::Connect(a) => connect_cmd(&ctx, a),
        Command::Tile(a) => tile(&ctx, a),
        Command::Cover(a) => cover(&ctx, a),
        Command::Absorb(a) => absorb_demo(&ctx, a),
        Command::Construct(a) => construct(&ctx, a),
        Command::Oracle(a) => oracle(&ctx, a),
        Command::Probe(a) => probe(&ctx, a),
    }
}

fn gen(ctx: &Ctx, kind: GenKind) -> Res<Output> {
    let m = ctx.manifest("gen");
    let (h, m) = match kind {
        GenKind::Complete { n } => (complete(n)?, m),
        GenKind::Pikhurko { n } => (pikhurko(n)?.0, m),
        GenKind::Random { n, p, seed } => {
            let seed = require_seed(seed)?;
            (random_hypergraph(n, p, seed)?, m.with_seed(seed))
        }
        GenKind::Dense { n, delta2, seed } => {
            let seed = require_seed(seed)?;
            (dense_random(n, delta2, seed)?, m.with_seed(seed))
        }
    };
    let out = if ctx.json {
        let edges: Vec<_> = h.edges().collect();
        ctx.emit(&m, json!({ "n": h.n(), "edges": edges }), String::new)
    } else {
        write_hypergraph(&h, &[m.comment().trim_start_matches("# ").to_string()])
    };
    Ok(Output::ok(out))
}

fn check(ctx: &Ctx, a: CheckArgs) -> Res<Output> {
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("check").with_input(Some(&bytes));
    if let CheckKind::Stats = a.kind {
        let witness = h.min_pair_degree_witness().ok();
        let tetrahedra = h.tetrahedra().len();
        let stats = json!({
            "n": h.n(),
            "edges": h.edge_count(),
            "min_pair_degree": witness.map(|w| w.2),
            "witness": witness.map(|w| [w.0, w.1]),
            "tetrahedra": tetrahedra,
        });
        let text = || {
            let mut s = format!("n {}\nedges {}\n", h.n(), h.edge_count());
            if let Some((u, v, d)) = witness {
                let _ = writeln!(s, "min_pair_degree {d} (pair {u} {v})");
            }
            let _ = writeln!(s, "tetrahedra {tetrahedra}");
            s
        };
        return Ok(Output::ok(ctx.emit(&m, stats, text)));
    }
    let raw = a.seq.ok_or_else(|| usage("missing sequence argument"))?;
    let seq: VertexSeq = raw.parse()?;
    let accepted = match a.kind {
        CheckKind::Path => is_squared_path(&h, &seq)?,
        CheckKind::Walk => is_squared_walk(&h, &seq)?,
        CheckKind::Cycle => is_squared_cycle(&h, &seq)?,
        CheckKind::Hamiltonian => certify_hamiltonian(&h, &seq)?,
        CheckKind::Absorber => {
            let &[v, a, b, c, d, e, f] = &seq.vertices[..] else {
                return Err(usage("absorber check expects `v a b c d e f`"));
            };
            let t = [a, b, c, d, e, f];
            for x in std::iter::once(v).chain(t) {
                if x >= h.n() {
                    return Err(Error::VertexOutOfRange { vertex: x, n: h.n() }.into());
                }
            }
            is_v_absorber(&h, v, &t)
        }
        CheckKind::Stats => unreachable!(),
    };
    let verdict = if accepted { "accepted" } else { "rejected" };
    let out = if ctx.json {
        ctx.emit(&m, json!({ "accepted": accepted, "sequence": seq }), String::new)
    } else {
        format!("{verdict}\n")
    };
    Ok(Output::ok(out))
}

fn select_graph(h: &Hypergraph3, kind: GraphKind, sel: &GraphSel, cfg: &Config) -> Res<AuxGraph> {
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| usage(format!("--{name} is required for this graph")));
    Ok(match kind {
        GraphKind::G3 => build_g3(h, cfg.beta),
        GraphKind::Gv => build_gv(h, need(sel.v, "v")?, cfg.beta)?,
        GraphKind::Gvw => build_gvw(h, need(sel.v, "v")?, need(sel.w, "w")?)?,
    })
}

fn graph_text(g: &AuxGraph) -> String {
    let mut s = format!("# order {} edges {}\n", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

fn aux(ctx: &Ctx, kind: AuxKind) -> Res<Output> {
    let (graph, sel) = match &kind {
        AuxKind::G3 { sel } => (GraphKind::G3, sel),
        AuxKind::Gv { sel } => (GraphKind::Gv, sel),
        AuxKind::Gvw { sel } => (GraphKind::Gvw, sel),
        AuxKind::Walks { graph, sel, .. } | AuxKind::Expansion { graph, sel, .. } => (*graph, sel),
    };
    let cfg = checked_config(&sel.cfg)?;
    let (h, bytes) = read_input(&sel.input)?;
    let m = ctx.manifest("aux").with_config(&cfg).with_input(Some(&bytes));
    let g = select_graph(&h, graph, sel, &cfg)?;
    let out = match kind {
        AuxKind::G3 { .. } | AuxKind::Gv { .. } | AuxKind::Gvw { .. } => ctx.emit(&m, &g, || graph_text(&g)),
        AuxKind::Walks { source, length, .. } => {
            let table = walk_count_table(&g, source, length)?;
            ctx.emit(&m, &table, || table.to_csv(&g))
        }
        AuxKind::Expansion { effort, .. } => {
            let r = expansion_report(&g, cfg.gamma, effort, cfg.seed)?;
            ctx.emit(&m, &r, || {
                let mut s = format!(
                    "exhaustive {}\nmin_side {}\nrequired_crossing {}\n",
                    r.exhaustive, r.min_side, r.required_crossing
                );
                if let Some(c) = r.best_crossing {
                    let _ = writeln!(s, "best_crossing {c}");
                }
                let _ = writeln!(s, "violation {}\nverdict {}", r.violation, r.verdict);
                s
            })
        }
    };
    Ok(Output::ok(out))
}

fn triple(v: &[usize], flag: &str) -> Res<[usize; 3]> {
    v.try_into().map_err(|_| usage(format!("--{flag} expects three comma-separated ids")))
}

fn connect_cmd(ctx: &Ctx, a: ConnectArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("connect").with_config(&cfg).with_input(Some(&bytes));
    let (from, to) = (triple(&a.from, "from")?, triple(&a.to, "to")?);
    for &v in &a.forbid {
        if v >= h.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: h.n() }.into());
        }
    }
    let forbidden = VertexSet::from_iter_in(h.n(), a.forbid.iter().copied());
    let found = connect(&h, from, to, &forbidden, cfg.cap_m, a.budget.unwrap_or(DEFAULT_BUDGET))?;
    let code = if found.is_some() { 0 } else { EXIT_FAILURE_OUTCOME };
    let stdout = ctx.emit(&m, json!({ "path": found }), || match &found {
        Some(p) => format!("{p}\n"),
        None => "NONE\n".into(),
    });
    Ok(Output { stdout, code })
}

fn tile(ctx: &Ctx, a: TileArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("tile").with_config(&cfg).with_input(Some(&bytes));
    let out = match a.threshold {
        Some(t) => {
            let oracle = classify_pairs(&h, t);
            let tiling = hypersquare_core::tiling::weighted_tiling(&h, &VertexSet::full(h.n()), &oracle, cfg.seed)?;
            let v = json!({ "threshold": t, "bad_pairs": oracle.bad_pair_count(), "tiling": tiling });
            ctx.emit(&m, &v, || format!("{}\n", serde_json::to_string_pretty(&v).expect("json")))
        }
        None => {
            let f = almost_k4_factor(&h, &cfg)?;
            ctx.emit(&m, &f, || format!("{}\n", serde_json::to_string_pretty(&f).expect("json")))
        }
    };
    Ok(Output::ok(out))
}

fn cover(ctx: &Ctx, a: CoverArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("cover").with_config(&cfg).with_input(Some(&bytes));
    let c = cover_with_squared_paths(&h, cfg.q, cfg.mu, cfg.seed)?;
    let out = ctx.emit(&m, &c, || format!("{}\n", serde_json::to_string_pretty(&c).expect("json")));
    Ok(Output::ok(out))
}

fn absorb_demo(ctx: &Ctx, a: AbsorbArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let m = ctx.manifest("absorb").with_config(&cfg);
    let h = complete(a.n)?;
    let r = Reservoir::new(VertexSet::new(a.n));
    let family = build_absorber_family(&h, &r, &cfg)?;
    if family.tuples.is_empty() {
        return Err(usage(format!("complete({}) is too small for an absorber", a.n)));
    }
    let pa = build_absorbing_path(&h, &family, &r, &cfg)?;
    let x: Vec<usize> = pa
        .vertex_set(a.n)
        .complement()
        .iter()
        .take(family.tuples.len())
        .collect();
    let after = absorb(&h, &pa, &family, &x)?;
    let certified = is_squared_path(&h, &after)?;
    let v = json!({
        "n": a.n,
        "absorbers": family.tuples,
        "before": pa,
        "absorbed": x,
        "after": after,
        "after_is_squared_path": certified,
    });
    let out = ctx.emit(&m, &v, || {
        let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
        format!(
            "hypergraph complete({})\nabsorbers {}\nbefore {pa}\nabsorb {}\nafter  {after}\nsquared path {certified}\n",
            a.n,
            family.tuples.len(),
            xs.join(" ")
        )
    });
    Ok(Output::ok(out))
}

fn construct(ctx: &Ctx, a: ConstructArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("construct").with_config(&cfg).with_input(Some(&bytes));
    let r = construct_squared_hamiltonian(&h, &cfg)?;
    let code = if r.cycle().is_some() { 0 } else { EXIT_FAILURE_OUTCOME };
    let stdout = ctx.emit(&m, &r, || {
        let s = &r.stats;
        let mut t = match &r.outcome {
            Outcome::Cycle { .. } => "outcome cycle\n".to_string(),
            Outcome::Failure { stage, detail } => format!("outcome failure at {stage}: {detail}\n"),
        };
        let _ = writeln!(
            t,
            "attempts {}\nreservoir {} (used {})\nabsorbers {} (min coverage {}, degraded {})\nabsorbing_path {}\npaths {} (skipped {})\nuncovered {}\nleftover {}\nreservoir_budget_ok {}",
            s.attempts,
            s.reservoir,
            s.reservoir_used,
            s.absorbers,
            s.absorber_min_coverage,
            s.absorbers_degraded,
            s.absorbing_path,
            s.paths,
            s.skipped_paths,
            s.uncovered,
            s.leftover,
            s.reservoir_budget_ok
        );
        if ctx.timings {
            for (stage, ms) in &r.timings {
                let _ = writeln!(t, "time {stage} {ms:.3} ms");
            }
        }
        if let Some(c) = r.cycle() {
            let _ = writeln!(t, "{c}");
        }
        t
    });
    Ok(Output { stdout, code })
}

fn oracle(ctx: &Ctx, a: OracleArgs) -> Res<Output> {
    let limit = secs(a.time_limit)?;
    let (h, bytes) = read_input(&a.input)?;
    let m = ctx.manifest("oracle").with_input(Some(&bytes));
    let (label, witness) = match a.kind {
        OracleKind::Cycle => {
            let v = oracle_has_squared_hamiltonian(&h, limit);
            let w = match &v {
                Verdict::Yes(c) => Some(c.to_string()),
                _ => None,
            };
            (v.label(), w)
        }
        OracleKind::Tiling => {
            let v = oracle_has_perfect_k4_tiling(&h, limit);
            let w = match &v {
                Verdict::Yes(ts) => Some(
                    ts.iter()
                        .map(|t| format!("{} {} {} {}", t[0], t[1], t[2], t[3]))
                        .collect::<Vec<_>>()
                        .join("\n"),
                ),
                _ => None,
            };
            (v.label(), w)
        }
    };
    let code = if label == "timeout" { EXIT_FAILURE_OUTCOME } else { 0 };
    let stdout = ctx.emit(&m, json!({ "verdict": label, "witness": witness }), || match &witness {
        Some(w) => format!("{label}\n{w}\n"),
        None => format!("{label}\n"),
    });
    Ok(Output { stdout, code })
}

fn probe(ctx: &Ctx, a: ProbeArgs) -> Res<Output> {
    let cfg = checked_config(&a.cfg)?;
    let m = ctx.manifest("probe").with_config(&cfg);
    let params = ProbeParams {
        n: a.n,
        grid: a.grid,
        trials: a.trials,
        seed: cfg.seed,
        time_limit: secs(a.time_limit)?,
        mode: match a.mode {
            ProbeModeArg::Exact => ProbeMode::Exact,
            ProbeModeArg::Pipeline => ProbeMode::Pipeline,
        },
        jobs: a.jobs,
        cfg,
    };
    let report = threshold_probe(&params)?;
    Ok(Output::ok(ctx.emit(&m, &report, || report.to_csv())))
}
