use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypersquare_core::Config;

#[derive(Parser, Debug)]
#[command(name = "hypersquare", version, about = "Squared Hamiltonian cycles in 3-uniform hypergraphs")]
pub struct Cli {
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a hypergraph in the text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check a vertex sequence against a predicate.
    Check(CheckArgs),
    /// Auxiliary graphs, walk counts and expansion.
    Aux {
        #[command(subcommand)]
        kind: AuxKind,
    },
    /// Shortest connecting squared path between two disjoint edges.
    Connect(ConnectArgs),
    /// Weighted tiling / almost-K4-factor.
    Tile(TileArgs),
    /// Greedy cover by squared paths of a fixed length.
    Cover(CoverArgs),
    /// Absorption walkthrough on a complete hypergraph.
    Absorb(AbsorbArgs),
    /// Run the full construction.
    Construct(ConstructArgs),
    /// Exact oracles for small instances.
    Oracle(OracleArgs),
    /// Oracle-versus-pipeline sweep over pair-degree fractions, as CSV.
    Probe(ProbeArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub theta_star: Option<f64>,
    #[arg(long)]
    pub cap_m: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Falls back to HYPERSQUARE_SEED, then 0.
    #[arg(long, env = "HYPERSQUARE_SEED")]
    pub seed: Option<u64>,
}

impl ConfigArgs {
    pub fn config(&self) -> Config {
        let d = Config::default();
        Config {
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            gamma: self.gamma.unwrap_or(d.gamma),
            theta_star: self.theta_star.unwrap_or(d.theta_star),
            cap_m: self.cap_m.unwrap_or(d.cap_m),
            q: self.q.unwrap_or(d.q),
            tau: self.tau.unwrap_or(d.tau),
            mu: self.mu.unwrap_or(d.mu),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Hypergraph file; standard input when absent.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    Complete {
        n: usize,
    },
    Pikhurko {
        n: usize,
    },
    Random {
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, env = "HYPERSQUARE_SEED")]
        seed: Option<u64>,
    },
    Dense {
        n: usize,
        /// Target minimum pair degree as a fraction of n.
        #[arg(long)]
        delta2: f64,
        #[arg(long, env = "HYPERSQUARE_SEED")]
        seed: Option<u64>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum CheckKind {
    Path,
    Walk,
    Cycle,
    Hamiltonian,
    /// `SEQ` is `v a b c d e f`.
    Absorber,
    /// Degree statistics; no sequence.
    Stats,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub kind: CheckKind,
    /// Space-separated ids, prefixed `C ` for a closed sequence.
    pub seq: Option<String>,
    #[command(flatten)]
    pub input: Input,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum GraphKind {
    G3,
    Gv,
    Gvw,
}

#[derive(Args, Debug)]
pub struct GraphSel {
    #[arg(long)]
    pub v: Option<usize>,
    #[arg(long)]
    pub w: Option<usize>,
    #[command(flatten)]
    pub cfg: ConfigArgs,
    #[command(flatten)]
    pub input: Input,
}

#[derive(Subcommand, Debug)]
pub enum AuxKind {
    G3 {
        #[command(flatten)]
        sel: GraphSel,
    },
    Gv {
        #[command(flatten)]
        sel: GraphSel,
    },
    Gvw {
        #[command(flatten)]
        sel: GraphSel,
    },
    /// Walk counts from one source, as CSV.
    Walks {
        #[arg(long, value_enum)]
        graph: GraphKind,
        #[arg(long)]
        source: usize,
        #[arg(long)]
        length: usize,
        #[command(flatten)]
        sel: GraphSel,
    },
    /// Edge-expansion report.
    Expansion {
        #[arg(long, value_enum)]
        graph: GraphKind,
        /// Restarts for the heuristic search on large graphs.
        #[arg(long, default_value_t = 64)]
        effort: usize,
        #[command(flatten)]
        sel: GraphSel,
    },
}

#[derive(Args, Debug)]
pub struct ConnectArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub from: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub to: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub forbid: Vec<usize>,
    #[arg(long)]
    pub budget: Option<usize>,
    #[command(flatten)]
    pub cfg: ConfigArgs,
    #[command(flatten)]
    pub input: Input,
}

#[derive(Args, Debug)]
pub struct TileArgs {
    /// Bad-pair threshold for a plain weighted tiling of all vertices;
    /// without it the almost-K4-factor procedure runs.
    #[arg(long)]
    pub threshold: Option<usize>,
    #[command(flatten)]
    pub cfg: ConfigArgs,
    #[command(flatten)]
    pub input: Input,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    pub cfg: ConfigArgs,
    #[command(flatten)]
    pub input: Input,
}

#[derive(Args, Debug)]
pub struct AbsorbArgs {
    /// Run the built-in walkthrough (the only mode).
    #[arg(long, required = true)]
    pub demo: bool,
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[command(flatten)]
    pub cfg: ConfigArgs,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub cfg: ConfigArgs,
    #[command(flatten)]
    pub input: Input,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum OracleKind {
    Cycle,
    Tiling,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub kind: OracleKind,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    #[command(flatten)]
    pub input: Input,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum ProbeModeArg {
    Exact,
    Pipeline,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Seconds per oracle call.
    #[arg(long, default_value_t = 30.0)]
    pub time_limit: f64,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ProbeModeArg,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub cfg: ConfigArgs,
}
