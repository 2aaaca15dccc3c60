//! Oracle-versus-pipeline sweeps over minimum pair-degree fractions.

use std::fmt::Write as _;
use std::time::Duration;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::generators::{ceil_fraction, dense_random_with_base, derive_seed};
use crate::oracle::oracle_has_squared_hamiltonian;
use crate::pipeline::construct_squared_hamiltonian;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeMode {
    /// Oracle and pipeline.
    Exact,
    /// Pipeline only; the oracle column reads `skipped`.
    Pipeline,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub fraction: f64,
    pub trial: usize,
    /// `yes`, `no`, `timeout` or `skipped`.
    pub oracle_verdict: &'static str,
    /// `yes` or `fail`.
    pub pipeline_verdict: &'static str,
    /// `agree`, `miss` (oracle yes, pipeline fail), `conflict` (oracle no,
    /// pipeline yes; never expected) or `na`.
    pub agreement: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("fraction,trial,oracle_verdict,pipeline_verdict,agreement\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{},{}", r.fraction, r.trial, r.oracle_verdict, r.pipeline_verdict, r.agreement);
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct ProbeParams {
    pub n: usize,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub time_limit: Duration,
    pub mode: ProbeMode,
    /// Worker threads; `0` lets rayon decide.
    pub jobs: usize,
    pub cfg: Config,
}

fn agreement(oracle: &str, pipeline: &str) -> &'static str {
    match (oracle, pipeline) {
        ("yes", "yes") | ("no", "fail") => "agree",
        ("yes", "fail") => "miss",
        ("no", "yes") => "conflict",
        _ => "na",
    }
}

/// For each fraction `f`, `trials` instances with minimum pair degree
/// `min(⌈f n⌉, n - 2)` grown from a binomial base with edge probability `f`.
/// Rows come out in grid-then-trial order whatever the thread count.
pub fn threshold_probe(p: &ProbeParams) -> Result<ProbeReport> {
    if p.n < 5 {
        return Err(Error::arg(format!("probe needs n >= 5, got {}", p.n)));
    }
    if let Some(f) = p.grid.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::arg(format!("grid fraction {f} outside [0, 1]")));
    }
    p.cfg.validate()?;
    let cells: Vec<(usize, f64, usize)> = p
        .grid
        .iter()
        .enumerate()
        .flat_map(|(i, &f)| (0..p.trials).map(move |t| (i, f, t)))
        .collect();
    let run = |&(i, f, t): &(usize, f64, usize)| -> Result<ProbeRow> {
        let s = derive_seed(p.seed, (i * p.trials + t) as u64);
        let d = ceil_fraction(f, p.n).min(p.n - 2);
        let h = dense_random_with_base(p.n, d, f, s)?;
        let oracle = match p.mode {
            ProbeMode::Exact => oracle_has_squared_hamiltonian(&h, p.time_limit).label(),
            ProbeMode::Pipeline => "skipped",
        };
        let report = construct_squared_hamiltonian(&h, &p.cfg.clone().with_seed(s))?;
        let pipeline = if report.cycle().is_some() { "yes" } else { "fail" };
        Ok(ProbeRow {
            fraction: f,
            trial: t,
            oracle_verdict: oracle,
            pipeline_verdict: pipeline,
            agreement: agreement(oracle, pipeline),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(p.jobs)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;
    let rows = pool.install(|| cells.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    Ok(ProbeReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(grid: Vec<f64>, jobs: usize) -> ProbeParams {
        ProbeParams {
            n: 10,
            grid,
            trials: 3,
            seed: 1,
            time_limit: Duration::from_secs(30),
            mode: ProbeMode::Exact,
            jobs,
            cfg: Config::default(),
        }
    }

    #[test]
    fn full_fraction_is_all_yes() {
        let r = threshold_probe(&params(vec![1.0], 1)).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.rows.iter().all(|x| x.oracle_verdict == "yes" && x.pipeline_verdict == "yes"));
    }

    #[test]
    fn empty_fraction_is_all_no() {
        let r = threshold_probe(&params(vec![0.0], 1)).unwrap();
        assert!(r.rows.iter().all(|x| x.oracle_verdict == "no" && x.agreement == "agree"));
    }

    #[test]
    fn csv_is_independent_of_threads() {
        let a = threshold_probe(&params(vec![0.7, 0.8, 0.9], 1)).unwrap().to_csv();
        let b = threshold_probe(&params(vec![0.7, 0.8, 0.9], 4)).unwrap().to_csv();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 9);
        assert!(!a.contains("conflict"));
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(threshold_probe(&params(vec![1.2], 1)).is_err());
    }
}
