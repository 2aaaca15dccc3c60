use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tunable constants of the construction.
///
/// The proof orders them as `1 ≫ α ≫ β, γ ≫ 1/M ≫ ϑ*`; at desk scale they are
/// plain knobs. Every operation that takes a `Config` calls [`Config::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Degree slack above the 4/5 threshold.
    pub alpha: f64,
    /// Density threshold for `G3` and `Gv`; must stay below `alpha / 8`.
    pub beta: f64,
    /// Expansion threshold for auxiliary graphs.
    pub gamma: f64,
    /// Reservoir and absorber scale `ϑ*`.
    pub theta_star: f64,
    /// `M`: a connection has fewer than `cap_m` internal vertices.
    pub cap_m: usize,
    /// Vertices per cover path; a positive multiple of 4.
    pub q: usize,
    /// Bad-pair density for the tiling step.
    pub tau: f64,
    /// Tolerated uncovered fraction for the path cover.
    pub mu: f64,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            alpha: 0.05,
            beta: 0.005,
            gamma: 0.003,
            theta_star: 0.15,
            cap_m: 12,
            q: 8,
            tau: 0.01,
            mu: 0.1,
            seed: 0,
        }
    }
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} = {x} must lie in (0, 1)")))
    }
}

impl Config {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        open_unit("alpha", self.alpha)?;
        open_unit("beta", self.beta)?;
        open_unit("gamma", self.gamma)?;
        open_unit("tau", self.tau)?;
        open_unit("mu", self.mu)?;
        // ϑ* = 0 is allowed: it switches the reservoir off
        if !(0.0..1.0).contains(&self.theta_star) {
            return Err(Error::Config(format!(
                "theta_star = {} must lie in [0, 1)",
                self.theta_star
            )));
        }
        if self.beta >= self.alpha / 8.0 {
            return Err(Error::Config(format!(
                "beta = {} must be below alpha / 8 = {}",
                self.beta,
                self.alpha / 8.0
            )));
        }
        if self.cap_m < 1 {
            return Err(Error::Config("cap_m must be at least 1".into()));
        }
        if self.q == 0 || self.q % 4 != 0 {
            return Err(Error::Config(format!("q = {} must be a positive multiple of 4", self.q)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        Config::default().validate().unwrap();
    }

    #[test]
    fn beta_must_stay_below_alpha_over_eight() {
        let cfg = Config {
            beta: 0.00625,
            ..Config::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn q_must_be_multiple_of_four() {
        for q in [0, 6, 10] {
            let cfg = Config { q, ..Config::default() };
            assert!(cfg.validate().is_err(), "q = {q}");
        }
        Config { q: 12, ..Config::default() }.validate().unwrap();
    }

    #[test]
    fn fractions_checked() {
        assert!(Config { alpha: 1.0, ..Config::default() }.validate().is_err());
        assert!(Config { cap_m: 0, ..Config::default() }.validate().is_err());
        assert!(Config { theta_star: 1.0, ..Config::default() }.validate().is_err());
        Config { theta_star: 0.0, ..Config::default() }.validate().unwrap();
    }
}
