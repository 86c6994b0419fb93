//! Experiment configuration read from `key = value` lines.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::solver::primitive::Method;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Only `n = 1` has a lattice implementation.
    pub n: usize,
    /// Degree of the sampled forms where the experiment takes one.
    pub h: usize,
    pub trials: usize,
    pub seed: u64,
    /// Lattice points per axis on the coarse mesh.
    pub points: usize,
    pub a_x: f64,
    pub a_t: f64,
    /// Also run on the mesh with halved steps.
    pub refine: bool,
    /// Solve route; when absent the cheaper route for the degree is used.
    pub method: Option<Method>,
    pub max_base_points: usize,
    pub lambda: f64,
    /// Korányi radius of the support of sampled potentials.
    pub support_radius: f64,
    /// Power of the bump factor in sampled coefficients.
    pub bump_power: u32,
    /// Largest truncation level of the degree-one control.
    pub k_max: usize,
    /// Relative tolerance of the pairing test.
    pub tol: f64,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 1,
            h: 2,
            trials: 50,
            seed: 1,
            points: 25,
            a_x: 2.0,
            a_t: 1.0,
            refine: true,
            method: None,
            max_base_points: 100,
            lambda: 2.0,
            support_radius: 1.5,
            bump_power: 6,
            k_max: 8,
            tol: 1e-3,
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    /// Parses `key = value` lines; `#` starts a comment and strings may be bare.
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let quoted = v.parse::<f64>().is_ok() || v == "true" || v == "false" || v.starts_with('"');
            if quoted {
                doc.push_str(&format!("{k} = {v}\n"));
            } else {
                doc.push_str(&format!("{k} = {:?}\n", v));
            }
        }
        let cfg: ExperimentConfig = toml::from_str(&doc).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n != 1 {
            return Err(Error::Config(format!("lattice experiments run on ℍ¹ only, got n = {}", self.n)));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.points < 9 || self.points % 2 == 0 {
            return Err(Error::Config(format!("points must be odd and at least 9, got {}", self.points)));
        }
        if !(self.lambda > 1.0) || !(self.support_radius > 0.0) || !(self.tol > 0.0) || self.k_max == 0 {
            return Err(Error::Config("lambda > 1, support_radius > 0, tol > 0 and k_max ≥ 1 are required".into()));
        }
        self.spec().map(|_| ())
    }

    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::cube(self.a_x, self.a_t, self.points)
    }

    /// The coarse mesh and, if requested, its refinement.
    pub fn meshes(&self) -> Result<Vec<GridSpec>> {
        let s = self.spec()?;
        Ok(if self.refine { vec![s.clone(), s.refined()] } else { vec![s] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bare_values() {
        let cfg = ExperimentConfig::parse("# poincare\nh = 3\ntrials = 4 # few\nmethod = laplacian\nout_dir = out/run\nrefine = false\n").unwrap();
        assert_eq!(cfg.h, 3);
        assert_eq!(cfg.trials, 4);
        assert_eq!(cfg.method, Some(Method::Laplacian));
        assert_eq!(cfg.out_dir, Some(PathBuf::from("out/run")));
        assert!(!cfg.refine);
        assert_eq!(cfg.points, 25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("trials = 0").is_err());
        assert!(ExperimentConfig::parse("n = 2").is_err());
        assert!(ExperimentConfig::parse("nonsense = 1").is_err());
        assert!(ExperimentConfig::parse("just words").is_err());
        assert!(ExperimentConfig::parse("points = 24").is_err());
    }
}
