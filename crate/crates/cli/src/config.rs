use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use syz_core::psi::DEFAULT_QUAD_TOL;
use syz_core::valuation::DEFAULT_CUTOFF;
use syz_core::ParamSet;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    /// Optional; checked against the number of roots when present.
    #[serde(default)]
    pub n: Option<usize>,
    /// Roots `a_0..a_n` as `[re, im]`.
    pub a: Vec<[f64; 2]>,
    #[serde(default)]
    pub r: Option<Vec<f64>>,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig {
            n: Some(2),
            a: vec![[1.0, 0.0], [0.0, 2.0], [-3.0, 0.0]],
            r: None,
        }
    }
}

impl ParamsConfig {
    pub fn build(&self) -> Result<ParamSet> {
        if let Some(n) = self.n {
            if n + 1 != self.a.len() {
                bail!("n = {n} but {} roots were given", self.a.len());
            }
        }
        let a = self.a.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(ParamSet::new(a, self.r.clone())?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Precision {
    /// Relative tolerance for psi quadrature.
    pub quad_tol: f64,
    pub mc_samples: usize,
    /// Relative Novikov precision, in orders of `T` past the leading term.
    pub novikov_cutoff: f64,
    pub psi_match_tol: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            quad_tol: DEFAULT_QUAD_TOL,
            mc_samples: 10_000_000,
            novikov_cutoff: DEFAULT_CUTOFF,
            psi_match_tol: syz_core::dual::PSI_MATCH_TOL,
        }
    }
}

/// Inputs specific to the `collision` scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CollisionConfig {
    /// Common norm of the collided root set.
    pub lambda: f64,
    /// Arguments of the collided roots; defaults to `0.3 + 1.6 j`.
    pub angles: Option<Vec<f64>>,
    /// Twist `a_{k-1}` and `a_k`.
    pub twist_index: usize,
}

impl Default for CollisionConfig {
    fn default() -> Self {
        CollisionConfig {
            lambda: 2.0,
            angles: None,
            twist_index: 1,
        }
    }
}

impl CollisionConfig {
    pub fn collided(&self, n: usize) -> Result<ParamSet> {
        let angles = match &self.angles {
            Some(a) => a.clone(),
            None => (0..=n).map(|j| 0.3 + 1.6 * j as f64).collect(),
        };
        if angles.len() != n + 1 {
            bail!("collision needs {} angles, got {}", n + 1, angles.len());
        }
        Ok(ParamSet::collided(self.lambda, &angles)?)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: ParamsConfig,
    pub precision: Precision,
    pub scenario: Option<String>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub collision: CollisionConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("parsing run config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.build().context("invalid params")?;
        let p = &self.precision;
        if !(p.quad_tol > 0.0 && p.psi_match_tol > 0.0 && p.novikov_cutoff > 0.0) {
            bail!("tolerances and cutoff must be positive");
        }
        if p.mc_samples < syz_core::mc::MIN_SAMPLES {
            bail!("mc_samples must be at least {}", syz_core::mc::MIN_SAMPLES);
        }
        Ok(())
    }
}
