use syz_core::disks::{disk_area, disk_beta, disk_delta};
use syz_core::psi::psi;
use syz_core::ParamSet;

use super::ScenarioResult;
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const BETA_TOL: f64 = 1e-6;
pub const DELTA_TOL: f64 = 1e-8;
const AREA_QUAD_TOL: f64 = 1e-10;
const DELTA_S: [f64; 4] = [-0.7, -0.1, 0.3, 1.2];

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0..1u32 << k).map(|m| (0..k).filter(|i| m >> i & 1 == 1).collect()).collect()
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let n = p.n();
    let tol = cfg.precision.quad_tol.min(AREA_QUAD_TOL);
    let mut table = Table::new("disk_areas", &["kind", "k", "subset_mask", "s", "area", "expected"]);
    let mut checks = Vec::new();

    checks.push(run_check("beta-area-equals-psi", "disk_area(beta_k) = psi(0, r_k)", BETA_TOL, || {
        let mut worst: f64 = 0.0;
        for k in 0..=n + 1 {
            let area = disk_area(&disk_beta(k, &[], p)?, tol)?;
            let expected = psi(0.0, p.radius(k)?, p, tol)?;
            table.push(["beta".to_string(), k.to_string(), "0".into(), "0".into(), area.to_string(), expected.to_string()]);
            worst = worst.max((area - expected).abs());
        }
        Ok(Outcome::within(worst, BETA_TOL))
    }));

    checks.push(run_check("beta-subset-areas-agree", "beta_{k,I} has the same area for every I in [k] at s = 0", BETA_TOL, || {
        let mut worst: f64 = 0.0;
        for k in 0..=n + 1 {
            let base = disk_area(&disk_beta(k, &[], p)?, tol)?;
            for (mask, subset) in subsets(k).into_iter().enumerate().skip(1) {
                let area = disk_area(&disk_beta(k, &subset, p)?, tol)?;
                table.push(["beta".to_string(), k.to_string(), mask.to_string(), "0".into(), area.to_string(), base.to_string()]);
                worst = worst.max((area - base).abs());
            }
        }
        Ok(Outcome::within(worst, BETA_TOL))
    }));

    checks.push(run_check("delta-area-equals-s", "disk_area(delta_k, s) = s", DELTA_TOL, || {
        let mut worst: f64 = 0.0;
        for k in 0..=n {
            for &s in &DELTA_S {
                let area = disk_area(&disk_delta(k, s, p)?, tol)?;
                table.push(["delta".to_string(), k.to_string(), "0".into(), s.to_string(), area.to_string(), s.to_string()]);
                worst = worst.max((area - s).abs());
            }
        }
        Ok(Outcome::within(worst, DELTA_TOL))
    }));

    (checks, vec![table])
}
