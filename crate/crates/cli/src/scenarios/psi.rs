use syz_core::mc::psi_oracle_mc;
use syz_core::psi::psi_with_error;
use syz_core::ParamSet;

use super::{linspace, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const GRID_S: [f64; 5] = [-1.0, -0.25, 0.0, 0.25, 1.0];
pub const GRID_R: [f64; 5] = [0.5, 1.0, 1.5, 2.5, 4.0];
const SLICE_POINTS: usize = 41;

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let tol = cfg.precision.quad_tol;
    let mut table = Table::new("psi", &["s", "r", "psi", "err_est"]);
    let mut checks = Vec::new();

    checks.push(run_check("psi-vs-mc", "psi quadrature agrees with a Monte-Carlo estimate of the reduced area", 1.0, || {
        // measured: worst |quad - mc| / (3 (stderr + tol psi))
        let mut worst = (0.0, 0.0, 0.0);
        for (i, &s) in GRID_S.iter().enumerate() {
            for (j, &r) in GRID_R.iter().enumerate() {
                let q = psi_with_error(s, r, p, tol)?;
                table.push([s, r, q.value, q.error]);
                let seed = cfg.seed.wrapping_mul(1000).wrapping_add((i * GRID_R.len() + j) as u64);
                let mc = psi_oracle_mc(s, r, p, cfg.precision.mc_samples, seed)?;
                let ratio = (q.value - mc.estimate).abs() / (3.0 * (mc.stderr + tol * q.value));
                if ratio >= worst.0 {
                    worst = (ratio, s, r);
                }
            }
        }
        Ok(Outcome::within(worst.0, 1.0).with_detail(format!("worst at (s, r) = ({}, {})", worst.1, worst.2)))
    }));

    let mut slices = Vec::new();
    checks.push(run_check("psi-increasing-in-r", "psi is strictly increasing in r", 0.0, || {
        let mut violations = 0;
        for &s in &GRID_S {
            let mut prev = f64::NEG_INFINITY;
            for r in linspace(0.1, 4.5, SLICE_POINTS) {
                let q = psi_with_error(s, r, p, tol)?;
                table.push([s, r, q.value, q.error]);
                if !(q.value > prev) {
                    violations += 1;
                }
                prev = q.value;
                slices.push((r, q.value));
            }
        }
        Ok(Outcome::exact(violations))
    }));

    checks.push(run_check("psi-lower-bound", "psi(s, r) >= r^2/2", 0.0, || {
        if slices.is_empty() {
            return Err(syz_core::SyzError::Precondition("no slice samples".into()));
        }
        let deficit = slices.iter().map(|&(r, v)| 0.5 * r * r - v).fold(f64::NEG_INFINITY, f64::max);
        Ok(Outcome::within(deficit.max(0.0), 0.0).with_detail(format!("max of r^2/2 - psi: {deficit:e}")))
    }));

    (checks, vec![table])
}
