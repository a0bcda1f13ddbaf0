use syz_core::dual::{f_map, PsiCache};
use syz_core::geometry::{chain_curve, is_radially_monotone, lagrangian_sphere_image};
use syz_core::toric::TropToricPoint;
use syz_core::{ExtReal, ParamSet, SyzError};

use super::{linspace, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const ENDPOINT_TOL: f64 = 1e-6;
pub const SWEEP_POINTS: usize = 200;
const INV_TOL: f64 = 1e-10;
const CHAIN_SEGMENTS: usize = 256;

/// A point of `D_i`: `x_i = 0`, `val(x_{i+1}) = sigma`, the rest units.
pub fn divisor_point(n: usize, i: usize, sigma: f64) -> syz_core::Result<TropToricPoint> {
    let mut vx = vec![ExtReal::Finite(0.0); n + 2];
    vx[i] = ExtReal::PosInf;
    vx[i + 1] = ExtReal::Finite(sigma);
    TropToricPoint::new(vx, 0.0)
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let n = p.n();
    let tol = cfg.precision.psi_match_tol;
    let cache = PsiCache::new(p.clone(), cfg.precision.quad_tol);
    let mut sweep = Table::new("divisor_sweep", &["i", "t", "f_r"]);
    let mut checks = Vec::new();

    for i in 1..=n {
        let (lo, hi) = (p.norm(i - 1), p.norm(i));
        checks.push(run_check(
            &format!("divisor-image-D{i}"),
            &format!("f(D_{i}) = {{0}} x [|a_{}|, |a_{i}|]", i - 1),
            ENDPOINT_TOL,
            || {
                let psi0 = cache.values(0.0)?;
                let (c_lo, c_hi) = (psi0[i - 1], psi0[i]);
                let sigmas = linspace(c_lo - 1.0, c_hi + 1.0, SWEEP_POINTS);
                let dc = sigmas[1] - sigmas[0];
                let mut rs = Vec::with_capacity(SWEEP_POINTS);
                for &sigma in &sigmas {
                    let q = f_map(&divisor_point(n, i, sigma)?, &cache, tol, INV_TOL)?;
                    if q.s != 0.0 {
                        return Err(SyzError::Precondition(format!("image has s = {}", q.s)));
                    }
                    sweep.push([i as f64, sigma, q.r]);
                    rs.push(q.r);
                }
                rs.sort_by(f64::total_cmp);
                let endpoint = (rs[0] - lo).abs().max((rs[rs.len() - 1] - hi).abs());
                // psi_r >= r, so a step dc in c moves r by at most dc / |a_{i-1}|
                let resolution = dc / lo;
                let gap = rs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
                let out = Outcome::within(endpoint, ENDPOINT_TOL);
                let pass = out.pass && gap <= resolution;
                Ok(Outcome { pass, ..out }.with_detail(format!("largest interior gap {gap:e}, resolution {resolution:e}")))
            },
        ));

        checks.push(run_check(
            &format!("sphere-image-{i}"),
            &format!("pi of the matching sphere over a radially monotone chain curve is {{0}} x [|a_{}|, |a_{i}|]", i - 1),
            0.0,
            || {
                let curve = chain_curve(p, i, CHAIN_SEGMENTS)?;
                if !is_radially_monotone(&curve) {
                    return Err(SyzError::Precondition("chain curve is not radially monotone".into()));
                }
                let im = lagrangian_sphere_image(&curve, p)?;
                let exact = im.s == 0.0 && im.r_min == lo && im.r_max == hi;
                let dev = (im.r_min - lo).abs().max((im.r_max - hi).abs()).max(im.s.abs());
                Ok(Outcome { measured: dev, pass: exact, detail: None })
            },
        ));
    }

    (checks, vec![sweep])
}
