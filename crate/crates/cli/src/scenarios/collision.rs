use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use syz_core::dual::{degenerate_f_reduced, f_eval, PsiCache};
use syz_core::geometry::{collision_time, half_twist_path, singular_track};
use syz_core::toric::TropToricPoint;
use syz_core::{ExtReal, ParamSet, Result, SyzError};

use super::{linspace, rng, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const RANDOM_POINTS: usize = 500;
pub const T0_TOL: f64 = 1e-6;
const TRACK_POINTS: usize = 101;

fn dyadic(r: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    r.gen_range(lo * 8..hi * 8) as f64 / 8.0
}

/// Random valid tropical point with dyadic valuations: dense torus, or one or
/// two adjacent vanishing coordinates.
pub fn random_trop_point(r: &mut ChaCha8Rng, n: usize) -> Result<TropToricPoint> {
    if r.gen_bool(0.6) {
        let vy = dyadic(r, -1, 2);
        let mut vx: Vec<f64> = (0..=n).map(|_| dyadic(r, -2, 3)).collect();
        let floor = vy.min(0.0) + if vy == 0.0 { dyadic(r, 0, 1) } else { 0.0 };
        vx.push(floor - vx.iter().sum::<f64>());
        TropToricPoint::new(vx.into_iter().map(ExtReal::Finite).collect(), vy)
    } else {
        let mut vx: Vec<ExtReal> = (0..n + 2).map(|_| ExtReal::Finite(dyadic(r, -2, 3))).collect();
        let i = r.gen_range(0..n + 2);
        vx[i] = ExtReal::PosInf;
        if i + 1 < n + 2 && r.gen_bool(0.5) {
            vx[i + 1] = ExtReal::PosInf;
        }
        TropToricPoint::new(vx, 0.0)
    }
}

/// `t0` with `|a_{k-1}(t0)| = |a_k(t0)|`: `Re(conj(m) d e^{i pi t}) = 0`.
pub fn closed_form_t0(p: &ParamSet, k: usize) -> f64 {
    let (a, b) = (p.roots()[k - 1], p.roots()[k]);
    let m = 0.5 * (a + b);
    let d = 0.5 * (a - b);
    ((0.5 * PI - (m.conj() * d).arg()) / PI).rem_euclid(1.0)
}

fn count_at(p: &ParamSet, k: usize, t: f64) -> Result<usize> {
    Ok(singular_track(&half_twist_path(p, k, t)?).len())
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let n = p.n();
    let k = cfg.collision.twist_index;
    let mut track = Table::new("delta_track", &["t", "count", "radii"]);
    let mut checks = Vec::new();

    checks.push(run_check("degenerate-f-matches", "with all |a_k| = lambda, F_0 and F_{n+1} reduce to min/max against psi(s, lambda)", 0.0, || {
        let lambda = cfg.collision.lambda;
        let collided = cfg
            .collision
            .collided(n)
            .map_err(|e| SyzError::InvalidParams(e.to_string()))?;
        let cache = PsiCache::new(collided, cfg.precision.quad_tol);
        let mut r = rng(cfg.seed, 5);
        let mut bad = 0;
        for _ in 0..RANDOM_POINTS {
            let t = random_trop_point(&mut r, n)?;
            bad += usize::from(degenerate_f_reduced(&t, lambda, &cache)? != f_eval(&t, &cache)?);
        }
        Ok(Outcome::exact(bad))
    }));

    checks.push(run_check("twist-collision-time", "the half twist makes |a_{k-1}| = |a_k| at the closed-form t0", T0_TOL, || {
        if k == 0 || k > n {
            return Err(SyzError::IndexOutOfRange { index: k, limit: n + 1 });
        }
        let t0 = closed_form_t0(p, k);
        let t = collision_time(p, k, 0.1 * T0_TOL)?;
        Ok(Outcome::within((t - t0).abs(), T0_TOL).with_detail(format!("bisection {t}, closed form {t0}")))
    }));

    checks.push(run_check("twist-count-transition", "the singular-locus component count drops by one at t0 and recovers", 0.0, || {
        if k == 0 || k > n {
            return Err(SyzError::IndexOutOfRange { index: k, limit: n + 1 });
        }
        let t0 = closed_form_t0(p, k);
        let probes = [0.0, 0.5 * t0, t0, 0.5 * (1.0 + t0), 1.0];
        let expected = [n + 1, n + 1, n, n + 1, n + 1];
        let mut got = Vec::new();
        for &t in &probes {
            got.push(count_at(p, k, t)?);
        }
        let bad = got.iter().zip(&expected).filter(|(a, b)| a != b).count();
        Ok(Outcome::exact(bad).with_detail(format!("counts {got:?} at t = {probes:?}")))
    }));

    if (1..=n).contains(&k) {
        let t0 = closed_form_t0(p, k);
        let mut ts = linspace(0.0, 1.0, TRACK_POINTS);
        ts.push(t0);
        ts.sort_by(f64::total_cmp);
        for t in ts {
            // a root passing through z = 0 has no valid parameter set; skip it
            if let Ok(q) = half_twist_path(p, k, t) {
                let pts = singular_track(&q);
                let radii: Vec<String> = pts.iter().map(|b| b.r.to_string()).collect();
                track.push([t.to_string(), pts.len().to_string(), radii.join(";")]);
            }
        }
    }

    (checks, vec![track])
}
