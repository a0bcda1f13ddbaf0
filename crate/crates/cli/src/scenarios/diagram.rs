use rand::Rng;

use syz_core::dual::{f_eval, j_embed, j_inverse, PsiCache};
use syz_core::mirror::{fiber_point, g_embed, pi0_dual, MirrorPoint};
use syz_core::psi::BasePoint;
use syz_core::toric::{same_point, val_point};
use syz_core::wall_crossing::Walls;
use syz_core::{NovikovNum, ParamSet, Result};

use super::{linspace, minus_one_plus, random_unit, rng, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const INV_TOL: f64 = 1e-9;
pub const INJECTIVITY_POINTS: usize = 200;
pub const ROUND_TRIP_TOL: f64 = 1e-6;
const SAME_POINT_TOL: f64 = 1e-9;
const TAUS: [f64; 2] = [0.5, 1.5];

/// Five base points in `U_k`: three in `R_k` and one in each of `N+` and `N-`
/// of an adjacent wall.
pub fn sample_plan(walls: &Walls, k: usize) -> Result<Vec<BasePoint>> {
    let (lo, hi) = walls.r_interval(k);
    let (mid, low) = if hi.is_finite() { (0.5 * (lo + hi), lo + 0.3 * (hi - lo)) } else { (lo + 1.0, lo + 0.6) };
    let w = 0.5 * walls.width();
    let (wall, inward) = if k == 0 { (0, -w) } else { (k - 1, w) };
    [
        (0.0, mid),
        (0.3, mid),
        (-0.4, low),
        (0.2, walls.norm(wall) + inward),
        (-0.2, walls.norm(wall) - inward),
    ]
    .into_iter()
    .map(|(s, r)| BasePoint::new(s, r))
    .collect()
}

fn diagram_deviation(m: &MirrorPoint, p: &ParamSet, cache: &PsiCache, quad_tol: f64) -> Result<f64> {
    let lhs = f_eval(&val_point(&g_embed(m)?)?, cache)?;
    let rhs = j_embed(pi0_dual(m, p, quad_tol, INV_TOL)?, cache)?;
    Ok(lhs.max_deviation(&rhs))
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let quad_tol = cfg.precision.quad_tol;
    let prec = cfg.precision.novikov_cutoff;
    let tol = cfg.precision.psi_match_tol;
    let cache = PsiCache::new(p.clone(), quad_tol);
    let mut table = Table::new("diagram", &["chart", "s", "r", "unit1", "deviation"]);
    let mut checks = Vec::new();

    checks.push(run_check("diagram-commutes", "F(val(g(y))) = j(pi_0^dual(y)) on every chart", tol, || {
        let walls = Walls::new(p)?;
        let mut r = rng(cfg.seed, 3);
        let mut worst: f64 = 0.0;
        for k in 0..=p.n() + 1 {
            for q in sample_plan(&walls, k)? {
                let mut units: Vec<(String, NovikovNum)> = vec![("generic".into(), random_unit(&mut r, prec))];
                units.extend(TAUS.iter().map(|&t| (format!("-1+T^{t}"), minus_one_plus(t, prec))));
                for (label, u1) in units {
                    let m = fiber_point(q, k, &u1, &random_unit(&mut r, prec), p, quad_tol)?;
                    let dev = diagram_deviation(&m, p, &cache, quad_tol)?;
                    table.push([k.to_string(), q.s.to_string(), q.r.to_string(), label, dev.to_string()]);
                    worst = worst.max(dev);
                }
            }
        }
        Ok(Outcome::within(worst, tol))
    }));

    checks.push(run_check("g-injective", "g is injective: distinct mirror points have distinct images", 0.0, || {
        let walls = Walls::new(p)?;
        let mut r = rng(cfg.seed, 4);
        let mut images = Vec::with_capacity(INJECTIVITY_POINTS);
        while images.len() < INJECTIVITY_POINTS {
            let k = r.gen_range(0..=p.n() + 1);
            let (lo, hi) = walls.r_interval(k);
            let hi = if hi.is_finite() { hi } else { lo + 2.0 };
            let q = BasePoint::new(r.gen_range(-1.0..1.0), r.gen_range(lo..hi).max(1e-3))?;
            let m = fiber_point(q, k, &random_unit(&mut r, prec), &random_unit(&mut r, prec), p, quad_tol)?;
            images.push(g_embed(&m)?);
        }
        let mut clashes = 0;
        for i in 0..images.len() {
            for j in 0..i {
                clashes += usize::from(same_point(&images[i], &images[j], SAME_POINT_TOL));
            }
        }
        Ok(Outcome::exact(clashes))
    }));

    checks.push(run_check("j-round-trip", "j^{-1}(j(q)) = q on a base grid", ROUND_TRIP_TOL, || {
        let mut worst: f64 = 0.0;
        for s in linspace(-1.0, 1.0, 20) {
            for rad in linspace(0.2, 4.5, 20) {
                let back = j_inverse(&j_embed(BasePoint::new(s, rad)?, &cache)?, &cache, tol, INV_TOL)?;
                let err = if back.s == s { (back.r - rad).abs() } else { f64::INFINITY };
                worst = worst.max(err);
            }
        }
        Ok(Outcome::within(worst, ROUND_TRIP_TOL))
    }));

    (checks, vec![table])
}
