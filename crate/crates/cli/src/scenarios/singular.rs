use syz_core::dual::{classify_point, corner_a, gamma_vec, PsiCache, SmoothnessVerdict};
use syz_core::ParamSet;

use super::{linspace, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

pub const GRID: usize = 200;
const SLICES: [f64; 3] = [-0.5, 0.0, 0.5];
const SLICE_POINTS: usize = 60;

/// `s = (i - 100)/100` for `i < 200`.
pub fn grid_s() -> Vec<f64> {
    (0..GRID).map(|i| (i as f64 - 100.0) / 100.0).collect()
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let n = p.n();
    let tol = cfg.precision.psi_match_tol;
    let cache = PsiCache::new(p.clone(), cfg.precision.quad_tol);
    let mut header = vec!["s".to_string(), "c".to_string()];
    header.extend((0..=n + 1).map(|k| format!("gamma_{k}")));
    let mut slices = Table::new("surface_slices", &header.iter().map(String::as_str).collect::<Vec<_>>());
    let mut checks = Vec::new();

    checks.push(run_check("singular-at-corners", "F is singular exactly at the corners A_k(0), k = 0..n", 0.0, || {
        let mut bad = 0;
        for k in 0..=n {
            match classify_point(&corner_a(k, 0.0, &cache)?, &cache, tol)? {
                SmoothnessVerdict::Singular { k: j, .. } if j == k => {}
                _ => bad += 1,
            }
        }
        Ok(Outcome::exact(bad))
    }));

    checks.push(run_check("smooth-off-corners", "F is smooth, with an explicit chart witness, at every grid sample off the corners", 0.0, || {
        let top = cache.values(0.0)?[n];
        let cs = linspace(-1.0, top + 4.0, GRID);
        let mut bad = 0;
        let mut first = None;
        for s in grid_s() {
            for &c in &cs {
                let verdict = classify_point(&gamma_vec(s, c, &cache)?, &cache, tol);
                if !matches!(verdict, Ok(SmoothnessVerdict::Smooth(_))) {
                    bad += 1;
                    first.get_or_insert(format!("(s, c) = ({s}, {c}): {verdict:?}"));
                }
            }
        }
        let out = Outcome::exact(bad);
        Ok(match first {
            Some(d) => out.with_detail(d),
            None => out,
        })
    }));

    if let Ok(psi0) = cache.values(0.0) {
        for &s in &SLICES {
            for c in linspace(-1.0, psi0[n] + 4.0, SLICE_POINTS) {
                if let Ok(g) = gamma_vec(s, c, &cache) {
                    let mut row = vec![s, c];
                    row.extend_from_slice(g.gammas());
                    slices.push(row);
                }
            }
        }
    }

    (checks, vec![slices])
}
