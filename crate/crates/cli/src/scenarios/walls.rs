use std::collections::BTreeMap;

use rand::Rng;

use syz_core::mirror::{change_chart, fiber_point, w_local};
use syz_core::psi::BasePoint;
use syz_core::wall_crossing::{
    class_matrix, expand_beta, intersect, intersection_row, monodromy_loop, monodromy_transport,
    solve_class_from_intersections, DiskClass, DivisorTag, RegionTag, WallSide, Walls,
};
use syz_core::ParamSet;

use super::{random_unit, rng, ScenarioResult};
use crate::config::RunConfig;
use crate::report::{run_check, Outcome, Table};

/// Class-algebra checks run for every `n` up to this.
pub const MAX_N: usize = 4;
pub const MAX_L: usize = 4;
pub const GLUING_POINTS: usize = 100;
const RANDOM_CLASSES: usize = 50;
const COEFF_TOL: f64 = 1e-9;

fn subsets(l: usize) -> impl Iterator<Item = (u32, Vec<usize>)> {
    (0..1u32 << l).map(move |m| (m, (0..l).filter(|i| m >> i & 1 == 1).collect()))
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

pub fn run(cfg: &RunConfig, p: &ParamSet) -> ScenarioResult {
    let mut checks = Vec::new();
    let mut betas = Table::new("beta_table", &["n", "l", "subset_mask", "beta", "delta", "S"]);
    let mut mono = Table::new("monodromy", &["n", "anchor", "row", "entries"]);

    checks.push(run_check(
        "class-solver-round-trip",
        "beta_{l,I} = beta_l + |I| delta_l - sum_j |I cap [j]| S_j is recovered from its D_u and D_v pairings",
        0.0,
        || {
            let mut bad = 0;
            for n in 1..=MAX_N {
                for l in 0..=(n + 1).min(MAX_L) {
                    for (mask, subset) in subsets(l) {
                        let target = expand_beta(l, &subset, n)?;
                        if n == p.n() {
                            betas.push([n.to_string(), l.to_string(), mask.to_string(), target.beta.to_string(), target.delta.to_string(), join(&target.s)]);
                        }
                        let region = RegionTag::R(l);
                        for tag in [DivisorTag::Du as fn(usize) -> DivisorTag, DivisorTag::Dv] {
                            let mut row = BTreeMap::new();
                            for k in 0..=n {
                                row.insert(tag(k), intersect(&target, tag(k), region)?);
                            }
                            let got = solve_class_from_intersections(&row, region, l, subset.len() as i64, n)?;
                            bad += usize::from(got != target);
                        }
                    }
                }
            }
            Ok(Outcome::exact(bad))
        },
    ));

    checks.push(run_check("monodromy-loop", "the loop around a_l maps beta_l to beta_l - delta_l and fixes delta_l", 0.0, || {
        let mut bad = 0;
        for n in 1..=MAX_N {
            for l in 0..=n {
                let b = DiskClass::beta(l, n);
                let d = DiskClass::delta(l, n);
                bad += usize::from(monodromy_loop(&b)? != b.sub(&d)?);
                bad += usize::from(monodromy_loop(&d)? != d);
                if n == p.n() {
                    for (i, row) in class_matrix(l, n, monodromy_loop)?.iter().enumerate() {
                        mono.push([n.to_string(), l.to_string(), i.to_string(), join(row)]);
                    }
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    checks.push(run_check("transport-preserves-intersections", "classes transported across a wall keep every defined pairing", 0.0, || {
        let mut r = rng(cfg.seed, 1);
        let mut bad = 0;
        for n in 1..=MAX_N {
            for l in 0..=n {
                let mut classes = vec![DiskClass::beta(l, n), DiskClass::delta(l, n)];
                classes.extend((1..=n).map(|j| DiskClass::sphere(j, l, n)));
                for _ in 0..RANDOM_CLASSES {
                    classes.push(DiskClass {
                        anchor: l,
                        beta: r.gen_range(-3..=3),
                        delta: r.gen_range(-3..=3),
                        s: (0..n).map(|_| r.gen_range(-3..=3)).collect(),
                    });
                }
                for c in &classes {
                    for (side, region) in [(WallSide::Plus, RegionTag::Nplus(l)), (WallSide::Minus, RegionTag::Nminus(l))] {
                        let moved = monodromy_transport(c, l + 1, side)?;
                        bad += usize::from(intersection_row(c, region)? != intersection_row(&moved, region)?);
                        bad += usize::from(monodromy_transport(&moved, l, side)? != *c);
                    }
                }
            }
        }
        Ok(Outcome::exact(bad))
    }));

    checks.push(run_check("superpotential-gluing", "W_{k+1}(Phi(y)) = W_k(y) on wall overlaps", 0.0, || {
        let walls = Walls::new(p)?;
        let prec = cfg.precision.novikov_cutoff;
        let mut r = rng(cfg.seed, 2);
        let mut bad = 0;
        let mut first = None;
        for k in 0..=p.n() {
            for _ in 0..GLUING_POINTS {
                // dyadic s keeps exponents on a lattice
                let s = r.gen_range(2..=8) as f64 / 8.0 * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
                let rad = walls.norm(k) + walls.width() * r.gen_range(-0.95..0.95);
                let q = BasePoint::new(s, rad)?;
                let m = fiber_point(q, k, &random_unit(&mut r, prec), &random_unit(&mut r, prec), p, cfg.precision.quad_tol)?;
                let up = change_chart(&m, k + 1, p)?;
                let ok = w_local(k + 1, &up.y1, &up.y2).approx_eq(&w_local(k, &m.y1, &m.y2), COEFF_TOL)
                    && change_chart(&up, k, p)?.y2.approx_eq(&m.y2, COEFF_TOL);
                if !ok {
                    bad += 1;
                    first.get_or_insert((k, s, rad));
                }
            }
        }
        let out = Outcome::exact(bad);
        Ok(match first {
            Some((k, s, rad)) => out.with_detail(format!("first failure: k = {k}, (s, r) = ({s}, {rad})")),
            None => out,
        })
    }));

    (checks, vec![betas, mono])
}
