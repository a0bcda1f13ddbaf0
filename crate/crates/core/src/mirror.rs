//! Mirror charts `T_k`, their superpotentials and wall transitions, and the
//! embedding into the toric resolution.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};
use crate::params::ParamSet;
use crate::psi::{psi, psi_inverse_r, BasePoint};
use crate::toric::{chart_point, orbit_of, NovToricPoint, OrbitTag};
use crate::valuation::{ExtReal, NovikovNum, DEFAULT_CUTOFF};
use crate::wall_crossing::Walls;

/// A point of the chart `T_k`, with its base point cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MirrorPoint {
    /// Number of roots minus one.
    pub n: usize,
    pub chart: usize,
    pub y1: NovikovNum,
    pub y2: NovikovNum,
    pub base: BasePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Chart `k+1` coordinates to chart `k`: `y2 -> y2 (1 + y1)`.
    Down,
    /// Chart `k` coordinates to chart `k+1`: `y2 -> y2 / (1 + y1)`.
    Up,
}

fn exact_one() -> NovikovNum {
    NovikovNum::one(f64::INFINITY)
}

fn one_plus(y1: &NovikovNum) -> NovikovNum {
    y1.add(&exact_one())
}

fn is_unit(u: &NovikovNum) -> bool {
    u.val() == ExtReal::Finite(0.0)
}

/// `val(y2)` on chart `k` over `q`.
pub fn y2_valuation(q: BasePoint, k: usize, p: &ParamSet, quad_tol: f64) -> Result<f64> {
    Ok(psi(q.s, q.r, p, quad_tol)? - k as f64 * q.s.min(0.0))
}

pub fn fiber_point(
    q: BasePoint,
    k: usize,
    unit1: &NovikovNum,
    unit2: &NovikovNum,
    p: &ParamSet,
    quad_tol: f64,
) -> Result<MirrorPoint> {
    let walls = Walls::new(p)?;
    if k > p.n() + 1 {
        return Err(SyzError::IndexOutOfRange { index: k, limit: p.n() + 2 });
    }
    if !walls.in_chart(q, k) {
        return Err(SyzError::OutsideRegion { s: q.s, r: q.r, chart: k });
    }
    if !is_unit(unit1) || !is_unit(unit2) {
        return Err(SyzError::Precondition("units must have valuation 0".into()));
    }
    Ok(MirrorPoint {
        n: p.n(),
        chart: k,
        y1: unit1.shift(q.s),
        y2: unit2.shift(y2_valuation(q, k, p, quad_tol)?),
        base: q,
    })
}

/// `W_k = y2 (1 + y1)^k`.
pub fn w_local(k: usize, y1: &NovikovNum, y2: &NovikovNum) -> NovikovNum {
    let base = one_plus(y1);
    let mut acc = y2.clone();
    for _ in 0..k {
        acc = acc.mul(&base);
    }
    acc
}

pub fn phi_transition(dir: Direction, y1: &NovikovNum, y2: &NovikovNum) -> Result<(NovikovNum, NovikovNum)> {
    if y1.val() == ExtReal::Finite(0.0) {
        return Err(SyzError::OnWall);
    }
    let f = one_plus(y1);
    let y2n = match dir {
        Direction::Down => y2.mul(&f),
        Direction::Up => y2.mul(&f.with_default_precision(DEFAULT_CUTOFF).inv()?),
    };
    Ok((y1.clone(), y2n))
}

/// The same fiber point written in the adjacent chart `to = chart +- 1`.
pub fn change_chart(m: &MirrorPoint, to: usize, p: &ParamSet) -> Result<MirrorPoint> {
    let dir = if to + 1 == m.chart {
        Direction::Down
    } else if to == m.chart + 1 {
        Direction::Up
    } else {
        return Err(SyzError::Precondition(format!("charts {} and {to} are not adjacent", m.chart)));
    };
    let walls = Walls::new(p)?;
    if !walls.in_chart(m.base, to) {
        return Err(SyzError::OutsideRegion { s: m.base.s, r: m.base.r, chart: to });
    }
    let (y1, y2) = phi_transition(dir, &m.y1, &m.y2)?;
    Ok(MirrorPoint { n: m.n, chart: to, y1, y2, base: m.base })
}

fn inv_y2(m: &MirrorPoint) -> Result<NovikovNum> {
    m.y2.with_default_precision(DEFAULT_CUTOFF).inv()
}

/// `g_k^-`: `(z, w) = (y2^{-1}(1 + y1), y2)` in chart `k <= n`; for `k = n+1`
/// the `g_n^+` form is used.
pub fn g_embed(m: &MirrorPoint) -> Result<NovToricPoint> {
    let n = m.n;
    if m.chart > n + 1 {
        return Err(SyzError::IndexOutOfRange { index: m.chart, limit: n + 2 });
    }
    if m.chart <= n {
        chart_point(inv_y2(m)?.mul(&one_plus(&m.y1)), m.y2.clone(), m.chart, n, m.y1.clone())
    } else {
        g_embed_plus(m)
    }
}

/// `g_{k-1}^+`: `(z, w) = (y2^{-1}, y2 (1 + y1))` in chart `k - 1`, for `k >= 1`.
pub fn g_embed_plus(m: &MirrorPoint) -> Result<NovToricPoint> {
    let n = m.n;
    if m.chart == 0 || m.chart > n + 1 {
        return Err(SyzError::IndexOutOfRange { index: m.chart, limit: n + 2 });
    }
    chart_point(inv_y2(m)?, m.y2.mul(&one_plus(&m.y1)), m.chart - 1, n, m.y1.clone())
}

/// Orbit of the image, e.g. `Ray(k)` for `y1 = -1` exactly.
pub fn image_orbit(m: &MirrorPoint) -> Result<OrbitTag> {
    Ok(orbit_of(&g_embed(m)?))
}

pub fn pi0_dual(m: &MirrorPoint, p: &ParamSet, quad_tol: f64, tol: f64) -> Result<BasePoint> {
    let s = m
        .y1
        .val()
        .finite()
        .ok_or_else(|| SyzError::Precondition("y1 must be nonzero".into()))?;
    let v2 = m
        .y2
        .val()
        .finite()
        .ok_or_else(|| SyzError::Precondition("y2 must be nonzero".into()))?;
    let r = psi_inverse_r(s, v2 + m.chart as f64 * s.min(0.0), p, quad_tol, tol)?;
    BasePoint::new(s, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::DEFAULT_QUAD_TOL;
    use crate::toric::{chart_coords, same_point};
    use num_complex::Complex64;

    const PREC: f64 = 12.0;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(a: Complex64, b: Complex64, e: f64) -> NovikovNum {
        NovikovNum::from_terms(vec![(0.0, a), (e, b)], PREC)
    }

    fn t(e: f64) -> NovikovNum {
        NovikovNum::t_pow(e, PREC)
    }

    #[test]
    fn superpotential_examples() {
        let w = w_local(2, &NovikovNum::t_pow(1.0, 10.0), &NovikovNum::t_pow(2.0, 10.0));
        let expect = NovikovNum::from_terms(vec![(2.0, c(1.0, 0.0)), (3.0, c(2.0, 0.0)), (4.0, c(1.0, 0.0))], 11.0);
        assert!(w.approx_eq(&expect, 1e-15));
        assert_eq!(w.cutoff(), 12.0);
        let y2 = t(0.7);
        assert_eq!(w_local(0, &t(0.3), &y2), y2);
    }

    #[test]
    fn transition_valuations_and_gluing() {
        for &s in &[0.4, -0.6] {
            let y1 = unit(c(1.0, 1.0), c(0.5, 0.0), 0.3).mul(&t(s));
            let y2 = unit(c(2.0, 0.0), c(0.0, 1.0), 1.1).mul(&t(3.0));
            let (_, down) = phi_transition(Direction::Down, &y1, &y2).unwrap();
            let shift = if s > 0.0 { 0.0 } else { s };
            assert!((down.val().to_f64() - (3.0 + shift)).abs() < 1e-12);
            for k in 0..3 {
                assert!(w_local(k + 1, &y1, &y2).approx_eq(&w_local(k, &y1, &down), 1e-12));
            }
            let (_, back) = phi_transition(Direction::Up, &y1, &down).unwrap();
            assert!(back.approx_eq(&y2, 1e-9));
        }
        assert_eq!(phi_transition(Direction::Down, &unit(c(1.0, 0.0), c(1.0, 0.0), 1.0), &t(1.0)), Err(SyzError::OnWall));
    }

    #[test]
    fn fiber_point_round_trip() {
        let p = ParamSet::reference_a2();
        let q = BasePoint::new(-0.2, 1.5).unwrap();
        let m = fiber_point(q, 1, &unit(c(0.0, 1.0), c(0.2, 0.0), 0.5), &unit(c(3.0, 0.0), c(1.0, 0.0), 0.25), &p, DEFAULT_QUAD_TOL).unwrap();
        let back = pi0_dual(&m, &p, DEFAULT_QUAD_TOL, 1e-10).unwrap();
        assert!((back.s - q.s).abs() < 1e-15 && (back.r - q.r).abs() < 1e-8);
        let psi_q = psi(q.s, q.r, &p, DEFAULT_QUAD_TOL).unwrap();
        assert!((w_local(1, &m.y1, &m.y2).val().to_f64() - psi_q).abs() < 1e-12);
        let far = BasePoint::new(0.5, 2.5).unwrap();
        assert!(matches!(fiber_point(far, 1, &t(0.0), &t(0.0), &p, DEFAULT_QUAD_TOL), Err(SyzError::OutsideRegion { .. })));
        assert!(fiber_point(q, 1, &t(0.1), &t(0.0), &p, DEFAULT_QUAD_TOL).is_err());
    }

    #[test]
    fn embeddings_agree() {
        let p = ParamSet::reference_a2();
        let u1 = unit(c(-0.5, 0.5), c(1.0, 0.0), 0.4);
        let u2 = unit(c(1.0, 0.0), c(0.0, 0.3), 0.6);
        for (k, q) in [(1, (0.3, 1.5)), (2, (-0.4, 2.5)), (3, (0.2, 4.0)), (0, (-0.1, 0.5))] {
            let q = BasePoint::new(q.0, q.1).unwrap();
            let m = fiber_point(q, k, &u1, &u2, &p, DEFAULT_QUAD_TOL).unwrap();
            let img = g_embed(&m).unwrap();
            if k >= 1 {
                assert!(same_point(&img, &g_embed_plus(&m).unwrap(), 1e-9));
            }
            let idx = k.min(p.n());
            let (z, w) = chart_coords(&img, idx).unwrap();
            assert!(z.mul(&w).approx_eq(&one_plus(&m.y1), 1e-9));
        }
    }

    #[test]
    fn wall_points_embed_consistently() {
        let p = ParamSet::reference_a2();
        let u1 = unit(c(0.7, 0.0), c(0.0, 1.0), 0.5);
        let u2 = unit(c(1.0, 1.0), c(0.5, 0.0), 0.2);
        for (k, q) in [(0, (0.3, 1.1)), (0, (-0.3, 0.95)), (1, (0.2, 2.05)), (2, (-0.5, 3.1))] {
            let q = BasePoint::new(q.0, q.1).unwrap();
            let m = fiber_point(q, k, &u1, &u2, &p, DEFAULT_QUAD_TOL).unwrap();
            let m2 = change_chart(&m, k + 1, &p).unwrap();
            let direct = fiber_point(q, k + 1, &u1, &u2, &p, DEFAULT_QUAD_TOL).unwrap();
            assert!((m2.y2.val().to_f64() - direct.y2.val().to_f64()).abs() < 1e-9);
            assert!(same_point(&g_embed(&m).unwrap(), &g_embed(&m2).unwrap(), 1e-9));
        }
    }

    #[test]
    fn minus_one_lands_on_divisor() {
        let p = ParamSet::reference_a2();
        let q = BasePoint::new(0.0, 1.5).unwrap();
        let minus_one = NovikovNum::constant(c(-1.0, 0.0), f64::INFINITY);
        let m = fiber_point(q, 1, &minus_one, &t(0.0), &p, DEFAULT_QUAD_TOL).unwrap();
        assert_eq!(image_orbit(&m).unwrap(), OrbitTag::Ray(1));
        let deep = minus_one.add(&t(0.8));
        let m = fiber_point(q, 1, &deep, &t(0.0), &p, DEFAULT_QUAD_TOL).unwrap();
        assert_eq!(one_plus(&m.y1).val(), ExtReal::Finite(0.8));
        assert_eq!(image_orbit(&m).unwrap(), OrbitTag::DenseTorus);
    }
}
