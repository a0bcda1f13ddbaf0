//! Images of Lagrangian matching spheres and the half-twist family of roots.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};
use crate::params::{ParamSet, NORM_SNAP_TOL};
use crate::psi::{discriminant, BasePoint};

/// `{s} x [r_min, r_max]` in the base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereImage {
    pub s: f64,
    pub r_min: f64,
    pub r_max: f64,
}

fn is_root(z: Complex64, p: &ParamSet) -> bool {
    p.roots().iter().any(|a| (z - a).norm() <= 1e-12 * a.norm())
}

fn segment_min_norm(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a.norm();
    }
    let t = -(a.conj() * d).re / len2;
    if t <= 0.0 {
        a.norm()
    } else if t >= 1.0 {
        b.norm()
    } else {
        (a + d * t).norm()
    }
}

/// `pi` of the sphere over a polyline joining two roots: `|u| = |v|` gives `s = 0`,
/// and `r` sweeps the range of `|z|` along the curve.
pub fn lagrangian_sphere_image(curve: &[Complex64], p: &ParamSet) -> Result<SphereImage> {
    if curve.len() < 2 {
        return Err(SyzError::Precondition("curve needs at least two vertices".into()));
    }
    let (first, last) = (curve[0], curve[curve.len() - 1]);
    if !is_root(first, p) || !is_root(last, p) {
        return Err(SyzError::Precondition("curve must start and end at roots".into()));
    }
    let r_min = curve.windows(2).map(|w| segment_min_norm(w[0], w[1])).fold(f64::INFINITY, f64::min);
    if r_min == 0.0 {
        return Err(SyzError::OnRemovedDivisor);
    }
    let r_max = curve.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(SphereImage { s: 0.0, r_min, r_max })
}

/// Polar interpolation from `a_{k-1}` to `a_k` through `segments` pieces; `|z|`
/// is monotone along it.
pub fn chain_curve(p: &ParamSet, k: usize, segments: usize) -> Result<Vec<Complex64>> {
    if k == 0 || k > p.n() {
        return Err(SyzError::IndexOutOfRange { index: k, limit: p.n() + 1 });
    }
    if segments == 0 {
        return Err(SyzError::Precondition("need at least one segment".into()));
    }
    let (a, b) = (p.roots()[k - 1], p.roots()[k]);
    let (ra, rb) = (a.norm(), b.norm());
    let mut dtheta = b.arg() - a.arg();
    if dtheta > PI {
        dtheta -= 2.0 * PI;
    } else if dtheta < -PI {
        dtheta += 2.0 * PI;
    }
    let mut out = vec![a];
    for i in 1..segments {
        let t = i as f64 / segments as f64;
        out.push(Complex64::from_polar(ra + t * (rb - ra), a.arg() + t * dtheta));
    }
    out.push(b);
    Ok(out)
}

/// Whether `|z|` is monotone along the polyline, segments included.
pub fn is_radially_monotone(curve: &[Complex64]) -> bool {
    let r: Vec<f64> = curve.iter().map(|z| z.norm()).collect();
    let up = r.windows(2).all(|w| w[0] <= w[1]);
    let down = r.windows(2).all(|w| w[0] >= w[1]);
    let segments_ok = curve.windows(2).all(|w| segment_min_norm(w[0], w[1]) >= w[0].norm().min(w[1].norm()));
    (up || down) && segments_ok
}

/// Rotates `a_{k-1}`, `a_k` about their midpoint by `pi t`.
pub fn half_twist_path(p: &ParamSet, k: usize, t: f64) -> Result<ParamSet> {
    if k == 0 || k > p.n() {
        return Err(SyzError::IndexOutOfRange { index: k, limit: p.n() + 1 });
    }
    let mut a = p.roots().to_vec();
    let m = 0.5 * (a[k - 1] + a[k]);
    let rot = Complex64::from_polar(1.0, PI * t);
    a[k - 1] = m + (a[k - 1] - m) * rot;
    a[k] = m + (a[k] - m) * rot;
    for (j, &aj) in p.roots().iter().enumerate() {
        if j + 1 == k || j == k {
            continue;
        }
        for &moved in &a[k - 1..=k] {
            if moved == aj {
                return Err(SyzError::Degenerate(format!("rotated root hits a_{j}")));
            }
        }
    }
    ParamSet::unordered(a, None)
}

/// `Delta_t = {(0, |a_j(t)|)}` with coincident points merged.
pub fn singular_track(p: &ParamSet) -> Vec<BasePoint> {
    let mut pts = discriminant(p);
    pts.sort_by(|x, y| x.r.total_cmp(&y.r));
    pts.dedup_by(|x, y| (x.r - y.r).abs() <= NORM_SNAP_TOL * y.r);
    pts
}

/// `|a_{k-1}(t)| - |a_k(t)|` along the half twist.
pub fn norm_gap(p: &ParamSet, k: usize, t: f64) -> Result<f64> {
    let q = half_twist_path(p, k, t)?;
    Ok(q.roots()[k - 1].norm() - q.roots()[k].norm())
}

/// Bisection for the collision time `t0` in `(0, 1)`, to `t_tol`.
pub fn collision_time(p: &ParamSet, k: usize, t_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut g_lo = norm_gap(p, k, lo)?;
    let g_hi = norm_gap(p, k, hi)?;
    if g_lo == 0.0 {
        return Ok(0.0);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(SyzError::Precondition("norms do not cross along the half twist".into()));
    }
    while hi - lo > t_tol {
        let mid = 0.5 * (lo + hi);
        let g = norm_gap(p, k, mid)?;
        if g == 0.0 {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
