//! The reduced density, the area function `psi` and its inverse in `r`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cubature::{integrate_disk, CubatureOptions};
use crate::error::{Result, SyzError};
use crate::params::ParamSet;

/// Default relative tolerance for `psi`.
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;
/// Default cell budget for the adaptive cubature.
pub const DEFAULT_CELL_BUDGET: usize = 1 << 20;

/// A point `(s, r)` of the base `R x R_{>0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasePoint {
    pub s: f64,
    pub r: f64,
}

impl BasePoint {
    pub fn new(s: f64, r: f64) -> Result<Self> {
        if !(r > 0.0) || !s.is_finite() || !r.is_finite() {
            return Err(SyzError::Precondition(format!("base point needs r > 0, got ({s}, {r})")));
        }
        Ok(BasePoint { s, r })
    }
}

/// The fibration map `(u, v, z) -> ((|u|^2 - |v|^2) / 2, |z|)`.
pub fn pi_map(u: Complex64, v: Complex64, z: Complex64) -> Result<BasePoint> {
    if z.norm() == 0.0 {
        return Err(SyzError::OnRemovedDivisor);
    }
    Ok(BasePoint {
        s: 0.5 * (u.norm_sqr() - v.norm_sqr()),
        r: z.norm(),
    })
}

/// The singular locus `{(0, |a_k|)}`.
pub fn discriminant(p: &ParamSet) -> Vec<BasePoint> {
    p.norms().iter().map(|&r| BasePoint { s: 0.0, r }).collect()
}

/// Non-constant part `|h'|^2 / (2 sqrt(|h|^2 + s^2))` of the reduced density.
pub fn density_excess(z: Complex64, s: f64, p: &ParamSet) -> f64 {
    let (h, dh) = p.h_and_derivative(z);
    let denom = (h.norm_sqr() + s * s).sqrt();
    if denom == 0.0 {
        return f64::INFINITY;
    }
    dh.norm_sqr() / (2.0 * denom)
}

/// Density of the reduced form against Lebesgue measure on the z-plane.
pub fn reduced_density(z: Complex64, s: f64, p: &ParamSet) -> f64 {
    density_excess(z, s, p) + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiValue {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
}

/// `(1/2pi)` times the reduced area of the disk `|z| <= r`, with error estimate.
pub fn psi_with_error(s: f64, r: f64, p: &ParamSet, tol: f64) -> Result<PsiValue> {
    if !(r > 0.0) || !(tol > 0.0) {
        return Err(SyzError::Precondition(format!("psi needs r > 0 and tol > 0, got r = {r}, tol = {tol}")));
    }
    let roots = p.roots();
    let mut radial = Vec::new();
    let mut angular = Vec::new();
    let mut singular = Vec::new();
    for (k, a) in roots.iter().enumerate() {
        let rho = p.norm(k);
        // a root close to the boundary circle, on either side, is treated as
        // lying on it so no sliver annulus is created
        let near = (rho - r).abs() <= 1e-3 * r;
        if rho < r && !near {
            radial.push(rho);
        }
        if rho <= 1.5 * r {
            angular.push(a.arg());
            singular.push((if near { r } else { rho.min(r) }, a.arg()));
        }
    }
    let base = 0.5 * r * r;
    let opts = CubatureOptions {
        tol,
        abs_floor: 1e-3 * tol * base * 2.0 * PI,
        max_cells: DEFAULT_CELL_BUDGET,
        min_sectors: 8,
    };
    let f = |rho: f64, theta: f64| density_excess(Complex64::from_polar(rho, theta), s, p);
    let res = integrate_disk(f, r, &radial, &angular, &singular, &opts).map_err(|e| match e {
        SyzError::NoConvergence { value, error, cells } => SyzError::NoConvergence {
            value: base + value / (2.0 * PI),
            error: error / (2.0 * PI),
            cells,
        },
        other => other,
    })?;
    Ok(PsiValue {
        value: base + res.value / (2.0 * PI),
        error: res.error / (2.0 * PI),
        cells: res.cells,
    })
}

pub fn psi(s: f64, r: f64, p: &ParamSet, tol: f64) -> Result<f64> {
    psi_with_error(s, r, p, tol).map(|v| v.value)
}

/// The unique `r` with `psi(s, r) = c`, to `|psi - c| <= tol`.
///
/// Bracketed by `[0, sqrt(2c)]` since `r^2/2 <= psi(s, r)`; refined by
/// Illinois false position, which keeps a sign change at every step.
pub fn psi_inverse_r(s: f64, c: f64, p: &ParamSet, quad_tol: f64, tol: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(SyzError::Inversion(format!("target {c} is not a positive area")));
    }
    let mut lo = 0.0;
    let mut f_lo = -c;
    let mut hi = (2.0 * c).sqrt();
    let mut f_hi = psi(s, hi, p, quad_tol)? - c;
    let mut expansions = 0;
    while f_hi < 0.0 {
        // only reachable through quadrature noise at the bracket end
        hi *= 1.0 + 1e-6;
        f_hi = psi(s, hi, p, quad_tol)? - c;
        expansions += 1;
        if expansions > 20 {
            return Err(SyzError::Inversion(format!("no bracket for c = {c} at s = {s}")));
        }
    }
    if f_hi.abs() <= tol {
        return Ok(hi);
    }
    let mut side = 0;
    for _ in 0..200 {
        let mut x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = psi(s, x, p, quad_tol)? - c;
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
            f_hi = fx;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            f_lo = fx;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = psi(s, x, p, quad_tol)? - c;
    if fx.abs() <= tol {
        Ok(x)
    } else {
        Err(SyzError::Inversion(format!(
            "residual {fx:e} exceeds {tol:e} at r = {x} (s = {s}, c = {c})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_map_examples() {
        let q = pi_map(Complex64::new(2f64.sqrt(), 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)).unwrap();
        assert!((q.s - 1.0).abs() < 1e-15 && q.r == 1.0);
        let q = pi_map(Complex64::new(0.0, 0.7), Complex64::new(0.7, 0.0), Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(q.s, 0.0);
        assert_eq!(
            pi_map(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
            Err(SyzError::OnRemovedDivisor)
        );
        let p = ParamSet::reference_a2();
        let a1 = p.roots()[1];
        let q = pi_map(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), a1).unwrap();
        assert_eq!(q, discriminant(&p)[1]);
    }

    #[test]
    fn density_symmetric_and_bounded_below() {
        let p = ParamSet::reference_a2();
        for &(x, y, s) in &[(0.1, 0.2, 0.3), (2.0, -1.0, 0.0), (-2.9, 0.1, 1.5)] {
            let z = Complex64::new(x, y);
            assert_eq!(reduced_density(z, s, &p), reduced_density(z, -s, &p));
            assert!(reduced_density(z, s, &p) >= 1.0);
        }
        // far from the roots at s = 0 the closed form is |h'|^2 / (2|h|) + 1
        let z = Complex64::new(5.0, 5.0);
        let (h, dh) = p.h_and_derivative(z);
        let direct = dh.norm_sqr() / (2.0 * h.norm()) + 1.0;
        assert!((reduced_density(z, 0.0, &p) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn psi_of_z_plane_at_s_zero_for_linear_factor() {
        // h(z) = (z - 1)(z + 1): at s = 0, density excess 2|z|^2 / |z^2 - 1|;
        // check against a brute-force polar sum away from the roots
        let p = ParamSet::new(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)], None).unwrap();
        let r = 0.6;
        let v = psi(0.0, r, &p, 1e-12).unwrap();
        let m = 2000;
        let mut acc = 0.0;
        for i in 0..m {
            let rho = r * (i as f64 + 0.5) / m as f64;
            for j in 0..m {
                let t = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                let z = Complex64::from_polar(rho, t);
                acc += reduced_density(z, 0.0, &p) * rho;
            }
        }
        let brute = acc * (r / m as f64) * (2.0 * PI / m as f64) / (2.0 * PI);
        assert!((v - brute).abs() < 1e-6, "{v} vs {brute}");
    }

    #[test]
    fn psi_even_in_s_and_above_quadratic() {
        let p = ParamSet::reference_a2();
        for &(s, r) in &[(0.7, 1.5), (0.2, 3.0), (1.3, 0.4)] {
            let a = psi(s, r, &p, 1e-10).unwrap();
            let b = psi(-s, r, &p, 1e-10).unwrap();
            assert!((a - b).abs() < 1e-10);
            assert!(a >= 0.5 * r * r);
        }
    }

    #[test]
    fn inverse_round_trip_reference() {
        let p = ParamSet::reference_a2();
        let c = psi(0.0, 1.5, &p, 1e-10).unwrap();
        let r = psi_inverse_r(0.0, c, &p, 1e-10, 1e-10).unwrap();
        assert!((r - 1.5).abs() < 1e-6, "{r}");
        assert!(psi_inverse_r(0.0, -1.0, &p, 1e-8, 1e-8).is_err());
    }
}
