//! Explicit holomorphic disks with boundary on the torus fibers, and their areas.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cubature::{integrate_disk, CubatureOptions};
use crate::error::{Result, SyzError};
use crate::params::ParamSet;

const WINDING_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum DiskKind {
    Delta { k: usize, s: f64 },
    Beta { k: usize, subset: Vec<usize> },
}

#[derive(Debug, Clone)]
enum Shape {
    /// `zeta -> (c zeta, 0, a)` or its anti-holomorphic mirror `(0, c conj(zeta), a)`.
    Orbit { c: f64, positive: bool, a: Complex64 },
    /// Square root of the radicand times Blaschke factors, over `z = r zeta`.
    Blaschke {
        r: f64,
        inner: Vec<Complex64>,
        outer: Vec<Complex64>,
        in_u: Vec<bool>,
    },
}

/// Values and Wirtinger derivatives of `(u, v, z)` at a point of the unit disk.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub value: [Complex64; 3],
    pub d: [Complex64; 3],
    pub dbar: [Complex64; 3],
}

#[derive(Debug, Clone)]
pub struct DiskMap {
    pub kind: DiskKind,
    shape: Shape,
}

/// Orbit disk through the fixed point over `a_k`; area `s`.
pub fn disk_delta(k: usize, s: f64, p: &ParamSet) -> Result<DiskMap> {
    if k > p.n() {
        return Err(SyzError::IndexOutOfRange { index: k, limit: p.n() + 1 });
    }
    if s == 0.0 {
        return Err(SyzError::DegenerateOrbitDisk);
    }
    Ok(DiskMap {
        kind: DiskKind::Delta { k, s },
        shape: Shape::Orbit {
            c: (2.0 * s.abs()).sqrt(),
            positive: s > 0.0,
            a: p.roots()[k],
        },
    })
}

/// Blaschke-product disk at `(0, r_k)` whose `u` vanishes over `a_i` for `i` in `subset`.
pub fn disk_beta(k: usize, subset: &[usize], p: &ParamSet) -> Result<DiskMap> {
    if k > p.n() + 1 {
        return Err(SyzError::IndexOutOfRange { index: k, limit: p.n() + 2 });
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= k) {
        return Err(SyzError::Precondition(format!("subset element {bad} not in [{k}]")));
    }
    let r = p.radius(k)?;
    let a = p.roots();
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    let shape = Shape::Blaschke {
        r,
        inner: a[..k].to_vec(),
        outer: a[k..].to_vec(),
        in_u: (0..k).map(|i| subset.contains(&i)).collect(),
    };
    let map = DiskMap {
        kind: DiskKind::Beta { k, subset },
        shape,
    };
    let w = map.radicand_winding().expect("Blaschke shape");
    if w % 2 != 0 {
        return Err(SyzError::BranchFailure(w));
    }
    Ok(map)
}

impl DiskMap {
    pub fn eval(&self, zeta: Complex64) -> [Complex64; 3] {
        self.jet(zeta).value
    }

    pub fn jet(&self, zeta: Complex64) -> Jet {
        let zero = Complex64::new(0.0, 0.0);
        match &self.shape {
            Shape::Orbit { c, positive, a } => {
                let c = Complex64::new(*c, 0.0);
                if *positive {
                    Jet {
                        value: [c * zeta, zero, *a],
                        d: [c, zero, zero],
                        dbar: [zero; 3],
                    }
                } else {
                    Jet {
                        value: [zero, c * zeta.conj(), *a],
                        d: [zero; 3],
                        dbar: [zero, c, zero],
                    }
                }
            }
            Shape::Blaschke { r, inner, outer, in_u } => {
                let (g, dg) = root_and_derivative(*r, inner, outer, zeta);
                let (mut pu, mut dpu) = (Complex64::new(1.0, 0.0), zero);
                let (mut pv, mut dpv) = (Complex64::new(1.0, 0.0), zero);
                for (ai, &to_u) in inner.iter().zip(in_u) {
                    let den = r - ai.conj() * zeta;
                    let b = (r * zeta - ai) / den;
                    let db = (r * r - ai.norm_sqr()) / (den * den);
                    if to_u {
                        dpu = dpu * b + pu * db;
                        pu *= b;
                    } else {
                        dpv = dpv * b + pv * db;
                        pv *= b;
                    }
                }
                Jet {
                    value: [g * pu, g * pv, r * zeta],
                    d: [dg * pu + g * dpu, dg * pv + g * dpv, Complex64::new(*r, 0.0)],
                    dbar: [zero; 3],
                }
            }
        }
    }

    /// Winding number of the radicand along the unit circle.
    pub fn radicand_winding(&self) -> Option<i64> {
        let Shape::Blaschke { r, inner, outer, .. } = &self.shape else {
            return None;
        };
        let radicand = |zeta: Complex64| -> Complex64 {
            inner.iter().map(|a| r - a.conj() * zeta).product::<Complex64>()
                * outer.iter().map(|a| r * zeta - a).product::<Complex64>()
        };
        let mut total = 0.0;
        let mut prev = radicand(Complex64::new(1.0, 0.0));
        for i in 1..=WINDING_SAMPLES {
            let z = Complex64::from_polar(1.0, 2.0 * PI * i as f64 / WINDING_SAMPLES as f64);
            let cur = radicand(z);
            total += (cur / prev).arg();
            prev = cur;
        }
        Some((total / (2.0 * PI)).round() as i64)
    }
}

/// Principal-branch square roots of `r (1 - conj(a) zeta / r)` and
/// `-a (1 - r zeta / a)`: each bracket has positive real part on the disk, so
/// the product is a global holomorphic square root of the radicand.
fn root_and_derivative(r: f64, inner: &[Complex64], outer: &[Complex64], zeta: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let mut g = one;
    let mut log_d = Complex64::new(0.0, 0.0);
    for a in inner {
        g *= Complex64::new(r, 0.0).sqrt() * (one - a.conj() * zeta / r).sqrt();
        log_d += -a.conj() / (r - a.conj() * zeta);
    }
    for a in outer {
        g *= (-a).sqrt() * (one - r * zeta / a).sqrt();
        log_d += r / (r * zeta - a);
    }
    (g, 0.5 * g * log_d)
}

/// `(1/2pi)` times the pulled-back area of the standard form on C^3.
pub fn disk_area(d: &DiskMap, tol: f64) -> Result<f64> {
    let f = |rho: f64, theta: f64| {
        let j = d.jet(Complex64::from_polar(rho, theta));
        (0..3).map(|i| j.d[i].norm_sqr() - j.dbar[i].norm_sqr()).sum::<f64>()
    };
    let opts = CubatureOptions {
        tol,
        abs_floor: 1e-15,
        ..Default::default()
    };
    let res = integrate_disk(f, 1.0, &[], &[], &[], &opts)?;
    Ok(res.value / (2.0 * PI))
}
