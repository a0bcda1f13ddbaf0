//! Adaptive polar cubature on a disk, with Duffy corners at marked points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Result, SyzError};

const HI_ORDER: usize = 10;
const LO_ORDER: usize = 6;

#[derive(Debug, Clone, Copy)]
pub struct CubatureOptions {
    /// Relative tolerance on the integral.
    pub tol: f64,
    /// Absolute error floor, below which refinement stops.
    pub abs_floor: f64,
    pub max_cells: usize,
    /// Minimum number of angular sectors in the initial partition.
    pub min_sectors: usize,
}

impl Default for CubatureOptions {
    fn default() -> Self {
        CubatureOptions {
            tol: 1e-8,
            abs_floor: 1e-14,
            max_cells: 1 << 20,
            min_sectors: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureResult {
    pub value: f64,
    pub error: f64,
    pub cells: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(m, t);
            let dt = p / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(m, t);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

fn legendre(m: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=m {
        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

fn rules() -> &'static (Rule, Rule) {
    static RULES: OnceLock<(Rule, Rule)> = OnceLock::new();
    RULES.get_or_init(|| {
        let to_unit = |(x, w): (Vec<f64>, Vec<f64>)| Rule {
            x: x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
            w: w.iter().map(|v| 0.5 * v).collect(),
        };
        (to_unit(gauss_legendre(HI_ORDER)), to_unit(gauss_legendre(LO_ORDER)))
    })
}

/// Which corner of a polar cell carries the singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Corner {
    at_outer_radius: bool,
    at_upper_angle: bool,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    r0: f64,
    r1: f64,
    t0: f64,
    t1: f64,
    corner: Option<Corner>,
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    cell: Cell,
    value: f64,
    error: f64,
}

impl PartialEq for Scored {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Scored {}
impl PartialOrd for Scored {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f(rho, theta)` against `dA = rho drho dtheta` over `rho <= radius`.
///
/// `radial_breaks` and `angular_breaks` seed the partition; `singular` lists
/// polar points `(rho, theta)` that must sit at cell corners, where the cell is
/// evaluated through a Duffy map to absorb a `1/dist` singularity.
pub fn integrate_disk<F>(
    f: F,
    radius: f64,
    radial_breaks: &[f64],
    angular_breaks: &[f64],
    singular: &[(f64, f64)],
    opts: &CubatureOptions,
) -> Result<CubatureResult>
where
    F: Fn(f64, f64) -> f64,
{
    let mut rs: Vec<f64> = vec![0.0, radius];
    rs.extend(radial_breaks.iter().copied().filter(|&r| r > 0.0 && r < radius));
    rs.sort_by(f64::total_cmp);
    rs.dedup();

    let mut ts: Vec<f64> = angular_breaks.iter().map(|&t| t.rem_euclid(2.0 * PI)).collect();
    ts.extend(singular.iter().map(|&(_, t)| t.rem_euclid(2.0 * PI)));
    let start = ts.first().copied().unwrap_or(0.0);
    for i in 0..opts.min_sectors {
        ts.push((start + 2.0 * PI * i as f64 / opts.min_sectors as f64).rem_euclid(2.0 * PI));
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let mut sectors: Vec<(f64, f64)> = ts.windows(2).map(|w| (w[0], w[1])).collect();
    sectors.push((ts[ts.len() - 1], ts[0] + 2.0 * PI));

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in rs.windows(2) {
        for &(t0, t1) in &sectors {
            let cell = Cell {
                r0: w[0],
                r1: w[1],
                t0,
                t1,
                corner: find_corner(w[0], w[1], t0, t1, singular),
            };
            let s = score(&f, cell);
            total += s.value;
            total_err += s.error;
            heap.push(s);
        }
    }

    let mut cells = heap.len();
    while total_err > (opts.tol * total.abs()).max(opts.abs_floor) {
        if cells >= opts.max_cells {
            return Err(SyzError::NoConvergence {
                value: total,
                error: total_err,
                cells,
            });
        }
        let worst = heap.pop().expect("nonempty partition");
        total -= worst.value;
        total_err -= worst.error;
        for child in split(worst.cell) {
            let s = score(&f, child);
            total += s.value;
            total_err += s.error;
            heap.push(s);
        }
        cells += 3;
        // refresh the running sums to keep cancellation drift out of the loop test
        if cells % 4096 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(CubatureResult { value, error, cells })
}

fn find_corner(r0: f64, r1: f64, t0: f64, t1: f64, singular: &[(f64, f64)]) -> Option<Corner> {
    let same_angle = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d < 1e-12 || 2.0 * PI - d < 1e-12
    };
    for &(rho, theta) in singular {
        let at_inner = rho == r0 && r0 > 0.0;
        let at_outer = rho == r1;
        if !(at_inner || at_outer) {
            continue;
        }
        if same_angle(theta, t0) {
            return Some(Corner {
                at_outer_radius: at_outer,
                at_upper_angle: false,
            });
        }
        if same_angle(theta, t1) {
            return Some(Corner {
                at_outer_radius: at_outer,
                at_upper_angle: true,
            });
        }
    }
    None
}

fn split(c: Cell) -> [Cell; 4] {
    let rm = 0.5 * (c.r0 + c.r1);
    let tm = 0.5 * (c.t0 + c.t1);
    let child = |r0, r1, t0, t1, outer: bool, upper: bool| Cell {
        r0,
        r1,
        t0,
        t1,
        corner: c
            .corner
            .filter(|k| k.at_outer_radius == outer && k.at_upper_angle == upper),
    };
    [
        child(c.r0, rm, c.t0, tm, false, false),
        child(rm, c.r1, c.t0, tm, true, false),
        child(c.r0, rm, tm, c.t1, false, true),
        child(rm, c.r1, tm, c.t1, true, true),
    ]
}

fn score<F: Fn(f64, f64) -> f64>(f: &F, cell: Cell) -> Scored {
    let (hi, lo) = rules();
    let (vh, vl) = match cell.corner {
        None => (tensor(f, &cell, hi), tensor(f, &cell, lo)),
        Some(k) => (duffy(f, &cell, k, hi), duffy(f, &cell, k, lo)),
    };
    Scored {
        cell,
        value: vh,
        error: (vh - vl).abs(),
    }
}

fn tensor<F: Fn(f64, f64) -> f64>(f: &F, c: &Cell, rule: &Rule) -> f64 {
    let dr = c.r1 - c.r0;
    let dt = c.t1 - c.t0;
    let mut acc = 0.0;
    for (xi, wi) in rule.x.iter().zip(&rule.w) {
        let rho = c.r0 + dr * xi;
        let mut row = 0.0;
        for (xj, wj) in rule.x.iter().zip(&rule.w) {
            row += wj * f(rho, c.t0 + dt * xj);
        }
        acc += wi * rho * row;
    }
    acc * dr * dt
}

/// Splits the cell into two triangles meeting at the corner and collapses each
/// onto the unit square with Jacobian `u`.
fn duffy<F: Fn(f64, f64) -> f64>(f: &F, c: &Cell, k: Corner, rule: &Rule) -> f64 {
    let lr = c.r1 - c.r0;
    let lt = c.t1 - c.t0;
    let (rc, sr) = if k.at_outer_radius { (c.r1, -1.0) } else { (c.r0, 1.0) };
    let (tc, st) = if k.at_upper_angle { (c.t1, -1.0) } else { (c.t0, 1.0) };
    let mut acc = 0.0;
    for (u, wu) in rule.x.iter().zip(&rule.w) {
        for (v, wv) in rule.x.iter().zip(&rule.w) {
            let jac = wu * wv * u;
            let (x1, y1) = (lr * u, lt * u * v);
            let (x2, y2) = (lr * u * v, lt * u);
            let p1 = rc + sr * x1;
            let p2 = rc + sr * x2;
            acc += jac * (p1 * f(p1, tc + st * y1) + p2 * f(p2, tc + st * y2));
        }
    }
    acc * lr * lt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn disk_area_and_moment() {
        let opts = CubatureOptions::default();
        let area = integrate_disk(|_, _| 1.0, 2.0, &[], &[], &[], &opts).unwrap();
        assert!((area.value - 4.0 * PI).abs() < 1e-12);
        let m = integrate_disk(|r, t| (r * t.cos()).powi(2), 1.5, &[0.7], &[], &[], &opts).unwrap();
        assert!((m.value - PI * 1.5_f64.powi(4) / 4.0).abs() < 1e-11);
    }

    #[test]
    fn inverse_distance_singularity_at_corner() {
        // integral of 1/|z - p| over the disk |z| <= R with p on the boundary
        let p = (1.0_f64, 0.9_f64);
        let pz = num_complex::Complex64::from_polar(p.0, p.1);
        let f = |r: f64, t: f64| 1.0 / (num_complex::Complex64::from_polar(r, t) - pz).norm();
        let opts = CubatureOptions {
            tol: 1e-11,
            ..Default::default()
        };
        let res = integrate_disk(f, 1.0, &[], &[], &[p], &opts).unwrap();
        // closed form for a point on the unit circle: 4 * (area-normalized) = 4
        assert!((res.value - 4.0).abs() < 1e-9, "{}", res.value);
    }
}
