//! The dual fibration: the piecewise-linear surface `gamma`, the embedding
//! `j`, the tropically continuous map `F` and `f = j^{-1} F`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};
use crate::params::ParamSet;
use crate::psi::{psi, psi_inverse_r, BasePoint};
use crate::toric::{chart_point, g_act, in_y_domain, val_point, GroupElement, TropToricPoint};
pub use crate::valuation::order_stat;
use crate::valuation::{ExtReal, NovikovNum};

/// Matching tolerance for psi values recovered from surface coordinates.
pub const PSI_MATCH_TOL: f64 = 1e-7;

/// `(gamma_0, ..., gamma_{n+1}, s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub coords: Vec<f64>,
}

impl SurfacePoint {
    pub fn s(&self) -> f64 {
        *self.coords.last().expect("nonempty")
    }

    pub fn gammas(&self) -> &[f64] {
        &self.coords[..self.coords.len() - 1]
    }

    pub fn max_deviation(&self, other: &SurfacePoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| if a == b { 0.0 } else { (a - b).abs() })
            .fold(0.0, f64::max)
    }
}

/// `psi_j(s) = psi(s, |a_j|)` for all `j`, computed once per `s`.
pub struct PsiCache {
    params: ParamSet,
    quad_tol: f64,
    table: RwLock<HashMap<u64, Arc<Vec<f64>>>>,
}

impl PsiCache {
    pub fn new(params: ParamSet, quad_tol: f64) -> Self {
        PsiCache {
            params,
            quad_tol,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn values(&self, s: f64) -> Result<Arc<Vec<f64>>> {
        let s = if s == 0.0 { 0.0 } else { s };
        let key = s.to_bits();
        if let Some(v) = self.table.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let mut vals = Vec::with_capacity(self.params.n() + 1);
        for (j, &rho) in self.params.norms().iter().enumerate() {
            // equal norms share one value so collided formulas match exactly
            let v = match j.checked_sub(1) {
                Some(i) if self.params.norms()[i] == rho => vals[i],
                _ => psi(s, rho, &self.params, self.quad_tol)?,
            };
            vals.push(v);
        }
        let vals = Arc::new(vals);
        self.table.write().expect("cache lock").insert(key, vals.clone());
        Ok(vals)
    }

    pub fn psi(&self, s: f64, r: f64) -> Result<f64> {
        psi(s, r, &self.params, self.quad_tol)
    }
}

/// `k`-th order statistic of `{c, psi_0(s), ..., psi_n(s)}`.
pub fn gamma_k(s: f64, c: f64, k: usize, cache: &PsiCache) -> Result<f64> {
    let mut sample: Vec<ExtReal> = cache.values(s)?.iter().map(|&v| ExtReal::Finite(v)).collect();
    sample.push(ExtReal::from_f64(c));
    Ok(order_stat(&sample, k)?.to_f64())
}

pub fn gamma_vec(s: f64, c: f64, cache: &PsiCache) -> Result<SurfacePoint> {
    let mut coords: Vec<f64> = cache.values(s)?.to_vec();
    coords.push(c);
    coords.sort_by(f64::total_cmp);
    coords.push(s);
    Ok(SurfacePoint { coords })
}

/// `A_k(s) = gamma(s, psi_k(s))`.
pub fn corner_a(k: usize, s: f64, cache: &PsiCache) -> Result<SurfacePoint> {
    let vals = cache.values(s)?;
    let c = *vals.get(k).ok_or(SyzError::IndexOutOfRange { index: k, limit: vals.len() })?;
    gamma_vec(s, c, cache)
}

pub fn j_embed(q: BasePoint, cache: &PsiCache) -> Result<SurfacePoint> {
    gamma_vec(q.s, cache.psi(q.s, q.r)?, cache)
}

/// Recovers `(s, c)` by deleting one copy of each `psi_j(s)`.
pub fn surface_coordinates(p: &SurfacePoint, cache: &PsiCache, tol: f64) -> Result<(f64, f64)> {
    let n = cache.n();
    if p.coords.len() != n + 3 {
        return Err(SyzError::NotOnSurface(format!("expected {} coordinates, got {}", n + 3, p.coords.len())));
    }
    let s = p.s();
    let g = p.gammas();
    if g.windows(2).any(|w| !(w[0] <= w[1] + tol)) {
        return Err(SyzError::NotOnSurface("coordinates are not nondecreasing".into()));
    }
    let psis = cache.values(s)?;
    let mut best: Option<(f64, usize)> = None;
    for skip in 0..g.len() {
        let dev = g
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .zip(psis.iter())
            .map(|((_, a), b)| (a - b).abs())
            .fold(0.0, f64::max);
        if best.map_or(true, |(d, _)| dev < d) {
            best = Some((dev, skip));
        }
    }
    let (dev, skip) = best.expect("n + 2 coordinates");
    if !(dev <= tol) {
        return Err(SyzError::NotOnSurface(format!("psi values matched only to {dev:e}")));
    }
    Ok((s, g[skip]))
}

pub fn j_inverse(p: &SurfacePoint, cache: &PsiCache, tol: f64, inv_tol: f64) -> Result<BasePoint> {
    let (s, c) = surface_coordinates(p, cache, tol)?;
    if !(c > 0.0) {
        return Err(SyzError::OutsideImage(c));
    }
    let r = psi_inverse_r(s, c, cache.params(), cache.quad_tol(), inv_tol)?;
    BasePoint::new(s, r)
}

/// First slot of `F_k`: `sum_j (j - k) vx_j + k min(0, vy)`.
pub fn f_slot(p: &TropToricPoint, k: usize) -> ExtReal {
    p.weighted_sum(k) + k as f64 * p.vy().min(0.0)
}

pub fn f_eval(p: &TropToricPoint, cache: &PsiCache) -> Result<SurfacePoint> {
    let n = cache.n();
    if p.n() != n {
        return Err(SyzError::Precondition(format!("point has n = {}, parameters have n = {n}", p.n())));
    }
    let psis: Vec<ExtReal> = cache.values(p.vy())?.iter().map(|&v| ExtReal::Finite(v)).collect();
    let mut coords = Vec::with_capacity(n + 3);
    let mut sample = Vec::with_capacity(n + 2);
    for k in 0..=n + 1 {
        sample.clear();
        sample.push(f_slot(p, k));
        sample.extend_from_slice(&psis);
        coords.push(order_stat(&sample, k)?.to_f64());
    }
    coords.push(p.vy());
    Ok(SurfacePoint { coords })
}

/// `f = j^{-1} F` on the domain `{sum_j j val(x_j) > 0}`.
pub fn f_map(p: &TropToricPoint, cache: &PsiCache, tol: f64, inv_tol: f64) -> Result<BasePoint> {
    if !in_y_domain(p) {
        return Err(SyzError::OutsideDomain(p.weighted_sum(0).to_f64()));
    }
    j_inverse(&f_eval(p, cache)?, cache, tol, inv_tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness {
    /// `Xi(y) = [(1 + y1)/y2 : y2 : 1 : ... : 1]`, valid for `|sigma - s| <= eps`, `|eta - c| <= delta`.
    DenseTorus { eps: f64, delta: f64, checked: usize },
    /// Chart `k0` with `(z, w) = (y2^{-1}(1 + y1), y2)`; the `tau^{-1}, tau^2, tau^{-1}`
    /// pattern centered at `pattern_center` leaves `F` unchanged.
    Chart {
        k0: usize,
        eps: f64,
        delta: f64,
        taus: Vec<f64>,
        pattern_center: Option<usize>,
        checked: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SmoothnessVerdict {
    Smooth(Witness),
    Singular { k: usize, note: String },
}

const WITNESS_PRECISION: f64 = 8.0;
const WITNESS_TAUS: [f64; 2] = [0.5, 1.5];

fn t_pow(e: f64) -> NovikovNum {
    NovikovNum::t_pow(e, WITNESS_PRECISION)
}

fn exact_one() -> NovikovNum {
    NovikovNum::one(f64::INFINITY)
}

/// Tropical image of the chart map at `y1 = unit T^sigma`, `val(y2) = v2`.
fn chart_image(k0: usize, n: usize, y1: &NovikovNum, v2: f64) -> Result<crate::toric::NovToricPoint> {
    let y2 = t_pow(v2);
    let y2_inv = t_pow(-v2);
    let opy = y1.add(&exact_one());
    if k0 <= n {
        chart_point(y2_inv.mul(&opy), y2, k0, n, y1.clone())
    } else {
        chart_point(y2_inv, y2.mul(&opy), n, n, y1.clone())
    }
}

fn verify_stencil<F>(cache: &PsiCache, tol: f64, points: &[(f64, f64, NovikovNum)], build: F) -> Result<usize>
where
    F: Fn(f64, f64, &NovikovNum) -> Result<Vec<crate::toric::NovToricPoint>>,
{
    let mut images: Vec<SurfacePoint> = Vec::new();
    let mut checked = 0;
    for (sigma, eta, y1) in points {
        let expect = gamma_vec(*sigma, *eta, cache)?;
        for x in build(*sigma, *eta, y1)? {
            let got = f_eval(&val_point(&x)?, cache)?;
            let dev = got.max_deviation(&expect);
            if !(dev <= tol) {
                return Err(SyzError::Precondition(format!(
                    "witness fails at (sigma, eta) = ({sigma}, {eta}): deviation {dev:e}"
                )));
            }
            checked += 1;
        }
        if images.iter().any(|im| im.max_deviation(&expect) == 0.0) {
            return Err(SyzError::Precondition("witness is not injective on its stencil".into()));
        }
        images.push(expect);
    }
    Ok(checked)
}

pub fn classify_point(p: &SurfacePoint, cache: &PsiCache, tol: f64) -> Result<SmoothnessVerdict> {
    let (s, c) = surface_coordinates(p, cache, tol)?;
    let n = cache.n();
    if s.abs() <= tol {
        let psi0 = cache.values(0.0)?;
        if let Some(k) = psi0.iter().position(|v| (v - c).abs() <= tol) {
            return Ok(SmoothnessVerdict::Singular {
                k,
                note: format!("corner A_{k}(0): val(1 + y) is not an affine function of the chart coordinates there"),
            });
        }
        let k0 = psi0.iter().filter(|&&v| v < c).count();
        let mut delta = f64::INFINITY;
        if k0 > 0 {
            delta = delta.min(0.5 * (c - psi0[k0 - 1]));
        }
        if k0 <= n {
            delta = delta.min(0.5 * (psi0[k0] - c));
        }
        let mut eps: f64 = 0.5;
        if k0 <= n {
            let mut halvings = 0;
            while cache.values(eps)?[k0] <= c + delta {
                eps *= 0.5;
                halvings += 1;
                if halvings > 60 {
                    return Err(SyzError::Precondition("no chart neighborhood found".into()));
                }
            }
        }
        let mut points = Vec::new();
        for &sigma in &[-eps, 0.0, eps] {
            for &eta in &[c - delta, c, c + delta] {
                points.push((sigma, eta, if sigma == 0.0 { exact_one() } else { t_pow(sigma) }));
            }
        }
        let pattern_center = (1..=n).contains(&k0).then_some(k0);
        let checked = verify_stencil(cache, tol, &points, |sigma, eta, y1| {
            let v2 = eta - k0 as f64 * sigma.min(0.0);
            let mut units = vec![y1.clone()];
            if sigma == 0.0 {
                units = vec![NovikovNum::constant(Complex64::new(2.0, 0.0), f64::INFINITY)];
                for tau in WITNESS_TAUS {
                    units.push(NovikovNum::constant(Complex64::new(-1.0, 0.0), f64::INFINITY).add(&t_pow(tau)));
                }
            }
            let mut out = Vec::new();
            for u in &units {
                let x = chart_image(k0, n, u, v2)?;
                if let Some(center) = pattern_center {
                    let g = GroupElement::local_pattern(n, center, &t_pow(0.75))?;
                    out.push(g_act(&g, &x)?);
                }
                out.push(x);
            }
            Ok(out)
        })?;
        return Ok(SmoothnessVerdict::Smooth(Witness::Chart {
            k0,
            eps,
            delta,
            taus: WITNESS_TAUS.to_vec(),
            pattern_center,
            checked,
        }));
    }
    let eps = 0.5 * s.abs();
    let delta = 0.5;
    let mut points = Vec::new();
    for &sigma in &[s - eps, s, s + eps] {
        for &eta in &[c - delta, c, c + delta] {
            points.push((sigma, eta, t_pow(sigma)));
        }
    }
    let checked = verify_stencil(cache, tol, &points, |_, eta, y1| {
        let y2 = t_pow(eta);
        let x0 = t_pow(-eta).mul(&y1.add(&exact_one()));
        Ok(vec![chart_point(x0, y2, 0, n, y1.clone())?])
    })?;
    Ok(SmoothnessVerdict::Smooth(Witness::DenseTorus { eps, delta, checked }))
}

/// Closed form of `F` when every `|a_k| = lambda`.
pub fn degenerate_f_reduced(p: &TropToricPoint, lambda: f64, cache: &PsiCache) -> Result<SurfacePoint> {
    let params = cache.params();
    let n = params.n();
    if p.n() != n {
        return Err(SyzError::Precondition(format!("point has n = {}, parameters have n = {n}", p.n())));
    }
    if params.norms().iter().any(|&r| (r - lambda).abs() > 1e-12 * lambda) {
        return Err(SyzError::Precondition(format!("not all root norms equal {lambda}")));
    }
    let psi_l = cache.values(p.vy())?[0];
    let first = f_slot(p, 0).min(ExtReal::Finite(psi_l)).to_f64();
    let last = f_slot(p, n + 1).max(ExtReal::Finite(psi_l)).to_f64();
    let mut coords = vec![first];
    coords.extend(std::iter::repeat(psi_l).take(n));
    coords.push(last);
    coords.push(p.vy());
    Ok(SurfacePoint { coords })
}
