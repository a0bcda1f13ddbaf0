//! The toric resolution of the `A_n` singularity: fan, homogeneous
//! coordinates over the Novikov field, the group `G`, charts and divisors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};
use crate::valuation::{ExtReal, NovikovNum};

/// Coefficient tolerance used for identities that hold within truncation.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Fan with rays `v_k = (k, 1)`, `0 <= k <= n+1`, and cones `sigma_k = <v_k, v_{k+1}>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FanData {
    pub n: usize,
}

impl FanData {
    pub fn rays(&self) -> Vec<(i64, i64)> {
        (0..=self.n as i64 + 1).map(|k| (k, 1)).collect()
    }

    pub fn cones(&self) -> Vec<(usize, usize)> {
        (0..=self.n).map(|k| (k, k + 1)).collect()
    }

    pub fn cone_determinant(&self, k: usize) -> i64 {
        let r = self.rays();
        let (a, b) = (r[k], r[k + 1]);
        a.0 * b.1 - a.1 * b.0
    }

    pub fn is_smooth(&self) -> bool {
        (0..=self.n).all(|k| self.cone_determinant(k).abs() == 1)
    }
}

/// Homogeneous coordinates `[x_0 : ... : x_{n+1}]` together with `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NovToricPoint {
    x: Vec<NovikovNum>,
    y: NovikovNum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitTag {
    DenseTorus,
    /// The open orbit of the ray `v_k` inside the divisor `D_k`.
    Ray(usize),
    /// The fixed point `D_k cap D_{k+1}` of the cone `sigma_k`.
    Cone(usize),
}

fn zero_indices(x: &[NovikovNum]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| v.is_exact_zero())
        .map(|(i, _)| i)
        .collect()
}

fn check_zero_pattern(zeros: &[usize]) -> Result<()> {
    match zeros {
        [] | [_] => Ok(()),
        [i, j] if j - i == 1 => Ok(()),
        _ => Err(SyzError::IrrelevantLocus(format!("vanishing coordinates {zeros:?}"))),
    }
}

fn product(x: &[NovikovNum]) -> NovikovNum {
    let mut acc = x[0].clone();
    for v in &x[1..] {
        acc = acc.mul(v);
    }
    acc
}

impl NovToricPoint {
    /// Checks the irrelevant locus, `y != 0` and `prod x_j = 1 + y`.
    pub fn new(x: Vec<NovikovNum>, y: NovikovNum) -> Result<Self> {
        if x.len() < 3 {
            return Err(SyzError::Precondition("need at least three homogeneous coordinates".into()));
        }
        check_zero_pattern(&zero_indices(&x))?;
        if y.leading().is_none() {
            return Err(SyzError::Precondition("y must be nonzero".into()));
        }
        for (j, v) in x.iter().enumerate() {
            if v.is_below_precision() {
                return Err(SyzError::Precondition(format!("x_{j} is zero only up to truncation")));
            }
        }
        let one_plus_y = y.add(&NovikovNum::one(y.cutoff()));
        if !product(&x).approx_eq(&one_plus_y, IDENTITY_TOL) {
            return Err(SyzError::Precondition("prod x_j differs from 1 + y".into()));
        }
        Ok(NovToricPoint { x, y })
    }

    /// The point with the given coordinates and `y = prod x_j - 1`.
    pub fn from_x(x: Vec<NovikovNum>) -> Result<Self> {
        if x.len() < 3 {
            return Err(SyzError::Precondition("need at least three homogeneous coordinates".into()));
        }
        let prod = product(&x);
        let cutoff = if prod.is_exact_zero() {
            x.iter().map(|v| v.cutoff()).filter(|c| c.is_finite()).fold(f64::INFINITY, f64::min)
        } else {
            prod.cutoff()
        };
        let cutoff = if cutoff.is_finite() { cutoff } else { crate::valuation::DEFAULT_CUTOFF };
        let y = prod.sub(&NovikovNum::one(cutoff));
        Self::new(x, y)
    }

    pub fn n(&self) -> usize {
        self.x.len() - 2
    }

    pub fn x(&self) -> &[NovikovNum] {
        &self.x
    }

    pub fn y(&self) -> &NovikovNum {
        &self.y
    }

    /// Whether all coordinates other than `x_k`, `x_{k+1}` are nonzero.
    pub fn in_chart(&self, k: usize) -> bool {
        k <= self.n() && self.x.iter().enumerate().all(|(j, v)| j == k || j == k + 1 || !v.is_exact_zero())
    }
}

/// Indices `k` with `x_k = 0`.
pub fn divisor_membership(p: &NovToricPoint) -> Vec<usize> {
    zero_indices(p.x())
}

pub fn orbit_of(p: &NovToricPoint) -> OrbitTag {
    match divisor_membership(p).as_slice() {
        [] => OrbitTag::DenseTorus,
        [k] => OrbitTag::Ray(*k),
        [k, _] => OrbitTag::Cone(*k),
        _ => unreachable!("construction rejects the irrelevant locus"),
    }
}

/// An element `t` of `G = {prod t_k = prod t_k^k = 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    t: Vec<NovikovNum>,
}

impl GroupElement {
    pub fn new(t: Vec<NovikovNum>) -> Result<Self> {
        if t.len() < 3 {
            return Err(SyzError::NotInGroup("need at least three components".into()));
        }
        if t.iter().any(|v| v.leading().is_none()) {
            return Err(SyzError::NotInGroup("components must be units".into()));
        }
        let p0 = product(&t);
        let mut p1 = NovikovNum::one(p0.cutoff());
        for (k, v) in t.iter().enumerate().skip(1) {
            p1 = p1.mul(&v.pow_int(k as i64)?);
        }
        for (name, v) in [("prod t_k", &p0), ("prod t_k^k", &p1)] {
            if !v.approx_eq(&NovikovNum::one(v.cutoff()), IDENTITY_TOL) {
                return Err(SyzError::NotInGroup(format!("{name} is not 1")));
            }
        }
        Ok(GroupElement { t })
    }

    pub fn identity(n: usize, precision: f64) -> Self {
        GroupElement {
            t: vec![NovikovNum::one(precision); n + 2],
        }
    }

    /// `(1, ..., 1, tau^{-1}, tau^2, tau^{-1}, 1, ..., 1)` centered at `center`.
    pub fn local_pattern(n: usize, center: usize, tau: &NovikovNum) -> Result<Self> {
        if center == 0 || center > n {
            return Err(SyzError::IndexOutOfRange { index: center, limit: n + 1 });
        }
        let inv = tau.inv()?;
        let precision = tau.cutoff() - tau.val().finite().expect("unit");
        let mut t = vec![NovikovNum::one(precision); n + 2];
        t[center - 1] = inv.clone();
        t[center] = tau.mul(tau);
        t[center + 1] = inv;
        Self::new(t)
    }

    pub fn components(&self) -> &[NovikovNum] {
        &self.t
    }

    pub fn compose(&self, other: &GroupElement) -> Result<Self> {
        if self.t.len() != other.t.len() {
            return Err(SyzError::NotInGroup("size mismatch".into()));
        }
        Ok(GroupElement {
            t: self.t.iter().zip(&other.t).map(|(a, b)| a.mul(b)).collect(),
        })
    }
}

/// Product of local patterns, one per `(center, tau)` pair.
pub fn g_element(n: usize, generators: &[(usize, NovikovNum)], precision: f64) -> Result<GroupElement> {
    let mut g = GroupElement::identity(n, precision);
    for (center, tau) in generators {
        g = g.compose(&GroupElement::local_pattern(n, *center, tau)?)?;
    }
    Ok(g)
}

pub fn g_act(t: &GroupElement, p: &NovToricPoint) -> Result<NovToricPoint> {
    if t.t.len() != p.x.len() {
        return Err(SyzError::NotInGroup("size mismatch".into()));
    }
    Ok(NovToricPoint {
        x: p.x.iter().zip(&t.t).map(|(a, b)| a.mul(b)).collect(),
        y: p.y.clone(),
    })
}

/// `z_k = prod x_j^{k+1-j}`, `w_k = prod x_j^{j-k}`.
pub fn chart_coords(p: &NovToricPoint, k: usize) -> Result<(NovikovNum, NovikovNum)> {
    if !p.in_chart(k) {
        return Err(SyzError::OutsideChart(k));
    }
    let mut z = p.x[k].clone();
    let mut w = p.x[k + 1].clone();
    for (j, v) in p.x.iter().enumerate() {
        if j == k || j == k + 1 {
            continue;
        }
        z = z.mul(&v.pow_int(k as i64 + 1 - j as i64)?);
        w = w.mul(&v.pow_int(j as i64 - k as i64)?);
    }
    Ok((z, w))
}

/// `[1 : ... : 1 : z : w : 1 : ... : 1]` with `z` in slot `k`, and `y = zw - 1`.
pub fn chart_to_homogeneous(z: &NovikovNum, w: &NovikovNum, k: usize, n: usize, precision: f64) -> Result<NovToricPoint> {
    if k > n {
        return Err(SyzError::IndexOutOfRange { index: k, limit: n + 1 });
    }
    let mut x = vec![NovikovNum::one(precision); n + 2];
    x[k] = z.clone();
    x[k + 1] = w.clone();
    NovToricPoint::from_x(x)
}

/// `[1 : ... : z : w : ... : 1]` with exact ones, `z` in slot `k`, and the given `y`.
pub fn chart_point(z: NovikovNum, w: NovikovNum, k: usize, n: usize, y: NovikovNum) -> Result<NovToricPoint> {
    if k > n {
        return Err(SyzError::IndexOutOfRange { index: k, limit: n + 1 });
    }
    let mut x = vec![NovikovNum::one(f64::INFINITY); n + 2];
    x[k] = z;
    x[k + 1] = w;
    NovToricPoint::new(x, y)
}

/// Same point of the toric surface: equal `y` and equal coordinates in a common chart.
pub fn same_point(p: &NovToricPoint, q: &NovToricPoint, tol: f64) -> bool {
    if p.n() != q.n() || !p.y.approx_eq(&q.y, tol) || divisor_membership(p) != divisor_membership(q) {
        return false;
    }
    for k in 0..=p.n() {
        if p.in_chart(k) && q.in_chart(k) {
            return match (chart_coords(p, k), chart_coords(q, k)) {
                (Ok((z1, w1)), Ok((z2, w2))) => z1.approx_eq(&z2, tol) && w1.approx_eq(&w2, tol),
                _ => false,
            };
        }
    }
    false
}

/// Valuations `(val x_0, ..., val x_{n+1}; val y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TropToricPoint {
    vx: Vec<ExtReal>,
    vy: f64,
}

impl TropToricPoint {
    /// Validates the zero pattern and the relation between `sum vx_j` and `vy`.
    pub fn new(vx: Vec<ExtReal>, vy: f64) -> Result<Self> {
        if vx.len() < 3 {
            return Err(SyzError::Precondition("need at least three coordinates".into()));
        }
        if vx.iter().any(|v| *v == ExtReal::NegInf) || !vy.is_finite() {
            return Err(SyzError::Precondition("valuations must be finite or +inf".into()));
        }
        let inf: Vec<usize> = vx
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == ExtReal::PosInf)
            .map(|(i, _)| i)
            .collect();
        check_zero_pattern(&inf)?;
        if inf.is_empty() {
            let total: f64 = vx.iter().map(|v| v.to_f64()).sum();
            let floor = vy.min(0.0);
            let slack = 1e-9 * (1.0 + total.abs());
            // val(1 + y) = min(0, val y) unless val y = 0, where it can only grow
            let ok = if vy != 0.0 { (total - floor).abs() <= slack } else { total >= -slack };
            if !ok {
                return Err(SyzError::Precondition(format!(
                    "sum of valuations {total} incompatible with val(y) = {vy}"
                )));
            }
        } else if vy != 0.0 {
            return Err(SyzError::Precondition("a vanishing coordinate forces val(y) = 0".into()));
        }
        Ok(TropToricPoint { vx, vy })
    }

    pub fn vx(&self) -> &[ExtReal] {
        &self.vx
    }

    pub fn vy(&self) -> f64 {
        self.vy
    }

    pub fn n(&self) -> usize {
        self.vx.len() - 2
    }

    pub fn infinite_indices(&self) -> Vec<usize> {
        self.vx
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_finite())
            .map(|(i, _)| i)
            .collect()
    }

    /// `sum_j (j - k) vx_j` with `0 * inf = 0`.
    pub fn weighted_sum(&self, k: usize) -> ExtReal {
        let mut finite = 0.0;
        let mut inf = ExtReal::Finite(0.0);
        for (j, v) in self.vx.iter().enumerate() {
            let coeff = j as i64 - k as i64;
            match v {
                ExtReal::Finite(x) => finite += coeff as f64 * x,
                other => {
                    inf = inf
                        .checked_add(other.scale(coeff))
                        .expect("adjacent infinities never carry opposite signs")
                }
            }
        }
        inf + finite
    }
}

pub fn val_point(p: &NovToricPoint) -> Result<TropToricPoint> {
    let vy = p.y.val().finite().ok_or_else(|| SyzError::Precondition("y must be nonzero".into()))?;
    TropToricPoint::new(p.x.iter().map(|v| v.val()).collect(), vy)
}

/// Membership in `{sum_j j val(x_j) > 0}`.
pub fn in_y_domain(p: &TropToricPoint) -> bool {
    p.weighted_sum(0) > ExtReal::Finite(0.0)
}

/// Convenience: `c T^e` known to `precision` orders past its leading term.
pub fn mono(c: Complex64, e: f64, precision: f64) -> NovikovNum {
    NovikovNum::monomial(c, e, e + precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    // coefficients dropped as cancelled carry no rounding bound, and at depth
    // 50 products amplify them past 1e-9; twelve orders stay clear of that
    const PREC: f64 = 12.0;

    fn t(e: f64) -> NovikovNum {
        mono(Complex64::new(1.0, 0.0), e, PREC)
    }

    fn unit(a: f64, b: f64, e: f64) -> NovikovNum {
        NovikovNum::from_terms(vec![(0.0, Complex64::new(a, 0.0)), (e, Complex64::new(0.0, b))], PREC)
    }

    fn sample_point(n: usize) -> NovToricPoint {
        let x = (0..n + 2)
            .map(|j| unit(1.0 + j as f64, 0.5, 0.75).mul(&t(0.3 * j as f64 - 0.4)))
            .collect();
        NovToricPoint::from_x(x).unwrap()
    }

    #[test]
    fn fan_is_smooth() {
        for n in 1..6 {
            assert!(FanData { n }.is_smooth());
        }
    }

    #[test]
    fn local_pattern_in_group() {
        let tau = unit(2.0, 1.0, 0.5).mul(&t(1.25));
        for c in 1..=3 {
            assert!(GroupElement::local_pattern(3, c, &tau).is_ok());
        }
        let bad = vec![t(1.0), t(0.0), t(0.0), t(0.0)];
        assert!(GroupElement::new(bad).is_err());
    }

    #[test]
    fn action_preserves_product_and_weighted_sum() {
        let n = 3;
        let p = sample_point(n);
        let g = g_element(n, &[(1, unit(2.0, 1.0, 0.4).mul(&t(0.7))), (3, t(-1.1))], PREC).unwrap();
        let q = g_act(&g, &p).unwrap();
        assert!(product(q.x()).approx_eq(&product(p.x()), 1e-9));
        let (vp, vq) = (val_point(&p).unwrap(), val_point(&q).unwrap());
        let (a, b) = (vp.weighted_sum(0).to_f64(), vq.weighted_sum(0).to_f64());
        assert!((a - b).abs() < 1e-12);
        for k in 0..=n {
            let (z1, w1) = chart_coords(&p, k).unwrap();
            let (z2, w2) = chart_coords(&q, k).unwrap();
            assert!(z1.approx_eq(&z2, 1e-9) && w1.approx_eq(&w2, 1e-9));
        }
        let id = GroupElement::identity(n, PREC);
        assert!(same_point(&g_act(&id, &p).unwrap(), &p, 1e-12));
    }

    #[test]
    fn chart_round_trip_and_gluing() {
        let n = 3;
        let z = unit(1.5, -0.5, 0.25).mul(&t(-0.6));
        let w = unit(-2.0, 1.0, 1.5).mul(&t(1.4));
        for k in 0..=n {
            let p = chart_to_homogeneous(&z, &w, k, n, PREC).unwrap();
            let (z2, w2) = chart_coords(&p, k).unwrap();
            assert!(z2.approx_eq(&z, 1e-12) && w2.approx_eq(&w, 1e-12));
            let one_plus_y = p.y().add(&NovikovNum::one(PREC));
            assert!(z2.mul(&w2).approx_eq(&one_plus_y, 1e-12));
            if k < n {
                let (zn, wn) = chart_coords(&p, k + 1).unwrap();
                assert!(wn.approx_eq(&z2.inv().unwrap(), 1e-9));
                assert!(zn.mul(&wn).approx_eq(&z2.mul(&w2), 1e-9));
            }
        }
    }

    #[test]
    fn tropical_chart_coordinates() {
        let p = sample_point(2);
        let v = val_point(&p).unwrap();
        for k in 0..=2 {
            let (z, w) = chart_coords(&p, k).unwrap();
            let vz: f64 = (0..4).map(|j| (k as f64 + 1.0 - j as f64) * v.vx()[j].to_f64()).sum();
            let vw: f64 = (0..4).map(|j| (j as f64 - k as f64) * v.vx()[j].to_f64()).sum();
            assert!((z.val().to_f64() - vz).abs() < 1e-12);
            assert!((w.val().to_f64() - vw).abs() < 1e-12);
        }
    }

    #[test]
    fn divisors_and_orbits() {
        let n = 2;
        let mut x = vec![t(0.5), NovikovNum::zero(), NovikovNum::zero(), t(0.2)];
        let p = NovToricPoint::from_x(x.clone()).unwrap();
        assert_eq!(orbit_of(&p), OrbitTag::Cone(1));
        assert_eq!(p.y().val(), ExtReal::Finite(0.0));
        x[1] = t(0.1);
        x[0] = NovikovNum::zero();
        assert!(matches!(NovToricPoint::from_x(x), Err(SyzError::IrrelevantLocus(_))));
        assert_eq!(orbit_of(&sample_point(n)), OrbitTag::DenseTorus);
        let d = NovToricPoint::from_x(vec![t(0.5), t(1.0), NovikovNum::zero(), t(0.2)]).unwrap();
        assert_eq!(divisor_membership(&d), vec![2]);
        assert_eq!(orbit_of(&d), OrbitTag::Ray(2));
    }

    #[test]
    fn domain_membership() {
        let f = ExtReal::Finite;
        let p = TropToricPoint::new(vec![f(0.0), f(-0.5), f(0.0), f(0.5)], 0.5).unwrap();
        assert!(in_y_domain(&p));
        assert!(TropToricPoint::new(vec![f(0.0), f(0.0), f(0.0), f(0.5)], 0.5).is_err());
        let p = TropToricPoint::new(vec![f(0.2), f(-0.2), f(0.2), f(-0.2)], 0.0).unwrap();
        // sum j vx_j = -0.2 + 0.4 - 0.6 = -0.4
        assert!(!in_y_domain(&p));
        let p = TropToricPoint::new(vec![f(0.4), f(-0.4), f(0.0), f(0.0)], 0.0).unwrap();
        assert_eq!(p.weighted_sum(0), f(-0.4));
        let p = TropToricPoint::new(vec![f(0.0), f(0.0), f(0.0), f(0.0)], 1.0).unwrap();
        assert!(!in_y_domain(&p));
        let p = TropToricPoint::new(vec![f(-3.0), ExtReal::PosInf, f(1.0), f(0.5)], 0.0).unwrap();
        assert!(in_y_domain(&p));
        assert!(TropToricPoint::new(vec![ExtReal::PosInf, f(0.0), ExtReal::PosInf, f(0.0)], 0.0).is_err());
    }
}
