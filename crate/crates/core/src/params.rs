//! The polynomial `h(z) = (z - a_0)...(z - a_n)` and its representative radii.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SyzError};

/// Norms closer than this (relative) are snapped to a common value.
pub const NORM_SNAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    n: usize,
    a: Vec<Complex64>,
    norms: Vec<f64>,
    radii: Vec<f64>,
}

impl ParamSet {
    /// Roots must be nonzero, pairwise distinct and listed by nondecreasing norm.
    /// Without explicit radii, defaults interlace the distinct norms.
    pub fn new(a: Vec<Complex64>, radii: Option<Vec<f64>>) -> Result<Self> {
        let p = Self::unordered(a, radii)?;
        if p.norms.windows(2).any(|w| w[0] > w[1]) {
            return Err(SyzError::InvalidParams(
                "roots must be listed by nondecreasing norm".into(),
            ));
        }
        Ok(p)
    }

    /// Like [`ParamSet::new`] but without the norm-ordering requirement.
    pub fn unordered(a: Vec<Complex64>, radii: Option<Vec<f64>>) -> Result<Self> {
        if a.len() < 2 {
            return Err(SyzError::InvalidParams("need n >= 1 (at least two roots)".into()));
        }
        for (i, ai) in a.iter().enumerate() {
            if !(ai.re.is_finite() && ai.im.is_finite()) {
                return Err(SyzError::InvalidParams(format!("a_{i} is not finite")));
            }
            if ai.norm() == 0.0 {
                return Err(SyzError::InvalidParams(format!("a_{i} = 0 makes h(0) = 0")));
            }
            for (j, aj) in a.iter().enumerate().take(i) {
                if ai == aj {
                    return Err(SyzError::InvalidParams(format!("a_{j} = a_{i}: multiple root")));
                }
            }
        }
        let norms = snap_norms(&a);
        let distinct = distinct_sorted(&norms);
        let radii = match radii {
            Some(r) => r,
            None => default_radii(&distinct),
        };
        if radii.len() != distinct.len() + 1 {
            return Err(SyzError::InvalidParams(format!(
                "expected {} radii interlacing the distinct norms, got {}",
                distinct.len() + 1,
                radii.len()
            )));
        }
        let ok = radii[0] > 0.0
            && distinct
                .iter()
                .enumerate()
                .all(|(i, &d)| radii[i] < d && d < radii[i + 1]);
        if !ok {
            return Err(SyzError::InvalidParams(
                "radii must interlace the distinct norms".into(),
            ));
        }
        Ok(ParamSet {
            n: a.len() - 1,
            a,
            norms,
            radii,
        })
    }

    /// Reference set `a = (1, 2i, -3)`, `r = (0.5, 1.5, 2.5, 4.0)`.
    pub fn reference_a2() -> Self {
        Self::new(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(-3.0, 0.0),
            ],
            Some(vec![0.5, 1.5, 2.5, 4.0]),
        )
        .expect("reference set is valid")
    }

    /// All roots on the circle of radius `lambda` at the given angles.
    pub fn collided(lambda: f64, angles: &[f64]) -> Result<Self> {
        let a = angles.iter().map(|&t| Complex64::from_polar(lambda, t)).collect();
        let mut p = Self::new(a, None)?;
        for x in p.norms.iter_mut() {
            *x = lambda;
        }
        p.radii = default_radii(&[lambda]);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.a
    }

    /// `|a_k|`, with near-equal norms snapped together.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Representative radius `r_k`; requires pairwise-distinct norms.
    pub fn radius(&self, k: usize) -> Result<f64> {
        if !self.has_distinct_norms() {
            return Err(SyzError::Precondition(
                "representative radii r_k need pairwise-distinct norms".into(),
            ));
        }
        self.radii
            .get(k)
            .copied()
            .ok_or(SyzError::IndexOutOfRange {
                index: k,
                limit: self.radii.len(),
            })
    }

    pub fn distinct_norms(&self) -> Vec<f64> {
        distinct_sorted(&self.norms)
    }

    pub fn has_distinct_norms(&self) -> bool {
        self.distinct_norms().len() == self.n + 1
    }

    pub fn is_norm_sorted(&self) -> bool {
        self.norms.windows(2).all(|w| w[0] <= w[1])
    }

    /// `(h(z), h'(z))`.
    pub fn h_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut h = Complex64::new(1.0, 0.0);
        let mut dh = Complex64::new(0.0, 0.0);
        for &a in &self.a {
            dh = dh * (z - a) + h;
            h *= z - a;
        }
        (h, dh)
    }

    pub fn h(&self, z: Complex64) -> Complex64 {
        self.a.iter().map(|&a| z - a).product()
    }
}

fn snap_norms(a: &[Complex64]) -> Vec<f64> {
    let raw: Vec<f64> = a.iter().map(|x| x.norm()).collect();
    let mut out = raw.clone();
    for i in 0..raw.len() {
        for j in 0..i {
            if (raw[i] - out[j]).abs() <= NORM_SNAP_TOL * raw[i] {
                out[i] = out[j];
                break;
            }
        }
    }
    out
}

fn distinct_sorted(norms: &[f64]) -> Vec<f64> {
    let mut d = norms.to_vec();
    d.sort_by(f64::total_cmp);
    d.dedup();
    d
}

fn default_radii(distinct: &[f64]) -> Vec<f64> {
    let mut r = Vec::with_capacity(distinct.len() + 1);
    r.push(distinct[0] / 2.0);
    for w in distinct.windows(2) {
        r.push((w[0] + w[1]) / 2.0);
    }
    r.push(distinct[distinct.len() - 1] + 1.0);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_defaults_match_explicit_radii() {
        let p = ParamSet::reference_a2();
        let q = ParamSet::new(p.roots().to_vec(), None).unwrap();
        assert_eq!(p.radii(), q.radii());
        assert_eq!(p.norms(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let one = Complex64::new(1.0, 0.0);
        assert!(ParamSet::new(vec![one, one], None).is_err());
        assert!(ParamSet::new(vec![one, Complex64::new(0.0, 0.0)], None).is_err());
        assert!(ParamSet::new(vec![Complex64::new(2.0, 0.0), one], None).is_err());
        assert!(ParamSet::new(vec![one, Complex64::new(2.0, 0.0)], Some(vec![0.5, 1.5, 1.9])).is_err());
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let p = ParamSet::reference_a2();
        let z = Complex64::new(0.3, -0.7);
        let eps = 1e-6;
        let (_, dh) = p.h_and_derivative(z);
        let fd = (p.h(z + eps) - p.h(z - eps)) / (2.0 * eps);
        assert!((dh - fd).norm() < 1e-6);
    }

    #[test]
    fn collided_norms_are_snapped() {
        let p = ParamSet::collided(2.0, &[0.3, 1.9, 4.0]).unwrap();
        assert!(p.norms().iter().all(|&x| x == 2.0));
        assert_eq!(p.distinct_norms(), vec![2.0]);
        assert_eq!(p.radii(), &[1.0, 3.0]);
    }
}
