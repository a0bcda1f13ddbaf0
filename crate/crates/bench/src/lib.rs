//! Inputs shared by the kernel benchmarks.

use num_complex::Complex64;
use syz_core::toric::TropToricPoint;
use syz_core::{ExtReal, NovikovNum};

/// A unit-valuation series with `terms` terms spaced by `1/2`.
pub fn sample_series(terms: usize, precision: f64) -> NovikovNum {
    let t = (0..terms)
        .map(|i| (0.5 * i as f64, Complex64::new(1.0 + 0.1 * i as f64, 0.3 - 0.05 * i as f64)))
        .collect();
    NovikovNum::from_terms(t, precision)
}

/// Dense-torus point for `n = 2` with `val(y) = -0.5`.
pub fn sample_trop_point() -> TropToricPoint {
    let vx = [-0.5, 0.25, 1.0, -1.25].map(ExtReal::Finite).to_vec();
    TropToricPoint::new(vx, -0.5).expect("valid sample point")
}
