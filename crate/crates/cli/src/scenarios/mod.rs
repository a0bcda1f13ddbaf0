pub mod areas;
pub mod collision;
pub mod diagram;
pub mod observation_a;
pub mod psi;
pub mod singular;
pub mod walls;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use syz_core::NovikovNum;

use crate::report::{Check, Table};

pub type ScenarioResult = (Vec<Check>, Vec<Table>);

/// Independent stream per purpose, so adding a check does not shift others.
pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub(crate) fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

/// A unit `c (1 + b T^{1/2})` with `|c|` in `[1, 2]` and `|b| <= 1/2`.
pub(crate) fn random_unit(rng: &mut ChaCha8Rng, precision: f64) -> NovikovNum {
    let c = Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let b = Complex64::from_polar(rng.gen_range(0.0..0.5), rng.gen_range(0.0..std::f64::consts::TAU));
    NovikovNum::from_terms(vec![(0.0, c), (0.5, c * b)], precision)
}

/// `-1 + T^tau`.
pub(crate) fn minus_one_plus(tau: f64, precision: f64) -> NovikovNum {
    NovikovNum::from_terms(
        vec![(0.0, Complex64::new(-1.0, 0.0)), (tau, Complex64::new(1.0, 0.0))],
        precision,
    )
}
