//! Monte-Carlo estimate of `psi`, independent of the cubature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SyzError};
use crate::params::ParamSet;
use crate::psi::reduced_density;

/// Below this `|s|` the sampler mixes in `1/|z - a_k|` proposals around roots.
pub const IMPORTANCE_THRESHOLD: f64 = 0.5;
pub const MIN_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

struct Ball {
    center: Complex64,
    radius: f64,
    weight: f64,
}

pub fn psi_oracle_mc(s: f64, r: f64, p: &ParamSet, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < MIN_SAMPLES {
        return Err(SyzError::Precondition(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    if !(r > 0.0) {
        return Err(SyzError::Precondition(format!("r must be positive, got {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let balls = if s.abs() < IMPORTANCE_THRESHOLD { root_balls(r, p) } else { Vec::new() };
    let (sum, sum_sq) = if balls.is_empty() {
        uniform(s, r, p, samples, &mut rng)
    } else {
        mixture(s, r, p, samples, &balls, &mut rng)
    };
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(McEstimate {
        estimate: mean,
        stderr: (var / n).sqrt(),
    })
}

fn root_balls(r: f64, p: &ParamSet) -> Vec<Ball> {
    let a = p.roots();
    let mut balls = Vec::new();
    for (k, &ak) in a.iter().enumerate() {
        let gap = a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &aj)| (aj - ak).norm())
            .fold(ak.norm(), f64::min);
        let radius = 0.25 * gap;
        if ak.norm() < r + radius {
            balls.push(Ball {
                center: ak,
                radius,
                weight: 0.0,
            });
        }
    }
    let w = 0.5 / balls.len().max(1) as f64;
    for b in balls.iter_mut() {
        b.weight = w;
    }
    balls
}

fn sample_disk(r: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if z.norm_sqr() <= r * r {
            return z;
        }
    }
}

fn uniform(s: f64, r: f64, p: &ParamSet, samples: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let scale = 0.5 * r * r;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let g = reduced_density(sample_disk(r, rng), s, p) * scale;
        sum += g;
        sum_sq += g * g;
    }
    (sum, sum_sq)
}

fn mixture(s: f64, r: f64, p: &ParamSet, samples: usize, balls: &[Ball], rng: &mut ChaCha8Rng) -> (f64, f64) {
    let w_disk = 1.0 - balls.iter().map(|b| b.weight).sum::<f64>();
    let disk_pdf = w_disk / (PI * r * r);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let u: f64 = rng.gen();
        let z = if u < w_disk {
            sample_disk(r, rng)
        } else {
            let mut acc = w_disk;
            let mut chosen = &balls[balls.len() - 1];
            for b in balls {
                acc += b.weight;
                if u < acc {
                    chosen = b;
                    break;
                }
            }
            let t = chosen.radius * rng.gen::<f64>();
            let phi = 2.0 * PI * rng.gen::<f64>();
            chosen.center + Complex64::from_polar(t, phi)
        };
        if z.norm_sqr() > r * r {
            continue;
        }
        let mut pdf = disk_pdf;
        for b in balls {
            let d = (z - b.center).norm();
            if d <= b.radius {
                pdf += b.weight / (2.0 * PI * b.radius * d);
            }
        }
        let g = reduced_density(z, s, p) / pdf / (2.0 * PI);
        if g.is_finite() {
            sum += g;
            sum_sq += g * g;
        }
    }
    (sum, sum_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::psi;

    #[test]
    fn small_radius_limit() {
        let p = ParamSet::reference_a2();
        let q0 = reduced_density(Complex64::new(0.0, 0.0), 0.3, &p);
        for &r in &[0.05, 0.02] {
            let est = psi_oracle_mc(0.3, r, &p, 200_000, 1).unwrap();
            let ratio = est.estimate / (0.5 * r * r);
            assert!((ratio - q0).abs() < 0.2 * q0 * r / 0.05, "{ratio} vs {q0}");
        }
    }

    #[test]
    fn stderr_scales_like_inverse_sqrt() {
        let p = ParamSet::reference_a2();
        for &s in &[0.0, 0.9] {
            let a = psi_oracle_mc(s, 1.5, &p, 200_000, 3).unwrap();
            let b = psi_oracle_mc(s, 1.5, &p, 400_000, 4).unwrap();
            let ratio = b.stderr / a.stderr;
            assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.3, "s = {s}: ratio {ratio}");
        }
    }

    #[test]
    fn agrees_with_cubature() {
        let p = ParamSet::reference_a2();
        for &(s, r) in &[(0.7, 1.5), (0.0, 2.5), (0.0, 1.0)] {
            let q = psi(s, r, &p, 1e-10).unwrap();
            let est = psi_oracle_mc(s, r, &p, 1_000_000, 11).unwrap();
            assert!((q - est.estimate).abs() <= 4.0 * est.stderr + 1e-8 * q, "({s},{r}): {q} vs {est:?}");
        }
    }
}
