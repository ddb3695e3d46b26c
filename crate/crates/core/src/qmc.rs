//! Randomly shifted rank-1 lattice rules with the tent (baker's) transform.
//!
//! Results depend only on the budget and the fixed shift seed, never on the
//! number of threads: node values are collected in order and reduced by
//! pairwise summation.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SHIFT_SEED: u64 = 0x51ed_270b_9a3c_4f11;

/// Number of independent random shifts per estimate.
pub const SHIFTS: usize = 8;

/// Korobov rule `z = (1, a, a^2, ...) mod m`.
#[derive(Clone, Debug)]
pub struct LatticeRule {
    m: u64,
    z: Vec<u64>,
}

impl LatticeRule {
    /// Picks the multiplier minimising the `P_2` figure of merit among a
    /// deterministic candidate set.
    pub fn korobov(m: u64, dim: usize) -> Self {
        assert!(m >= 1);
        let candidates: Vec<u64> = if m <= 128 {
            (1..m.max(2)).collect()
        } else {
            (1..=96).map(|i| 1 + i * (m - 2) / 97).collect()
        };
        let mut best: Option<(f64, Vec<u64>)> = None;
        for a in candidates {
            if m > 1 && a.gcd(&m) != 1 {
                continue;
            }
            let z = korobov_vector(a, m, dim);
            let merit = p2(&z, m);
            if best.as_ref().is_none_or(|(b, _)| merit < *b) {
                best = Some((merit, z));
            }
        }
        let z = best.map(|(_, z)| z).unwrap_or_else(|| vec![1; dim]);
        LatticeRule { m, z }
    }

    pub fn len(&self) -> u64 {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// Node `k` under `shift`, tent-transformed, in `[0, 1]^d`.
    pub fn node(&self, k: u64, shift: &[f64], out: &mut [f64]) {
        for ((o, &zj), &sj) in out.iter_mut().zip(&self.z).zip(shift) {
            let x = ((k as u128 * zj as u128 % self.m as u128) as f64 / self.m as f64 + sj).fract();
            *o = 1.0 - (2.0 * x - 1.0).abs();
        }
    }
}

fn korobov_vector(a: u64, m: u64, dim: usize) -> Vec<u64> {
    let mut z = Vec::with_capacity(dim);
    let mut c = 1 % m.max(1);
    for _ in 0..dim {
        z.push(c);
        c = (c as u128 * a as u128 % m as u128) as u64;
    }
    z
}

fn p2(z: &[u64], m: u64) -> f64 {
    let b2 = |x: f64| x * x - x + 1.0 / 6.0;
    let tp2 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut s = 0.0;
    for k in 0..m {
        let mut prod = 1.0;
        for &zj in z {
            let x = (k as u128 * zj as u128 % m as u128) as f64 / m as f64;
            prod *= 1.0 + tp2 * b2(x);
        }
        s += prod;
    }
    s / m as f64 - 1.0
}

/// Sum with `O(log n)` error growth and a fixed association order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubeEstimate {
    pub value: f64,
    pub abs_error: f64,
}

/// Integral of `f` over `[-1, 1]^dim` from `budget` nodes split over
/// [`SHIFTS`] shifted copies of one lattice.
///
/// The error estimate is the larger of the full-versus-half-budget
/// difference and three standard errors of the shift means.
pub fn integrate_cube<F>(dim: usize, budget: usize, f: F) -> CubeEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let volume = 2f64.powi(dim as i32);
    if dim == 0 {
        return CubeEstimate {
            value: f(&[]),
            abs_error: 0.0,
        };
    }
    let m = (budget / SHIFTS).max(1) as u64;
    let rule = LatticeRule::korobov(m, dim);
    let mut rng = ChaCha8Rng::seed_from_u64(SHIFT_SEED ^ dim as u64);
    let shifts: Vec<Vec<f64>> = (0..SHIFTS)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    let means: Vec<f64> = shifts
        .iter()
        .map(|shift| {
            let values: Vec<f64> = (0..m)
                .into_par_iter()
                .map_init(
                    || vec![0.0; dim],
                    |x, k| {
                        rule.node(k, shift, x);
                        for v in x.iter_mut() {
                            *v = 2.0 * *v - 1.0;
                        }
                        f(x)
                    },
                )
                .collect();
            volume * pairwise_sum(&values) / m as f64
        })
        .collect();
    let full = pairwise_sum(&means) / SHIFTS as f64;
    let half = pairwise_sum(&means[..SHIFTS / 2]) / (SHIFTS / 2) as f64;
    let var = means.iter().map(|x| (x - full).powi(2)).sum::<f64>() / (SHIFTS - 1) as f64;
    let se = (var / SHIFTS as f64).sqrt();
    let floor = 64.0 * f64::EPSILON * full.abs().max(1.0);
    CubeEstimate {
        value: full,
        abs_error: (full - half).abs().max(3.0 * se).max(floor),
    }
}
