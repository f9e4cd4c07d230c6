//! Seeded random samples of `(A, z, τ)` for transformation sweeps.
//!
//! Matrices have `1 ≤ c ≤ 20` and all entries bounded by 50 in modulus;
//! `τ` has `|Re τ| ≤ 1`, `0.3 ≤ Im τ ≤ 3`; `z` lies in the unit disc at least
//! 0.05 from every zero of θ₁(·, τ).

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::modular::{ModularMatrix, TauPoint};
use crate::theta::zero_lattice_distance;
use crate::Complex;

pub const DEFAULT_SEED: u64 = 20_240_601;

const MAX_C: i64 = 20;
const MAX_ENTRY: i64 = 50;
const MIN_ZERO_DISTANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCase {
    pub matrix: ModularMatrix,
    pub z: Complex,
    pub tau: TauPoint,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn matrix(&mut self) -> ModularMatrix {
        loop {
            let c = self.rng.gen_range(1..=MAX_C);
            let d = self.rng.gen_range(-MAX_ENTRY..=MAX_ENTRY);
            if d.gcd(&c) != 1 {
                continue;
            }
            let inv = d.rem_euclid(c).extended_gcd(&c).x.rem_euclid(c);
            let candidates: Vec<i64> = (-MAX_ENTRY..=MAX_ENTRY)
                .filter(|a| (a - inv).rem_euclid(c) == 0 && ((a * d - 1) / c).abs() <= MAX_ENTRY)
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let a = candidates[self.rng.gen_range(0..candidates.len())];
            return ModularMatrix::new(a, (a * d - 1) / c, c, d)
                .expect("ad − bc = 1 by construction");
        }
    }

    pub fn tau(&mut self) -> TauPoint {
        let re = self.rng.gen_range(-1.0..=1.0);
        let im = self.rng.gen_range(0.3..=3.0);
        TauPoint::from_parts(re, im).expect("Im τ > 0")
    }

    pub fn z(&mut self, tau: TauPoint) -> Complex {
        loop {
            let z = Complex::new(
                self.rng.gen_range(-1.0..=1.0),
                self.rng.gen_range(-1.0..=1.0),
            );
            if z.norm() <= 1.0 && zero_lattice_distance(z, tau) >= MIN_ZERO_DISTANCE {
                return z;
            }
        }
    }

    pub fn case(&mut self) -> SweepCase {
        let matrix = self.matrix();
        let tau = self.tau();
        let z = self.z(tau);
        SweepCase { matrix, z, tau }
    }
}

pub fn sample_cases(seed: u64, count: usize) -> Vec<SweepCase> {
    let mut s = Sampler::new(seed);
    (0..count).map(|_| s.case()).collect()
}
