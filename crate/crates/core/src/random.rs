//! Seeded random sources: complex Ginibre matrices, Haar unitaries and the
//! per-trial stream derivation used by the batch driver.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// 64-bit stream seed for one trial, stable across platforms and releases.
pub fn stream_seed(master_seed: u64, suite: &str, dim: usize, trial: u64) -> u64 {
    // FNV-1a over the suite name
    let mut name_hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes() {
        name_hash ^= u64::from(b);
        name_hash = name_hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut h = splitmix64(master_seed);
    for word in [name_hash, dim as u64, trial] {
        h = splitmix64(h ^ word);
    }
    h
}

/// Standard complex normal: real and imaginary parts N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    complex_gaussian_matrix(rng, n).herm_part()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: Gram–Schmidt QR of a Ginibre matrix. The
/// resulting R has a positive real diagonal, which is the phase fix that makes
/// Q exactly Haar.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = complex_gaussian_matrix(rng, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// Uniform point in the disk of radius `radius`, by rejection from the square.
pub fn uniform_in_disk<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    loop {
        let x = rng.random_range(-1.0..1.0);
        let y = rng.random_range(-1.0..1.0);
        let z = Complex64::new(x, y);
        if z.norm_sqr() < 1.0 {
            return z * radius;
        }
    }
}
