//! Numerical radius w(A) = sup{|⟨Ax, x⟩| : ‖x‖ = 1}.
//!
//! Uses w(A) = max_θ λ_max(Re(e^{iθ}A)). The θ-circle is sampled on a uniform
//! grid, then the cells around the best local maxima are refined by
//! golden-section search. The returned value is always achieved: it is a
//! lower bound certified by the returned witness vector.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{hermitian_eigenvalues_of, ComplexMatrix};
use crate::random::{random_unit_vector, trial_rng};

pub const DEFAULT_GRID_POINTS: usize = 720;
pub const MIN_GRID_POINTS: usize = 8;
/// Golden-section stops once the bracketing θ-interval is this narrow.
pub const THETA_TOL: f64 = 1e-10;
/// Grid maxima closer than this are treated as ties.
const TIE_TOL: f64 = 1e-12;
/// Upper bound on refined candidates, shared by plateau-like profiles.
const MAX_CANDIDATES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub value: f64,
    pub theta_star: f64,
    pub witness: Vec<Complex64>,
    pub grid_points: usize,
}

/// Re(e^{iθ}A) = cos θ·Re(A) − sin θ·Im(A), with both parts precomputed.
struct RotatedHermitian {
    re: ComplexMatrix,
    im: ComplexMatrix,
}

impl RotatedHermitian {
    fn new(a: &ComplexMatrix) -> Self {
        Self {
            re: a.herm_part(),
            im: a.skew_part(),
        }
    }

    fn at(&self, theta: f64) -> ComplexMatrix {
        let (s, c) = theta.sin_cos();
        &self.re.scale_re(c) - &self.im.scale_re(s)
    }

    /// Ascending eigenvalues of Re(e^{iθ}A).
    fn eigenvalues(&self, theta: f64) -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        let buf = self
            .re
            .as_slice()
            .iter()
            .zip(self.im.as_slice())
            .map(|(r, i)| r * c - i * s)
            .collect();
        hermitian_eigenvalues_of(buf, self.re.n())
    }

    fn top(&self, theta: f64) -> f64 {
        *self.eigenvalues(theta).last().expect("non-empty spectrum")
    }
}

/// Computes w(A) with an achieved witness.
///
/// # Panics
/// If `grid_points < 8`.
pub fn numerical_radius(a: &ComplexMatrix, grid_points: usize) -> RadiusResult {
    assert!(
        grid_points >= MIN_GRID_POINTS,
        "numerical_radius needs at least {MIN_GRID_POINTS} grid points"
    );
    let n = a.n();
    if a.frobenius_norm() == 0.0 {
        let mut witness = vec![Complex64::new(0.0, 0.0); n];
        witness[0] = Complex64::new(1.0, 0.0);
        return RadiusResult {
            value: 0.0,
            theta_star: 0.0,
            witness,
            grid_points,
        };
    }

    let rot = RotatedHermitian::new(a);
    let step = TAU / grid_points as f64;
    let grid = sample_grid(&rot, grid_points, step);

    let gmax = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // A hump whose peak exceeds gmax must have a grid sample within
    // Lipschitz·step of gmax; λ_max(θ) has Lipschitz constant w(A) ≈ gmax.
    let slack = gmax.abs() * step + TIE_TOL;
    let candidates = select_candidates(&grid, gmax - slack);

    // (value, θ) of the best point seen so far; ties keep the smallest θ.
    let mut best = (f64::NEG_INFINITY, 0.0);
    let mut consider = |value: f64, theta: f64| {
        let theta = theta.rem_euclid(TAU);
        if value > best.0 + TIE_TOL {
            best = (value, theta);
        } else if value >= best.0 - TIE_TOL {
            best = (best.0.max(value), best.1.min(theta));
        }
    };
    for (k, &g) in grid.iter().enumerate() {
        consider(g, k as f64 * step);
    }
    for &k in &candidates {
        let centre = k as f64 * step;
        let (value, theta) = golden_max(&rot, centre - step, centre + step, grid[k]);
        consider(value, theta);
    }

    let (_, theta_star) = best;
    let eig = rot.at(theta_star).hermitian_eigen_unchecked();
    let top_value = *eig.values.last().expect("non-empty spectrum");
    let witness = eig.vectors.column(n - 1);
    let achieved = a.quadratic_form(&witness).norm();
    RadiusResult {
        value: top_value.max(achieved),
        theta_star,
        witness,
        grid_points,
    }
}

pub fn numerical_radius_default(a: &ComplexMatrix) -> RadiusResult {
    numerical_radius(a, DEFAULT_GRID_POINTS)
}

/// λ_max on θ_k = k·step. For even grids the antipodal half comes for free:
/// Re(e^{i(θ+π)}A) = −Re(e^{iθ}A), so λ_max(θ+π) = −λ_min(θ).
fn sample_grid(rot: &RotatedHermitian, grid_points: usize, step: f64) -> Vec<f64> {
    let mut grid = vec![0.0; grid_points];
    if grid_points.is_multiple_of(2) {
        let half = grid_points / 2;
        for k in 0..half {
            let vals = rot.eigenvalues(k as f64 * step);
            grid[k] = vals[vals.len() - 1];
            grid[k + half] = -vals[0];
        }
    } else {
        for (k, g) in grid.iter_mut().enumerate() {
            *g = rot.top(k as f64 * step);
        }
    }
    grid
}

/// Cyclic local maxima at or above `floor`, best first, skipping any whose
/// refinement bracket overlaps an already chosen one.
fn select_candidates(grid: &[f64], floor: f64) -> Vec<usize> {
    let len = grid.len();
    let mut locals: Vec<usize> = (0..len)
        .filter(|&k| {
            let prev = grid[(k + len - 1) % len];
            let next = grid[(k + 1) % len];
            grid[k] >= floor && grid[k] >= prev && grid[k] >= next
        })
        .collect();
    locals.sort_by(|&i, &j| grid[j].total_cmp(&grid[i]).then(i.cmp(&j)));
    let mut chosen: Vec<usize> = Vec::new();
    for k in locals {
        if chosen.len() == MAX_CANDIDATES {
            break;
        }
        let overlaps = chosen.iter().any(|&c| {
            let d = k.abs_diff(c);
            d.min(len - d) <= 2
        });
        if !overlaps {
            chosen.push(k);
        }
    }
    chosen
}

/// Golden-section maximisation of λ_max(θ) on [lo, hi].
fn golden_max(rot: &RotatedHermitian, mut lo: f64, mut hi: f64, centre_value: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = rot.top(x1);
    let mut f2 = rot.top(x2);
    let mut best = ((lo + hi) / 2.0, centre_value);
    let keep = |theta: f64, value: f64, best: &mut (f64, f64)| {
        if value > best.1 {
            *best = (theta, value);
        }
    };
    keep(x1, f1, &mut best);
    keep(x2, f2, &mut best);
    while hi - lo > THETA_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = rot.top(x1);
            keep(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = rot.top(x2);
            keep(x2, f2, &mut best);
        }
    }
    (best.1, best.0)
}

/// Monte-Carlo lower bound: max |⟨Ax, x⟩| over `samples` random unit vectors
/// (complex Gaussian, normalised) drawn from a seeded stream.
pub fn numradius_lower_bound(a: &ComplexMatrix, samples: usize, seed: u64) -> f64 {
    let mut rng = trial_rng(seed);
    (0..samples)
        .map(|_| {
            a.quadratic_form(&random_unit_vector(&mut rng, a.n()))
                .norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian_matrix, haar_unitary, uniform_in_disk};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_certified(a: &ComplexMatrix, r: &RadiusResult) {
        let norm: f64 = r.witness.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        let achieved = a.quadratic_form(&r.witness).norm();
        assert!(
            (achieved - r.value).abs() <= 1e-9,
            "{achieved} vs {}",
            r.value
        );
        assert!((0.0..TAU).contains(&r.theta_star));
    }

    #[test]
    fn nilpotent_hits_lower_norm_bound() {
        let a = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = numerical_radius_default(&a);
        assert!((r.value - 0.5).abs() <= 1e-10);
        assert_certified(&a, &r);
    }

    #[test]
    fn normal_hits_upper_norm_bound() {
        let a = ComplexMatrix::from_diag(&[c(0.5, 0.0), c(0.0, -0.3)]);
        let r = numerical_radius_default(&a);
        assert!((r.value - 0.5).abs() <= 1e-10);
        assert_certified(&a, &r);
        for n in [1, 3, 6] {
            let r = numerical_radius_default(&ComplexMatrix::identity(n));
            assert!((r.value - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_matrix_is_degenerate_but_total() {
        let r = numerical_radius(&ComplexMatrix::zeros(3), 8);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.theta_star, 0.0);
        assert_eq!(r.witness[0], c(1.0, 0.0));
    }

    #[test]
    #[should_panic]
    fn tiny_grid_panics() {
        numerical_radius(&ComplexMatrix::identity(2), 4);
    }

    #[test]
    fn dominates_monte_carlo() {
        let mut rng = trial_rng(2718);
        let a = complex_gaussian_matrix(&mut rng, 4);
        let r = numerical_radius_default(&a);
        assert_certified(&a, &r);
        let mc = numradius_lower_bound(&a, 100_000, 1);
        assert!(r.value >= mc - 1e-8);
    }

    #[test]
    fn monte_carlo_examples() {
        let one = numradius_lower_bound(&ComplexMatrix::identity(3), 100, 5);
        assert!((one - 1.0).abs() <= 1e-15);
        assert_eq!(numradius_lower_bound(&ComplexMatrix::zeros(3), 100, 5), 0.0);

        // Convergence of the sampler from below. A 10⁵-sample run on a 3×3
        // matrix typically stops ~2e-3·w short of the maximum, so the gap is
        // checked at 1e-2·w together with its decrease in the sample count.
        let mut rng = trial_rng(31);
        let a = complex_gaussian_matrix(&mut rng, 3);
        let w = numerical_radius_default(&a).value;
        let coarse = numradius_lower_bound(&a, 1_000, 8);
        let fine = numradius_lower_bound(&a, 100_000, 8);
        assert!(fine <= w + 1e-12);
        assert!(fine >= coarse);
        assert!(w - fine <= 1e-2 * w, "gap {}", w - fine);
    }

    #[test]
    fn odd_grid_agrees_with_even_grid() {
        let mut rng = trial_rng(44);
        let a = complex_gaussian_matrix(&mut rng, 5);
        let even = numerical_radius(&a, 720).value;
        let odd = numerical_radius(&a, 721).value;
        assert!((even - odd).abs() <= 1e-10 * even);
    }

    #[test]
    fn normal_matrix_radius_is_spectral_radius() {
        let mut rng = trial_rng(8);
        for n in [2, 4, 7] {
            let u = haar_unitary(&mut rng, n);
            let lambdas: Vec<Complex64> = (0..n).map(|_| uniform_in_disk(&mut rng, 2.0)).collect();
            let a = &u * &ComplexMatrix::from_diag(&lambdas) * u.adjoint();
            let expected = lambdas.iter().map(|l| l.norm()).fold(0.0, f64::max);
            let r = numerical_radius_default(&a);
            assert!((r.value - expected).abs() <= 1e-9 * expected.max(1.0));
            assert_certified(&a, &r);
        }
    }
}
