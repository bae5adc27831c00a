//! Herglotz-class functions on the unit disk and their matrix arguments.
//!
//! A function is stored as a discrete probability measure on the circle,
//! f(z) = Σ_j w_j (e^{iα_j} + z)/(e^{iα_j} − z), which has positive real part
//! on the disk and f(0) = 1. Matrix values are available three ways: by
//! diagonalisation (normal inputs), by trapezoidal quadrature of the Cauchy
//! integral, and by exact summation over the atoms.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::random::trial_rng;

pub const DEFAULT_NODES: usize = 512;
pub const MIN_NODES: usize = 32;
/// Allowed deviation of the total mass from 1, per atom.
pub const WEIGHT_SUM_TOL: f64 = 1e-14;
/// ‖U*U − I‖_F accepted by [`apply_normal`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HerglotzJson", into = "HerglotzJson")]
pub struct HerglotzFunction {
    angles: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HerglotzJson {
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HerglotzFunction {
    pub fn new(angles: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::Config(
                "a Herglotz measure needs at least one atom".into(),
            ));
        }
        if angles.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: angles.len(),
                found: weights.len(),
            });
        }
        if let Some(a) = angles.iter().find(|a| !(0.0..TAU).contains(*a)) {
            return Err(Error::Config(format!("atom angle {a} outside [0, 2π)")));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Config(format!(
                "atom weight {w} is not a finite non-negative number"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL * weights.len() as f64 {
            return Err(Error::Config(format!(
                "atom weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { angles, weights })
    }

    /// Point mass at `alpha`: f(z) = (e^{iα} + z)/(e^{iα} − z).
    pub fn single_atom(alpha: f64) -> Self {
        Self {
            angles: vec![alpha.rem_euclid(TAU)],
            weights: vec![1.0],
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        self.angles
            .iter()
            .zip(&self.weights)
            .map(|(&a, &w)| (Complex64::from_polar(1.0, a), w))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        eval_herglotz(self, z)
    }
}

impl TryFrom<HerglotzJson> for HerglotzFunction {
    type Error = Error;

    fn try_from(j: HerglotzJson) -> Result<Self> {
        Self::new(j.angles, j.weights)
    }
}

impl From<HerglotzFunction> for HerglotzJson {
    fn from(f: HerglotzFunction) -> Self {
        Self {
            angles: f.angles,
            weights: f.weights,
        }
    }
}

pub fn eval_herglotz(f: &HerglotzFunction, z: Complex64) -> Result<Complex64> {
    let modulus = z.norm();
    if !(modulus < 1.0) {
        return Err(Error::Domain { modulus });
    }
    Ok(f.atoms().map(|(u, w)| (u + z) / (u - z) * w).sum())
}

/// Uniform angles, uniform(0,1) weights normalised to total mass 1.
pub fn random_herglotz(seed: u64, atoms: usize) -> Result<HerglotzFunction> {
    random_herglotz_with(&mut trial_rng(seed), atoms)
}

pub fn random_herglotz_with<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: usize,
) -> Result<HerglotzFunction> {
    if atoms == 0 {
        return Err(Error::Config("atoms must be at least 1".into()));
    }
    let angles: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.0..TAU)).collect();
    let raw: Vec<f64> = (0..atoms)
        .map(|_| loop {
            let w: f64 = rng.random();
            if w > 0.0 {
                break w;
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / total).collect();
    HerglotzFunction::new(angles, weights)
}

/// f(A) for normal A = U·diag(λ)·U*.
pub fn apply_normal(
    f: &HerglotzFunction,
    unitary: &ComplexMatrix,
    lambdas: &[Complex64],
) -> Result<ComplexMatrix> {
    let n = unitary.n();
    if lambdas.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lambdas.len(),
        });
    }
    let residual = (&unitary.adjoint() * unitary - ComplexMatrix::identity(n)).frobenius_norm();
    if residual > UNITARY_TOL {
        return Err(Error::Config(format!(
            "diagonalising matrix is not unitary (residual {residual:.3e})"
        )));
    }
    let values = lambdas
        .iter()
        .map(|&l| eval_herglotz(f, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(unitary * &ComplexMatrix::from_diag(&values) * unitary.adjoint())
}

/// Trapezoidal rule for (1/2πi)∮ f(z)(z − A)⁻¹ dz on |z| = r, where r is the
/// midpoint between the spectral radius and the unit circle.
pub fn riesz_dunford(
    f: &HerglotzFunction,
    a: &ComplexMatrix,
    spectrum: &[Complex64],
    nodes: usize,
) -> Result<ComplexMatrix> {
    if nodes < MIN_NODES {
        return Err(Error::Config(format!(
            "quadrature needs at least {MIN_NODES} nodes"
        )));
    }
    let rho = spectrum.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if !(rho < 1.0) {
        return Err(Error::Domain { modulus: rho });
    }
    let radius = (rho + 1.0) / 2.0;
    let n = a.n();
    let identity = ComplexMatrix::identity(n);
    let terms = (0..nodes)
        .into_par_iter()
        .map(|m| {
            let z = Complex64::from_polar(radius, TAU * m as f64 / nodes as f64);
            let shifted = &identity.scale(z) - a;
            let resolvent = shifted.inverse()?;
            Ok(resolvent.scale(z * eval_herglotz(f, z)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms).scale_re(1.0 / nodes as f64))
}

fn pairwise_sum(terms: &[ComplexMatrix]) -> ComplexMatrix {
    match terms.len() {
        1 => terms[0].clone(),
        len => {
            let (lo, hi) = terms.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// f̄(A) = (f(A))*.
pub fn fbar_apply(_f: &HerglotzFunction, fa: &ComplexMatrix) -> ComplexMatrix {
    fa.adjoint()
}

/// Exact atom sum Σ w_j (e^{iα_j} + A)(e^{iα_j} − A)⁻¹.
pub fn herglotz_direct(f: &HerglotzFunction, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    kernel_sum(f, a, false)
}

/// Exact atom sum Σ w_j (e^{−iα_j} + A*)(e^{−iα_j} − A*)⁻¹.
pub fn fbar_direct(f: &HerglotzFunction, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    kernel_sum(f, &a.adjoint(), true)
}

fn kernel_sum(f: &HerglotzFunction, a: &ComplexMatrix, conjugate: bool) -> Result<ComplexMatrix> {
    let identity = ComplexMatrix::identity(a.n());
    let mut acc = ComplexMatrix::zeros(a.n());
    for (u, w) in f.atoms() {
        let u = if conjugate { u.conj() } else { u };
        let shifted = identity.scale(u);
        // (u − A)⁻¹ commutes with (u + A)
        let term = (&shifted - a).solve(&(&shifted + a))?;
        acc = acc + term.scale_re(w);
    }
    Ok(acc)
}
