//! G₁ operators: matrices whose resolvent satisfies ‖(z − A)⁻¹‖ = 1/dist(z, σ(A)).
//!
//! Generated operators are normal (U·diag(λ)·U* with Haar U), which makes the
//! growth condition exact. Externally supplied matrices carry their spectrum
//! and must pass [`certify_g1`] before they are used.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::{apply_normal, riesz_dunford, HerglotzFunction};
use crate::linalg::{ComplexMatrix, MatrixJson};
use crate::random::{haar_unitary, trial_rng, uniform_in_disk};

/// Eigenvalues this close to the unit circle are rejected.
pub const BOUNDARY_GUARD: f64 = 1e-12;
/// Largest certificate accepted for an externally supplied operator.
pub const CERTIFY_THRESHOLD: f64 = 1e-6;
/// Test points closer than this to the spectrum are skipped.
pub const MIN_TEST_DISTANCE: f64 = 1e-6;
pub const DEFAULT_CIRCLE_SAMPLES: usize = 64;
pub const DEFAULT_RING_RADII: [f64; 3] = [0.05, 0.15, 0.3];
/// Relative normality residual ‖A*A − AA*‖_F / ‖A‖_F² for generated operators.
pub const NORMALITY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct G1Operator {
    matrix: ComplexMatrix,
    spectrum: Vec<Complex64>,
    unitary: Option<ComplexMatrix>,
    d: f64,
    certificate: Option<f64>,
}

/// Wire format: `{"matrix": ..., "spectrum": [[re, im]], "unitary": ..., "d": float}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct G1OperatorJson {
    pub matrix: MatrixJson,
    pub spectrum: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
}

impl G1Operator {
    /// Normal operator U·diag(spectrum)·U*. Fails if U is not unitary or the
    /// spectrum leaves the disk.
    pub fn from_normal_parts(unitary: ComplexMatrix, spectrum: Vec<Complex64>) -> Result<Self> {
        let n = unitary.n();
        if spectrum.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: spectrum.len(),
            });
        }
        let residual =
            (&unitary.adjoint() * &unitary - ComplexMatrix::identity(n)).frobenius_norm();
        if residual > 1e-10 {
            return Err(Error::Config(format!(
                "diagonalising matrix is not unitary (residual {residual:.3e})"
            )));
        }
        let d = boundary_distance(&spectrum)?;
        let matrix = &unitary * &ComplexMatrix::from_diag(&spectrum) * unitary.adjoint();
        Ok(Self {
            matrix,
            spectrum,
            unitary: Some(unitary),
            d,
            certificate: None,
        })
    }

    /// A matrix with a caller-supplied spectrum. The result is not yet
    /// certified; see [`G1Operator::certified`].
    pub fn from_matrix(matrix: ComplexMatrix, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != matrix.n() {
            return Err(Error::DimensionMismatch {
                expected: matrix.n(),
                found: spectrum.len(),
            });
        }
        let d = boundary_distance(&spectrum)?;
        Ok(Self {
            matrix,
            spectrum,
            unitary: None,
            d,
            certificate: None,
        })
    }

    /// Runs [`certify_g1`] and attaches the certificate, failing above
    /// [`CERTIFY_THRESHOLD`].
    pub fn certified(mut self, circle_samples: usize, radii: &[f64]) -> Result<Self> {
        let certificate = certify_g1(&self, circle_samples, radii)?;
        if !(certificate <= CERTIFY_THRESHOLD) {
            return Err(Error::CertificationFailed {
                certificate,
                threshold: CERTIFY_THRESHOLD,
            });
        }
        self.certificate = Some(certificate);
        Ok(self)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn unitary(&self) -> Option<&ComplexMatrix> {
        self.unitary.as_ref()
    }

    /// Boundary distance d_A = dist(∂𝔻, σ(A)).
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn certificate(&self) -> Option<f64> {
        self.certificate
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Ok when the operator is normal by construction or carries a passing
    /// certificate; uncertified operators are certified on the spot.
    pub fn ensure_certified(&self) -> Result<()> {
        if self.unitary.is_some() {
            return Ok(());
        }
        let certificate = match self.certificate {
            Some(c) => c,
            None => certify_g1(self, DEFAULT_CIRCLE_SAMPLES, &DEFAULT_RING_RADII)?,
        };
        if certificate <= CERTIFY_THRESHOLD {
            Ok(())
        } else {
            Err(Error::CertificationFailed {
                certificate,
                threshold: CERTIFY_THRESHOLD,
            })
        }
    }

    /// f(A): diagonalisation when the unitary is known, contour quadrature
    /// with `nodes` points otherwise.
    pub fn apply(&self, f: &HerglotzFunction, nodes: usize) -> Result<ComplexMatrix> {
        match &self.unitary {
            Some(u) => apply_normal(f, u, &self.spectrum),
            None => riesz_dunford(f, &self.matrix, &self.spectrum, nodes),
        }
    }

    pub fn normality_residual(&self) -> f64 {
        let a = &self.matrix;
        (&a.adjoint() * a - a * &a.adjoint()).frobenius_norm()
    }

    pub fn to_json(&self) -> G1OperatorJson {
        G1OperatorJson {
            matrix: self.matrix.clone().into(),
            spectrum: self.spectrum.iter().map(|z| [z.re, z.im]).collect(),
            unitary: self.unitary.clone().map(Into::into),
            d: Some(self.d),
        }
    }
}

/// Normal operator with eigenvalues uniform on the disk of radius `rho_max`
/// and a Haar-random eigenbasis.
pub fn random_g1(seed: u64, n: usize, rho_max: f64) -> Result<G1Operator> {
    random_g1_with(&mut trial_rng(seed), n, rho_max)
}

pub fn random_g1_with<R: Rng + ?Sized>(rng: &mut R, n: usize, rho_max: f64) -> Result<G1Operator> {
    if !(rho_max > 0.0 && rho_max < 1.0) {
        return Err(Error::Config(format!(
            "rho_max must lie in (0, 1), got {rho_max}"
        )));
    }
    if n == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let spectrum: Vec<Complex64> = (0..n).map(|_| uniform_in_disk(rng, rho_max)).collect();
    let unitary = haar_unitary(rng, n);
    G1Operator::from_normal_parts(unitary, spectrum).map_err(|e| match e {
        Error::SpectrumOnBoundary { modulus } => {
            Error::Config(format!("rho_max too close to 1 (|lambda| = {modulus})"))
        }
        other => other,
    })
}

/// min_i (1 − |λ_i|), the distance from the unit circle to a spectrum inside
/// the disk.
pub fn boundary_distance(spectrum: &[Complex64]) -> Result<f64> {
    if spectrum.is_empty() {
        return Err(Error::Config("spectrum must be non-empty".into()));
    }
    let mut d = f64::INFINITY;
    for l in spectrum {
        let modulus = l.norm();
        if !(modulus < 1.0 - BOUNDARY_GUARD) {
            return Err(Error::SpectrumOnBoundary { modulus });
        }
        d = d.min(1.0 - modulus);
    }
    Ok(d)
}

/// ‖(z − A)⁻¹‖.
pub fn resolvent_norm(a: &ComplexMatrix, z: Complex64) -> Result<f64> {
    let shifted = &ComplexMatrix::identity(a.n()).scale(z) - a;
    Ok(shifted.inverse()?.spectral_norm())
}

fn distance_to(spectrum: &[Complex64], z: Complex64) -> f64 {
    spectrum
        .iter()
        .map(|l| (z - l).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Test points: `circle_samples` points on each ring of each radius around
/// each eigenvalue, plus `circle_samples` points on the unit circle. Points
/// within [`MIN_TEST_DISTANCE`] of the spectrum are dropped.
pub fn certification_points(
    spectrum: &[Complex64],
    circle_samples: usize,
    radii: &[f64],
) -> Vec<Complex64> {
    let ring = |centre: Complex64, radius: f64| {
        (0..circle_samples).map(move |k| {
            centre + Complex64::from_polar(radius, TAU * k as f64 / circle_samples as f64)
        })
    };
    let mut points: Vec<Complex64> = ring(Complex64::new(0.0, 0.0), 1.0).collect();
    for &l in spectrum {
        for &r in radii {
            points.extend(ring(l, r));
        }
    }
    points.retain(|&z| distance_to(spectrum, z) >= MIN_TEST_DISTANCE);
    points
}

/// max over the test points of |‖(z − A)⁻¹‖·dist(z, σ(A)) − 1|.
pub fn certify_g1(op: &G1Operator, circle_samples: usize, radii: &[f64]) -> Result<f64> {
    let points = certification_points(&op.spectrum, circle_samples, radii);
    let deviations = points
        .par_iter()
        .map(|&z| match resolvent_norm(&op.matrix, z) {
            Ok(norm) => Ok((norm * distance_to(&op.spectrum, z) - 1.0).abs()),
            // z is an eigenvalue the supplied spectrum missed
            Err(Error::Singular { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(deviations.into_iter().fold(0.0, f64::max))
}
