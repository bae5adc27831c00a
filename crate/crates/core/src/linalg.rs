//! Dense complex square matrices and the kernels built on them: Hermitian
//! eigen-decomposition (cyclic Jacobi), spectral norm, LU solves and 2×2
//! block assembly.
//!
//! Matrices are stored row-major and never mutated after construction; every
//! operation returns a fresh value.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of ‖H‖_F.
pub const JACOBI_REL_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 30;
/// Relative skew residual accepted by [`ComplexMatrix::hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// A pivot below this fraction of ‖A‖_F is treated as singular.
pub const PIVOT_REL_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense n×n complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvector `k` is column `k`).
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.data[i * m.n + i] = *d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from complex rows, validating shape and finiteness.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("matrix must have at least one row".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        let m = Self { n, data };
        if !m.is_finite() {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(m)
    }

    /// Real-valued convenience constructor, mostly for tests and examples.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Conjugate transpose A*.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    /// Re(A) = (A + A*)/2, Hermitian by construction.
    pub fn herm_part(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in i + 1..n {
                let z = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                out.data[i * n + j] = z;
                out.data[j * n + i] = z.conj();
            }
        }
        out
    }

    /// Im(A) = (A − A*)/(2i), Hermitian by construction; A = Re(A) + i·Im(A).
    pub fn skew_part(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(self.data[i * n + i].im, 0.0);
            for j in i + 1..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()) * 0.5;
                let z = Complex64::new(d.im, -d.re);
                out.data[i * n + j] = z;
                out.data[j * n + i] = z.conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − A*‖_F.
    pub fn skew_residual(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.skew_residual() <= rel_tol * (1.0 + self.frobenius_norm())
    }

    /// ⟨Ax, x⟩ = x*Ax.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        let n = self.n;
        assert_eq!(x.len(), n);
        let mut acc = ZERO;
        for i in 0..n {
            let mut row = ZERO;
            for j in 0..n {
                row += self.data[i * n + j] * x[j];
            }
            acc += x[i].conj() * row;
        }
        acc
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * x[j]).sum())
            .collect()
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        self.check_hermitian()?;
        Ok(self.hermitian_eigen_unchecked())
    }

    /// Ascending eigenvalues only.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        Ok(self.hermitian_eigenvalues_unchecked())
    }

    fn check_hermitian(&self) -> Result<()> {
        let residual = self.skew_residual();
        if residual > HERMITIAN_TOL * (1.0 + self.frobenius_norm()) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(())
    }

    /// Jacobi on the Hermitian part of `self`; callers guarantee Hermiticity.
    pub(crate) fn hermitian_eigen_unchecked(&self) -> HermitianEigen {
        let n = self.n;
        let mut a = self.herm_part().data;
        let mut v = Self::identity(n).data;
        jacobi(&mut a, n, Some(&mut v));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let values = order.iter().map(|&k| a[k * n + k].re).collect();
        let vectors = Self::from_fn(n, |i, j| v[i * n + order[j]]);
        HermitianEigen { values, vectors }
    }

    /// Eigenvalues only, via Householder tridiagonalisation and implicit QL.
    /// Much cheaper than Jacobi when the eigenvectors are not needed.
    pub(crate) fn hermitian_eigenvalues_unchecked(&self) -> Vec<f64> {
        hermitian_eigenvalues_of(self.herm_part().data, self.n)
    }

    /// Operator 2-norm, sqrt(λ_max(A*A)).
    pub fn spectral_norm(&self) -> f64 {
        let n = self.n;
        let mut g = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc.im = 0.0;
                }
                g.data[i * n + j] = acc;
                g.data[j * n + i] = acc.conj();
            }
        }
        let top = g
            .hermitian_eigenvalues_unchecked()
            .last()
            .copied()
            .unwrap_or(0.0);
        top.max(0.0).sqrt()
    }

    /// Solves A·X = B by LU with partial pivoting.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if b.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.n,
            });
        }
        let threshold = PIVOT_REL_TOL * self.frobenius_norm();
        let mut lu = self.data.clone();
        let mut x = b.data.clone();
        for col in 0..n {
            let (piv_row, piv_abs) =
                (col..n)
                    .map(|r| (r, lu[r * n + col].norm()))
                    .fold(
                        (col, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if piv_abs <= threshold || piv_abs == 0.0 {
                return Err(Error::Singular {
                    pivot: piv_abs,
                    column: col,
                });
            }
            if piv_row != col {
                for k in 0..n {
                    lu.swap(col * n + k, piv_row * n + k);
                    x.swap(col * n + k, piv_row * n + k);
                }
            }
            let pivot = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / pivot;
                if factor == ZERO {
                    continue;
                }
                lu[r * n + col] = ZERO;
                for k in col + 1..n {
                    let u = lu[col * n + k];
                    lu[r * n + k] -= factor * u;
                }
                for k in 0..n {
                    let u = x[col * n + k];
                    x[r * n + k] -= factor * u;
                }
            }
        }
        for col in (0..n).rev() {
            let pivot = lu[col * n + col];
            for k in 0..n {
                let mut acc = x[col * n + k];
                for j in col + 1..n {
                    acc -= lu[col * n + j] * x[j * n + k];
                }
                x[col * n + k] = acc / pivot;
            }
        }
        Ok(Self { n, data: x })
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&Self::identity(self.n))
    }

    /// Assembles [[a11, a12], [a21, a22]] into a 2n×2n matrix.
    pub fn block2x2(
        a11: &ComplexMatrix,
        a12: &ComplexMatrix,
        a21: &ComplexMatrix,
        a22: &ComplexMatrix,
    ) -> Result<ComplexMatrix> {
        let n = a11.n;
        for blk in [a12, a21, a22] {
            if blk.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: blk.n,
                });
            }
        }
        Ok(Self::from_fn(2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a11,
                (true, false) => a12,
                (false, true) => a21,
                (false, false) => a22,
            };
            blk.data[(i % n) * n + (j % n)]
        }))
    }

    /// [[0, x], [y, 0]].
    pub fn off_diagonal_block(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        let zero = Self::zeros(x.n);
        Self::block2x2(&zero, x, y, &zero)
    }

    pub(crate) fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// In-place cyclic Jacobi on a Hermitian row-major buffer. On return the
/// diagonal holds the eigenvalues; `vecs`, when given, is right-multiplied by
/// the accumulated rotations.
fn jacobi(a: &mut [Complex64], n: usize, mut vecs: Option<&mut [Complex64]>) {
    if n == 1 {
        return;
    }
    let norm_f = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm_f == 0.0 {
        return;
    }
    let tol = JACOBI_REL_TOL * norm_f;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[p * n + q];
                let g = b.norm();
                if g == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = (b / g).conj();
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]].
                let gqp = -phase * s;
                let gqq = phase * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_p = akp * c + akq * gqp;
                    let new_q = akp * s + akq * gqq;
                    a[k * n + p] = new_p;
                    a[k * n + q] = new_q;
                    a[p * n + k] = new_p.conj();
                    a[q * n + k] = new_q.conj();
                }
                a[p * n + p] = Complex64::new(app - t * g, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * g, 0.0);
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                if let Some(v) = vecs.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c + vkq * gqp;
                        v[k * n + q] = vkp * s + vkq * gqq;
                    }
                }
            }
        }
    }
}

/// Ascending eigenvalues of an exactly Hermitian row-major buffer.
pub(crate) fn hermitian_eigenvalues_of(mut buf: Vec<Complex64>, n: usize) -> Vec<f64> {
    let (mut d, mut e) = tridiagonalize(&mut buf, n);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Reduces a Hermitian row-major buffer to real symmetric tridiagonal form
/// (diagonal, sub-diagonal moduli) with Householder reflectors. The buffer
/// is overwritten.
fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut sub = vec![0.0; n];
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let xnorm = (k + 1..n)
            .map(|i| a[i * n + k].norm_sqr())
            .sum::<f64>()
            .sqrt();
        let tail = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            // column already reduced
            sub[k] = xnorm;
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let phase = if x0 == ZERO { ONE } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        for i in k + 1..n {
            v[i] = a[i * n + k];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        // p = τ·A·v on the trailing block
        for i in k + 1..n {
            let row = &a[i * n + k + 1..(i + 1) * n];
            let acc: Complex64 = row.iter().zip(&v[k + 1..n]).map(|(x, y)| x * y).sum();
            w[i] = acc * tau;
        }
        let vp: Complex64 = (k + 1..n).map(|i| v[i].conj() * w[i]).sum();
        let beta = 0.5 * tau * vp.re;
        for i in k + 1..n {
            w[i] -= v[i] * beta;
        }
        // rank-2 update on the lower triangle, mirrored to keep exact symmetry
        for i in k + 1..n {
            let (vi, wi) = (v[i], w[i]);
            for j in k + 1..=i {
                let upd = a[i * n + j] - (vi * w[j].conj() + wi * v[j].conj());
                a[i * n + j] = upd;
                a[j * n + i] = upd.conj();
            }
            a[i * n + i].im = 0.0;
        }
        sub[k] = xnorm;
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    for (i, d) in diag.iter_mut().enumerate() {
        *d = a[i * n + i].re;
    }
    (diag, sub)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal
/// matrix; eigenvalues are left (unsorted) in `d`. `e[i]` couples i and i+1.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.n && j < self.n, "index out of bounds");
        &self.data[i * self.n + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        assert_eq!(n, rhs.n, "dimension mismatch in product");
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (d, r) in dst.iter_mut().zip(row) {
                    *d += aik * r;
                }
            }
        }
        ComplexMatrix { n, data: out }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sum");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in difference");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                (&self).$method(rhs)
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Mul, mul);
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);

/// Wire format: `{"n": int, "re": [[float]], "im": [[float]]}`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let n = m.n;
        let rows = |f: fn(&Complex64) -> f64| {
            (0..n)
                .map(|i| m.data[i * n..(i + 1) * n].iter().map(f).collect())
                .collect()
        };
        MatrixJson {
            n,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::Parse("matrix dimension must be positive".into()));
        }
        let shape_ok =
            |rows: &Vec<Vec<f64>>| rows.len() == j.n && rows.iter().all(|r| r.len() == j.n);
        if !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(Error::Parse(format!(
                "\"re\" and \"im\" must both be {0}x{0}",
                j.n
            )));
        }
        let rows =
            j.re.iter()
                .zip(&j.im)
                .map(|(r, i)| {
                    r.iter()
                        .zip(i)
                        .map(|(&a, &b)| Complex64::new(a, b))
                        .collect()
                })
                .collect();
        ComplexMatrix::from_rows(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{complex_gaussian_matrix, random_hermitian, trial_rng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b)
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn adjoint_examples() {
        let i3 = ComplexMatrix::identity(3);
        assert_eq!(i3.adjoint(), i3);
        let nil = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expect = ComplexMatrix::from_real(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(nil.adjoint(), expect);
        let s = ComplexMatrix::from_diag(&[c(0.0, 1.0)]);
        assert_eq!(s.adjoint()[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn herm_part_examples() {
        let nil = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expect = ComplexMatrix::from_real(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        assert_eq!(nil.herm_part(), expect);

        let mut rng = trial_rng(3);
        let h = random_hermitian(&mut rng, 4);
        assert!(max_abs_diff(&h.herm_part(), &h) < 1e-15);

        let a = complex_gaussian_matrix(&mut rng, 4);
        let skew = &a - &a.adjoint();
        assert!(skew.herm_part().frobenius_norm() < 1e-15);
    }

    #[test]
    fn skew_part_reassembles() {
        let mut rng = trial_rng(11);
        let a = complex_gaussian_matrix(&mut rng, 5);
        let back = &a.herm_part() + &a.skew_part().scale(c(0.0, 1.0));
        assert!(max_abs_diff(&a, &back) < 1e-14);
    }

    #[test]
    fn eigen_diagonal_and_pauli() {
        let d = ComplexMatrix::from_real(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]])
            .unwrap();
        assert_eq!(d.hermitian_eigen().unwrap().values, vec![1.0, 2.0, 3.0]);
        let x = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let vals = x.hermitian_eigenvalues().unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-15 && (vals[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let nil = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            nil.hermitian_eigen(),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eigen_residual_random() {
        let mut rng = trial_rng(2024);
        for n in [2, 3, 7, 16, 33, 64] {
            let h = random_hermitian(&mut rng, n);
            let eig = h.hermitian_eigen().unwrap();
            let lam = ComplexMatrix::from_diag(
                &eig.values.iter().map(|&l| c(l, 0.0)).collect::<Vec<_>>(),
            );
            let v = &eig.vectors;
            let resid = (&h * v - v * &lam).frobenius_norm();
            let tol = 1e-10 * (1.0 + h.frobenius_norm());
            assert!(resid <= tol, "n={n} residual {resid:e}");
            let orth = (&v.adjoint() * v - ComplexMatrix::identity(n)).frobenius_norm();
            assert!(orth <= 1e-10, "n={n} orthogonality {orth:e}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((ComplexMatrix::identity(3).spectral_norm() - 1.0).abs() < 1e-15);
        let d = ComplexMatrix::from_real(&[&[2.0, 0.0], &[0.0, -3.0]]).unwrap();
        assert!((d.spectral_norm() - 3.0).abs() < 1e-14);
        let nil = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!((nil.spectral_norm() - 1.0).abs() < 1e-15);
        assert_eq!(ComplexMatrix::zeros(4).spectral_norm(), 0.0);
    }

    #[test]
    fn solve_examples() {
        let mut rng = trial_rng(5);
        let b = complex_gaussian_matrix(&mut rng, 3);
        let x = ComplexMatrix::identity(3).solve(&b).unwrap();
        assert_eq!(x, b);

        let d = ComplexMatrix::from_real(&[&[2.0, 0.0], &[0.0, 4.0]]).unwrap();
        let inv = d.inverse().unwrap();
        let expect = ComplexMatrix::from_real(&[&[0.5, 0.0], &[0.0, 0.25]]).unwrap();
        assert_eq!(inv, expect);

        let sing = ComplexMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::Singular { .. })));
        assert!(matches!(
            ComplexMatrix::zeros(2).inverse(),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn block_examples() {
        let x = ComplexMatrix::identity(1);
        let z = ComplexMatrix::zeros(1);
        let m = ComplexMatrix::block2x2(&z, &x, &x, &z).unwrap();
        assert_eq!(
            m,
            ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
        );

        let i3 = ComplexMatrix::identity(3);
        let z3 = ComplexMatrix::zeros(3);
        assert_eq!(
            ComplexMatrix::block2x2(&i3, &z3, &z3, &i3).unwrap(),
            ComplexMatrix::identity(6)
        );
        let z2 = ComplexMatrix::zeros(2);
        assert!(matches!(
            ComplexMatrix::block2x2(&z3, &z2, &z3, &z3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn block_phase_leaves_norm_unchanged() {
        let mut rng = trial_rng(77);
        let x = complex_gaussian_matrix(&mut rng, 4);
        let base = ComplexMatrix::off_diagonal_block(&x, &x)
            .unwrap()
            .spectral_norm();
        for theta in [0.3, 1.7, std::f64::consts::PI, 5.5] {
            let rot = x.scale(Complex64::from_polar(1.0, theta));
            let m = ComplexMatrix::off_diagonal_block(&x, &rot).unwrap();
            assert!((m.spectral_norm() - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn json_shape_is_validated() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.0), c(0.5, 0.5)],
        ])
        .unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"re":[[1.0,0.0],[3.0,0.5]],"im":[[2.0,-1.0],[0.0,0.5]]}"#
        );
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"n":2,"re":[[1.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
