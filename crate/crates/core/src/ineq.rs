//! Both sides of each numerical radius inequality, evaluated on concrete
//! matrices.
//!
//! Every checker returns one [`InequalityReport`] per requested variant. The
//! `*_variants` forms share the work common to several variants (the
//! right-hand side, f(A)) and are what the batch driver calls; the single
//! variant forms are thin wrappers over them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::funcalc::{fbar_apply, HerglotzFunction};
use crate::g1gen::G1Operator;
use crate::linalg::ComplexMatrix;
use crate::wradius::numerical_radius;

pub const PASS_REL_TOL: f64 = 1e-8;
pub const PASS_ABS_TOL: f64 = 1e-10;
pub const EQUALITY_TOL: f64 = 1e-8;
/// Skew residual (relative to 1 + ‖X‖_F) tolerated for a self-adjoint X.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub ratio: f64,
    pub pass: bool,
    pub seed: u64,
    pub dim: usize,
}

impl InequalityReport {
    /// lhs ≤ rhs, up to the relative and absolute pass tolerances.
    pub fn bound(name: impl Into<String>, lhs: f64, rhs: f64, dim: usize) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            ratio: tightness(lhs, rhs),
            pass: lhs <= rhs * (1.0 + PASS_REL_TOL) + PASS_ABS_TOL,
            seed: 0,
            dim,
        }
    }

    /// lhs = rhs, checked in both directions.
    pub fn equality(name: impl Into<String>, lhs: f64, rhs: f64, dim: usize) -> Self {
        Self {
            pass: (lhs - rhs).abs() <= EQUALITY_TOL * (1.0 + rhs),
            ..Self::bound(name, lhs, rhs, dim)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// lhs/rhs, with 0/0 = 0 and x/0 = +∞ for x > 0.
pub fn tightness(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

// JSON has no infinity literal; the rhs = 0 < lhs sentinel travels as "inf".
fn ser_ratio<S: Serializer>(ratio: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if ratio.is_finite() {
        s.serialize_f64(*ratio)
    } else {
        s.serialize_str("inf")
    }
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Wire {
        Num(f64),
        Text(String),
    }
    match Wire::deserialize(d)? {
        Wire::Num(x) => Ok(x),
        Wire::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Wire::Text(t) => Err(serde::de::Error::custom(format!("invalid ratio {t:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    fn apply(self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Sign::Plus => a + b,
            Sign::Minus => a - b,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Thm22Variant {
    Sum,
    Diff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cor23Variant {
    Re,
    Im,
}

/// The two elementary operators of the two-operator results:
/// f(A)X f̄(B) − f(B)X f̄(A) and f(A)X f̄(B) + 2X + f(B)X f̄(A).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairVariant {
    Commutator,
    Anticommutator2X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cor26Variant {
    Im,
    RePlusI,
}

impl Thm22Variant {
    pub const ALL: [Self; 2] = [Self::Sum, Self::Diff];
}

impl Cor23Variant {
    pub const ALL: [Self; 2] = [Self::Re, Self::Im];
}

impl PairVariant {
    pub const ALL: [Self; 2] = [Self::Commutator, Self::Anticommutator2X];
}

impl Cor26Variant {
    pub const ALL: [Self; 2] = [Self::Im, Self::RePlusI];
}

impl fmt::Display for Thm22Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sum => "sum",
            Self::Diff => "diff",
        })
    }
}

impl fmt::Display for Cor23Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Re => "re",
            Self::Im => "im",
        })
    }
}

impl fmt::Display for PairVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Commutator => "commutator",
            Self::Anticommutator2X => "anticommutator2X",
        })
    }
}

impl fmt::Display for Cor26Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Im => "im",
            Self::RePlusI => "re_plus_I",
        })
    }
}

/// θ-grid used for a matrix of the given size; block matrices get the
/// denser grid.
pub fn grid_for(dim: usize) -> usize {
    if dim <= 8 {
        720
    } else {
        1440
    }
}

/// w(·) with the checker grid settings.
pub fn w(m: &ComplexMatrix) -> f64 {
    numerical_radius(m, grid_for(m.n())).value
}

fn same_dims(first: &ComplexMatrix, rest: &[&ComplexMatrix]) -> Result<()> {
    for m in rest {
        first.check_same_dim(m)?;
    }
    Ok(())
}

fn ops_match(x: &ComplexMatrix, ops: &[&G1Operator]) -> Result<()> {
    for op in ops {
        x.check_same_dim(op.matrix())?;
        op.ensure_certified()?;
    }
    Ok(())
}

/// w(A*XA) ≤ ‖A‖² w(X).
pub fn check_lemma21_a(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<InequalityReport> {
    same_dims(a, &[x])?;
    let lhs = w(&(&a.adjoint() * x * a));
    let rhs = a.spectral_norm().powi(2) * w(x);
    Ok(InequalityReport::bound("lemma21a", lhs, rhs, a.n()))
}

/// w(AX ± XA*) ≤ 2‖A‖ w(X).
pub fn check_lemma21_b(
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    sign: Sign,
) -> Result<InequalityReport> {
    Ok(check_lemma21_b_variants(a, x, &[sign])?.remove(0))
}

pub fn check_lemma21_b_variants(
    a: &ComplexMatrix,
    x: &ComplexMatrix,
    signs: &[Sign],
) -> Result<Vec<InequalityReport>> {
    same_dims(a, &[x])?;
    let rhs = 2.0 * a.spectral_norm() * w(x);
    let ax = a * x;
    let xa = x * &a.adjoint();
    Ok(signs
        .iter()
        .map(|s| {
            let lhs = w(&s.apply(&ax, &xa));
            InequalityReport::bound(format!("lemma21b.{}", s.label()), lhs, rhs, a.n())
        })
        .collect())
}

/// w(A*XB ± B*YA) ≤ 2‖A‖‖B‖ w([[0, X], [Y, 0]]).
pub fn check_lemma21_c(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    sign: Sign,
) -> Result<InequalityReport> {
    Ok(check_lemma21_c_variants(a, b, x, y, &[sign])?.remove(0))
}

pub fn check_lemma21_c_variants(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    signs: &[Sign],
) -> Result<Vec<InequalityReport>> {
    same_dims(a, &[b, x, y])?;
    let block = ComplexMatrix::off_diagonal_block(x, y)?;
    let rhs = 2.0 * a.spectral_norm() * b.spectral_norm() * w(&block);
    let axb = &a.adjoint() * x * b;
    let bya = &b.adjoint() * y * a;
    Ok(signs
        .iter()
        .map(|s| {
            let lhs = w(&s.apply(&axb, &bya));
            InequalityReport::bound(format!("lemma21c.{}", s.label()), lhs, rhs, a.n())
        })
        .collect())
}

/// w([[0, AXB*], [BYA*, 0]]) ≤ max{‖A‖², ‖B‖²} w([[0, X], [Y, 0]]).
pub fn check_lemma21_d(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<InequalityReport> {
    same_dims(a, &[b, x, y])?;
    let inner = ComplexMatrix::off_diagonal_block(&(a * x * b.adjoint()), &(b * y * a.adjoint()))?;
    let lhs = w(&inner);
    let scale = a.spectral_norm().powi(2).max(b.spectral_norm().powi(2));
    let rhs = scale * w(&ComplexMatrix::off_diagonal_block(x, y)?);
    Ok(InequalityReport::bound("lemma21d", lhs, rhs, a.n()))
}

/// w([[0, X], [Y, 0]]) ≤ (w(X + Y) + w(X − Y))/2.
pub fn check_lemma21_e(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<InequalityReport> {
    same_dims(x, &[y])?;
    let lhs = w(&ComplexMatrix::off_diagonal_block(x, y)?);
    let rhs = (w(&(x + y)) + w(&(x - y))) / 2.0;
    Ok(InequalityReport::bound("lemma21e", lhs, rhs, x.n()))
}

/// w([[0, X], [e^{iθ}X, 0]]) = w(X).
pub fn check_lemma21_f(x: &ComplexMatrix, theta: f64) -> InequalityReport {
    let rotated = x.scale(Complex64::from_polar(1.0, theta));
    let block = ComplexMatrix::off_diagonal_block(x, &rotated).expect("blocks share a dimension");
    InequalityReport::equality("lemma21f", w(&block), w(x), x.n())
}

/// w(f(A)X + Xf̄(A)) ≤ (2/d_A²) w(X − AXA*) and
/// w(f(A)X − Xf̄(A)) ≤ (4/d_A²)‖A‖ w(X).
pub fn check_thm22(
    f: &HerglotzFunction,
    op: &G1Operator,
    x: &ComplexMatrix,
    variant: Thm22Variant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_thm22_variants(f, op, x, &[variant], nodes)?.remove(0))
}

pub fn check_thm22_variants(
    f: &HerglotzFunction,
    op: &G1Operator,
    x: &ComplexMatrix,
    variants: &[Thm22Variant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    ops_match(x, &[op])?;
    let a = op.matrix();
    let fa = op.apply(f, nodes)?;
    let fa_bar = fbar_apply(f, &fa);
    let d2 = op.d() * op.d();
    let fx = &fa * x;
    let xf = x * &fa_bar;
    variants
        .iter()
        .map(|v| {
            let (lhs, rhs) = match v {
                Thm22Variant::Sum => (w(&(&fx + &xf)), 2.0 / d2 * w(&(x - &(a * x * a.adjoint())))),
                Thm22Variant::Diff => (w(&(&fx - &xf)), 4.0 / d2 * a.spectral_norm() * w(x)),
            };
            Ok(InequalityReport::bound(
                format!("thm22.{v}"),
                lhs,
                rhs,
                x.n(),
            ))
        })
        .collect()
}

/// ‖Re f(A)‖ ≤ (1/d_A²)‖I − AA*‖ and ‖Im f(A)‖ ≤ (2/d_A²)‖A‖.
pub fn check_cor23(
    f: &HerglotzFunction,
    op: &G1Operator,
    variant: Cor23Variant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_cor23_variants(f, op, &[variant], nodes)?.remove(0))
}

pub fn check_cor23_variants(
    f: &HerglotzFunction,
    op: &G1Operator,
    variants: &[Cor23Variant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    op.ensure_certified()?;
    let a = op.matrix();
    let n = a.n();
    let fa = op.apply(f, nodes)?;
    let d2 = op.d() * op.d();
    variants
        .iter()
        .map(|v| {
            let (lhs, rhs) = match v {
                Cor23Variant::Re => (
                    fa.herm_part().spectral_norm(),
                    (&ComplexMatrix::identity(n) - &(a * &a.adjoint())).spectral_norm() / d2,
                ),
                Cor23Variant::Im => (fa.skew_part().spectral_norm(), 2.0 / d2 * a.spectral_norm()),
            };
            Ok(InequalityReport::bound(format!("cor23.{v}"), lhs, rhs, n))
        })
        .collect()
}

/// f(A)X f̄(B) ∓ ... for the two-operator results.
fn pair_expression(
    fa: &ComplexMatrix,
    fb: &ComplexMatrix,
    x: &ComplexMatrix,
    variant: PairVariant,
) -> ComplexMatrix {
    let left = fa * x * fb.adjoint();
    let right = fb * x * fa.adjoint();
    match variant {
        PairVariant::Commutator => left - right,
        PairVariant::Anticommutator2X => left + x.scale_re(2.0) + right,
    }
}

struct PairInputs {
    fa: ComplexMatrix,
    fb: ComplexMatrix,
    dd: f64,
}

fn pair_inputs(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    nodes: usize,
) -> Result<PairInputs> {
    ops_match(x, &[op_a, op_b])?;
    Ok(PairInputs {
        fa: op_a.apply(f, nodes)?,
        fb: op_b.apply(f, nodes)?,
        dd: op_a.d() * op_b.d(),
    })
}

/// w(f(A)X f̄(B) ∓ ...) ≤ (2/(d_A d_B))[2w(X) + w(AXB* + BXA*) + w(AXB* − BXA*)].
pub fn check_thm24(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variant: PairVariant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_thm24_variants(f, op_a, op_b, x, &[variant], nodes)?.remove(0))
}

pub fn check_thm24_variants(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variants: &[PairVariant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    let p = pair_inputs(f, op_a, op_b, x, nodes)?;
    let (a, b) = (op_a.matrix(), op_b.matrix());
    let axb = a * x * b.adjoint();
    let bxa = b * x * a.adjoint();
    let rhs = 2.0 / p.dd * (2.0 * w(x) + w(&(&axb + &bxa)) + w(&(&axb - &bxa)));
    Ok(variants
        .iter()
        .map(|&v| {
            let lhs = w(&pair_expression(&p.fa, &p.fb, x, v));
            InequalityReport::bound(format!("thm24.{v}"), lhs, rhs, x.n())
        })
        .collect())
}

/// For self-adjoint X, operator norms:
/// ‖f(A)X f̄(B) ∓ ...‖ ≤ (4/(d_A d_B)) max{‖X‖ + ‖AXB*‖, ‖X‖ + ‖BXA*‖}.
pub fn check_rem25(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variant: PairVariant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_rem25_variants(f, op_a, op_b, x, &[variant], nodes)?.remove(0))
}

pub fn check_rem25_variants(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variants: &[PairVariant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    let residual = x.skew_residual();
    if residual > SELF_ADJOINT_TOL * (1.0 + x.frobenius_norm()) {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let p = pair_inputs(f, op_a, op_b, x, nodes)?;
    let (a, b) = (op_a.matrix(), op_b.matrix());
    // ‖|M|‖ = ‖M‖ in the operator norm
    let x_norm = x.spectral_norm();
    let axb = (a * x * b.adjoint()).spectral_norm();
    let bxa = (b * x * a.adjoint()).spectral_norm();
    let rhs = 4.0 / p.dd * (x_norm + axb).max(x_norm + bxa);
    Ok(variants
        .iter()
        .map(|&v| {
            let lhs = pair_expression(&p.fa, &p.fb, x, v).spectral_norm();
            InequalityReport::bound(format!("rem25.{v}"), lhs, rhs, x.n())
        })
        .collect())
}

/// ‖Im(f(A)f̄(B))‖ and ‖Re(f(A)f̄(B)) + I‖ ≤ (2/(d_A d_B))(1 + ‖AB*‖).
pub fn check_cor26(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    variant: Cor26Variant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_cor26_variants(f, op_a, op_b, &[variant], nodes)?.remove(0))
}

pub fn check_cor26_variants(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    variants: &[Cor26Variant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    let n = op_a.n();
    let p = pair_inputs(f, op_a, op_b, &ComplexMatrix::identity(n), nodes)?;
    let product = &p.fa * &p.fb.adjoint();
    let rhs = 2.0 / p.dd * (1.0 + (op_a.matrix() * &op_b.matrix().adjoint()).spectral_norm());
    Ok(variants
        .iter()
        .map(|v| {
            let lhs = match v {
                Cor26Variant::Im => product.skew_part().spectral_norm(),
                Cor26Variant::RePlusI => {
                    (product.herm_part() + ComplexMatrix::identity(n)).spectral_norm()
                }
            };
            InequalityReport::bound(format!("cor26.{v}"), lhs, rhs, n)
        })
        .collect())
}

/// w(f(A)X f̄(B) ∓ ...) ≤ (4/(d_A d_B))(1 + max{‖A‖², ‖B‖²}) w(X).
pub fn check_rem27(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variant: PairVariant,
    nodes: usize,
) -> Result<InequalityReport> {
    Ok(check_rem27_variants(f, op_a, op_b, x, &[variant], nodes)?.remove(0))
}

pub fn check_rem27_variants(
    f: &HerglotzFunction,
    op_a: &G1Operator,
    op_b: &G1Operator,
    x: &ComplexMatrix,
    variants: &[PairVariant],
    nodes: usize,
) -> Result<Vec<InequalityReport>> {
    let p = pair_inputs(f, op_a, op_b, x, nodes)?;
    let norm2 = op_a
        .matrix()
        .spectral_norm()
        .powi(2)
        .max(op_b.matrix().spectral_norm().powi(2));
    let rhs = 4.0 / p.dd * (1.0 + norm2) * w(x);
    Ok(variants
        .iter()
        .map(|&v| {
            let lhs = w(&pair_expression(&p.fa, &p.fb, x, v));
            InequalityReport::bound(format!("rem27.{v}"), lhs, rhs, x.n())
        })
        .collect())
}
