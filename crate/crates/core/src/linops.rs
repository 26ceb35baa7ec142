//! Dense complex matrix utilities: Takagi factorization, squeeze blocks,
//! determinants, norms and a few analytic matrix functions.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn check_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn check_finite_vec(v: &CVector, what: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub(crate) fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(Error::shape("square matrix", format!("{}x{}", m.nrows(), m.ncols())))
    }
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

/// Max-abs entry of `A - Aᵀ`.
pub fn symmetry_residual(a: &CMatrix) -> f64 {
    max_abs(&(a - a.transpose()))
}

/// Max-abs entry of `A - Aᴴ`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    max_abs(&(a - a.adjoint()))
}

pub fn vec_max_abs(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Frobenius (Hilbert-Schmidt) norm.
pub fn hs_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Ratio of extreme singular values; infinite for exactly singular input.
pub fn condition_number(a: &CMatrix) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

fn require_conditioned(a: &CMatrix, what: &'static str) -> Result<()> {
    if condition_number(a) > tol::MAX_CONDITION {
        Err(Error::Singular(what))
    } else {
        Ok(())
    }
}

pub fn det(a: &CMatrix) -> Result<C64> {
    require_square(a)?;
    require_conditioned(a, "det")?;
    Ok(a.clone().lu().determinant())
}

pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    require_square(a)?;
    require_conditioned(a, "inverse")?;
    a.clone().lu().try_inverse().ok_or(Error::Singular("inverse"))
}

/// Solves `A X = B`.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    require_square(a)?;
    require_conditioned(a, "solve")?;
    a.clone().lu().solve(b).ok_or(Error::Singular("solve"))
}

/// Eigenvalues of a general complex square matrix (complex Schur form).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    require_square(a)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(a.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("complex Schur"))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().cloned().collect())
}

/// `log det(I + X)` as `Σ ln(1 + λ_i)` over the eigenvalues of `X`.
///
/// Each factor uses the principal logarithm, so for spectral radius below
/// one the result is the analytic continuation from `X = 0` and varies
/// continuously with `X`.
pub fn log_det_identity_plus(x: &CMatrix) -> Result<C64> {
    let lambdas = eigenvalues(x)?;
    let mut acc = C64::new(0.0, 0.0);
    for l in lambdas {
        let w = C64::new(1.0, 0.0) + l;
        if w.norm() < 1.0 / tol::MAX_CONDITION {
            return Err(Error::Singular("log det"));
        }
        acc += w.ln();
    }
    Ok(acc)
}

fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = require_square(h)?;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("Hermitian eigendecomposition"))?;
    Ok((eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors))
}

/// Applies a real scalar function to a Hermitian matrix through its eigenbasis.
pub fn hermitian_fn(h: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let (vals, q) = hermitian_eigen(h)?;
    let d = CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&v| f(v))));
    Ok(&q * d * q.adjoint())
}

/// `exp(iΨ)` for Hermitian `Ψ`.
pub fn expi_hermitian(psi: &CMatrix) -> Result<CMatrix> {
    hermitian_fn(psi, |x| C64::new(0.0, x).exp())
}

/// Hermitian `Φ` with `exp(iΦ) = W` for unitary `W`, eigenphases in `(-π, π]`.
pub fn hermitian_log_unitary(w: &CMatrix) -> Result<CMatrix> {
    let n = require_square(w)?;
    if n == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let schur = nalgebra::Schur::try_new(w.clone(), f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("complex Schur"))?;
    let (q, t) = schur.unpack();
    // unitary ⇒ normal ⇒ the Schur form is diagonal up to rounding
    let phases = CVector::from_iterator(n, t.diagonal().iter().map(|z| C64::new(z.arg(), 0.0)));
    let phi = &q * CMatrix::from_diagonal(&phases) * q.adjoint();
    Ok((&phi + phi.adjoint()) * C64::new(0.5, 0.0))
}

/// Takagi factorization `A = W diag(d) Wᵀ` of a complex symmetric matrix.
#[derive(Debug, Clone)]
pub struct TakagiFactorization {
    pub w: CMatrix,
    /// Non-negative, sorted descending.
    pub d: Vec<f64>,
}

impl TakagiFactorization {
    pub fn reconstruct(&self) -> CMatrix {
        let d = CVector::from_iterator(self.d.len(), self.d.iter().map(|&x| C64::new(x, 0.0)));
        &self.w * CMatrix::from_diagonal(&d) * self.w.transpose()
    }
}

pub fn takagi(a: &CMatrix) -> Result<TakagiFactorization> {
    takagi_with_tol(a, tol::SYMMETRY)
}

/// Takagi factorization through the real symmetric embedding
/// `[[Re A, Im A], [Im A, -Re A]]`, whose eigenpairs `(d, [x; y])` with
/// `d ≥ 0` give Takagi vectors `w = x + i y` satisfying `A w̄ = d w`.
pub fn takagi_with_tol(a: &CMatrix, sym_tol: f64) -> Result<TakagiFactorization> {
    let n = require_square(a)?;
    check_finite(a, "takagi input")?;
    let scale = max_abs(a).max(1.0);
    let residual = symmetry_residual(a);
    if residual > sym_tol * scale {
        return Err(Error::NotSymmetric { residual });
    }
    if n == 0 {
        return Ok(TakagiFactorization { w: CMatrix::zeros(0, 0), d: Vec::new() });
    }
    let a = (a + a.transpose()) * C64::new(0.5, 0.0);

    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = a[(i, j)];
            m[(i, j)] = z.re;
            m[(i, n + j)] = z.im;
            m[(n + i, j)] = z.im;
            m[(n + i, n + j)] = -z.re;
        }
    }
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000)
        .ok_or(Error::ConvergenceFailure("Takagi embedding eigendecomposition"))?;

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    // Vectors with negligible d may mix with their -d partners; they are
    // re-orthonormalized below and completed from the standard basis.
    let negligible = 64.0 * f64::EPSILON * spectral_norm(&a).max(f64::MIN_POSITIVE);
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    let mut d: Vec<f64> = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let val = eig.eigenvalues[k].max(0.0);
        if val <= negligible {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        let w = CVector::from_iterator(n, (0..n).map(|i| C64::new(v[i], v[n + i])));
        if let Some(w) = orthonormalize_against(&w, &cols) {
            cols.push(w);
            d.push(val);
        }
    }
    // Kernel directions: any orthonormal completion works since d = 0 there.
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut basis = CVector::zeros(n);
        basis[e] = C64::new(1.0, 0.0);
        if let Some(w) = orthonormalize_against(&basis, &cols) {
            cols.push(w);
            d.push(0.0);
        }
        e += 1;
    }
    if cols.len() < n {
        return Err(Error::ConvergenceFailure("Takagi basis completion"));
    }

    for (w, &dk) in cols.iter_mut().zip(d.iter()) {
        fix_phase(w, dk > 0.0);
    }
    let w = CMatrix::from_columns(&cols);
    Ok(TakagiFactorization { w, d })
}

fn orthonormalize_against(v: &CVector, basis: &[CVector]) -> Option<CVector> {
    let mut w = v.clone();
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
    }
    let norm = w.norm();
    if norm < 1e-6 {
        None
    } else {
        Some(w / C64::new(norm, 0.0))
    }
}

/// Deterministic column convention. Only a sign is free for `d > 0`
/// (the column enters `A` quadratically); for `d = 0` the whole phase is free.
fn fix_phase(w: &mut CVector, sign_only: bool) {
    let pivot = w.iter().find(|z| z.norm() > 1e-8).cloned();
    if let Some(p) = pivot {
        let factor = if sign_only {
            let key = if p.re.abs() > 1e-12 { p.re } else { p.im };
            if key < 0.0 {
                C64::new(-1.0, 0.0)
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            p.conj() / p.norm()
        };
        *w *= factor;
    }
}

/// One-particle blocks of the squeeze transformation generated by `Ξ`:
/// `U = cosh√(ΞΞ̄)`, `V = sinh√(ΞΞ̄)/√(ΞΞ̄)·Ξ`, evaluated as
/// `U = W cosh(D) Wᴴ`, `V = W sinh(D) Wᵀ` from `Ξ = W D Wᵀ`.
pub fn squeeze_blocks(xi: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let tk = takagi(xi)?;
    let n = tk.d.len();
    let ch = CVector::from_iterator(n, tk.d.iter().map(|&x| C64::new(x.cosh(), 0.0)));
    let sh = CVector::from_iterator(n, tk.d.iter().map(|&x| C64::new(x.sinh(), 0.0)));
    let u = &tk.w * CMatrix::from_diagonal(&ch) * tk.w.adjoint();
    let v = &tk.w * CMatrix::from_diagonal(&sh) * tk.w.transpose();
    let u = (&u + u.adjoint()) * C64::new(0.5, 0.0);
    let v = (&v + v.transpose()) * C64::new(0.5, 0.0);
    Ok((u, v))
}
