//! Linear canonical (Bogoliubov) transformations at the one-particle level.
//!
//! A transformation is the pair `(U, V)` acting on `f ∈ ℂⁿ` as the
//! ℝ-linear map `f ↦ U f + V f̄`. The pair is canonical when
//! `UUᴴ − VVᴴ = I` and `UVᵀ = VUᵀ` (equivalently `UᴴU − VᵀV̄ = I`,
//! `UᵀV̄ = VᴴU`).

use serde::{Deserialize, Serialize};

use crate::cjson;
use crate::error::{Error, Result};
use crate::linops::{self, CMatrix, CVector, C64};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairData", into = "PairData")]
pub struct SymplecticPair {
    u: CMatrix,
    v: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct PairData {
    #[serde(rename = "U", with = "cjson::matrix")]
    u: CMatrix,
    #[serde(rename = "V", with = "cjson::matrix")]
    v: CMatrix,
}

impl TryFrom<PairData> for SymplecticPair {
    type Error = Error;
    fn try_from(d: PairData) -> Result<Self> {
        SymplecticPair::new(d.u, d.v)
    }
}

impl From<SymplecticPair> for PairData {
    fn from(p: SymplecticPair) -> Self {
        PairData { u: p.u, v: p.v }
    }
}

/// Residuals of the two equivalent sets of canonicity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalResiduals {
    /// `max |UUᴴ − VVᴴ − I|`
    pub uu_minus_vv: f64,
    /// `max |UVᵀ − VUᵀ|`
    pub uvt_symmetry: f64,
    /// `max |UᴴU − VᵀV̄ − I|`
    pub uhu_minus_vtv: f64,
    /// `max |UᵀV̄ − VᴴU|`
    pub utv_symmetry: f64,
}

impl CanonicalResiduals {
    pub fn max(&self) -> f64 {
        self.uu_minus_vv
            .max(self.uvt_symmetry)
            .max(self.uhu_minus_vtv)
            .max(self.utv_symmetry)
    }
}

impl SymplecticPair {
    /// Wraps `(U, V)` after shape and finiteness checks. Canonicity is a
    /// precondition of the group operations and is checked separately by
    /// [`SymplecticPair::is_canonical`].
    pub fn new(u: CMatrix, v: CMatrix) -> Result<Self> {
        let n = linops::require_square(&u)?;
        if v.shape() != (n, n) {
            return Err(Error::shape(format!("{n}x{n}"), format!("{}x{}", v.nrows(), v.ncols())));
        }
        linops::check_finite(&u, "U")?;
        linops::check_finite(&v, "V")?;
        Ok(SymplecticPair { u, v })
    }

    pub fn identity(n: usize) -> Self {
        SymplecticPair { u: CMatrix::identity(n, n), v: CMatrix::zeros(n, n) }
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn residuals(&self) -> CanonicalResiduals {
        let n = self.modes();
        let id = CMatrix::identity(n, n);
        let (u, v) = (&self.u, &self.v);
        let vbar = linops::conj(v);
        CanonicalResiduals {
            uu_minus_vv: linops::max_abs(&(u * u.adjoint() - v * v.adjoint() - &id)),
            uvt_symmetry: linops::max_abs(&(u * v.transpose() - v * u.transpose())),
            uhu_minus_vtv: linops::max_abs(&(u.adjoint() * u - v.transpose() * &vbar - &id)),
            utv_symmetry: linops::max_abs(&(u.transpose() * &vbar - v.adjoint() * u)),
        }
    }

    /// Both condition sets hold entrywise within `tol`.
    pub fn is_canonical(&self, tol: f64) -> bool {
        self.residuals().max() <= tol
    }

    fn require_same_modes(&self, other: &SymplecticPair) -> Result<()> {
        if self.modes() == other.modes() {
            Ok(())
        } else {
            Err(Error::shape(format!("{} modes", self.modes()), format!("{} modes", other.modes())))
        }
    }

    /// `self ∘ first`: `(U₂U₁ + V₂V̄₁, U₂V₁ + V₂Ū₁)`.
    pub fn compose(&self, first: &SymplecticPair) -> Result<SymplecticPair> {
        self.require_same_modes(first)?;
        let (u2, v2) = (&self.u, &self.v);
        let (u1, v1) = (&first.u, &first.v);
        Ok(SymplecticPair {
            u: u2 * u1 + v2 * linops::conj(v1),
            v: u2 * v1 + v2 * linops::conj(u1),
        })
    }

    /// `(Uᴴ, −Vᵀ)`.
    pub fn inverse(&self) -> SymplecticPair {
        SymplecticPair { u: self.u.adjoint(), v: -self.v.transpose() }
    }

    /// `U f + V f̄`.
    pub fn apply(&self, f: &CVector) -> Result<CVector> {
        if f.len() != self.modes() {
            return Err(Error::shape(format!("vector of length {}", self.modes()), f.len()));
        }
        Ok(&self.u * f + &self.v * linops::conj_vec(f))
    }

    /// `U = exp(iΨ)`, `V = 0`.
    pub fn from_rotation(gen: &RotationGenerator) -> SymplecticPair {
        let u = linops::expi_hermitian(&gen.psi).expect("Hermitian eigendecomposition of a validated generator");
        let n = u.nrows();
        SymplecticPair { u, v: CMatrix::zeros(n, n) }
    }

    pub fn from_squeeze(gen: &SqueezeGenerator) -> Result<SymplecticPair> {
        let (u, v) = linops::squeeze_blocks(&gen.xi)?;
        Ok(SymplecticPair { u, v })
    }

    /// Möbius action on the Siegel disc,
    /// `ζ(G; A) = (Uᴴ + A Vᴴ)⁻¹ (Vᵀ + A Uᵀ)`.
    pub fn siegel_action(&self, a: &CMatrix) -> Result<CMatrix> {
        let n = self.modes();
        if a.shape() != (n, n) {
            return Err(Error::shape(format!("{n}x{n}"), format!("{}x{}", a.nrows(), a.ncols())));
        }
        require_siegel(a)?;
        let denom = self.u.adjoint() + a * self.v.adjoint();
        let numer = self.v.transpose() + a * self.u.transpose();
        let z = linops::solve(&denom, &numer)?;
        Ok((&z + z.transpose()) * C64::new(0.5, 0.0))
    }
}

/// Checks symmetry and `‖A‖ < 1 − ε`.
pub fn require_siegel(a: &CMatrix) -> Result<()> {
    let scale = linops::max_abs(a).max(1.0);
    let residual = linops::symmetry_residual(a);
    if residual > tol::DEFAULT * scale {
        return Err(Error::NotSymmetric { residual });
    }
    let norm = linops::spectral_norm(a);
    if norm < 1.0 - tol::SIEGEL_MARGIN {
        Ok(())
    } else {
        Err(Error::OutsideSiegelDisc { norm })
    }
}

pub fn in_siegel_disc(a: &CMatrix) -> bool {
    require_siegel(a).is_ok()
}

/// Hermitian generator `Ψ` of a passive rotation `exp(iΨ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RotationData", into = "RotationData")]
pub struct RotationGenerator {
    psi: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct RotationData {
    #[serde(rename = "Psi", with = "cjson::matrix")]
    psi: CMatrix,
}

impl TryFrom<RotationData> for RotationGenerator {
    type Error = Error;
    fn try_from(d: RotationData) -> Result<Self> {
        RotationGenerator::new(d.psi)
    }
}

impl From<RotationGenerator> for RotationData {
    fn from(g: RotationGenerator) -> Self {
        RotationData { psi: g.psi }
    }
}

impl RotationGenerator {
    pub fn new(psi: CMatrix) -> Result<Self> {
        linops::require_square(&psi)?;
        linops::check_finite(&psi, "Psi")?;
        let residual = linops::hermiticity_residual(&psi);
        if residual > tol::DEFAULT * linops::max_abs(&psi).max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Ok(RotationGenerator { psi: (&psi + psi.adjoint()) * C64::new(0.5, 0.0) })
    }

    pub fn zero(n: usize) -> Self {
        RotationGenerator { psi: CMatrix::zeros(n, n) }
    }

    /// Single-mode phase rotation by `phi`.
    pub fn phase(phi: f64) -> Self {
        RotationGenerator { psi: CMatrix::from_element(1, 1, C64::new(phi, 0.0)) }
    }

    pub fn psi(&self) -> &CMatrix {
        &self.psi
    }

    pub fn modes(&self) -> usize {
        self.psi.nrows()
    }
}

/// Complex symmetric generator `Ξ` of the squeeze transformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SqueezeData", into = "SqueezeData")]
pub struct SqueezeGenerator {
    xi: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct SqueezeData {
    #[serde(rename = "Xi", with = "cjson::matrix")]
    xi: CMatrix,
}

impl TryFrom<SqueezeData> for SqueezeGenerator {
    type Error = Error;
    fn try_from(d: SqueezeData) -> Result<Self> {
        SqueezeGenerator::new(d.xi)
    }
}

impl From<SqueezeGenerator> for SqueezeData {
    fn from(g: SqueezeGenerator) -> Self {
        SqueezeData { xi: g.xi }
    }
}

impl SqueezeGenerator {
    pub fn new(xi: CMatrix) -> Result<Self> {
        linops::require_square(&xi)?;
        linops::check_finite(&xi, "Xi")?;
        let residual = linops::symmetry_residual(&xi);
        if residual > tol::DEFAULT * linops::max_abs(&xi).max(1.0) {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(SqueezeGenerator { xi: (&xi + xi.transpose()) * C64::new(0.5, 0.0) })
    }

    pub fn zero(n: usize) -> Self {
        SqueezeGenerator { xi: CMatrix::zeros(n, n) }
    }

    /// Single mode `ξ = r e^{iθ}`.
    pub fn single_mode(r: f64, theta: f64) -> Self {
        SqueezeGenerator { xi: CMatrix::from_element(1, 1, C64::from_polar(r, theta)) }
    }

    /// Mode-local squeezing `Ξ = diag(r)`.
    pub fn diagonal(r: &[f64]) -> Self {
        let d = CVector::from_iterator(r.len(), r.iter().map(|&x| C64::new(x, 0.0)));
        SqueezeGenerator { xi: CMatrix::from_diagonal(&d) }
    }

    pub fn xi(&self) -> &CMatrix {
        &self.xi
    }

    pub fn modes(&self) -> usize {
        self.xi.nrows()
    }

    pub fn scaled(&self, s: f64) -> Self {
        SqueezeGenerator { xi: &self.xi * C64::new(s, 0.0) }
    }
}

/// `e^{−iΦ} Ξ e^{−iΦᵀ}`: the generator of `R(Φ)⁻¹ S(Ξ) R(Φ)`.
pub fn conjugate_squeeze(phi: &RotationGenerator, xi: &SqueezeGenerator) -> Result<SqueezeGenerator> {
    if phi.modes() != xi.modes() {
        return Err(Error::shape(format!("{} modes", xi.modes()), format!("{} modes", phi.modes())));
    }
    let e = linops::expi_hermitian(&(-phi.psi()))?;
    SqueezeGenerator::new(&e * xi.xi() * e.transpose())
}

/// Rotation `Φ` and Takagi values `d` with `conjugate_squeeze(Φ, Ξ) = diag(d)`.
pub fn reduce_to_single_modes(xi: &SqueezeGenerator) -> Result<(RotationGenerator, Vec<f64>)> {
    let tk = linops::takagi(xi.xi())?;
    // e^{iΦ} = W  ⇒  e^{−iΦ} Ξ e^{−iΦᵀ} = Wᴴ W D Wᵀ W̄ = D
    let phi = linops::hermitian_log_unitary(&tk.w)?;
    Ok((RotationGenerator::new(phi)?, tk.d))
}
