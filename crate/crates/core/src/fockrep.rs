//! Closed-form Fock-space layer.
//!
//! An ultracoherent vector `c·exp(Ω(Z) + f)` is stored as the triple
//! `(log c, Z, f)` with `Z` complex symmetric inside the Siegel disc. All
//! operations below act on that triple without ever expanding the state.

use serde::{Deserialize, Serialize};

use crate::cjson;
use crate::error::{Error, Result};
use crate::linops::{self, CMatrix, CVector, C64};
use crate::symplectic::{self, SqueezeGenerator, SymplecticPair};

/// `exp(log_amp) · exp(Ω(Z) + f)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorData", into = "VectorData")]
pub struct UltracoherentVector {
    log_amp: C64,
    z: CMatrix,
    f: CVector,
}

#[derive(Serialize, Deserialize)]
struct VectorData {
    #[serde(with = "cjson::scalar")]
    log_amp: C64,
    #[serde(rename = "Z", with = "cjson::matrix")]
    z: CMatrix,
    #[serde(with = "cjson::vector")]
    f: CVector,
}

impl TryFrom<VectorData> for UltracoherentVector {
    type Error = Error;
    fn try_from(d: VectorData) -> Result<Self> {
        UltracoherentVector::new(d.log_amp, d.z, d.f)
    }
}

impl From<UltracoherentVector> for VectorData {
    fn from(u: UltracoherentVector) -> Self {
        VectorData { log_amp: u.log_amp, z: u.z, f: u.f }
    }
}

/// Displacement `h` of the Weyl operator `W(h) = exp(b†(h) − b(h*))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylDisplacement {
    #[serde(with = "cjson::vector")]
    pub h: CVector,
}

impl WeylDisplacement {
    pub fn new(h: CVector) -> Result<Self> {
        linops::check_finite_vec(&h, "h")?;
        Ok(WeylDisplacement { h })
    }

    pub fn zero(n: usize) -> Self {
        WeylDisplacement { h: CVector::zeros(n) }
    }

    pub fn modes(&self) -> usize {
        self.h.len()
    }
}

/// Symmetric bilinear form `⟨x|y⟩ = Σ x_μ y_μ`.
fn bilinear(x: &CVector, y: &CVector) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

fn require_len(v: &CVector, n: usize) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(Error::shape(format!("vector of length {n}"), v.len()))
    }
}

impl UltracoherentVector {
    pub fn new(log_amp: C64, z: CMatrix, f: CVector) -> Result<Self> {
        let n = linops::require_square(&z)?;
        require_len(&f, n)?;
        linops::check_finite(&z, "Z")?;
        linops::check_finite_vec(&f, "f")?;
        if !(log_amp.re.is_finite() && log_amp.im.is_finite()) {
            return Err(Error::NonFinite("log_amp"));
        }
        symplectic::require_siegel(&z)?;
        let z = (&z + z.transpose()) * C64::new(0.5, 0.0);
        Ok(UltracoherentVector { log_amp, z, f })
    }

    pub fn vacuum(n: usize) -> Self {
        UltracoherentVector { log_amp: C64::new(0.0, 0.0), z: CMatrix::zeros(n, n), f: CVector::zeros(n) }
    }

    /// The exponential vector `exp f`.
    pub fn exponential(f: CVector) -> Result<Self> {
        let n = f.len();
        UltracoherentVector::new(C64::new(0.0, 0.0), CMatrix::zeros(n, n), f)
    }

    /// The normalized coherent state `exp(h − ½‖h‖²)`.
    pub fn coherent(h: CVector) -> Result<Self> {
        let half = -0.5 * h.norm_squared();
        UltracoherentVector::new(C64::new(half, 0.0), CMatrix::zeros(h.len(), h.len()), h)
    }

    pub fn modes(&self) -> usize {
        self.f.len()
    }

    pub fn log_amp(&self) -> C64 {
        self.log_amp
    }

    pub fn amplitude(&self) -> C64 {
        self.log_amp.exp()
    }

    pub fn z(&self) -> &CMatrix {
        &self.z
    }

    pub fn f(&self) -> &CVector {
        &self.f
    }

    pub fn with_log_amp(&self, log_amp: C64) -> Self {
        UltracoherentVector { log_amp, ..self.clone() }
    }

    /// Multiplies the vector by `exp(delta)`.
    pub fn scaled_log(&self, delta: C64) -> Self {
        self.with_log_amp(self.log_amp + delta)
    }

    fn require_modes(&self, n: usize) -> Result<()> {
        if self.modes() == n {
            Ok(())
        } else {
            Err(Error::shape(format!("{n} modes"), format!("{} modes", self.modes())))
        }
    }
}

/// Logarithm of the inner product `(u1 | u2)`, conjugate-linear in `u1`.
///
/// With `A = Z₁`, `B = Z₂`:
/// `det(I − AᴴB)^{−1/2} exp{½⟨f*|Cf*⟩ + ⟨f*|(I − BAᴴ)⁻¹g⟩ + ½⟨g|Dg⟩}`
/// where `C = B(I − AᴴB)⁻¹` and `D = Aᴴ(I − BAᴴ)⁻¹`.
pub fn log_inner(u1: &UltracoherentVector, u2: &UltracoherentVector) -> Result<C64> {
    let n = u1.modes();
    u2.require_modes(n)?;
    let id = CMatrix::identity(n, n);
    let a_h = u1.z.adjoint();
    let b = &u2.z;
    let ahb = &a_h * b;
    let bah = b * &a_h;
    let log_det = linops::log_det_identity_plus(&(-&ahb))?;

    let inv_bah = linops::inverse(&(&id - &bah))?;
    let c = &inv_bah * b;
    let d = &a_h * &inv_bah;
    let fs = linops::conj_vec(&u1.f);
    let g = &u2.f;
    let expo = 0.5 * bilinear(&fs, &(&c * &fs)) + bilinear(&fs, &(&inv_bah * g)) + 0.5 * bilinear(g, &(&d * g));
    Ok(u1.log_amp.conj() + u2.log_amp - 0.5 * log_det + expo)
}

pub fn inner(u1: &UltracoherentVector, u2: &UltracoherentVector) -> Result<C64> {
    log_inner(u1, u2).map(|l| l.exp())
}

/// `‖u‖`, for `f = 0` and unit amplitude equal to `det(I − ZᴴZ)^{−1/4}`.
pub fn norm(u: &UltracoherentVector) -> Result<f64> {
    log_inner(u, u).map(|l| (0.5 * l.re).exp())
}

/// Bargmann-Fock representative `(exp z | u) = c·exp(½⟨z*|Zz*⟩ + ⟨z*|f⟩)`.
pub fn bargmann(u: &UltracoherentVector, z: &CVector) -> Result<C64> {
    log_bargmann(u, z).map(|l| l.exp())
}

pub fn log_bargmann(u: &UltracoherentVector, z: &CVector) -> Result<C64> {
    require_len(z, u.modes())?;
    let zs = linops::conj_vec(z);
    Ok(u.log_amp + 0.5 * bilinear(&zs, &(&u.z * &zs)) + bilinear(&zs, &u.f))
}

/// Recovers `(log c, Z, f)` from log-Bargmann samples by linear least squares.
///
/// The exponent is a polynomial of degree two in `z̄`, so
/// `1 + n + n(n+1)/2` generic samples determine the vector.
pub fn from_log_bargmann_samples(n: usize, probes: &[CVector], log_values: &[C64]) -> Result<UltracoherentVector> {
    let unknowns = 1 + n + n * (n + 1) / 2;
    if probes.len() != log_values.len() || probes.len() < unknowns {
        return Err(Error::InvalidParameter(format!(
            "need at least {unknowns} probe points with values, got {} / {}",
            probes.len(),
            log_values.len()
        )));
    }
    let rows = probes.len();
    let mut design = CMatrix::zeros(rows, unknowns);
    for (r, z) in probes.iter().enumerate() {
        require_len(z, n)?;
        let zs = linops::conj_vec(z);
        design[(r, 0)] = C64::new(1.0, 0.0);
        for i in 0..n {
            design[(r, 1 + i)] = zs[i];
        }
        let mut col = 1 + n;
        for i in 0..n {
            for j in i..n {
                // ½ Σ Z_ij z̄_i z̄_j with Z_ij = Z_ji counted once
                design[(r, col)] = if i == j { 0.5 * zs[i] * zs[i] } else { zs[i] * zs[j] };
                col += 1;
            }
        }
    }
    let rhs = CMatrix::from_iterator(rows, 1, log_values.iter().cloned());
    let normal = design.adjoint() * &design;
    let sol = linops::solve(&normal, &(design.adjoint() * rhs))?;
    let f = CVector::from_iterator(n, (0..n).map(|i| sol[(1 + i, 0)]));
    let mut z = CMatrix::zeros(n, n);
    let mut col = 1 + n;
    for i in 0..n {
        for j in i..n {
            z[(i, j)] = sol[(col, 0)];
            z[(j, i)] = sol[(col, 0)];
            col += 1;
        }
    }
    UltracoherentVector::new(sol[(0, 0)], z, f)
}

/// `W(h) exp(Ω(Z) + f) = e^{−½‖h‖² + ½⟨h*|Zh* − 2f⟩} exp(Ω(Z) + f + h − Zh*)`.
pub fn weyl_apply(h: &WeylDisplacement, u: &UltracoherentVector) -> Result<UltracoherentVector> {
    require_len(&h.h, u.modes())?;
    let hs = linops::conj_vec(&h.h);
    let zh = &u.z * &hs;
    let shift = -0.5 * h.h.norm_squared() + 0.5 * bilinear(&hs, &(&zh - &u.f * C64::new(2.0, 0.0)));
    Ok(UltracoherentVector {
        log_amp: u.log_amp + shift,
        z: u.z.clone(),
        f: &u.f + &h.h - zh,
    })
}

/// `(exp f | W(h) exp g) = exp((f|g) + (f|h) − (h|g) − ½‖h‖²)`.
pub fn weyl_matrix_element(f: &CVector, h: &WeylDisplacement, g: &CVector) -> Result<C64> {
    require_len(g, f.len())?;
    require_len(&h.h, f.len())?;
    let hh = &h.h;
    Ok((f.dotc(g) + f.dotc(hh) - hh.dotc(g) - 0.5 * hh.norm_squared()).exp())
}

/// Action of the ray representation `T(G)` on an ultracoherent vector:
///
/// `Z ↦ ζ(G; Z)`, `f ↦ (Uᴴ + ZVᴴ)⁻¹ f`, and the amplitude picks up
/// `det|U|^{−1/2} det(I + VᴴU^{−ᴴ}Z)^{−1/2} exp(−½⟨f|Vᴴ(Uᴴ + ZVᴴ)⁻¹f⟩)`.
///
/// `det|U|` is evaluated as `det(I + VVᴴ)^{1/2}`. The second determinant
/// uses the continuous branch from `Z = 0`, which makes `T(G)` a single
/// linear operator for fixed `G`.
pub fn transform(g: &SymplecticPair, u: &UltracoherentVector) -> Result<UltracoherentVector> {
    let n = g.modes();
    u.require_modes(n)?;
    let (uu, vv) = (g.u(), g.v());
    let z = &u.z;

    let denom = uu.adjoint() + z * vv.adjoint();
    let denom_inv = linops::inverse(&denom)?;
    let z_new = &denom_inv * (vv.transpose() + z * uu.transpose());
    let z_new = (&z_new + z_new.transpose()) * C64::new(0.5, 0.0);
    symplectic::require_siegel(&z_new)?;
    let f_new = &denom_inv * &u.f;

    let log_det_abs_u = 0.5 * linops::log_det_identity_plus(&(vv * vv.adjoint()))?.re;
    let uh_inv = linops::inverse(&uu.adjoint())?;
    let log_det_mixed = linops::log_det_identity_plus(&(vv.adjoint() * uh_inv * z))?;
    let quad = bilinear(&u.f, &(vv.adjoint() * &denom_inv * &u.f));
    Ok(UltracoherentVector {
        log_amp: u.log_amp - 0.5 * log_det_abs_u - 0.5 * log_det_mixed - 0.5 * quad,
        z: z_new,
        f: f_new,
    })
}

/// `S(Ξ) 1_vac`.
pub fn squeeze_vacuum(xi: &SqueezeGenerator) -> Result<UltracoherentVector> {
    let g = SymplecticPair::from_squeeze(xi)?;
    transform(&g, &UltracoherentVector::vacuum(xi.modes()))
}

/// Multiplier `ω` in `T(G₂)T(G₁) = ω T(G₂G₁)`, read off at `probe`.
pub fn multiplier_at(g2: &SymplecticPair, g1: &SymplecticPair, probe: &UltracoherentVector) -> Result<C64> {
    let two_step = transform(g2, &transform(g1, probe)?)?;
    let direct = transform(&g2.compose(g1)?, probe)?;
    let scale = 1.0 + linops::max_abs(direct.z()) + linops::vec_max_abs(direct.f());
    let mismatch = linops::max_abs(&(two_step.z() - direct.z())).max(linops::vec_max_abs(&(two_step.f() - direct.f())));
    if mismatch > 1e-8 * scale {
        return Err(Error::InvalidParameter(format!(
            "transforms disagree beyond a scalar factor (mismatch {mismatch:.3e}); are the pairs canonical?"
        )));
    }
    Ok((two_step.log_amp - direct.log_amp).exp())
}

/// Multiplier `ω(G₂, G₁)` evaluated on the vacuum.
pub fn multiplier(g2: &SymplecticPair, g1: &SymplecticPair) -> Result<C64> {
    multiplier_at(g2, g1, &UltracoherentVector::vacuum(g1.modes()))
}
