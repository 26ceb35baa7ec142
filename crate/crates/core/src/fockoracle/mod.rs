//! Brute-force truncated Fock space used as an independent oracle for the
//! closed-form layer.
//!
//! Basis states are occupation tuples `(n₀, …, n_{m−1})` with `0 ≤ nᵢ ≤ cutoff`,
//! indexed row-major with mode 0 varying slowest.

mod compare;
mod embed;
mod expm;
mod operator;

pub use compare::{oracle_compare, oracle_compare_with_cap, OracleCase, OracleReport};
pub use embed::{embed, embed_unchecked, Embedding};
pub use expm::{expm_apply, mat_exp, MAT_EXP_MAX_NORM};
pub use operator::{
    ladder, number_operator, quad_rotation_gen, quad_squeeze_gen, weyl_gen, FockOperator,
};

use crate::error::{Error, Result};
use crate::linops::{CVector, C64};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    n_modes: usize,
    cutoff: usize,
}

impl FockBasis {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        Self::with_cap(n_modes, cutoff, tol::MAX_FOCK_DIM)
    }

    pub fn with_cap(n_modes: usize, cutoff: usize, cap: usize) -> Result<Self> {
        if n_modes == 0 || cutoff == 0 {
            return Err(Error::InvalidParameter("Fock basis needs at least one mode and cutoff ≥ 1".into()));
        }
        let dim = (cutoff + 1)
            .checked_pow(n_modes as u32)
            .ok_or(Error::DimensionTooLarge { dim: usize::MAX, cap })?;
        if dim > cap {
            return Err(Error::DimensionTooLarge { dim, cap });
        }
        Ok(FockBasis { n_modes, cutoff })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.n_modes as u32)
    }

    pub fn index(&self, occupation: &[usize]) -> Result<usize> {
        if occupation.len() != self.n_modes {
            return Err(Error::shape(format!("{} occupations", self.n_modes), occupation.len()));
        }
        let mut idx = 0;
        for &n in occupation {
            if n > self.cutoff {
                return Err(Error::IndexOutOfRange { index: n, limit: self.cutoff });
            }
            idx = idx * (self.cutoff + 1) + n;
        }
        Ok(idx)
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.n_modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % (self.cutoff + 1);
            index /= self.cutoff + 1;
        }
        occ
    }

    /// Stride of `mode` in the flat index.
    pub(crate) fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.n_modes - 1 - mode) as u32)
    }

    /// Basis indices whose occupations are all `≤ cutoff − margin`.
    pub fn safe_indices(&self, margin: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.occupation(i).iter().all(|&n| n + margin <= self.cutoff))
            .collect()
    }
}

/// Dense coefficient vector over a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub basis: FockBasis,
    pub coeffs: CVector,
}

impl FockVector {
    pub fn zeros(basis: FockBasis) -> Self {
        FockVector { basis, coeffs: CVector::zeros(basis.dim()) }
    }

    pub fn vacuum(basis: FockBasis) -> Self {
        let mut v = Self::zeros(basis);
        v.coeffs[0] = C64::new(1.0, 0.0);
        v
    }

    pub fn basis_state(basis: FockBasis, occupation: &[usize]) -> Result<Self> {
        let mut v = Self::zeros(basis);
        v.coeffs[basis.index(occupation)?] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn coeff(&self, occupation: &[usize]) -> Result<C64> {
        Ok(self.coeffs[self.basis.index(occupation)?])
    }

    /// `(self | other)`, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::shape(format!("{:?}", self.basis), format!("{:?}", other.basis)));
        }
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// `1 − |(a|b)| / (‖a‖‖b‖)`.
    pub fn overlap_error(&self, other: &FockVector) -> Result<f64> {
        let ip = self.inner(other)?;
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return Ok(if self.norm() == other.norm() { 0.0 } else { 1.0 });
        }
        Ok((1.0 - ip.norm() / denom).max(0.0))
    }
}
