use std::collections::BTreeMap;

use super::FockBasis;
use crate::error::{Error, Result};
use crate::linops::{CMatrix, CVector, C64};

/// Operator on a truncated Fock space, stored as compressed rows.
///
/// Ladder operators and quadratic generators are banded, so the oracle keeps
/// them sparse; [`FockOperator::to_dense`] gives the full matrix when needed.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    basis: FockBasis,
    rows: Vec<Vec<(usize, C64)>>,
}

impl FockOperator {
    pub fn zeros(basis: FockBasis) -> Self {
        FockOperator { basis, rows: vec![Vec::new(); basis.dim()] }
    }

    pub fn identity(basis: FockBasis) -> Self {
        Self::diagonal(basis, |_| C64::new(1.0, 0.0))
    }

    pub fn diagonal(basis: FockBasis, f: impl Fn(usize) -> C64) -> Self {
        let rows = (0..basis.dim()).map(|i| vec![(i, f(i))]).collect();
        FockOperator { basis, rows }.pruned()
    }

    /// Builds from `(row, col, value)` entries; duplicates are summed.
    pub fn from_triplets(basis: FockBasis, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, C64>> = vec![BTreeMap::new(); basis.dim()];
        for (r, c, v) in entries {
            *acc[r].entry(c).or_insert(C64::new(0.0, 0.0)) += v;
        }
        let rows = acc.into_iter().map(|m| m.into_iter().collect()).collect();
        FockOperator { basis, rows }.pruned()
    }

    pub fn from_dense(basis: FockBasis, m: &CMatrix) -> Result<Self> {
        let d = basis.dim();
        if m.shape() != (d, d) {
            return Err(Error::shape(format!("{d}x{d}"), format!("{}x{}", m.nrows(), m.ncols())));
        }
        let rows = (0..d)
            .map(|i| (0..d).filter(|&j| m[(i, j)] != C64::new(0.0, 0.0)).map(|j| (j, m[(i, j)])).collect())
            .collect();
        Ok(FockOperator { basis, rows })
    }

    pub fn to_dense(&self) -> CMatrix {
        let d = self.basis.dim();
        let mut m = CMatrix::zeros(d, d);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    fn pruned(mut self) -> Self {
        for row in &mut self.rows {
            row.retain(|&(_, v)| v != C64::new(0.0, 0.0));
        }
        self
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rows[row]
            .iter()
            .find(|&&(c, _)| c == col)
            .map_or(C64::new(0.0, 0.0), |&(_, v)| v)
    }

    fn require_same_basis(&self, other: &FockOperator) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::shape(format!("{:?}", self.basis), format!("{:?}", other.basis)))
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let rows = self.rows.iter().map(|r| r.iter().map(|&(c, v)| (c, v * s)).collect()).collect();
        FockOperator { basis: self.basis, rows }.pruned()
    }

    pub fn add(&self, other: &FockOperator) -> Result<Self> {
        self.require_same_basis(other)?;
        let entries = self.triplets().chain(other.triplets());
        Ok(FockOperator::from_triplets(self.basis, entries))
    }

    pub fn sub(&self, other: &FockOperator) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &FockOperator) -> Result<Self> {
        self.require_same_basis(other)?;
        let mut entries = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    entries.push((i, j, a * b));
                }
            }
        }
        Ok(FockOperator::from_triplets(self.basis, entries))
    }

    pub fn commutator(&self, other: &FockOperator) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn adjoint(&self) -> Self {
        let entries = self.triplets().map(|(i, j, v)| (j, i, v.conj())).collect::<Vec<_>>();
        FockOperator::from_triplets(self.basis, entries)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.basis.dim() {
            return Err(Error::shape(format!("vector of length {}", self.basis.dim()), v.len()));
        }
        Ok(CVector::from_iterator(
            v.len(),
            self.rows.iter().map(|row| row.iter().map(|&(j, a)| a * v[j]).sum::<C64>()),
        ))
    }

    /// Maximum absolute row sum (induced ∞-norm).
    pub fn norm_inf(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum (induced 1-norm).
    pub fn norm_one(&self) -> f64 {
        let mut cols = vec![0.0; self.basis.dim()];
        for (_, j, v) in self.triplets() {
            cols[j] += v.norm();
        }
        cols.into_iter().fold(0.0, f64::max)
    }

    /// Largest entry of `(self − other)` restricted to the given columns.
    pub fn max_abs_diff_on(&self, other: &FockOperator, columns: &[usize]) -> Result<f64> {
        self.require_same_basis(other)?;
        let diff = self.sub(other)?;
        let keep: std::collections::HashSet<usize> = columns.iter().cloned().collect();
        Ok(diff
            .triplets()
            .filter(|(_, j, _)| keep.contains(j))
            .fold(0.0, |acc, (_, _, v)| acc.max(v.norm())))
    }

    pub fn max_abs_diff(&self, other: &FockOperator) -> Result<f64> {
        self.require_same_basis(other)?;
        Ok(self.sub(other)?.triplets().fold(0.0, |acc, (_, _, v)| acc.max(v.norm())))
    }
}

/// Annihilation and creation operators of `mode`, with `⟨n−1|a|n⟩ = √n`.
/// Creation from `|cutoff⟩` is truncated to zero.
pub fn ladder(basis: FockBasis, mode: usize) -> Result<(FockOperator, FockOperator)> {
    if mode >= basis.n_modes() {
        return Err(Error::IndexOutOfRange { index: mode, limit: basis.n_modes() });
    }
    let stride = basis.stride(mode);
    let mut entries = Vec::new();
    for i in 0..basis.dim() {
        let n = (i / stride) % (basis.cutoff() + 1);
        if n > 0 {
            entries.push((i - stride, i, C64::new((n as f64).sqrt(), 0.0)));
        }
    }
    let a = FockOperator::from_triplets(basis, entries);
    let adag = a.adjoint();
    Ok((a, adag))
}

pub fn number_operator(basis: FockBasis, mode: usize) -> Result<FockOperator> {
    if mode >= basis.n_modes() {
        return Err(Error::IndexOutOfRange { index: mode, limit: basis.n_modes() });
    }
    let stride = basis.stride(mode);
    Ok(FockOperator::diagonal(basis, |i| C64::new(((i / stride) % (basis.cutoff() + 1)) as f64, 0.0)))
}

fn require_modes(basis: FockBasis, m: &CMatrix) -> Result<()> {
    let n = basis.n_modes();
    if m.shape() == (n, n) {
        Ok(())
    } else {
        Err(Error::shape(format!("{n}x{n}"), format!("{}x{}", m.nrows(), m.ncols())))
    }
}

/// One factor of a normal-ordered monomial: `(mode, true)` is `b†`, `(mode, false)` is `b`.
pub(crate) type Ladder = (usize, bool);

/// Applies `factors` (operator order, right-most acting first) to basis
/// state `index`. Returns the target index and matrix element, or `None`
/// when the chain leaves the truncated space.
fn ladder_chain(basis: FockBasis, index: usize, factors: &[Ladder]) -> Option<(usize, f64)> {
    let mut idx = index;
    let mut coef = 1.0;
    for &(mode, raise) in factors.iter().rev() {
        let stride = basis.stride(mode);
        let n = (idx / stride) % (basis.cutoff() + 1);
        if raise {
            if n == basis.cutoff() {
                return None;
            }
            coef *= ((n + 1) as f64).sqrt();
            idx += stride;
        } else {
            if n == 0 {
                return None;
            }
            coef *= (n as f64).sqrt();
            idx -= stride;
        }
    }
    Some((idx, coef))
}

/// `Σ c_k · (product of ladders)_k` built entry by entry.
pub(crate) fn polynomial(basis: FockBasis, terms: &[(C64, Vec<Ladder>)]) -> FockOperator {
    let mut entries = Vec::new();
    for j in 0..basis.dim() {
        for (c, factors) in terms {
            if *c == C64::new(0.0, 0.0) {
                continue;
            }
            if let Some((i, v)) = ladder_chain(basis, j, factors) {
                entries.push((i, j, c * v));
            }
        }
    }
    FockOperator::from_triplets(basis, entries)
}

/// `K_Ψ = b†Ψb = Σ Ψ_μν b†_μ b_ν`.
pub fn quad_rotation_gen(basis: FockBasis, psi: &CMatrix) -> Result<FockOperator> {
    require_modes(basis, psi)?;
    let n = basis.n_modes();
    let terms: Vec<_> = (0..n)
        .flat_map(|mu| (0..n).map(move |nu| (mu, nu)))
        .map(|(mu, nu)| (psi[(mu, nu)], vec![(mu, true), (nu, false)]))
        .collect();
    Ok(polynomial(basis, &terms))
}

/// `K_Ξ = ½(b†Ξb† − bΞ̄b)`.
pub fn quad_squeeze_gen(basis: FockBasis, xi: &CMatrix) -> Result<FockOperator> {
    require_modes(basis, xi)?;
    let n = basis.n_modes();
    let mut terms = Vec::new();
    for mu in 0..n {
        for nu in 0..n {
            let x = xi[(mu, nu)];
            terms.push((0.5 * x, vec![(mu, true), (nu, true)]));
            terms.push((-0.5 * x.conj(), vec![(mu, false), (nu, false)]));
        }
    }
    Ok(polynomial(basis, &terms))
}

/// `b†(h) − b(h*) = Σ (h_μ b†_μ − h̄_μ b_μ)`.
pub fn weyl_gen(basis: FockBasis, h: &CVector) -> Result<FockOperator> {
    if h.len() != basis.n_modes() {
        return Err(Error::shape(format!("vector of length {}", basis.n_modes()), h.len()));
    }
    let mut terms = Vec::new();
    for (mu, &hm) in h.iter().enumerate() {
        terms.push((hm, vec![(mu, true)]));
        terms.push((-hm.conj(), vec![(mu, false)]));
    }
    Ok(polynomial(basis, &terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockoracle::FockVector;
    use crate::linops::c;

    #[test]
    fn annihilation_matrix_elements() {
        let b = FockBasis::new(1, 3).unwrap();
        let (a, _) = ladder(b, 0).unwrap();
        let two = FockVector::basis_state(b, &[2]).unwrap();
        let out = a.apply(&two.coeffs).unwrap();
        assert!((out[1] - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(out.iter().filter(|z| z.norm() > 0.0).count(), 1);
        let vac = FockVector::vacuum(b);
        assert!(a.apply(&vac.coeffs).unwrap().norm() == 0.0);
        assert!(ladder(b, 1).is_err());
    }

    #[test]
    fn commutator_is_identity_below_cutoff() {
        let b = FockBasis::new(1, 12).unwrap();
        let (a, adag) = ladder(b, 0).unwrap();
        let comm = a.commutator(&adag).unwrap();
        let diff = comm.max_abs_diff_on(&FockOperator::identity(b), &b.safe_indices(1)).unwrap();
        assert!(diff < 1e-13);
        // the truncation shows up on |cutoff⟩
        assert!(comm.max_abs_diff(&FockOperator::identity(b)).unwrap() > 1.0);
    }

    #[test]
    fn rotation_generator_of_identity_is_number_operator() {
        let b = FockBasis::new(1, 6).unwrap();
        let k = quad_rotation_gen(b, &CMatrix::identity(1, 1)).unwrap();
        for n in 0..=6 {
            assert!((k.get(n, n) - c(n as f64, 0.0)).norm() < 1e-14);
        }
        assert_eq!(k.nnz(), 6);
    }

    #[test]
    fn generator_symmetries() {
        let b = FockBasis::new(2, 5).unwrap();
        let mut xi = CMatrix::zeros(2, 2);
        xi[(0, 0)] = c(0.3, 0.1);
        xi[(0, 1)] = c(-0.2, 0.4);
        xi[(1, 0)] = c(-0.2, 0.4);
        let k = quad_squeeze_gen(b, &xi).unwrap();
        assert!(k.add(&k.adjoint()).unwrap().max_abs_diff(&FockOperator::zeros(b)).unwrap() < 1e-14);

        let mut psi = CMatrix::zeros(2, 2);
        psi[(0, 1)] = c(0.5, 0.5);
        psi[(1, 0)] = c(0.5, -0.5);
        psi[(1, 1)] = c(2.0, 0.0);
        let k = quad_rotation_gen(b, &psi).unwrap();
        assert!(k.max_abs_diff(&k.adjoint()).unwrap() < 1e-14);

        let h = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(weyl_gen(b, &h).unwrap().nnz(), 0);
        let b1 = FockBasis::new(1, 4).unwrap();
        let k = weyl_gen(b1, &CVector::from_element(1, c(1.0, 0.0))).unwrap();
        let (a, adag) = ladder(b1, 0).unwrap();
        assert!(k.max_abs_diff(&adag.sub(&a).unwrap()).unwrap() == 0.0);
    }
}
