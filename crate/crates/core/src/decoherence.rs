//! Decoherence probe for the van Hove model on a discretized frequency grid.
//!
//! The radial dispersion reduces every quantity to a scalar grid `ω_j` with
//! the measure absorbed into real couplings `h_j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{CVector, C64};
use crate::symplectic::{SqueezeGenerator, SymplecticPair};

/// Frequencies, real couplings and inverse temperature of the bath.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathGrid {
    omegas: Vec<f64>,
    h: Vec<f64>,
    beta: f64,
}

impl BathGrid {
    /// `beta = 0` marks a zero-temperature bath.
    pub fn new(omegas: Vec<f64>, h: Vec<f64>, beta: f64) -> Result<Self> {
        if omegas.is_empty() || omegas.len() != h.len() {
            return Err(Error::shape(format!("{} couplings", omegas.len()), h.len()));
        }
        if omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("frequencies must be finite and positive".into()));
        }
        if omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("frequencies must be strictly increasing".into()));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("couplings"));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter("beta must be finite and non-negative".into()));
        }
        Ok(BathGrid { omegas, h, beta })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        BathGrid::new(self.omegas.clone(), self.h.clone(), beta)
    }

    /// `4·Σ h_j²/ω_j`, which must not exceed one for a semibounded Hamiltonian.
    pub fn semiboundedness(&self) -> f64 {
        4.0 * self.omegas.iter().zip(&self.h).map(|(w, h)| h * h / w).sum::<f64>()
    }

    pub fn is_semibounded(&self) -> bool {
        self.semiboundedness() <= 1.0
    }
}

/// Power-law couplings `h_j² = normalization·ω_j^s·Δω_j` on a log-spaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CouplingFamily {
    pub s: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub n_points: usize,
    pub normalization: f64,
}

impl Default for CouplingFamily {
    fn default() -> Self {
        CouplingFamily { s: 0.0, omega_min: 1e-4, omega_max: 1e3, n_points: 2000, normalization: 1.0 }
    }
}

impl CouplingFamily {
    /// Cells have geometric edges between `omega_min` and `omega_max`; each
    /// frequency sits at the geometric centre of its cell.
    pub fn grid(&self, beta: f64) -> Result<BathGrid> {
        if !(self.omega_min > 0.0 && self.omega_max > self.omega_min && self.n_points >= 2) {
            return Err(Error::InvalidParameter(
                "coupling family needs 0 < omega_min < omega_max and n_points ≥ 2".into(),
            ));
        }
        if !(self.normalization >= 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidParameter("normalization must be non-negative".into()));
        }
        let (lo, hi) = (self.omega_min.ln(), self.omega_max.ln());
        let step = (hi - lo) / self.n_points as f64;
        let edges: Vec<f64> = (0..=self.n_points).map(|k| (lo + step * k as f64).exp()).collect();
        let omegas: Vec<f64> = edges.windows(2).map(|e| (e[0] * e[1]).sqrt()).collect();
        let h = edges
            .windows(2)
            .zip(&omegas)
            .map(|(e, w)| (self.normalization * w.powf(self.s) * (e[1] - e[0])).sqrt())
            .collect();
        BathGrid::new(omegas, h, beta)
    }
}

/// `k_j(t) = (e^{iω_j t} − 1)·h_j/ω_j`.
pub fn k_of_t(grid: &BathGrid, t: f64) -> Result<CVector> {
    require_time(t)?;
    Ok(CVector::from_iterator(
        grid.len(),
        grid.omegas.iter().zip(&grid.h).map(|(&w, &h)| {
            let half = 0.5 * w * t;
            C64::new(-2.0 * half.sin().powi(2), (w * t).sin()) * (h / w)
        }),
    ))
}

/// `‖k(t)‖² = Σ 2(1 − cos ω_j t)·h_j²/ω_j²`.
pub fn norm_kt_sq(grid: &BathGrid, t: f64) -> Result<f64> {
    require_time(t)?;
    Ok(grid
        .omegas
        .iter()
        .zip(&grid.h)
        .map(|(&w, &h)| 4.0 * (0.5 * w * t).sin().powi(2) * (h / w).powi(2))
        .sum())
}

fn require_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time must be finite and non-negative, got {t}")))
    }
}

/// Squeezing of the bath modes, acting on `k` as `G(cosh Ξ, −sinh Ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BathSqueezing {
    /// Mode-local `Ξ_jj = ξ_j`.
    Diagonal(Vec<C64>),
    /// A general symmetric kernel on the grid, stored as its canonical pair.
    General { pair: SymplecticPair, max_r: f64 },
}

impl BathSqueezing {
    pub fn diagonal(r: &[f64]) -> Self {
        BathSqueezing::Diagonal(r.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_generator(xi: &SqueezeGenerator) -> Result<Self> {
        let pair = SymplecticPair::from_squeeze(&xi.scaled(-1.0))?;
        let max_r = crate::linops::spectral_norm(xi.xi());
        Ok(BathSqueezing::General { pair, max_r })
    }

    /// Largest squeeze amplitude, the `R` of the bound `e^{±2R}`.
    pub fn max_r(&self) -> f64 {
        match self {
            BathSqueezing::Diagonal(xi) => xi.iter().map(|x| x.norm()).fold(0.0, f64::max),
            BathSqueezing::General { max_r, .. } => *max_r,
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            BathSqueezing::Diagonal(xi) => xi.len(),
            BathSqueezing::General { pair, .. } => pair.modes(),
        }
    }

    pub fn apply(&self, k: &CVector) -> Result<CVector> {
        if k.len() != self.modes() {
            return Err(Error::shape(format!("vector of length {}", self.modes()), k.len()));
        }
        match self {
            BathSqueezing::Diagonal(xi) => Ok(CVector::from_iterator(
                k.len(),
                xi.iter().zip(k.iter()).map(|(x, kj)| {
                    let r = x.norm();
                    let phase = if r > 0.0 { x / r } else { C64::new(0.0, 0.0) };
                    kj * r.cosh() - phase * kj.conj() * r.sinh()
                }),
            )),
            BathSqueezing::General { pair, .. } => pair.apply(k),
        }
    }
}

/// `dalpha²·‖(cosh Ξ)k(t) − (sinh Ξ)k̄(t)‖²`.
pub fn squeezed_norm_sq(grid: &BathGrid, t: f64, squeeze: &BathSqueezing, dalpha: f64) -> Result<f64> {
    let k = k_of_t(grid, t)?;
    Ok(dalpha * dalpha * squeeze.apply(&k)?.norm_squared())
}

/// Reference state in which the Weyl expectation is taken.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    Vacuum,
    Thermal,
    SqueezedVacuum(BathSqueezing),
    SqueezedThermal(BathSqueezing),
}

/// `ln |χ(t)|`, finite even when `|χ|` underflows.
pub fn log_chi_magnitude(grid: &BathGrid, t: f64, dalpha: f64, reference: &Reference) -> Result<f64> {
    let k = k_of_t(grid, t)? * C64::new(dalpha, 0.0);
    let thermal = |k: &CVector| -> Result<f64> {
        if grid.beta <= 0.0 {
            return Err(Error::InvalidReference("thermal reference needs beta > 0".into()));
        }
        Ok(-k
            .iter()
            .zip(&grid.omegas)
            .map(|(kj, &w)| kj.norm_sqr() * 0.5 / (0.5 * grid.beta * w).tanh())
            .sum::<f64>())
    };
    match reference {
        Reference::Vacuum => Ok(-0.5 * k.norm_squared()),
        Reference::Thermal => thermal(&k),
        Reference::SqueezedVacuum(s) => Ok(-0.5 * s.apply(&k)?.norm_squared()),
        Reference::SqueezedThermal(s) => thermal(&s.apply(&k)?),
    }
}

/// `|χ(t)|` of the Weyl expectation; the phase is never computed.
pub fn chi_magnitude(grid: &BathGrid, t: f64, dalpha: f64, reference: &Reference) -> Result<f64> {
    log_chi_magnitude(grid, t, dalpha, reference).map(f64::exp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    Bounded,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    /// Exponent of the log-log fit `‖k(t)‖² ∝ t^α`.
    pub fitted_exponent: f64,
    /// Least-squares slope of `‖k(t)‖²` against `t`.
    pub linear_slope: f64,
    pub monotone: bool,
    pub classified: Growth,
    pub usable_points: usize,
}

/// Minimum number of resolvable times for a fit.
pub const MIN_FIT_POINTS: usize = 10;
/// Exponent above which growth counts as divergent.
pub const DIVERGENT_EXPONENT: f64 = 0.1;

/// Fits the growth of `‖k(t)‖²` over the times in `t_grid` with
/// `0 < t ≤ 0.1/ω_min`.
///
/// Growth is divergent when the exponent is at least
/// [`DIVERGENT_EXPONENT`] and the values are non-decreasing, within 1%,
/// across the times with `t·ω_max ≥ 10`.
pub fn divergence_probe(family: &CouplingFamily, t_grid: &[f64]) -> Result<DivergenceReport> {
    let grid = family.grid(0.0)?;
    let t_max = 0.1 / family.omega_min;
    let ts: Vec<f64> = t_grid.iter().cloned().filter(|&t| t > 0.0 && t <= t_max).collect();
    if ts.len() < MIN_FIT_POINTS {
        return Err(Error::WindowTooNarrow { usable: ts.len(), required: MIN_FIT_POINTS });
    }
    let values = ts.iter().map(|&t| norm_kt_sq(&grid, t)).collect::<Result<Vec<_>>>()?;
    if values.iter().any(|&v| v <= 0.0) {
        return Err(Error::InvalidParameter("couplings vanish on the grid".into()));
    }
    let logt: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let logv: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let fitted_exponent = least_squares_slope(&logt, &logv);
    let linear_slope = least_squares_slope(&ts, &values);

    let tail: Vec<f64> = ts
        .iter()
        .zip(&values)
        .filter(|(t, _)| **t * family.omega_max >= 10.0)
        .map(|(_, v)| *v)
        .collect();
    let monotone = tail.len() >= 2 && tail.windows(2).all(|w| w[1] >= w[0] * 0.99);
    let classified = if fitted_exponent >= DIVERGENT_EXPONENT && monotone {
        Growth::Divergent
    } else {
        Growth::Bounded
    };
    Ok(DivergenceReport { fitted_exponent, linear_slope, monotone, classified, usable_points: ts.len() })
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Log-spaced times between `t_min` and `t_max`.
pub fn log_times(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![t_min];
    }
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single(w: f64, h: f64, beta: f64) -> BathGrid {
        BathGrid::new(vec![w], vec![h], beta).unwrap()
    }

    #[test]
    fn k_examples() {
        let g = single(2.0, 0.5, 0.0);
        assert_eq!(k_of_t(&g, 0.0).unwrap()[0], C64::new(0.0, 0.0));
        assert!(k_of_t(&g, PI).unwrap()[0].norm() < 1e-15);
        let k = k_of_t(&g, PI / 2.0).unwrap()[0];
        assert!((k - C64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_point_norm() {
        let g = single(1.5, 0.3, 0.0);
        for t in [0.1, 1.0, 2.0, 7.5] {
            let expected = 2.0 * (1.0 - (1.5f64 * t).cos()) * 0.09 / 2.25;
            assert!((norm_kt_sq(&g, t).unwrap() - expected).abs() < 1e-15);
            assert!(norm_kt_sq(&g, t).unwrap() <= 4.0 * 0.09 / 2.25 + 1e-15);
            assert!((k_of_t(&g, t).unwrap().norm_squared() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn real_and_imaginary_parts_squeeze_oppositely() {
        let s = BathSqueezing::diagonal(&[0.7]);
        let k = CVector::from_element(1, C64::new(2.0, 3.0));
        let out = s.apply(&k).unwrap()[0];
        assert!((out - C64::new(2.0 * (-0.7f64).exp(), 3.0 * 0.7f64.exp())).norm() < 1e-14);
    }

    #[test]
    fn general_kernel_matches_diagonal_path() {
        let r = [0.3, -0.2, 0.5];
        let g = CouplingFamily { n_points: 3, ..Default::default() }.grid(0.0).unwrap();
        let diag = BathSqueezing::diagonal(&r);
        let general = BathSqueezing::from_generator(&SqueezeGenerator::diagonal(&r)).unwrap();
        for t in [0.5, 3.0, 40.0] {
            let a = squeezed_norm_sq(&g, t, &diag, 1.3).unwrap();
            let b = squeezed_norm_sq(&g, t, &general, 1.3).unwrap();
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
        assert!((general.max_r() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn thermal_single_mode_value() {
        let g = single(1.0, 1.0, 1.0);
        // choose t with k = i·(something) of unit modulus: |k|² = 2(1 − cos t)
        let t = PI / 3.0;
        let dalpha = 1.0 / norm_kt_sq(&g, t).unwrap().sqrt();
        let chi = chi_magnitude(&g, t, dalpha, &Reference::Thermal).unwrap();
        let expected = (-(1.0 / (1f64.exp() - 1.0) + 0.5)).exp();
        assert!((chi - expected).abs() < 1e-14);
    }

    #[test]
    fn chi_at_zero_and_reference_errors() {
        let g = CouplingFamily::default().grid(2.0).unwrap();
        let s = BathSqueezing::diagonal(&vec![0.4; g.len()]);
        for r in [
            Reference::Vacuum,
            Reference::Thermal,
            Reference::SqueezedVacuum(s.clone()),
            Reference::SqueezedThermal(s.clone()),
        ] {
            assert_eq!(chi_magnitude(&g, 0.0, 1.0, &r).unwrap(), 1.0);
        }
        let cold = g.with_beta(0.0).unwrap();
        assert!(matches!(
            chi_magnitude(&cold, 1.0, 1.0, &Reference::Thermal),
            Err(Error::InvalidReference(_))
        ));
        assert!(matches!(
            chi_magnitude(&cold, 1.0, 1.0, &Reference::SqueezedThermal(s)),
            Err(Error::InvalidReference(_))
        ));
    }

    #[test]
    fn grid_validation() {
        assert!(BathGrid::new(vec![1.0, 0.5], vec![1.0, 1.0], 0.0).is_err());
        assert!(BathGrid::new(vec![0.0], vec![1.0], 0.0).is_err());
        assert!(BathGrid::new(vec![1.0], vec![1.0, 2.0], 0.0).is_err());
        assert!(BathGrid::new(vec![1.0], vec![1.0], -1.0).is_err());
        let g = CouplingFamily::default().grid(0.0).unwrap();
        assert_eq!(g.len(), 2000);
        assert!(g.omegas()[0] > 1e-4 && g.omegas()[1999] < 1e3);
    }

    #[test]
    fn semiboundedness_is_reported() {
        let g = single(1.0, 0.4, 0.0);
        assert!((g.semiboundedness() - 0.64).abs() < 1e-15);
        assert!(g.is_semibounded());
        assert!(!single(1.0, 0.6, 0.0).is_semibounded());
    }

    #[test]
    fn narrow_window_is_rejected() {
        let family = CouplingFamily { omega_min: 1.0, ..Default::default() };
        let ts = log_times(1.0, 100.0, 50);
        assert!(matches!(divergence_probe(&family, &ts), Err(Error::WindowTooNarrow { .. })));
    }
}
