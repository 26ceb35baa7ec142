//! Seeded generators for random test cases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linops::{self, CMatrix, CVector, C64};
use crate::symplectic::{RotationGenerator, SqueezeGenerator, SymplecticPair};
use crate::fockrep::UltracoherentVector;

/// Deterministic source of random matrices, vectors and canonical pairs.
pub struct CaseRng {
    rng: ChaCha8Rng,
}

/// A canonical pair together with its Euler-type generators,
/// `pair = R(Ψ₁) · S(Ξ) · R(Ψ₂)` at the one-particle level.
#[derive(Debug, Clone)]
pub struct CanonicalSample {
    pub pair: SymplecticPair,
    pub outer: RotationGenerator,
    pub squeeze: SqueezeGenerator,
    pub inner: RotationGenerator,
}

impl CaseRng {
    pub fn new(seed: u64) -> Self {
        CaseRng { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn normal(&mut self) -> f64 {
        // Box-Muller
        let u1: f64 = 1.0 - self.rng.random::<f64>();
        let u2: f64 = self.rng.random::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn complex(&mut self) -> C64 {
        C64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_matrix(&mut self, n: usize, scale: f64) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| self.complex() * scale)
    }

    pub fn symmetric(&mut self, n: usize, scale: f64) -> CMatrix {
        let g = self.gaussian_matrix(n, scale);
        (&g + g.transpose()) * C64::new(0.5, 0.0)
    }

    pub fn hermitian(&mut self, n: usize, scale: f64) -> CMatrix {
        let g = self.gaussian_matrix(n, scale);
        (&g + g.adjoint()) * C64::new(0.5, 0.0)
    }

    /// Haar-ish unitary from the QR factor of a Gaussian matrix.
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        let g = self.gaussian_matrix(n, 1.0);
        let qr = g.qr();
        let (q, r) = qr.unpack();
        let phases = CVector::from_iterator(
            n,
            r.diagonal().iter().map(|z| if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) }),
        );
        q * CMatrix::from_diagonal(&phases)
    }

    /// Random vector with Euclidean norm drawn uniformly in `[0, max_norm]`.
    pub fn vector(&mut self, n: usize, max_norm: f64) -> CVector {
        let v = CVector::from_iterator(n, (0..n).map(|_| self.complex()));
        let norm = v.norm().max(f64::MIN_POSITIVE);
        let target = self.uniform(0.0, max_norm);
        v * C64::new(target / norm, 0.0)
    }

    /// Symmetric matrix with spectral norm exactly `radius`.
    pub fn siegel_point(&mut self, n: usize, radius: f64) -> CMatrix {
        let a = self.symmetric(n, 1.0);
        let s = linops::spectral_norm(&a);
        if s == 0.0 {
            a
        } else {
            a * C64::new(radius / s, 0.0)
        }
    }

    /// Squeeze generator whose largest Takagi value equals `r`.
    pub fn squeeze_generator(&mut self, n: usize, r: f64) -> SqueezeGenerator {
        SqueezeGenerator::new(self.siegel_point(n, r)).expect("symmetric by construction")
    }

    pub fn rotation_generator(&mut self, n: usize, scale: f64) -> RotationGenerator {
        RotationGenerator::new(self.hermitian(n, scale)).expect("Hermitian by construction")
    }

    pub fn canonical(&mut self, n: usize, max_squeeze: f64) -> CanonicalSample {
        let outer = self.rotation_generator(n, 1.0);
        let r = self.uniform(0.0, max_squeeze);
        let squeeze = self.squeeze_generator(n, r);
        let inner = self.rotation_generator(n, 1.0);
        let pair = SymplecticPair::from_rotation(&outer)
            .compose(&SymplecticPair::from_squeeze(&squeeze).expect("valid generator"))
            .and_then(|p| p.compose(&SymplecticPair::from_rotation(&inner)))
            .expect("shapes agree");
        CanonicalSample { pair, outer, squeeze, inner }
    }

    /// Ultracoherent vector with `‖Z‖ = z_radius·U(0,1)` and `‖f‖ ≤ f_max`.
    pub fn ultracoherent(&mut self, n: usize, z_radius: f64, f_max: f64) -> UltracoherentVector {
        let radius = self.uniform(0.0, z_radius);
        let z = self.siegel_point(n, radius);
        let f = self.vector(n, f_max);
        let log_amp = C64::new(self.uniform(-0.5, 0.5), self.uniform(-3.0, 3.0));
        UltracoherentVector::new(log_amp, z, f).expect("inside the Siegel disc by construction")
    }
}
