use super::operator::polynomial;
use super::{FockBasis, FockVector};
use crate::error::{Error, Result};
use crate::fockrep::{self, UltracoherentVector};
use crate::linops::C64;
use crate::tol;

/// Truncated image of an ultracoherent vector.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub vector: FockVector,
    /// `1 − ‖P u‖² / ‖u‖²` with `P` the projection onto the truncated space.
    pub truncation_weight: f64,
}

/// Embeds `u`, failing with `CutoffTooSmall` above the default weight limit.
pub fn embed(u: &UltracoherentVector, basis: FockBasis) -> Result<Embedding> {
    let e = embed_unchecked(u, basis)?;
    if e.truncation_weight > tol::TRUNCATION_WEIGHT {
        return Err(Error::CutoffTooSmall { weight: e.truncation_weight, limit: tol::TRUNCATION_WEIGHT });
    }
    Ok(e)
}

/// Embeds `u` and reports its truncation weight without enforcing a limit.
///
/// `exp(½b†Zb† + b†(f))·1_vac` is summed term by term. The raising operator
/// increases the total occupation, so the truncated series is finite and
/// equals the projection of the exact vector.
pub fn embed_unchecked(u: &UltracoherentVector, basis: FockBasis) -> Result<Embedding> {
    let n = u.modes();
    if n != basis.n_modes() {
        return Err(Error::shape(format!("{} modes", basis.n_modes()), format!("{n} modes")));
    }
    let mut terms = Vec::new();
    for mu in 0..n {
        terms.push((u.f()[mu], vec![(mu, true)]));
        for nu in 0..n {
            terms.push((0.5 * u.z()[(mu, nu)], vec![(mu, true), (nu, true)]));
        }
    }
    let raise = polynomial(basis, &terms);

    let mut term = FockVector::vacuum(basis).coeffs;
    let mut acc = term.clone();
    for k in 1..=n * basis.cutoff() {
        term = raise.apply(&term)? / C64::new(k as f64, 0.0);
        if term.iter().all(|z| *z == C64::new(0.0, 0.0)) {
            break;
        }
        acc += &term;
    }

    let unit = u.with_log_amp(C64::new(0.0, 0.0));
    let exact = fockrep::norm(&unit)?;
    let truncated = acc.norm();
    let truncation_weight = (1.0 - (truncated / exact).powi(2)).max(0.0);
    let coeffs = acc * u.amplitude();
    Ok(Embedding { vector: FockVector { basis, coeffs }, truncation_weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{c, CMatrix, CVector};

    #[test]
    fn vacuum_embeds_to_ground_state() {
        let b = FockBasis::new(2, 5).unwrap();
        let e = embed(&UltracoherentVector::vacuum(2), b).unwrap();
        assert_eq!(e.vector, FockVector::vacuum(b));
        assert!(e.truncation_weight < 1e-15);
    }

    #[test]
    fn exponential_vector_coefficients() {
        let b = FockBasis::new(1, 40).unwrap();
        let f = c(0.6, -0.3);
        let e = embed(&UltracoherentVector::exponential(CVector::from_element(1, f)).unwrap(), b).unwrap();
        let mut fact = 1.0;
        for n in 0..=40 {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = f.powi(n) / fact.sqrt();
            assert!((e.vector.coeffs[n as usize] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn squeezed_norm_and_parity() {
        let b = FockBasis::new(1, 40).unwrap();
        let z = 0.4f64.tanh();
        let u = UltracoherentVector::new(c(0.0, 0.0), CMatrix::from_element(1, 1, c(z, 0.0)), CVector::zeros(1)).unwrap();
        let e = embed(&u, b).unwrap();
        for n in (1..=40).step_by(2) {
            assert_eq!(e.vector.coeffs[n], c(0.0, 0.0));
        }
        let ip = e.vector.inner(&e.vector).unwrap();
        assert!((ip.re - (1.0 - z * z).powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn truncation_weight_converges() {
        let f = CVector::from_vec(vec![c(0.7, 0.2), c(-0.3, 0.6)]);
        let f = &f / C64::new(f.norm(), 0.0);
        let u = UltracoherentVector::exponential(f).unwrap();
        let mut last = f64::INFINITY;
        for cutoff in [10usize, 20, 40] {
            let w = embed_unchecked(&u, FockBasis::new(2, cutoff).unwrap()).unwrap().truncation_weight;
            assert!(w <= (-(cutoff as f64) / 2.0).exp());
            assert!(w <= last + 4.0 * f64::EPSILON, "{w} after {last}");
            last = w;
        }
    }

    #[test]
    fn small_cutoff_is_rejected() {
        let u = UltracoherentVector::exponential(CVector::from_element(1, c(2.0, 0.0))).unwrap();
        assert!(matches!(embed(&u, FockBasis::new(1, 5).unwrap()), Err(Error::CutoffTooSmall { .. })));
    }
}
