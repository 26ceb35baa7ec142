use serde::{Deserialize, Serialize};

use super::{embed, expm_apply, quad_rotation_gen, quad_squeeze_gen, weyl_gen, FockBasis, FockVector};
use crate::error::{Error, Result};
use crate::fockrep::{self, UltracoherentVector, WeylDisplacement};
use crate::linops::C64;
use crate::symplectic::{RotationGenerator, SqueezeGenerator, SymplecticPair};
use crate::tol;

/// Closed-form operation checked against the truncated Fock space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum OracleCase {
    /// `T(R(Ψ₁)·S(Ξ)·R(Ψ₂))` applied to `state`.
    Transform {
        outer: RotationGenerator,
        squeeze: SqueezeGenerator,
        inner: RotationGenerator,
        state: UltracoherentVector,
    },
    Weyl { h: WeylDisplacement, state: UltracoherentVector },
    SqueezeVacuum { squeeze: SqueezeGenerator },
    /// Inner product `(left | right)`.
    Inner { left: UltracoherentVector, right: UltracoherentVector },
}

impl OracleCase {
    pub fn name(&self) -> &'static str {
        match self {
            OracleCase::Transform { .. } => "transform",
            OracleCase::Weyl { .. } => "weyl",
            OracleCase::SqueezeVacuum { .. } => "squeeze_vacuum",
            OracleCase::Inner { .. } => "inner",
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            OracleCase::Transform { state, .. } | OracleCase::Weyl { state, .. } => state.modes(),
            OracleCase::SqueezeVacuum { squeeze } => squeeze.modes(),
            OracleCase::Inner { left, .. } => left.modes(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub case: String,
    pub cutoff: usize,
    /// `1 − |(a|b)|/(‖a‖‖b‖)`; for inner products the relative error of the value.
    pub overlap_error: f64,
    /// Relative mismatch of `‖b‖` against `‖a‖`; for inner products of `|value|`.
    pub norm_error: f64,
    /// Largest truncation weight of any embedded vector.
    pub truncation_weight: f64,
}

fn compare_states(name: &str, cutoff: usize, analytic: &FockVector, brute: &FockVector, weight: f64) -> Result<OracleReport> {
    let a = analytic.norm();
    Ok(OracleReport {
        case: name.to_string(),
        cutoff,
        overlap_error: analytic.overlap_error(brute)?,
        norm_error: (brute.norm() - a).abs() / a,
        truncation_weight: weight,
    })
}

/// Compares a closed-form operation with its brute-force image at `cutoff`.
pub fn oracle_compare(case: &OracleCase, cutoff: usize) -> Result<OracleReport> {
    oracle_compare_with_cap(case, cutoff, tol::MAX_FOCK_DIM)
}

pub fn oracle_compare_with_cap(case: &OracleCase, cutoff: usize, cap: usize) -> Result<OracleReport> {
    let basis = FockBasis::with_cap(case.modes(), cutoff, cap)?;
    let i = C64::new(0.0, 1.0);
    match case {
        OracleCase::Transform { outer, squeeze, inner, state } => {
            let pair = SymplecticPair::from_rotation(outer)
                .compose(&SymplecticPair::from_squeeze(squeeze)?)?
                .compose(&SymplecticPair::from_rotation(inner))?;
            let input = embed(state, basis)?;
            let out = embed(&fockrep::transform(&pair, state)?, basis)?;
            let step = expm_apply(&quad_rotation_gen(basis, inner.psi())?.scale(i), &input.vector)?;
            let step = expm_apply(&quad_squeeze_gen(basis, squeeze.xi())?, &step)?;
            let brute = expm_apply(&quad_rotation_gen(basis, outer.psi())?.scale(i), &step)?;
            let weight = input.truncation_weight.max(out.truncation_weight);
            compare_states(case.name(), cutoff, &out.vector, &brute, weight)
        }
        OracleCase::Weyl { h, state } => {
            let input = embed(state, basis)?;
            let out = embed(&fockrep::weyl_apply(h, state)?, basis)?;
            let brute = expm_apply(&weyl_gen(basis, &h.h)?, &input.vector)?;
            let weight = input.truncation_weight.max(out.truncation_weight);
            compare_states(case.name(), cutoff, &out.vector, &brute, weight)
        }
        OracleCase::SqueezeVacuum { squeeze } => {
            let out = embed(&fockrep::squeeze_vacuum(squeeze)?, basis)?;
            let brute = expm_apply(&quad_squeeze_gen(basis, squeeze.xi())?, &FockVector::vacuum(basis))?;
            compare_states(case.name(), cutoff, &out.vector, &brute, out.truncation_weight)
        }
        OracleCase::Inner { left, right } => {
            if left.modes() != right.modes() {
                return Err(Error::shape(format!("{} modes", left.modes()), format!("{} modes", right.modes())));
            }
            let l = embed(left, basis)?;
            let r = embed(right, basis)?;
            let brute = l.vector.inner(&r.vector)?;
            let exact = fockrep::inner(left, right)?;
            Ok(OracleReport {
                case: case.name().to_string(),
                cutoff,
                overlap_error: (brute - exact).norm() / exact.norm(),
                norm_error: (brute.norm() - exact.norm()).abs() / exact.norm(),
                truncation_weight: l.truncation_weight.max(r.truncation_weight),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linops::{c, CMatrix, CVector};

    #[test]
    fn identity_transform() {
        let mut rng = crate::random::CaseRng::new(5);
        let case = OracleCase::Transform {
            outer: RotationGenerator::zero(2),
            squeeze: SqueezeGenerator::zero(2),
            inner: RotationGenerator::zero(2),
            state: rng.ultracoherent(2, 0.3, 1.0),
        };
        let rep = oracle_compare(&case, 30).unwrap();
        assert!(rep.overlap_error <= 1e-12, "{rep:?}");
        assert!(rep.norm_error <= 1e-12);
    }

    #[test]
    fn single_mode_squeezed_vacuum() {
        let case = OracleCase::SqueezeVacuum { squeeze: SqueezeGenerator::single_mode(0.3, 0.0) };
        let rep = oracle_compare(&case, 40).unwrap();
        assert!(rep.overlap_error <= 1e-6 && rep.norm_error <= 1e-6, "{rep:?}");
    }

    #[test]
    fn weyl_on_squeezed_vacuum() {
        let state = fockrep::squeeze_vacuum(&SqueezeGenerator::single_mode(0.3, 0.4)).unwrap();
        let h = WeylDisplacement::new(CVector::from_element(1, c(0.5, 0.0))).unwrap();
        let rep = oracle_compare(&OracleCase::Weyl { h, state }, 40).unwrap();
        assert!(rep.overlap_error <= 1e-6 && rep.norm_error <= 1e-6, "{rep:?}");
    }

    #[test]
    fn weyl_single_mode_example() {
        let state = UltracoherentVector::new(
            c(0.0, 0.0),
            CMatrix::from_element(1, 1, c(0.4, 0.0)),
            CVector::from_element(1, c(0.2, 0.0)),
        )
        .unwrap();
        let h = WeylDisplacement::new(CVector::from_element(1, c(0.3, 0.1))).unwrap();
        let rep = oracle_compare(&OracleCase::Weyl { h, state }, 40).unwrap();
        assert!(rep.overlap_error <= 1e-6, "{rep:?}");
    }

    #[test]
    fn report_json_shape() {
        let rep = oracle_compare(&OracleCase::SqueezeVacuum { squeeze: SqueezeGenerator::zero(1) }, 5).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["case", "cutoff", "overlap_error", "norm_error", "truncation_weight"] {
            assert!(v.get(key).is_some());
        }
        let case: OracleCase = serde_json::from_str(
            r#"{"case":"squeeze_vacuum","squeeze":{"Xi":[[[0.1,0.0]]]}}"#,
        )
        .unwrap();
        assert_eq!(case.modes(), 1);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let case = OracleCase::SqueezeVacuum { squeeze: SqueezeGenerator::zero(2) };
        assert!(matches!(oracle_compare_with_cap(&case, 40, 100), Err(Error::DimensionTooLarge { .. })));
    }
}
