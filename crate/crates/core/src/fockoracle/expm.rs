use super::{FockOperator, FockVector};
use crate::error::{Error, Result};
use crate::linops::{CMatrix, C64};

/// Largest induced 1-norm accepted by the exponentials.
pub const MAT_EXP_MAX_NORM: f64 = 700.0;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn dense_norm_one(m: &CMatrix) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Dense matrix exponential by degree-13 Padé scaling and squaring.
pub fn mat_exp(op: &FockOperator) -> Result<FockOperator> {
    let a = op.to_dense();
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("operator"));
    }
    let norm = dense_norm_one(&a);
    if norm > MAT_EXP_MAX_NORM {
        return Err(Error::Overflow { norm });
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a * C64::new(2f64.powi(-s), 0.0);
    let d = a.nrows();
    let id = CMatrix::identity(d, d);
    let b = |k: usize| C64::new(PADE13[k], 0.0);

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9)) + &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &id * b(1);
    let u = &a * inner_u;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8)) + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &id * b(0);

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or(Error::Singular("Padé denominator"))?;
    for _ in 0..s {
        r = &r * &r;
    }
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm });
    }
    FockOperator::from_dense(op.basis(), &r)
}

/// `exp(op)·v` by a substepped Taylor series, never forming `exp(op)`.
pub fn expm_apply(op: &FockOperator, v: &FockVector) -> Result<FockVector> {
    if op.basis() != v.basis {
        return Err(Error::shape(format!("{:?}", op.basis()), format!("{:?}", v.basis)));
    }
    let norm = op.norm_one();
    if norm > MAT_EXP_MAX_NORM {
        return Err(Error::Overflow { norm });
    }
    let steps = norm.ceil().max(1.0) as usize;
    let h = C64::new(1.0 / steps as f64, 0.0);
    let mut x = v.coeffs.clone();
    for _ in 0..steps {
        let mut term = x.clone();
        let mut acc = x.clone();
        for k in 1..=60 {
            term = op.apply(&term)? * (h / k as f64);
            acc += &term;
            if term.norm() <= f64::EPSILON * 1e-2 * acc.norm() {
                break;
            }
        }
        x = acc;
    }
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm });
    }
    Ok(FockVector { basis: v.basis, coeffs: x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockoracle::{number_operator, FockBasis};
    use crate::linops::c;
    use crate::random::CaseRng;

    #[test]
    fn exp_of_zero_is_identity() {
        let b = FockBasis::new(2, 3).unwrap();
        let e = mat_exp(&FockOperator::zeros(b)).unwrap();
        assert!(e.max_abs_diff(&FockOperator::identity(b)).unwrap() < 1e-15);
    }

    #[test]
    fn exp_i_pi_number_is_parity() {
        let b = FockBasis::new(1, 12).unwrap();
        let n = number_operator(b, 0).unwrap();
        let e = mat_exp(&n.scale(c(0.0, std::f64::consts::PI))).unwrap();
        let parity = FockOperator::diagonal(b, |i| c(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        assert!(e.max_abs_diff(&parity).unwrap() < 1e-12);
    }

    #[test]
    fn random_anti_hermitian_is_unitary() {
        let b = FockBasis::new(1, 15).unwrap();
        let mut rng = CaseRng::new(11);
        let h = rng.hermitian(b.dim(), 1.0);
        let scale = 5.0 / crate::linops::spectral_norm(&h);
        let k = FockOperator::from_dense(b, &(h * c(0.0, scale))).unwrap();
        let e = mat_exp(&k).unwrap().to_dense();
        let residual = crate::linops::max_abs(&(e.adjoint() * &e - CMatrix::identity(b.dim(), b.dim())));
        assert!(residual < 1e-9, "{residual}");
    }

    #[test]
    fn action_matches_dense_exponential() {
        let b = FockBasis::new(1, 10).unwrap();
        let mut rng = CaseRng::new(3);
        let h = rng.hermitian(b.dim(), 1.0);
        let k = FockOperator::from_dense(b, &(h * c(0.0, 0.7))).unwrap();
        let v = FockVector { basis: b, coeffs: rng.vector(b.dim(), 1.0) };
        let direct = mat_exp(&k).unwrap().apply(&v.coeffs).unwrap();
        let action = expm_apply(&k, &v).unwrap();
        assert!((direct - action.coeffs).norm() < 1e-12);
    }

    #[test]
    fn overflow_guard() {
        let b = FockBasis::new(1, 2).unwrap();
        let big = FockOperator::identity(b).scale(c(1e4, 0.0));
        assert!(matches!(mat_exp(&big), Err(Error::Overflow { .. })));
        assert!(matches!(expm_apply(&big, &FockVector::vacuum(b)), Err(Error::Overflow { .. })));
    }
}
