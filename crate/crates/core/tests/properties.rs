use approx::assert_relative_eq;
use canonfock::fockrep::{self, bargmann, inner, multiplier, multiplier_at, norm, transform, weyl_apply};
use canonfock::linops::{self, c};
use canonfock::random::CaseRng;
use canonfock::symplectic::{conjugate_squeeze, reduce_to_single_modes, RotationGenerator, SymplecticPair};
use canonfock::WeylDisplacement;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn group_laws(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = CaseRng::new(seed);
        let g1 = rng.canonical(n, 0.8).pair;
        let g2 = rng.canonical(n, 0.8).pair;
        let g3 = rng.canonical(n, 0.8).pair;
        let g21 = g2.compose(&g1).unwrap();
        prop_assert!(g21.is_canonical(1e-10));
        let left = g3.compose(&g21).unwrap();
        let right = g3.compose(&g2).unwrap().compose(&g1).unwrap();
        prop_assert!(linops::max_abs(&(left.u() - right.u())) < 1e-10);
        prop_assert!(linops::max_abs(&(left.v() - right.v())) < 1e-10);
        let id = g1.compose(&g1.inverse()).unwrap();
        let e = SymplecticPair::identity(n);
        prop_assert!(linops::max_abs(&(id.u() - e.u())) < 1e-10);
        prop_assert!(linops::max_abs(id.v()) < 1e-10);

        let a = rng.siegel_point(n, 0.7);
        let composed = g21.siegel_action(&a).unwrap();
        let stepped = g2.siegel_action(&g1.siegel_action(&a).unwrap()).unwrap();
        prop_assert!(linops::max_abs(&(composed - stepped)) < 1e-10);
    }

    #[test]
    fn transform_and_weyl_preserve_norm(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = CaseRng::new(seed);
        let g = rng.canonical(n, 0.6).pair;
        let u = rng.ultracoherent(n, 0.5, 1.0);
        let h = WeylDisplacement::new(rng.vector(n, 1.0)).unwrap();
        let before = norm(&u).unwrap();
        assert_relative_eq!(norm(&transform(&g, &u).unwrap()).unwrap(), before, max_relative = 1e-9);
        assert_relative_eq!(norm(&weyl_apply(&h, &u).unwrap()).unwrap(), before, max_relative = 1e-9);
    }

    #[test]
    fn weyl_covariance(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = CaseRng::new(seed);
        let g = rng.canonical(n, 0.6).pair;
        let u1 = rng.ultracoherent(n, 0.5, 1.0);
        let u2 = rng.ultracoherent(n, 0.5, 1.0);
        let h = WeylDisplacement::new(rng.vector(n, 1.0)).unwrap();
        let gh = WeylDisplacement::new(g.apply(&h.h).unwrap()).unwrap();
        let lhs = inner(
            &transform(&g, &u1).unwrap(),
            &weyl_apply(&gh, &transform(&g, &u2).unwrap()).unwrap(),
        ).unwrap();
        let rhs = inner(&u1, &weyl_apply(&h, &u2).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn multiplier_is_a_phase_independent_of_probe(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = CaseRng::new(seed);
        let g1 = rng.canonical(n, 0.6).pair;
        let g2 = rng.canonical(n, 0.6).pair;
        let w = multiplier(&g2, &g1).unwrap();
        prop_assert!((w.norm() - 1.0).abs() < 1e-10);
        for _ in 0..5 {
            let probe = rng.ultracoherent(n, 0.4, 1.0);
            let wp = multiplier_at(&g2, &g1, &probe).unwrap();
            prop_assert!((wp - w).norm() < 1e-9, "{wp} vs {w}");
        }
    }

    #[test]
    fn bargmann_ratio_is_constant(seed in any::<u64>()) {
        let mut rng = CaseRng::new(seed);
        let g1 = rng.canonical(2, 0.6).pair;
        let g2 = rng.canonical(2, 0.6).pair;
        let u = rng.ultracoherent(2, 0.4, 1.0);
        let two_step = transform(&g2, &transform(&g1, &u).unwrap()).unwrap();
        let direct = transform(&g2.compose(&g1).unwrap(), &u).unwrap();
        let ratios: Vec<_> = (0..5)
            .map(|_| {
                let z = rng.vector(2, 1.0);
                bargmann(&two_step, &z).unwrap() / bargmann(&direct, &z).unwrap()
            })
            .collect();
        for r in &ratios {
            prop_assert!((r - ratios[0]).norm() < 1e-9);
        }
    }

    #[test]
    fn squeeze_reduction_reconstructs(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = CaseRng::new(seed);
        let r = rng.uniform(0.0, 1.5);
        let xi = rng.squeeze_generator(n, r);
        let (phi, r) = reduce_to_single_modes(&xi).unwrap();
        let diag = canonfock::SqueezeGenerator::diagonal(&r);
        prop_assert!(linops::max_abs(&(conjugate_squeeze(&phi, &xi).unwrap().xi() - diag.xi())) <= 1e-10);
        let back = conjugate_squeeze(&RotationGenerator::new(-phi.psi()).unwrap(), &diag).unwrap();
        prop_assert!(linops::max_abs(&(back.xi() - xi.xi())) <= 1e-10);
    }

    #[test]
    fn coherent_states_are_normalized(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = CaseRng::new(seed);
        let h = rng.vector(n, 2.0);
        let u = fockrep::UltracoherentVector::coherent(h).unwrap();
        assert_relative_eq!(norm(&u).unwrap(), 1.0, max_relative = 1e-12);
        let vac = fockrep::UltracoherentVector::vacuum(n);
        prop_assert!((inner(&vac, &vac).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
