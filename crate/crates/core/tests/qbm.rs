use std::path::PathBuf;

use canonfock::qbm::{coeffs, envelope_check, propagate_gaussian, GaussianState, QbmParams, TrajectoryPoint};
use serde::Deserialize;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[derive(Deserialize)]
struct Golden {
    params: QbmParams,
    t: f64,
    coeffs: std::collections::BTreeMap<String, String>,
}

#[derive(Deserialize)]
struct PdeOracle {
    params: QbmParams,
    initial: GaussianState,
    t0: f64,
    t1: f64,
    moments: Vec<TrajectoryPoint>,
}

fn base() -> QbmParams {
    QbmParams::new(1.0, 1.0, 0.1, 10.0, 0.5, 0.3).unwrap()
}

#[test]
fn golden_coefficients() {
    let golden: Golden = serde_json::from_str(&fixture("qbm_golden.json")).unwrap();
    let c = coeffs(&golden.params, golden.t).unwrap();
    let got = [
        ("omega_ren_sq", c.omega_ren_sq),
        ("gamma", c.gamma),
        ("dxx", c.dxx),
        ("dxp", c.dxp),
        ("dpx", c.dpx),
        ("dpp", c.dpp),
    ];
    for (name, value) in got {
        let expected: f64 = golden.coeffs[name].parse().unwrap();
        assert!((value - expected).abs() <= 1e-12 * expected.abs(), "{name}: {value} vs {expected}");
    }
}

#[test]
fn moments_match_pde_oracle() {
    let oracle: PdeOracle = serde_json::from_str(&fixture("qbm_pde_oracle.json")).unwrap();
    let steps = 4900;
    let traj = propagate_gaussian(&oracle.params, &oracle.initial, oracle.t0, oracle.t1, steps).unwrap();
    let h = (oracle.t1 - oracle.t0) / steps as f64;
    let field = |s: &GaussianState| [s.mean_x, s.mean_p, s.cov_xx, s.cov_xp, s.cov_pp];
    let peaks: Vec<f64> = (0..5)
        .map(|k| oracle.moments.iter().map(|m| field(&m.state)[k].abs()).fold(0.0, f64::max))
        .collect();
    for m in &oracle.moments {
        let i = ((m.t - oracle.t0) / h).round() as usize;
        assert!((traj[i].t - m.t).abs() < 1e-9);
        let (a, b) = (field(&traj[i].state), field(&m.state));
        for k in 0..5 {
            assert!((a[k] - b[k]).abs() <= 0.01 * peaks[k], "t = {}, moment {k}: {} vs {}", m.t, a[k], b[k]);
        }
    }
}

#[test]
fn envelope_decays_at_four_gamma0() {
    let params = base();
    let grid: Vec<f64> = (1..=8000).map(|i| i as f64 * 0.005).collect();
    let report = envelope_check(&params, &grid).unwrap();
    let rate = report.decay_rate.unwrap();
    assert!((rate - 0.4).abs() <= 0.05 * 0.4, "{report:?}");
    assert!(report.bound_holds, "{report:?}");
}

#[test]
fn crossing_time_decreases_with_damping() {
    let grid: Vec<f64> = (1..=20000).map(|i| i as f64 * 0.005).collect();
    let mut last = f64::INFINITY;
    for gamma0 in [0.05, 0.1, 0.2, 0.3] {
        let params = base().with_gamma0(gamma0).unwrap();
        let t = envelope_check(&params, &grid).unwrap().crossing_time.unwrap();
        assert!(t < last, "gamma0 = {gamma0}: {t} ≥ {last}");
        last = t;
    }
}

#[test]
fn unsqueezed_constant_diffusion() {
    let params = base().with_squeezing(0.0, 0.0).unwrap();
    let first = coeffs(&params, 0.37).unwrap();
    for i in 1..200 {
        let c = coeffs(&params, i as f64 * 0.173).unwrap();
        assert_eq!(c, first);
    }
    assert_eq!(first.gamma, 0.2);
    assert_eq!(first.dpp, -params.thermal_scale());
}
