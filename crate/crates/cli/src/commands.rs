use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use canonfock::cjson;
use canonfock::decoherence::{self, BathSqueezing, CouplingFamily, Reference};
use canonfock::fockoracle::{oracle_compare_with_cap, OracleCase, OracleReport};
use canonfock::fockrep::{self, UltracoherentVector, WeylDisplacement};
use canonfock::linops::{self, C64};
use canonfock::qbm::{self, GaussianState, QbmParams};
use canonfock::random::CaseRng;
use canonfock::symplectic::{reduce_to_single_modes, SqueezeGenerator, SymplecticPair};
use canonfock::tol;

use crate::output::{csv, json_doc, CliError};
use crate::Run;

type Out = Result<String, CliError>;

fn parse<T: DeserializeOwned>(run: &Run) -> Result<T, CliError> {
    if run.config.is_null() {
        return Err(CliError::Validation(format!("{} needs --config", run.command)));
    }
    serde_json::from_value(run.config.clone()).map_err(|e| CliError::Validation(format!("config: {e}")))
}

fn pair_json(z: C64) -> Value {
    json!(cjson::to_pair(z))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomPairs {
    count: usize,
    modes: usize,
    #[serde(default = "default_squeeze")]
    max_squeeze: f64,
}

fn default_squeeze() -> f64 {
    0.5
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CanonInput {
    Random { random: RandomPairs },
    Pair(SymplecticPair),
}

pub fn canon_check(run: &Run) -> Out {
    match parse::<CanonInput>(run)? {
        CanonInput::Pair(pair) => {
            let tol = run.tol.unwrap_or_else(|| tol::canonical(pair.modes()));
            let res = pair.residuals();
            Ok(json_doc(
                run,
                json!({
                    "canonical": res.max() <= tol,
                    "tol": tol,
                    "modes": pair.modes(),
                    "residuals": res,
                    "max_residual": res.max(),
                }),
            ))
        }
        CanonInput::Random { random } => {
            if random.modes == 0 || random.count == 0 {
                return Err(CliError::Validation("random pairs need modes ≥ 1 and count ≥ 1".into()));
            }
            let tol = run.tol.unwrap_or_else(|| tol::canonical(random.modes));
            let mut rng = CaseRng::new(run.seed);
            let pairs: Vec<_> =
                (0..random.count).map(|_| rng.canonical(random.modes, random.max_squeeze).pair).collect();
            let rows: Vec<Vec<f64>> = pairs
                .par_iter()
                .enumerate()
                .map(|(i, p)| {
                    let r = p.residuals().max();
                    vec![i as f64, r, f64::from(u8::from(r <= tol))]
                })
                .collect();
            Ok(csv(run, "dimensionless", &["index", "max_residual", "canonical"], &rows))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SqueezeInput {
    #[serde(rename = "Xi", with = "cjson::matrix")]
    xi: linops::CMatrix,
}

pub fn squeeze(run: &Run) -> Out {
    let input: SqueezeInput = parse(run)?;
    let xi = SqueezeGenerator::new(input.xi)?;
    let (phi, d) = reduce_to_single_modes(&xi)?;
    let rebuilt = canonfock::symplectic::conjugate_squeeze(
        &canonfock::RotationGenerator::new(-phi.psi())?,
        &SqueezeGenerator::diagonal(&d),
    )?;
    let residual = linops::max_abs(&(rebuilt.xi() - xi.xi()));
    let vacuum = fockrep::squeeze_vacuum(&xi)?;
    Ok(json_doc(
        run,
        json!({
            "takagi_values": d,
            "rotation": phi,
            "reconstruction_residual": residual,
            "squeezed_vacuum": vacuum,
            "norm": fockrep::norm(&vacuum)?,
        }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OverlapInput {
    left: UltracoherentVector,
    right: UltracoherentVector,
}

pub fn overlap(run: &Run) -> Out {
    let input: OverlapInput = parse(run)?;
    let log = fockrep::log_inner(&input.left, &input.right)?;
    let (nl, nr) = (fockrep::norm(&input.left)?, fockrep::norm(&input.right)?);
    Ok(json_doc(
        run,
        json!({
            "inner": pair_json(log.exp()),
            "log_inner": pair_json(log),
            "norm_left": nl,
            "norm_right": nr,
            "normalized_overlap": (log.re - nl.ln() - nr.ln()).exp(),
        }),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct Suite {
    count: usize,
    max_modes: usize,
    max_squeeze: f64,
    max_norm: f64,
}

impl Default for Suite {
    fn default() -> Self {
        Suite { count: 20, max_modes: 2, max_squeeze: 0.5, max_norm: 1.0 }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OracleInput {
    Single(OracleCase),
    Suite { suite: Suite },
}

/// Cases cycle through transform, Weyl, inner product and squeezed vacuum.
fn suite_cases(suite: &Suite, seed: u64) -> Vec<OracleCase> {
    let mut rng = CaseRng::new(seed);
    (0..suite.count)
        .map(|i| {
            let n = 1 + (rng.uniform(0.0, 1.0) * suite.max_modes as f64) as usize;
            let n = n.min(suite.max_modes);
            match i % 4 {
                0 => {
                    let s = rng.canonical(n, suite.max_squeeze);
                    let state = UltracoherentVector::exponential(rng.vector(n, suite.max_norm)).expect("finite");
                    OracleCase::Transform { outer: s.outer, squeeze: s.squeeze, inner: s.inner, state }
                }
                1 => {
                    let h = WeylDisplacement::new(rng.vector(n, suite.max_norm)).expect("finite");
                    OracleCase::Weyl { h, state: rng.ultracoherent(n, 0.3, 0.5 * suite.max_norm) }
                }
                2 => OracleCase::Inner {
                    left: rng.ultracoherent(n, 0.5, suite.max_norm),
                    right: rng.ultracoherent(n, 0.5, suite.max_norm),
                },
                _ => {
                    let r = rng.uniform(0.0, suite.max_squeeze);
                    OracleCase::SqueezeVacuum { squeeze: rng.squeeze_generator(n, r) }
                }
            }
        })
        .collect()
}

pub fn oracle_compare(run: &Run) -> Out {
    let tol = run.tol.unwrap_or(1e-6);
    let cases = if run.config.is_null() {
        suite_cases(&Suite::default(), run.seed)
    } else {
        match parse::<OracleInput>(run)? {
            OracleInput::Single(case) => vec![case],
            OracleInput::Suite { suite } => {
                if suite.count == 0 || suite.max_modes == 0 {
                    return Err(CliError::Validation("suite needs count ≥ 1 and max_modes ≥ 1".into()));
                }
                suite_cases(&suite, run.seed)
            }
        }
    };
    let reports: Vec<OracleReport> = cases
        .par_iter()
        .map(|c| oracle_compare_with_cap(c, run.cutoff, run.max_dim))
        .collect::<Result<_, _>>()?;
    let max_overlap = reports.iter().map(|r| r.overlap_error).fold(0.0, f64::max);
    let max_norm = reports.iter().map(|r| r.norm_error).fold(0.0, f64::max);
    Ok(json_doc(
        run,
        json!({
            "cases": reports.len(),
            "cutoff": run.cutoff,
            "tol": tol,
            "max_overlap_error": max_overlap,
            "max_norm_error": max_norm,
            "pass": max_overlap <= tol && max_norm <= tol,
            "reports": reports,
        }),
    ))
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "snake_case")]
enum Spacing {
    Linear,
    Log,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeGrid {
    min: f64,
    max: f64,
    n: usize,
    spacing: Option<Spacing>,
}

impl TimeGrid {
    fn points(&self, default: Spacing) -> Result<Vec<f64>, CliError> {
        if !(self.min > 0.0 && self.max >= self.min && self.max.is_finite() && self.n >= 1) {
            return Err(CliError::Validation("time grid needs 0 < min ≤ max and n ≥ 1".into()));
        }
        if self.n == 1 {
            return Ok(vec![self.min]);
        }
        let step = |i: usize| i as f64 / (self.n - 1) as f64;
        Ok(match self.spacing.unwrap_or(default) {
            Spacing::Linear => (0..self.n).map(|i| self.min + (self.max - self.min) * step(i)).collect(),
            Spacing::Log => decoherence::log_times(self.min, self.max, self.n),
        })
    }
}

#[derive(Deserialize, Clone, Copy, PartialEq)]
#[serde(rename_all = "snake_case")]
enum ReferenceKind {
    Vacuum,
    Thermal,
    SqueezedVacuum,
    SqueezedThermal,
}

/// Mode-local squeezing `ξ(ω) = (r + r_slope·ω)·e^{iθ_slope·ω}`.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum BathXi {
    Diagonal {
        #[serde(default)]
        r: f64,
        #[serde(default)]
        r_slope: f64,
        #[serde(default)]
        theta_slope: f64,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VanhoveInput {
    #[serde(default)]
    family: CouplingFamily,
    reference: ReferenceKind,
    #[serde(default)]
    beta: f64,
    #[serde(rename = "Xi")]
    xi: Option<BathXi>,
    #[serde(default = "one")]
    dalpha: f64,
    t: TimeGrid,
}

fn one() -> f64 {
    1.0
}

pub fn vanhove(run: &Run) -> Out {
    let input: VanhoveInput = parse(run)?;
    let grid = input.family.grid(input.beta)?;
    let squeeze = match input.xi {
        None => BathSqueezing::diagonal(&vec![0.0; grid.len()]),
        Some(BathXi::Diagonal { r, r_slope, theta_slope }) => BathSqueezing::Diagonal(
            grid.omegas().iter().map(|w| C64::from_polar(r + r_slope * w, theta_slope * w)).collect(),
        ),
    };
    let reference = match input.reference {
        ReferenceKind::Vacuum => Reference::Vacuum,
        ReferenceKind::Thermal => Reference::Thermal,
        ReferenceKind::SqueezedVacuum => Reference::SqueezedVacuum(squeeze.clone()),
        ReferenceKind::SqueezedThermal => Reference::SqueezedThermal(squeeze.clone()),
    };
    let times = input.t.points(Spacing::Log)?;
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            Ok(vec![
                t,
                decoherence::norm_kt_sq(&grid, t)?,
                decoherence::squeezed_norm_sq(&grid, t, &squeeze, input.dalpha)?,
                decoherence::chi_magnitude(&grid, t, input.dalpha, &reference)?,
            ])
        })
        .collect::<Result<_, canonfock::Error>>()?;
    Ok(csv(
        run,
        "hbar = 1; t in inverse frequency units; squeezed_norm_sq includes dalpha^2",
        &["t", "norm_kt_sq", "squeezed_norm_sq", "chi"],
        &rows,
    ))
}

fn qbm_units(p: &QbmParams) -> String {
    format!("hbar = {}, kB = {}, M = {}; t, 1/Omega and 1/gamma0 share one time unit", p.hbar(), p.kb(), p.m())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffsInput {
    params: QbmParams,
    t: TimeGrid,
}

pub fn qbm_coeffs(run: &Run) -> Out {
    let input: CoeffsInput = parse(run)?;
    let times = input.t.points(Spacing::Linear)?;
    let rows: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let c = qbm::coeffs(&input.params, t)?;
            Ok(vec![t, c.omega_ren_sq, c.gamma, c.dxx, c.dxp, c.dpx, c.dpp])
        })
        .collect::<Result<_, canonfock::Error>>()?;
    Ok(csv(
        run,
        &qbm_units(&input.params),
        &["t", "omega_ren_sq", "gamma", "dxx", "dxp", "dpx", "dpp"],
        &rows,
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvolveInput {
    params: QbmParams,
    initial: GaussianState,
    t0: f64,
    t1: f64,
    steps: usize,
    #[serde(default = "one_usize")]
    stride: usize,
}

fn one_usize() -> usize {
    1
}

pub fn qbm_evolve(run: &Run) -> Out {
    let input: EvolveInput = parse(run)?;
    if input.stride == 0 {
        return Err(CliError::Validation("stride must be ≥ 1".into()));
    }
    let initial = GaussianState::new(
        input.initial.mean_x,
        input.initial.mean_p,
        input.initial.cov_xx,
        input.initial.cov_xp,
        input.initial.cov_pp,
    )?;
    let traj = qbm::propagate_gaussian(&input.params, &initial, input.t0, input.t1, input.steps)?;
    let rows: Vec<Vec<f64>> = traj
        .iter()
        .enumerate()
        .filter(|(i, _)| i % input.stride == 0 || *i == traj.len() - 1)
        .map(|(_, p)| {
            let s = p.state;
            vec![p.t, s.mean_x, s.mean_p, s.cov_xx, s.cov_xp, s.cov_pp]
        })
        .collect();
    Ok(csv(
        run,
        &qbm_units(&input.params),
        &["t", "mean_x", "mean_p", "cov_xx", "cov_xp", "cov_pp"],
        &rows,
    ))
}
