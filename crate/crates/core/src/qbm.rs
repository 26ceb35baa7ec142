//! Oscillator in a squeezed thermal Ohmic bath: high-temperature Wigner
//! coefficients and Gaussian moment propagation under the Wigner equation
//!
//! `∂W/∂t = −(1/M)∂ₓ(pW) + MΩ²_ren ∂ₚ(xW) + 2Γ ∂ₚ(pW)
//!          − ħD_pp ∂ₚ²W − ħ(D_xp + D_px) ∂ₓ∂ₚW − ħD_xx ∂ₓ²W`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default guard on `|sin(ζt)|`.
pub const SIN_GUARD: f64 = 1e-6;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct QbmParams {
    m: f64,
    omega: f64,
    gamma0: f64,
    temperature: f64,
    r: f64,
    a: f64,
    hbar: f64,
    kb: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "Omega")]
    omega: f64,
    gamma0: f64,
    #[serde(rename = "T")]
    temperature: f64,
    r: f64,
    a: f64,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(rename = "kB", default = "one")]
    kb: f64,
}

impl TryFrom<RawParams> for QbmParams {
    type Error = Error;
    fn try_from(p: RawParams) -> Result<Self> {
        QbmParams::new(p.m, p.omega, p.gamma0, p.temperature, p.r, p.a)?.with_units(p.hbar, p.kb)
    }
}

impl From<QbmParams> for RawParams {
    fn from(p: QbmParams) -> Self {
        RawParams {
            m: p.m,
            omega: p.omega,
            gamma0: p.gamma0,
            temperature: p.temperature,
            r: p.r,
            a: p.a,
            hbar: p.hbar,
            kb: p.kb,
        }
    }
}

impl QbmParams {
    /// Units default to `ħ = k_B = 1`. Only the underdamped regime
    /// `Ω > 2γ₀` is accepted.
    pub fn new(m: f64, omega: f64, gamma0: f64, temperature: f64, r: f64, a: f64) -> Result<Self> {
        let all = [m, omega, gamma0, temperature, r, a];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("QBM parameters must be finite".into()));
        }
        if m <= 0.0 || gamma0 <= 0.0 || temperature <= 0.0 || r < 0.0 {
            return Err(Error::InvalidParameter("need M > 0, gamma0 > 0, T > 0 and r ≥ 0".into()));
        }
        if omega <= 2.0 * gamma0 {
            return Err(Error::Overdamped { omega, two_gamma0: 2.0 * gamma0 });
        }
        Ok(QbmParams { m, omega, gamma0, temperature, r, a, hbar: 1.0, kb: 1.0 })
    }

    pub fn with_units(mut self, hbar: f64, kb: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0 && kb.is_finite() && kb > 0.0) {
            return Err(Error::InvalidParameter("hbar and kB must be positive".into()));
        }
        self.hbar = hbar;
        self.kb = kb;
        Ok(self)
    }

    pub fn with_squeezing(self, r: f64, a: f64) -> Result<Self> {
        QbmParams::new(self.m, self.omega, self.gamma0, self.temperature, r, a)?.with_units(self.hbar, self.kb)
    }

    pub fn with_gamma0(self, gamma0: f64) -> Result<Self> {
        QbmParams::new(self.m, self.omega, gamma0, self.temperature, self.r, self.a)?.with_units(self.hbar, self.kb)
    }

    pub fn with_temperature(self, temperature: f64) -> Result<Self> {
        QbmParams::new(self.m, self.omega, self.gamma0, temperature, self.r, self.a)?.with_units(self.hbar, self.kb)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    /// `p = 4γ₀`.
    pub fn p(&self) -> f64 {
        4.0 * self.gamma0
    }

    /// `ζ = (Ω² − p²/4)^{1/2}`.
    pub fn zeta(&self) -> f64 {
        let p = self.p();
        (self.omega * self.omega - p * p / 4.0).sqrt()
    }

    /// Magnitude of the unsqueezed diffusion `2Mk_BTγ₀/ħ`.
    pub fn thermal_scale(&self) -> f64 {
        2.0 * self.m * self.kb * self.temperature * self.gamma0 / self.hbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerCoeffs {
    pub omega_ren_sq: f64,
    pub gamma: f64,
    pub dxx: f64,
    pub dxp: f64,
    pub dpx: f64,
    pub dpp: f64,
}

pub fn coeffs(params: &QbmParams, t: f64) -> Result<WignerCoeffs> {
    coeffs_with_guard(params, t, SIN_GUARD)
}

/// High-temperature coefficients, with `K₁ = cosh 2r` and `K̄₂ = sinh 2r`.
pub fn coeffs_with_guard(params: &QbmParams, t: f64, sin_guard: f64) -> Result<WignerCoeffs> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!("time must be positive, got {t}")));
    }
    let QbmParams { m, gamma0, temperature, r, a, hbar, kb, .. } = *params;
    let p = params.p();
    let zeta = params.zeta();
    let sin_zt = (zeta * t).sin();
    if sin_zt.abs() <= sin_guard {
        return Err(Error::NearResonance { t, sin: sin_zt });
    }
    let k1 = (2.0 * r).cosh();
    let k2 = (2.0 * r).sinh();
    let decay = (-p * (t - a)).exp();
    let sin_shift = (zeta * (t - 2.0 * a)).sin();
    let envelope = k2 * decay * sin_zt * sin_shift;
    let kt = kb * temperature * gamma0;

    let dxx = 2.0 * kt / (hbar * m * zeta * zeta) * envelope;
    let dxp = 2.0 * kt / (hbar * zeta * zeta) * (zeta * (zeta * t).cos() / sin_zt - p / 2.0) * envelope;
    let bracket = (zeta * t).cos().powi(2) + p * p / (4.0 * zeta * zeta) * sin_zt.powi(2)
        - p / (2.0 * zeta) * (2.0 * zeta * t).sin()
        - 1.0;
    let dpp = -2.0 * m * kt / hbar * (k1 - k2 * decay * bracket * sin_shift / sin_zt);
    Ok(WignerCoeffs { omega_ren_sq: p * p / 4.0 + zeta * zeta, gamma: p / 2.0, dxx, dxp, dpx: dxp, dpp })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    /// True when `r = 0` and every squeezing term vanishes.
    pub trivial: bool,
    /// Decay rate from a log-linear fit of per-period maxima of `|D_xx|`.
    pub decay_rate: Option<f64>,
    pub c_xx: f64,
    pub c_xp: f64,
    /// Whether `|D_xx|, |D_xp| ≤ C·e^{−p(t−a)}` held on the grid, with 1% slack.
    pub bound_holds: bool,
    /// First grid time after which `max(|D_xx|, |D_xp|)` stays below 1% of
    /// the thermal `|D_pp|`.
    pub crossing_time: Option<f64>,
    pub skipped_points: usize,
}

/// Checks the `e^{−p(t−a)}` decay of the squeezing-induced terms on `t_grid`.
///
/// Points within the resonance guard are skipped. The constants `C` are the
/// maxima of `|D|·e^{p(t−a)}` over the first period `2π/ζ` of the grid.
pub fn envelope_check(params: &QbmParams, t_grid: &[f64]) -> Result<EnvelopeReport> {
    let mut samples = Vec::with_capacity(t_grid.len());
    let mut skipped = 0;
    for &t in t_grid {
        match coeffs(params, t) {
            Ok(c) => samples.push((t, c)),
            Err(Error::NearResonance { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if samples.len() < 2 {
        return Err(Error::WindowTooNarrow { usable: samples.len(), required: 2 });
    }
    let threshold = 0.01 * params.thermal_scale() * (2.0 * params.r).cosh();
    let squeeze_mag = |c: &WignerCoeffs| c.dxx.abs().max(c.dxp.abs());
    let crossing_time = match samples.iter().rposition(|(_, c)| squeeze_mag(c) >= threshold) {
        None => Some(samples[0].0),
        Some(i) if i + 1 < samples.len() => Some(samples[i + 1].0),
        Some(_) => None,
    };
    if params.r == 0.0 {
        return Ok(EnvelopeReport {
            trivial: true,
            decay_rate: None,
            c_xx: 0.0,
            c_xp: 0.0,
            bound_holds: true,
            crossing_time,
            skipped_points: skipped,
        });
    }

    let p = params.p();
    let zeta = params.zeta();
    let t0 = samples[0].0;
    let scaled = |t: f64, d: f64| d.abs() * (p * (t - params.a)).exp();
    let first: Vec<_> = samples.iter().filter(|(t, _)| *t < t0 + 2.0 * std::f64::consts::PI / zeta).collect();
    let c_xx = first.iter().map(|(t, c)| scaled(*t, c.dxx)).fold(0.0, f64::max);
    let c_xp = first.iter().map(|(t, c)| scaled(*t, c.dxp)).fold(0.0, f64::max);
    let bound_holds = samples.iter().all(|(t, c)| {
        let env = (-p * (t - params.a)).exp();
        c.dxx.abs() <= 1.01 * c_xx * env && c.dxp.abs() <= 1.01 * c_xp * env
    });

    let period = std::f64::consts::PI / zeta;
    let t_end = samples.last().map_or(t0, |s| s.0);
    let mut peaks = Vec::new();
    let mut start = t0;
    while start + period <= t_end {
        let best = samples
            .iter()
            .filter(|(t, _)| *t >= start && *t < start + period)
            .max_by(|x, y| x.1.dxx.abs().total_cmp(&y.1.dxx.abs()));
        if let Some((t, c)) = best {
            if c.dxx != 0.0 {
                peaks.push((*t, c.dxx.abs().ln()));
            }
        }
        start += period;
    }
    let decay_rate = (peaks.len() >= 2).then(|| {
        let n = peaks.len() as f64;
        let mt = peaks.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = peaks.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = peaks.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
        let sxx: f64 = peaks.iter().map(|p| (p.0 - mt).powi(2)).sum();
        -sxy / sxx
    });
    Ok(EnvelopeReport { trivial: false, decay_rate, c_xx, c_xp, bound_holds, crossing_time, skipped_points: skipped })
}

/// Means and covariances of a Gaussian Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub mean_x: f64,
    pub mean_p: f64,
    pub cov_xx: f64,
    pub cov_xp: f64,
    pub cov_pp: f64,
}

impl GaussianState {
    pub fn new(mean_x: f64, mean_p: f64, cov_xx: f64, cov_xp: f64, cov_pp: f64) -> Result<Self> {
        let s = GaussianState { mean_x, mean_p, cov_xx, cov_xp, cov_pp };
        if s.as_array().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Gaussian state"));
        }
        if cov_xx <= 0.0 || s.det() <= 0.0 {
            return Err(Error::InvalidParameter("covariance must be positive definite".into()));
        }
        Ok(s)
    }

    pub fn det(&self) -> f64 {
        self.cov_xx * self.cov_pp - self.cov_xp * self.cov_xp
    }

    /// Uncertainty indicator `det σ ≥ (ħ/2)²`.
    pub fn is_physical(&self, hbar: f64) -> bool {
        self.det() >= 0.25 * hbar * hbar
    }

    fn as_array(&self) -> [f64; 5] {
        [self.mean_x, self.mean_p, self.cov_xx, self.cov_xp, self.cov_pp]
    }

    fn from_array(a: [f64; 5]) -> Self {
        GaussianState { mean_x: a[0], mean_p: a[1], cov_xx: a[2], cov_xp: a[3], cov_pp: a[4] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub t: f64,
    #[serde(flatten)]
    pub state: GaussianState,
}

fn moment_rhs(params: &QbmParams, t: f64, y: &[f64; 5]) -> Result<[f64; 5]> {
    let c = coeffs(params, t)?;
    let (m, hbar) = (params.m, params.hbar);
    let w2 = c.omega_ren_sq;
    let [x, p, sxx, sxp, spp] = *y;
    Ok([
        p / m,
        -m * w2 * x - 2.0 * c.gamma * p,
        2.0 * sxp / m - 2.0 * hbar * c.dxx,
        spp / m - m * w2 * sxx - 2.0 * c.gamma * sxp - hbar * (c.dxp + c.dpx),
        -2.0 * m * w2 * sxp - 4.0 * c.gamma * spp - 2.0 * hbar * c.dpp,
    ])
}

/// Integrates the moment equations with `steps` fixed RK4 steps.
///
/// The trajectory includes both end points.
pub fn propagate_gaussian(
    params: &QbmParams,
    initial: &GaussianState,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if !(t0 > 0.0 && t1 > t0 && t1.is_finite()) || steps == 0 {
        return Err(Error::InvalidParameter("need 0 < t0 < t1 and steps ≥ 1".into()));
    }
    let h = (t1 - t0) / steps as f64;
    let mut y = initial.as_array();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(TrajectoryPoint { t: t0, state: *initial });
    let size = |y: &[f64; 5]| y.iter().map(|v| v.abs()).sum::<f64>();
    let axpy = |y: &[f64; 5], k: &[f64; 5], s: f64| std::array::from_fn::<f64, 5, _>(|i| y[i] + s * k[i]);
    for i in 0..steps {
        let t = t0 + h * i as f64;
        let k1 = moment_rhs(params, t, &y)?;
        let k2 = moment_rhs(params, t + h / 2.0, &axpy(&y, &k1, h / 2.0))?;
        let k3 = moment_rhs(params, t + h / 2.0, &axpy(&y, &k2, h / 2.0))?;
        let k4 = moment_rhs(params, t + h, &axpy(&y, &k3, h))?;
        let next: [f64; 5] = std::array::from_fn(|j| y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        let before = size(&y).max(f64::MIN_POSITIVE);
        if !next.iter().all(|v| v.is_finite()) || size(&next) > 1e3 * before {
            return Err(Error::StepTooLarge { t });
        }
        y = next;
        out.push(TrajectoryPoint { t: t0 + h * (i + 1) as f64, state: GaussianState::from_array(y) });
    }
    Ok(out)
}
