//! Adaptive integration of `φ̇ = ∂H/∂r, ṙ = -∂H/∂φ` with an energy monitor,
//! plus escape sweeps and the explicit level orbit of `(1 + sin φ) r² - r³`.

mod dopri;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{AngleActionState, DegeneratePair, HalfPowerSeries};
use dopri::{step, Y};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step magnitude before giving up.
    pub h_min: f64,
    pub max_steps: usize,
    /// Largest accepted per-step change of the normalized energy.
    pub drift_spike: f64,
    /// Stop once `r` exceeds this radius.
    pub escape_radius: Option<f64>,
    /// Keep every accepted step in the trajectory.
    pub store_samples: bool,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            h_min: 1e-12,
            max_steps: 5_000_000,
            drift_spike: 1e-9,
            escape_radius: None,
            store_samples: true,
        }
    }
}

impl StepControl {
    /// Settings for long escape sweeps: one decade tighter in `rtol` so the
    /// drift stays under `1e-8` over `T = 1e4`, and no stored samples.
    pub fn escape() -> Self {
        Self { rtol: 1e-11, store_samples: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Final state (always present, even when samples are not stored).
    pub last: Sample,
    pub h0: f64,
    /// `max |H - H(0)|`.
    pub drift: f64,
    /// `drift` divided by the energy scale `max(|H0|, Σ ‖ψ_j‖₁ r^{j/2})`.
    pub drift_relative: f64,
    pub max_r: f64,
    pub escaped: bool,
    pub escape_time: Option<f64>,
    /// Integration stopped because `r` reached 0.
    pub hit_origin: bool,
    pub accepted: usize,
    pub rejected: usize,
}

impl Trajectory {
    /// CSV with header `t,r,phi,H`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,r,phi,H\n");
        for s in &self.samples {
            writeln!(out, "{},{},{},{}", s.t, s.r, s.phi, s.h).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("initial action must be positive, got {0}")]
    InvalidInitial(f64),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64, partial: Box<Trajectory> },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64, partial: Box<Trajectory> },
}

impl SimError {
    pub fn partial(&self) -> Option<&Trajectory> {
        match self {
            SimError::StepUnderflow { partial, .. } | SimError::TooManySteps { partial, .. } => Some(partial),
            SimError::InvalidInitial(_) => None,
        }
    }
}

/// Energy scale used to normalize drift: `max(|H0|, Σ ‖ψ_j‖₁ r^{j/2})`.
fn energy_scale(h: &HalfPowerSeries, r: f64, h0: f64) -> f64 {
    let s: f64 = h.terms().map(|(j, p)| p.l1_norm() * r.powf(0.5 * j as f64)).sum();
    s.max(h0.abs()).max(f64::MIN_POSITIVE)
}

struct Driver<'a, F: Fn(f64, Y) -> Y, E: Fn(Y) -> f64> {
    rhs: F,
    energy: E,
    scale: &'a dyn Fn(Y) -> f64,
    ctrl: StepControl,
}

impl<F: Fn(f64, Y) -> Y, E: Fn(Y) -> f64> Driver<'_, F, E> {
    /// Integrates from `y0` over `[0, t_end]` (either sign). `stop` ends the
    /// run early after an accepted step.
    fn run(&self, y0: Y, t_end: f64, stop: impl Fn(Y) -> bool) -> Result<Trajectory, SimError> {
        let dir = if t_end < 0.0 { -1.0 } else { 1.0 };
        let c = &self.ctrl;
        let h0 = (self.energy)(y0);
        let mut tr = Trajectory {
            samples: Vec::new(),
            last: Sample { t: 0.0, r: y0[1], phi: y0[0], h: h0 },
            h0,
            drift: 0.0,
            drift_relative: 0.0,
            max_r: y0[1],
            escaped: false,
            escape_time: None,
            hit_origin: false,
            accepted: 0,
            rejected: 0,
        };
        if c.store_samples {
            tr.samples.push(tr.last);
        }
        let (mut t, mut y) = (0.0, y0);
        let mut k = (self.rhs)(t, y);
        let mut e_prev = h0;
        // initial step from the slope magnitude
        let speed = (k[0].abs() + k[1].abs() / y[1].max(f64::MIN_POSITIVE)).max(1e-300);
        let mut h = dir * (1e-3 / speed).min(t_end.abs()).max(c.h_min);
        let norm = |e: Y, a: Y, b: Y| -> f64 {
            let s0 = c.atol + c.rtol * a[0].abs().max(b[0].abs()).max(1.0);
            let s1 = c.atol + c.rtol * a[1].abs().max(b[1].abs());
            (e[0] / s0).abs().max((e[1] / s1).abs())
        };
        while dir * (t_end - t) > 0.0 {
            if tr.accepted + tr.rejected >= c.max_steps {
                return Err(SimError::TooManySteps { t, partial: Box::new(tr) });
            }
            if dir * (t + h - t_end) > 0.0 {
                h = t_end - t;
            }
            let (y1, k1, err) = step(&self.rhs, t, y, k, h);
            let en = norm(err, y, y1);
            let ok_err = en <= 1.0 && y1[1] >= 0.0 && y1.iter().all(|v| v.is_finite());
            let mut ok = ok_err;
            let mut e1 = e_prev;
            if ok {
                e1 = (self.energy)(y1);
                let jump = (e1 - e_prev).abs() / (self.scale)(y1);
                if jump > c.drift_spike && h.abs() > c.h_min {
                    ok = false;
                }
            }
            if !ok {
                tr.rejected += 1;
                let shrink = if ok_err { 0.5 } else { (0.9 * en.powf(-0.2)).clamp(0.1, 0.5) };
                let shrink = if en.is_finite() { shrink } else { 0.1 };
                h *= shrink;
                if h.abs() < c.h_min {
                    // r reaching zero is a boundary event, not an integrator failure
                    if y[1] < 1e-12 {
                        tr.hit_origin = true;
                        break;
                    }
                    return Err(SimError::StepUnderflow { t, partial: Box::new(tr) });
                }
                continue;
            }
            t += h;
            y = y1;
            k = k1;
            e_prev = e1;
            tr.accepted += 1;
            tr.drift = tr.drift.max((e1 - h0).abs());
            tr.drift_relative = tr.drift_relative.max((e1 - h0).abs() / (self.scale)(y));
            tr.max_r = tr.max_r.max(y[1]);
            tr.last = Sample { t, r: y[1], phi: y[0], h: e1 };
            if c.store_samples {
                tr.samples.push(tr.last);
            }
            if let Some(eps) = c.escape_radius {
                if y[1] > eps {
                    tr.escaped = true;
                    tr.escape_time = Some(t);
                    break;
                }
            }
            if y[1] == 0.0 {
                tr.hit_origin = true;
                break;
            }
            if stop(y) {
                break;
            }
            let grow = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        }
        Ok(tr)
    }
}

/// Integrates the Hamiltonian flow from `init` over `[0, horizon]`
/// (a negative horizon integrates backward).
pub fn integrate(h: &HalfPowerSeries, init: AngleActionState, horizon: f64, ctrl: &StepControl) -> Result<Trajectory, SimError> {
    if init.r.is_nan() || init.r <= 0.0 {
        return Err(SimError::InvalidInitial(init.r));
    }
    let h0 = h.eval(init).expect("r > 0");
    let scale = |y: Y| energy_scale(h, y[1].max(0.0), h0);
    let d = Driver {
        rhs: |_t: f64, y: Y| {
            let s = AngleActionState::new(y[1].max(0.0), y[0]);
            [h.partial_r(s).expect("r >= 0"), -h.partial_phi(s).expect("r >= 0")]
        },
        energy: |y: Y| h.eval(AngleActionState::new(y[1].max(0.0), y[0])).expect("r >= 0"),
        scale: &scale,
        ctrl: *ctrl,
    };
    d.run([init.phi, init.r], horizon, |_| false)
}

/// The zero level of `(1 + sin φ) r² - r³` is `r = 1 + sin φ`; on it the flow
/// reduces to `φ̇ = -(1 + sin φ)²`, `ṙ = -r² cos φ`. Starts at
/// `φ = -π/2 - μ`, `r = 2 sin²(μ/2)` and runs until `φ` reaches `-π`
/// (`r = 1`) or `horizon` elapses. The `H` column holds the level-set
/// defect `r - (1 + sin φ)`.
pub fn level_orbit(mu: f64, horizon: f64, ctrl: &StepControl) -> Result<Trajectory, SimError> {
    let init = [-FRAC_PI_2 - mu, 2.0 * (0.5 * mu).sin().powi(2)];
    let scale = |_y: Y| 1.0;
    let d = Driver {
        rhs: |_t: f64, y: Y| [-(1.0 + y[0].sin()).powi(2), -y[1] * y[1] * y[0].cos()],
        energy: |y: Y| y[1] - (1.0 + y[0].sin()),
        scale: &scale,
        ctrl: *ctrl,
    };
    d.run(init, horizon, |y| y[0] <= -PI)
}

/// Default horizon for [`level_orbit`]: ample for `μ ≥ 0.05`.
pub const LEVEL_ORBIT_HORIZON: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeRecord {
    pub r0: f64,
    pub phi0: f64,
    pub escaped: bool,
    pub escape_time: Option<f64>,
    pub max_r: f64,
    pub drift_relative: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeSummary {
    pub epsilon: f64,
    pub horizon: f64,
    pub total: usize,
    pub escapes: usize,
    pub failures: usize,
    pub max_drift_relative: f64,
    pub first_escape_time: Option<f64>,
    pub records: Vec<EscapeRecord>,
}

/// Integrates every initial condition (in parallel) until `r > epsilon` or
/// `horizon`.
pub fn escape_experiment(
    h: &HalfPowerSeries,
    epsilon: f64,
    inits: &[AngleActionState],
    horizon: f64,
    ctrl: &StepControl,
) -> EscapeSummary {
    let ctrl = StepControl { escape_radius: Some(epsilon), store_samples: false, ..*ctrl };
    let records: Vec<EscapeRecord> = inits
        .par_iter()
        .map(|s| match integrate(h, *s, horizon, &ctrl) {
            Ok(t) => EscapeRecord {
                r0: s.r,
                phi0: s.phi,
                escaped: t.escaped,
                escape_time: t.escape_time,
                max_r: t.max_r,
                drift_relative: t.drift_relative,
                error: None,
            },
            Err(e) => {
                let p = e.partial();
                EscapeRecord {
                    r0: s.r,
                    phi0: s.phi,
                    escaped: p.is_some_and(|p| p.escaped),
                    escape_time: p.and_then(|p| p.escape_time),
                    max_r: p.map_or(s.r, |p| p.max_r),
                    drift_relative: p.map_or(0.0, |p| p.drift_relative),
                    error: Some(e.to_string()),
                }
            }
        })
        .collect();
    EscapeSummary {
        epsilon,
        horizon,
        total: records.len(),
        escapes: records.iter().filter(|r| r.escaped).count(),
        failures: records.iter().filter(|r| r.error.is_some()).count(),
        max_drift_relative: records.iter().map(|r| r.drift_relative).fold(0.0, f64::max),
        first_escape_time: records.iter().filter_map(|r| r.escape_time).min_by(f64::total_cmp),
        records,
    }
}

/// `angles × radii` initial conditions: equispaced angles, radii spaced
/// geometrically over `[r_min, r_max]`.
pub fn init_grid(angles: usize, radii: usize, r_min: f64, r_max: f64) -> Vec<AngleActionState> {
    let mut out = Vec::with_capacity(angles * radii);
    for i in 0..radii {
        let f = if radii == 1 { 1.0 } else { i as f64 / (radii - 1) as f64 };
        let r = r_min * (r_max / r_min).powf(f);
        for j in 0..angles {
            out.push(AngleActionState::new(r, TAU * (j as f64 + 0.5) / angles as f64));
        }
    }
    out
}

/// Largest starting radius `r₀` for which `‖ψ₀‖∞ r₀^α ≤ (0.9ε)^{α+γ}`: an
/// orbit that keeps its energy cannot reach `0.9ε` through a zero of `ψ₀`
/// where `|ψ₁| ≳ 1`. Uses only the orders and the size of `ψ₀`, never signs.
pub fn confinement_radius(pair: &DegeneratePair, epsilon: f64) -> f64 {
    let alpha = pair.alpha();
    let gamma = pair.gamma().unwrap_or(0.5);
    let n = 4096 * (pair.psi0.degree() + 1);
    let sup = (0..n).map(|i| pair.psi0.eval(TAU * i as f64 / n as f64).abs()).fold(0.0, f64::max);
    ((0.9 * epsilon).powf(alpha + gamma) / sup).powf(1.0 / alpha)
}

/// Default sweep for a pair: `angles` equispaced angles times `radii`
/// geometric radii from a tenth of [`confinement_radius`] up to it.
pub fn default_inits(pair: &DegeneratePair, epsilon: f64, angles: usize, radii: usize) -> Vec<AngleActionState> {
    let top = confinement_radius(pair, epsilon);
    init_grid(angles, radii, 0.1 * top, top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::TrigPoly;

    fn intro(a: f64) -> HalfPowerSeries {
        HalfPowerSeries::from_terms([(4, TrigPoly::new(1.0, &[], &[1.0])), (6, TrigPoly::constant(a))]).unwrap()
    }

    #[test]
    fn rotation_is_exact() {
        let h = HalfPowerSeries::rotation(0.3);
        let t = integrate(&h, AngleActionState::new(0.2, 1.0), 50.0, &StepControl::default()).unwrap();
        assert!((t.last.r - 0.2).abs() < 1e-15);
        assert!((t.last.phi - (1.0 + 0.3 * 50.0)).abs() < 1e-9);
        assert_eq!(t.drift, 0.0);
        assert!(t.to_csv().starts_with("t,r,phi,H\n"));
    }

    #[test]
    fn unstable_intro_orbit_grows() {
        let mu: f64 = 0.1;
        let init = AngleActionState::new(2.0 * (0.05f64).sin().powi(2), -FRAC_PI_2 - mu);
        let ctrl = StepControl { escape_radius: Some(0.999), ..Default::default() };
        let t = integrate(&intro(-1.0), init, 1e5, &ctrl).unwrap();
        assert!(t.max_r > 0.99, "{}", t.max_r);
        for w in t.samples.windows(2) {
            if w[1].phi > -PI {
                assert!(w[1].r >= w[0].r);
                assert!(w[1].phi <= w[0].phi);
            }
        }
    }

    #[test]
    fn stable_intro_orbit_stays_small() {
        // started where ψ₀ vanishes; from φ = 0 the level curve itself reaches r = 0.01
        let init = AngleActionState::new(1e-3, 1.5 * PI);
        let t = integrate(&intro(1.0), init, 1e4, &StepControl::default()).unwrap();
        assert!(t.max_r <= 5e-3, "{}", t.max_r);
        assert!(t.drift_relative <= 1e-8, "{}", t.drift_relative);
    }

    #[test]
    fn level_orbit_example() {
        let t = level_orbit(0.1, LEVEL_ORBIT_HORIZON, &StepControl::default()).unwrap();
        assert!((t.samples[0].r - 4.995834e-3).abs() < 1e-9);
        assert!(t.max_r >= 0.99, "{}", t.max_r);
        assert!(t.drift <= 1e-6, "{}", t.drift);
    }

    #[test]
    fn rotation_never_escapes() {
        let grid = init_grid(4, 3, 1e-4, 1e-2);
        let s = escape_experiment(&HalfPowerSeries::rotation(1.0), 0.1, &grid, 1e3, &StepControl::default());
        assert_eq!((s.total, s.escapes, s.failures), (12, 0, 0));
    }
}
