//! Twist coefficient `d²h/dI²` of an autonomous `H₀(r, φ)` on the level
//! `H₀ = h₀`, from the quadrature formulas
//! `λ = 2π / ∫ H_r⁻¹ dφ` and `d²h/dI² = (λ³/2π) ∫ H_r⁻³ H_rr dφ`,
//! cross-checked by differencing the action `I(h) = (1/2π) ∫ r₀(φ, h) dφ`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{AngleActionState, HalfPowerSeries};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistOptions {
    /// Equispaced quadrature nodes in `φ`.
    pub nodes: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Finite-difference step `μ` relative to `h₀`.
    pub fd_step: f64,
    /// Relative tolerance of the cross-check.
    pub cross_check: f64,
}

impl Default for TwistOptions {
    fn default() -> Self {
        Self { nodes: 2048, newton_tol: 1e-12, newton_max_iter: 50, fd_step: 1e-3, cross_check: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistReport {
    pub h0: f64,
    /// Action `I(h₀)`.
    pub action: f64,
    /// `dh/dI`.
    pub lambda: f64,
    pub d2h_di2: f64,
    pub d2h_di2_fd: f64,
    pub nodes: usize,
    pub fd_step: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error("energy level must be positive, got {0}")]
    InvalidLevel(f64),
    #[error("dH/dr = {h_r:e} <= 0 on the level curve at phi = {phi:.9}, r = {r:e}")]
    NotMonotone { phi: f64, r: f64, h_r: f64 },
    #[error("level solve did not converge at phi = {phi:.9}")]
    NewtonDiverged { phi: f64 },
}

fn eval(h: &HalfPowerSeries, r: f64, phi: f64) -> (f64, f64) {
    let s = AngleActionState::new(r, phi);
    (h.eval(s).expect("r >= 0"), h.partial_r(s).expect("r >= 0"))
}

/// Solves `H(r, φ) = level` for `r > 0`: Newton inside a bracket, with
/// bisection whenever a step leaves it.
fn solve_level(h: &HalfPowerSeries, phi: f64, level: f64, guess: f64, opts: &TwistOptions) -> Result<f64, TwistError> {
    let diverged = TwistError::NewtonDiverged { phi };
    let (mut lo, mut hi) = (0.0, guess.max(f64::MIN_POSITIVE));
    let mut doublings = 0;
    while eval(h, hi, phi).0 < level {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 1100 || !hi.is_finite() {
            return Err(diverged);
        }
    }
    let mut r = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
    if guess > lo && guess < hi {
        r = guess;
    }
    for _ in 0..opts.newton_max_iter {
        let (f, df) = eval(h, r, phi);
        let g = f - level;
        if g < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let mut next = if df > 0.0 { r - g / df } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - r).abs() <= opts.newton_tol * r.abs();
        r = next;
        if done {
            // one more step takes Newton to rounding level
            let (f, df) = eval(h, r, phi);
            if df > 0.0 {
                let polished = r - (f - level) / df;
                if polished > lo && polished < hi {
                    r = polished;
                }
            }
            return Ok(r);
        }
    }
    Err(diverged)
}

struct Level {
    radii: Vec<f64>,
    action: f64,
    inv_hr: f64,
    curvature: f64,
}

fn level_sums(h: &HalfPowerSeries, level: f64, opts: &TwistOptions) -> Result<Level, TwistError> {
    let n = opts.nodes;
    let mut guess = level.sqrt();
    let mut out = Level { radii: Vec::with_capacity(n), action: 0.0, inv_hr: 0.0, curvature: 0.0 };
    for i in 0..n {
        let phi = TAU * i as f64 / n as f64;
        let r = solve_level(h, phi, level, guess, opts)?;
        guess = r;
        let s = AngleActionState::new(r, phi);
        let h_r = h.partial_r(s).expect("r >= 0");
        if h_r <= 0.0 {
            return Err(TwistError::NotMonotone { phi, r, h_r });
        }
        let h_rr = h.partial_rr(s).expect("r >= 0");
        out.radii.push(r);
        out.action += r;
        out.inv_hr += 1.0 / h_r;
        out.curvature += h_rr / (h_r * h_r * h_r);
    }
    // periodic trapezoid: (1/2π)∫ f dφ ≈ mean of node values
    out.action /= n as f64;
    out.inv_hr /= n as f64;
    out.curvature /= n as f64;
    Ok(out)
}

pub fn twist_check(h0_series: &HalfPowerSeries, h0: f64, opts: &TwistOptions) -> Result<TwistReport, TwistError> {
    if !(h0 > 0.0 && h0.is_finite()) {
        return Err(TwistError::InvalidLevel(h0));
    }
    let mid = level_sums(h0_series, h0, opts)?;
    // λ = 2π/∫H_r⁻¹ = 1/mean(H_r⁻¹), d²h/dI² = λ³ mean(H_rr H_r⁻³)
    let lambda = 1.0 / mid.inv_hr;
    let d2h = lambda.powi(3) * mid.curvature;

    let mu = opts.fd_step * h0;
    let lo = level_sums(h0_series, h0 - mu, opts)?;
    let hi = level_sums(h0_series, h0 + mu, opts)?;
    // differences taken node by node before averaging, to keep rounding small
    let n = opts.nodes as f64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for ((a, b), c) in lo.radii.iter().zip(&mid.radii).zip(&hi.radii) {
        s1 += c - a;
        s2 += (c - b) - (b - a);
    }
    let di = s1 / n / (2.0 * mu);
    let d2i = s2 / n / (mu * mu);
    let fd = -d2i / di.powi(3);

    // curvature scale λ/I keeps the comparison meaningful when the twist vanishes
    let floor = 1e-2 * lambda / mid.action;
    let agrees = (d2h - fd).abs() <= opts.cross_check * d2h.abs().max(fd.abs()).max(floor);
    Ok(TwistReport {
        h0,
        action: mid.action,
        lambda,
        d2h_di2: d2h,
        d2h_di2_fd: fd,
        nodes: opts.nodes,
        fd_step: mu,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trigpoly::TrigPoly;

    #[test]
    fn pure_square_has_unit_curvature() {
        let h = HalfPowerSeries::from_terms([(4, TrigPoly::constant(1.0))]).unwrap();
        for h0 in [1e-4, 0.01, 0.3] {
            let t = twist_check(&h, h0, &TwistOptions::default()).unwrap();
            assert!((t.d2h_di2 - 2.0).abs() < 1e-10, "{}", t.d2h_di2);
            assert!((t.lambda - 2.0 * h0.sqrt()).abs() < 1e-10);
            assert!(t.agrees);
        }
    }

    #[test]
    fn rotation_is_isochronous() {
        let t = twist_check(&HalfPowerSeries::rotation(0.7), 1e-3, &TwistOptions::default()).unwrap();
        assert_eq!(t.d2h_di2, 0.0);
        assert!((t.lambda - 0.7).abs() < 1e-12);
        assert!(t.agrees, "{t:?}");
    }

    #[test]
    fn intro_example_cross_checks() {
        let h = HalfPowerSeries::from_terms([(4, TrigPoly::new(1.0, &[], &[1.0])), (6, TrigPoly::constant(1.0))]).unwrap();
        let t = twist_check(&h, 1e-4, &TwistOptions::default()).unwrap();
        assert!(t.agrees, "{t:?}");
        assert!(((t.d2h_di2 - t.d2h_di2_fd) / t.d2h_di2).abs() < 1e-4);
    }

    #[test]
    fn non_monotone_level_is_reported() {
        let h = HalfPowerSeries::from_terms([(4, TrigPoly::constant(-1.0))]).unwrap();
        assert!(twist_check(&h, 1e-3, &TwistOptions::default()).is_err());
        assert_eq!(twist_check(&h, -1.0, &TwistOptions::default()), Err(TwistError::InvalidLevel(-1.0)));
    }
}
