//! Sampled check of the instability function
//! `V = δ r^{2α+γ} - r^{2α} ψ(r,φ)²`, `ψ = ψ₀ + r^γ ψ₁`.
//!
//! For the truncated `H = r^α ψ` one has exactly
//! `V̇ = -δ(2α+γ) r^{3α+γ-1} ∂ψ/∂φ`, so the check reduces to the sign of
//! `∂ψ/∂φ` on the band `ψ² < δ r^γ` around a decreasing zero of `ψ(r,·)`.
//! At each sampled radius the band is located by bisection and sampled
//! across its width; the zero is followed from radius to radius to form one
//! connected component.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::DegeneratePair;
use crate::trigpoly::{TrigPoly, ZeroTolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChetaevOptions {
    /// Region radius, `0 < a < 1`.
    pub a: f64,
    pub angle_samples: usize,
    pub radius_samples: usize,
}

impl Default for ChetaevOptions {
    fn default() -> Self {
        Self { a: 0.1, angle_samples: 256, radius_samples: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChetaevSample {
    pub r: f64,
    pub phi: f64,
    pub v: f64,
    /// Leading term of `V̇`.
    pub vdot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChetaevCertificate {
    pub delta: f64,
    pub a: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub angle_samples: usize,
    pub radius_samples: usize,
    /// Smallest sampled `V`, and the smallest `V / (δ r^{2α+γ})`.
    pub min_v: f64,
    pub min_v_relative: f64,
    /// Smallest sampled leading `V̇`, and the smallest `-∂ψ/∂φ`.
    pub min_vdot: f64,
    pub min_neg_slope: f64,
    /// Zero of `ψ(r,·)` that the component follows, at the outer and inner radius.
    pub phi_outer: f64,
    pub phi_inner: f64,
    pub r_inner: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChetaevError {
    #[error("invalid certificate parameters: {0}")]
    InvalidParameters(String),
    #[error("no component of the region with decreasing psi: {0}")]
    NoComponent(String),
    #[error("certificate failed at r = {:.6e}, phi = {:.9}: {reason}", sample.r, sample.phi)]
    CertificateFailed { sample: ChetaevSample, reason: String },
}

/// Real zeros of `p`, from the root finder or, if it refuses, from a dense
/// sign-change scan.
fn zeros_of(p: &TrigPoly) -> Vec<(f64, f64)> {
    if p.is_zero() || p.is_constant() {
        return vec![];
    }
    if let Ok(z) = p.find_zeros(&ZeroTolerances::default()) {
        return z.iter().map(|z| (z.phi0, p.eval_derivative(1, z.phi0))).collect();
    }
    let n = 4096 * (p.degree() + 1);
    let h = TAU / n as f64;
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa == 0.0 || fa * fb < 0.0 {
            let x = if fa == 0.0 { a } else { bisect(|x| p.eval(x), a, b) };
            out.push((x, p.eval_derivative(1, x)));
        }
    }
    out
}

/// Sign-change bisection; `a > b` is allowed.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa0 = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) < 0.0) == (fa0 < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Edge of the band `ψ² < level` walking from `phi` in direction `dir`.
fn band_edge(psi: &TrigPoly, phi: f64, level: f64, step: f64, dir: f64) -> Option<f64> {
    let g = |x: f64| psi.eval(x).powi(2) - level;
    let mut inner = phi;
    let mut k = 1.0;
    while k * step < TAU {
        let outer = phi + dir * k * step;
        if g(outer) >= 0.0 {
            return Some(bisect(g, inner, outer));
        }
        inner = outer;
        k *= 1.5;
    }
    None
}

pub fn chetaev_certificate(pair: &DegeneratePair, opts: &ChetaevOptions) -> Result<ChetaevCertificate, ChetaevError> {
    if !(opts.a > 0.0 && opts.a < 1.0) {
        return Err(ChetaevError::InvalidParameters(format!("a = {} is not in (0, 1)", opts.a)));
    }
    if opts.angle_samples < 2 || opts.radius_samples < 2 {
        return Err(ChetaevError::InvalidParameters("grids need at least 2 points".into()));
    }
    let gamma = pair
        .gamma()
        .ok_or_else(|| ChetaevError::NoComponent("no second term; psi does not depend on r".into()))?;
    let alpha = pair.alpha();
    let nr = opts.radius_samples;
    let radii: Vec<f64> = (0..nr).map(|i| opts.a * (i as f64 + 0.5) / nr as f64).collect();
    let psis: Vec<TrigPoly> = radii.iter().map(|&r| pair.psi_at(r)).collect();

    // δ: smallest ψ² over stationary angles at every sampled radius
    let mut delta = f64::INFINITY;
    let mut worst = (0.0, 0.0);
    for (&r, psi) in radii.iter().zip(&psis) {
        for (phi, _) in zeros_of(&psi.derivative()) {
            let v = psi.eval(phi).powi(2);
            if v < delta {
                delta = v;
                worst = (r, phi);
            }
        }
    }
    if delta == 0.0 {
        let sample = ChetaevSample { r: worst.0, phi: worst.1, v: 0.0, vdot: 0.0 };
        return Err(ChetaevError::CertificateFailed { sample, reason: "psi has a multiple zero at a sampled radius".into() });
    }
    if !delta.is_finite() {
        return Err(ChetaevError::NoComponent("psi is constant in phi".into()));
    }

    // decreasing zeros of ψ(r,·) per radius, outermost first
    let roots: Vec<Vec<(f64, f64)>> = psis.iter().rev().map(zeros_of).collect();
    let starts: Vec<f64> = roots[0].iter().filter(|(_, d)| *d < 0.0).map(|(p, _)| *p).collect();
    if starts.is_empty() {
        return Err(ChetaevError::NoComponent(format!("psi(r, .) has no decreasing zero at r = {:.4e}", radii[nr - 1])));
    }
    let mut track = None;
    'start: for &s in &starts {
        let mut t = vec![s];
        for rs in &roots[1..] {
            let prev = *t.last().unwrap();
            let Some(&(next, d)) = rs.iter().min_by(|a, b| angle_dist(a.0, prev).total_cmp(&angle_dist(b.0, prev)))
            else {
                continue 'start;
            };
            let gap = rs.iter().map(|x| angle_dist(x.0, next)).filter(|&g| g > 0.0).fold(f64::INFINITY, f64::min);
            if d >= 0.0 || angle_dist(next, prev) >= 0.5 * gap {
                continue 'start;
            }
            t.push(next);
        }
        track = Some(t);
        break;
    }
    let Some(mut track) = track else {
        return Err(ChetaevError::NoComponent("no decreasing zero can be followed to the inner radius".into()));
    };
    track.reverse();

    let mut cert = ChetaevCertificate {
        delta,
        a: opts.a,
        alpha,
        gamma,
        angle_samples: opts.angle_samples,
        radius_samples: nr,
        min_v: f64::INFINITY,
        min_v_relative: f64::INFINITY,
        min_vdot: f64::INFINITY,
        min_neg_slope: f64::INFINITY,
        phi_outer: track[nr - 1],
        phi_inner: track[0],
        r_inner: radii[0],
    };
    for ((&r, psi), &root) in radii.iter().zip(&psis).zip(&track) {
        let level = delta * r.powf(gamma);
        let slope = psi.eval_derivative(1, root).abs();
        let step = (level.sqrt() / slope).min(0.1);
        let fail = |phi: f64, reason: &str| ChetaevError::CertificateFailed {
            sample: ChetaevSample { r, phi, v: f64::NAN, vdot: f64::NAN },
            reason: reason.into(),
        };
        let lo = band_edge(psi, root, level, step, -1.0).ok_or_else(|| fail(root, "band does not close"))?;
        let hi = band_edge(psi, root, level, step, 1.0).ok_or_else(|| fail(root, "band does not close"))?;
        let r2a = r.powf(2.0 * alpha);
        let vscale = delta * r.powf(2.0 * alpha + gamma);
        let dscale = delta * (2.0 * alpha + gamma) * r.powf(3.0 * alpha + gamma - 1.0);
        for j in 0..opts.angle_samples {
            let phi = lo + (hi - lo) * (j as f64 + 0.5) / opts.angle_samples as f64;
            let p = psi.eval(phi);
            let dp = psi.eval_derivative(1, phi);
            let v = r2a * (level - p * p);
            let vdot = -dscale * dp;
            let sample = ChetaevSample { r, phi: phi.rem_euclid(TAU), v, vdot };
            if v.is_nan() || v <= 0.0 {
                return Err(ChetaevError::CertificateFailed { sample, reason: "V is not positive".into() });
            }
            if vdot.is_nan() || vdot <= 0.0 {
                return Err(ChetaevError::CertificateFailed { sample, reason: "leading term of dV/dt is not positive".into() });
            }
            cert.min_v = cert.min_v.min(v);
            cert.min_v_relative = cert.min_v_relative.min(v / vscale);
            cert.min_vdot = cert.min_vdot.min(vdot);
            cert.min_neg_slope = cert.min_neg_slope.min(-dp);
        }
    }
    Ok(cert)
}
