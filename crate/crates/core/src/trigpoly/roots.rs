//! Real zeros of trigonometric polynomials with multiplicities.
//!
//! With `z = e^{iφ}`, `z^N p(φ)` is an algebraic polynomial of degree `2N`
//! whose unimodular roots are the real zeros of `p`. Its companion-matrix
//! eigenvalues give candidate angles; each candidate is polished by Newton
//! iteration on `p^{(m-1)}` (a multiplicity-`m` zero is a simple zero of that
//! derivative) and accepted only if the derivative chain confirms `m`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eig::hessenberg_eigenvalues;
use super::{TrigError, TrigPoly};

/// Eigenvalues farther than this from the unit circle are never candidates.
/// A multiplicity-`m` root splits into `m` eigenvalues at distance
/// `~eps^{1/m}`, so this must be far wider than the final circle tolerance.
const CANDIDATE_WINDOW: f64 = 0.05;
/// Lower derivatives at an accepted zero must be below `CLEAR · scale`; values
/// between this and `mult · scale` are ambiguous.
const CLEAR: f64 = 1e-10;
/// Leading derivatives within this factor of the threshold are ambiguous.
const LEAD_MARGIN: f64 = 10.0;
const NEWTON_MAX_ITER: usize = 60;
const NEWTON_MAX_DRIFT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTolerances {
    /// Allowed `||z| - 1|` for the centroid of an accepted root cluster.
    pub circle: f64,
    /// Angular radius within which refined zeros are merged.
    pub cluster: f64,
    /// Relative threshold `τ_mult` for the derivative chain.
    pub mult: f64,
}

impl Default for ZeroTolerances {
    fn default() -> Self {
        Self { circle: 1e-8, cluster: 1e-7, mult: 1e-7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroInfo {
    /// Location in `[0, 2π)`.
    pub phi0: f64,
    pub mult: u32,
    /// `p^{(mult)}(phi0)`.
    pub lead: f64,
}

fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if TAU - w < 1e-13 {
        0.0
    } else {
        w
    }
}

fn angle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Coefficients (ascending powers of z) of `z^N p(φ)`.
fn algebraic_coeffs(p: &TrigPoly) -> Vec<Complex64> {
    let n = p.degree();
    let mut c = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    c[n] = Complex64::new(p.a0(), 0.0);
    for (k, ac, as_) in p.harmonics() {
        // ac cos kφ + as sin kφ = ½(ac - i as) z^k + ½(ac + i as) z^{-k}
        c[n + k] = Complex64::new(0.5 * ac, -0.5 * as_);
        c[n - k] = Complex64::new(0.5 * ac, 0.5 * as_);
    }
    c
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Result<Vec<Complex64>, TrigError> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let mut h = vec![vec![Complex64::new(0.0, 0.0); deg]; deg];
    for i in 1..deg {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    for (i, c) in coeffs[..deg].iter().enumerate() {
        h[i][deg - 1] = -c / lead;
    }
    hessenberg_eigenvalues(h).ok_or_else(|| TrigError::IllConditioned {
        phi: 0.0,
        reason: "companion eigenvalue iteration did not converge".into(),
    })
}

/// Newton on `p^{(k)}` starting at `start`; `None` if it runs away.
fn newton_on_derivative(p: &TrigPoly, k: u32, start: f64) -> Option<f64> {
    let mut phi = start;
    for _ in 0..NEWTON_MAX_ITER {
        let f = p.eval_derivative(k, phi);
        let df = p.eval_derivative(k + 1, phi);
        if f == 0.0 {
            break;
        }
        if df == 0.0 || !df.is_finite() {
            return None;
        }
        let step = f / df;
        phi -= step;
        if (phi - start).abs() > NEWTON_MAX_DRIFT {
            return None;
        }
        if step.abs() <= 1e-15 * (1.0 + phi.abs()) {
            break;
        }
    }
    Some(phi)
}

/// Smallest `j` with `|p^{(j)}(phi)| > τ · scale_j`, capped at `cap + 1`.
fn derivative_chain(p: &TrigPoly, phi: f64, tau: f64, cap: u32) -> u32 {
    (0..=cap)
        .find(|&j| p.eval_derivative(j, phi).abs() > tau * p.derivative_scale(j))
        .unwrap_or(cap + 1)
}

#[derive(Debug)]
enum Candidate {
    Zero(ZeroInfo),
    Ambiguous(f64, String),
    None,
}

fn resolve_candidate(p: &TrigPoly, theta: f64, tol: &ZeroTolerances, cap: u32) -> Candidate {
    // largest multiplicity whose Newton polish is self-consistent wins: a
    // multiplicity-m zero can masquerade as lower m only through rounding
    let mut found: Option<(u32, f64)> = None;
    for m in 1..=cap {
        let Some(phi) = newton_on_derivative(p, m - 1, theta) else {
            continue;
        };
        if derivative_chain(p, phi, tol.mult, cap) == m {
            found = Some((m, phi));
        }
    }
    let Some((m, phi)) = found else {
        return Candidate::None;
    };
    for j in 0..m {
        let v = p.eval_derivative(j, phi).abs();
        let scale = p.derivative_scale(j);
        if v > CLEAR * scale {
            return Candidate::Ambiguous(
                phi,
                format!("derivative {j} is {v:.3e}, between the clear and multiplicity thresholds"),
            );
        }
    }
    let lead = p.eval_derivative(m, phi);
    if lead.abs() <= LEAD_MARGIN * tol.mult * p.derivative_scale(m) {
        return Candidate::Ambiguous(phi, format!("leading derivative {lead:.3e} is marginal for multiplicity {m}"));
    }
    Candidate::Zero(ZeroInfo { phi0: wrap_angle(phi), mult: m, lead })
}

/// All distinct real zeros of `p` in `[0, 2π)`, sorted by angle.
pub fn find_zeros(p: &TrigPoly, tol: &ZeroTolerances) -> Result<Vec<ZeroInfo>, TrigError> {
    if !p.is_finite() {
        return Err(TrigError::NonFinite);
    }
    if p.is_zero() {
        return Err(TrigError::IdenticallyZero);
    }
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let scale = p.l1_norm();
    let normalized = p.scale(1.0 / scale);
    let n = normalized.degree();
    let cap = (2 * n) as u32;
    let eig = companion_eigenvalues(&algebraic_coeffs(&normalized))?;

    let mut zeros: Vec<ZeroInfo> = Vec::new();
    for z in eig.iter().filter(|z| (z.norm() - 1.0).abs() <= CANDIDATE_WINDOW) {
        let theta = z.arg();
        if zeros.iter().any(|zi| angle_dist(zi.phi0, theta) <= tol.cluster) {
            continue;
        }
        match resolve_candidate(&normalized, theta, tol, cap) {
            Candidate::None => {}
            Candidate::Ambiguous(phi, reason) => {
                return Err(TrigError::IllConditioned { phi: wrap_angle(phi), reason });
            }
            Candidate::Zero(zi) => {
                if let Some(prev) = zeros.iter().find(|q| angle_dist(q.phi0, zi.phi0) <= tol.cluster) {
                    if prev.mult != zi.mult {
                        return Err(TrigError::IllConditioned {
                            phi: zi.phi0,
                            reason: format!("conflicting multiplicities {} and {}", prev.mult, zi.mult),
                        });
                    }
                    continue;
                }
                check_cluster_centroid(&eig, &zi, tol)?;
                zeros.push(zi);
            }
        }
    }

    let total: u32 = zeros.iter().map(|z| z.mult).sum();
    if total > cap {
        return Err(TrigError::IllConditioned {
            phi: 0.0,
            reason: format!("multiplicities sum to {total}, exceeding 2N = {cap}"),
        });
    }
    zeros.sort_by(|a, b| a.phi0.total_cmp(&b.phi0));
    for z in &mut zeros {
        z.lead *= scale;
    }
    Ok(zeros)
}

/// The `mult` eigenvalues nearest an accepted zero must average to a point on
/// the unit circle; a split multiple root keeps its centroid there.
fn check_cluster_centroid(eig: &[Complex64], zi: &ZeroInfo, tol: &ZeroTolerances) -> Result<(), TrigError> {
    let target = Complex64::from_polar(1.0, zi.phi0);
    let mut by_dist: Vec<Complex64> = eig.to_vec();
    by_dist.sort_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
    let m = zi.mult as usize;
    let centroid = by_dist[..m].iter().sum::<Complex64>() / m as f64;
    if (centroid.norm() - 1.0).abs() > tol.circle {
        return Err(TrigError::IllConditioned {
            phi: zi.phi0,
            reason: format!("root cluster centroid is {:.3e} off the unit circle", (centroid.norm() - 1.0).abs()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tol() -> ZeroTolerances {
        ZeroTolerances::default()
    }

    #[test]
    fn markeyev_zeros() {
        let p = TrigPoly::new(1.0, &[0.0, 0.0, 0.0, -1.0], &[]);
        let z = find_zeros(&p, &tol()).unwrap();
        assert_eq!(z.len(), 4);
        for (j, zi) in z.iter().enumerate() {
            assert!((zi.phi0 - j as f64 * PI / 2.0).abs() < 1e-10, "{zi:?}");
            assert_eq!(zi.mult, 2);
            assert!((zi.lead - 16.0).abs() < 1e-8);
        }
    }

    #[test]
    fn one_plus_sin() {
        let p = TrigPoly::new(1.0, &[], &[1.0]);
        let z = find_zeros(&p, &tol()).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].phi0 - 1.5 * PI).abs() < 1e-10);
        assert_eq!(z[0].mult, 2);
        assert!((z[0].lead - 1.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_cosine() {
        let p = TrigPoly::new(0.0, &[3.0, 0.0, 1.0], &[]);
        let z = find_zeros(&p, &tol()).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0].phi0 - PI / 2.0).abs() < 1e-10);
        assert!((z[1].phi0 - 1.5 * PI).abs() < 1e-10);
        assert!(z.iter().all(|zi| zi.mult == 3));
        assert!((z[0].lead + 24.0).abs() < 1e-8);
        assert!((z[1].lead - 24.0).abs() < 1e-8);
    }

    #[test]
    fn simple_cosine() {
        let z = find_zeros(&TrigPoly::cos_term(1, 1.0), &tol()).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.iter().all(|zi| zi.mult == 1));
        assert!((z[0].phi0 - PI / 2.0).abs() < 1e-12);
        assert!((z[0].lead + 1.0).abs() < 1e-12);
    }

    #[test]
    fn quartic_cosine() {
        // 8 cos^4 φ = 3 + 4 cos 2φ + cos 4φ
        let p = TrigPoly::new(3.0, &[0.0, 4.0, 0.0, 1.0], &[]);
        let z = find_zeros(&p, &tol()).unwrap();
        assert_eq!(z.len(), 2);
        assert!(z.iter().all(|zi| zi.mult == 4), "{z:?}");
        assert!((z[0].lead - 192.0).abs() < 1e-6);
    }

    #[test]
    fn no_zeros_and_errors() {
        assert!(find_zeros(&TrigPoly::new(2.0, &[1.0], &[]), &tol()).unwrap().is_empty());
        assert!(find_zeros(&TrigPoly::constant(-1.0), &tol()).unwrap().is_empty());
        assert_eq!(find_zeros(&TrigPoly::zero(), &tol()), Err(TrigError::IdenticallyZero));
    }

    #[test]
    fn tangency_at_tolerance_boundary_is_reported() {
        // minimum value 1e-9 relative: neither clearly a zero nor clearly not
        let p = TrigPoly::new(1.0 + 1e-9, &[1.0], &[]);
        match find_zeros(&p, &tol()) {
            Err(TrigError::IllConditioned { .. }) => {}
            other => panic!("expected IllConditioned, got {other:?}"),
        }
    }
}
