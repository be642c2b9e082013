//! Resonance bookkeeping for time-periodic Hamiltonians: normal-form
//! defects, resonant projection, and the rotating-frame change
//! `φ̃ = φ + ωt` that removes time from a normal form.

mod frequency;
mod series;

pub use frequency::{resonance_module, Frequency, FrequencyError, ResonanceModule};
pub use series::{Mode, TimePeriodicSeries};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::HalfPowerSeries;
use crate::trigpoly::TrigPoly;

/// Largest residual accepted by [`autonomize`].
pub const NF_TOLERANCE: f64 = 1e-10;

/// Relative tolerance of the modulus test in [`degenerate_reduce`].
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormalFormError {
    #[error("series is not in normal form (residual {residual:e} > {NF_TOLERANCE:e})")]
    NotInNormalForm { residual: f64 },
    #[error("series violates the reality condition (defect {defect:e})")]
    NotReal { defect: f64 },
    #[error("term r^({s}/2) has harmonic {n}, not a multiple of the resonance order {k}")]
    NonResonantHarmonic { s: u32, n: usize, k: u32 },
}

/// `Σ |ω(μ-ν) - l| · |c_{μνl}|` over all stored modes: the ℓ¹ norm of
/// `ω ∂H/∂φ - ∂H/∂t` in coefficient space.
pub fn nf_residual(h: &TimePeriodicSeries, omega: &Frequency) -> f64 {
    h.entries()
        .map(|((m, n, l), c)| omega.detuning(m as i64 - n as i64, l) * c.norm())
        .sum()
}

/// Keeps exactly the modes with `l = ω(μ-ν)`.
pub fn resonant_project(h: &TimePeriodicSeries, omega: &Frequency) -> TimePeriodicSeries {
    let mut out = h.clone();
    out.retain(|(m, n, l)| omega.is_resonant(m as i64 - n as i64, l));
    out
}

/// Rewrites a normal form in the rotating angle `φ̃ = φ + ωt`, dropping the
/// `ω r` term: `out(r, φ + ωt) + ω r = in(r, φ, t)`.
pub fn autonomize(h: &TimePeriodicSeries, omega: &Frequency) -> Result<HalfPowerSeries, NormalFormError> {
    let residual = nf_residual(h, omega);
    if residual > NF_TOLERANCE {
        return Err(NormalFormError::NotInNormalForm { residual });
    }
    let defect = h.reality_defect();
    if defect > 1e-12 * h.l1_norm().max(1.0) {
        return Err(NormalFormError::NotReal { defect });
    }
    let mut terms: BTreeMap<u32, TrigPoly> = BTreeMap::new();
    for ((m, n, _), c) in resonant_project(h, omega).entries() {
        if m < n {
            continue; // conjugate of an (n, m) entry
        }
        let d = (m - n) as usize;
        let p = terms.entry(m + n).or_default();
        if d == 0 {
            p.add_term(0, c.re, 0.0);
        } else {
            p.add_term(d, 2.0 * c.re, -2.0 * c.im);
        }
    }
    let mut out = HalfPowerSeries::new(h.order());
    for (j, p) in &terms {
        out.add_term(*j, p).expect("orders fit");
    }
    out.add_term(2, &TrigPoly::constant(-omega.value())).expect("j = 2");
    Ok(out)
}

/// Coefficients of `H_s = (A_s + Σ_j B_sj cos jkφ + C_sj sin jkφ) r^{s/2}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResonantTerm {
    pub a: f64,
    /// `j → (B_sj, C_sj)`.
    pub harmonics: BTreeMap<u32, (f64, f64)>,
}

impl ResonantTerm {
    pub fn b(&self, j: u32) -> f64 {
        self.harmonics.get(&j).map_or(0.0, |h| h.0)
    }

    pub fn c(&self, j: u32) -> f64 {
        self.harmonics.get(&j).map_or(0.0, |h| h.1)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0.0 && self.harmonics.values().all(|&(b, c)| b == 0.0 && c == 0.0)
    }
}

/// `s → (A_s, {j → (B_sj, C_sj)})`.
pub type Structure = BTreeMap<u32, ResonantTerm>;

/// Reads off the resonant coefficients of an autonomous series.
pub fn structure(h: &HalfPowerSeries, k: u32) -> Result<Structure, NormalFormError> {
    let mut out = Structure::new();
    for (s, p) in h.terms() {
        let mut term = ResonantTerm { a: p.a0(), ..Default::default() };
        for (n, b, c) in p.harmonics() {
            if b == 0.0 && c == 0.0 {
                continue;
            }
            if n % k as usize != 0 {
                return Err(NormalFormError::NonResonantHarmonic { s, n, k });
            }
            term.harmonics.insert((n / k as usize) as u32, (b, c));
        }
        out.insert(s, term);
    }
    Ok(out)
}

/// Inverse of [`structure`].
pub fn synthesize(st: &Structure, k: u32) -> HalfPowerSeries {
    let order = st.keys().copied().max().unwrap_or(2);
    let mut h = HalfPowerSeries::new(order);
    for (&s, term) in st {
        let mut p = TrigPoly::constant(term.a);
        for (&j, &(b, c)) in &term.harmonics {
            p.add_term((j * k) as usize, b, c);
        }
        h.add_term(s, &p).expect("orders fit");
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegenerateForm {
    pub is_degenerate: bool,
    /// `A + B cos kφ + C sin kφ`; equal to `2A cos²((kφ + φ̃)/2)` when degenerate.
    pub psi0: TrigPoly,
    /// `φ̃ = atan2(-C sgn A, B sgn A)`.
    pub phase: f64,
}

/// Tests `|A| = √(B² + C²)` and returns the squared-cosine form of
/// `A + B cos kφ + C sin kφ`. `A = 0` is never degenerate.
pub fn degenerate_reduce(a: f64, b: f64, c: f64, k: u32) -> DegenerateForm {
    let d = b.hypot(c);
    let is_degenerate = a != 0.0 && (a.abs() - d).abs() <= DEGENERACY_TOLERANCE * a.abs();
    let sg = if a < 0.0 { -1.0 } else { 1.0 };
    // + 0.0 turns -0.0 into 0.0 so that atan2 lands on π rather than -π
    let phase = (-c * sg + 0.0).atan2(b * sg);
    // coefficients are kept exact; the squared-cosine form is the same function
    let mut psi0 = TrigPoly::constant(a);
    psi0.add_term(k as usize, b, c);
    DegenerateForm { is_degenerate, psi0, phase }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub frequency: Frequency,
    pub module: String,
    pub residual: f64,
    pub reality_defect: f64,
    /// Autonomous form of the resonant part; absent for a nonresonant `ω`.
    pub autonomous: Option<HalfPowerSeries>,
    pub resonant: Option<Structure>,
}

/// Residual plus, for a rational `ω`, the structure of the resonant part in
/// the rotating frame.
pub fn analyze(h: &TimePeriodicSeries, omega: &Frequency) -> Result<NormalFormReport, NormalFormError> {
    let residual = nf_residual(h, omega);
    let (autonomous, resonant) = match omega.order() {
        Some(k) => {
            let auto = autonomize(&resonant_project(h, omega), omega)?;
            let st = structure(&auto.without_rotation(), k)?;
            (Some(auto), Some(st))
        }
        None => (None, None),
    };
    Ok(NormalFormReport {
        frequency: *omega,
        module: resonance_module(omega).to_string(),
        residual,
        reality_defect: h.reality_defect(),
        autonomous,
        resonant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{PI, TAU};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn residual_examples() {
        let w = Frequency::rational(1, 1).unwrap();
        let mut h = TimePeriodicSeries::new();
        h.add(1, 1, 0, cx(1.0, 0.0));
        assert_eq!(nf_residual(&h, &w), 0.0);
        h.add(2, 1, 1, cx(0.3, 0.4));
        assert_eq!(nf_residual(&h, &w), 0.0);
        let mut g = TimePeriodicSeries::new();
        g.add(2, 1, 0, cx(0.3, 0.4));
        assert!((nf_residual(&g, &w) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projection_examples() {
        let w = Frequency::rational(1, 4).unwrap();
        let mut h = TimePeriodicSeries::new();
        h.add(2, 2, 0, cx(1.0, 0.0));
        for l in -2..=2 {
            h.add_real_pair(4, 0, l, cx(0.5, 0.0));
            h.add_real_pair(2, 1, l, cx(0.5, 0.0));
        }
        let p = resonant_project(&h, &w);
        let keys: Vec<Mode> = p.entries().map(|(k, _)| k).collect();
        assert_eq!(keys, vec![(0, 4, -1), (2, 2, 0), (4, 0, 1)]);
        assert_eq!(resonant_project(&p, &w), p);
        assert_eq!(nf_residual(&p, &w), 0.0);
    }

    #[test]
    fn autonomize_examples() {
        let w = Frequency::rational(1, 4).unwrap();
        let mut h = TimePeriodicSeries::new();
        h.add(1, 1, 0, cx(0.25, 0.0));
        // C cos(4(φ + t/4)) r² = ½C e^{i(4φ+t)} r² + c.c.
        h.add_real_pair(4, 0, 1, cx(0.35, 0.0));
        let a = autonomize(&h, &w).unwrap();
        assert!(a.term(2).is_none());
        assert_eq!(a.term(4).unwrap(), &TrigPoly::cos_term(4, 0.7));

        let mut g = TimePeriodicSeries::new();
        g.add(1, 1, 0, cx(0.25, 0.0));
        g.add(2, 2, 0, cx(-1.5, 0.0));
        assert_eq!(autonomize(&g, &w).unwrap().term(4).unwrap(), &TrigPoly::constant(-1.5));

        g.add_real_pair(2, 1, 0, cx(1e-3, 0.0));
        assert!(matches!(autonomize(&g, &w), Err(NormalFormError::NotInNormalForm { .. })));
    }

    #[test]
    fn autonomize_preserves_values() {
        let w = Frequency::rational(2, 3).unwrap();
        let mut h = TimePeriodicSeries::new();
        h.add(1, 1, 0, cx(2.0 / 3.0, 0.0));
        h.add_real_pair(3, 0, 2, cx(0.2, -0.9));
        h.add_real_pair(2, 2, 0, cx(0.4, 0.0));
        h.add_real_pair(6, 0, 4, cx(-0.1, 0.3));
        h.add_real_pair(4, 1, 2, cx(0.6, 0.5));
        let a = autonomize(&h, &w).unwrap();
        for &(r, phi, t) in &[(0.3, 0.2, 1.7), (0.01, 4.0, -3.0), (0.9, 2.5, 10.0)] {
            let lhs = h.eval(r, phi, t);
            let rhs = a.eval(crate::hamiltonian::AngleActionState::new(r, phi + w.value() * t)).unwrap() + w.value() * r;
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
        let st = structure(&a, 3).unwrap();
        assert!(st.keys().all(|s| [3, 4, 5, 6].contains(s)));
    }

    #[test]
    fn structure_examples() {
        let b = 0.7;
        let k = 3;
        let quartic = HalfPowerSeries::from_terms([(4 * k, TrigPoly::new(3.0 * b, &[0.0, 0.0, 0.0, 0.0, 0.0, 4.0 * b, 0.0, 0.0, 0.0, 0.0, 0.0, b], &[]))]).unwrap();
        let st = structure(&quartic, k).unwrap();
        let t = &st[&(4 * k)];
        assert_eq!((t.a, t.b(2), t.b(4), t.b(1)), (3.0 * b, 4.0 * b, b, 0.0));
        assert_eq!(synthesize(&st, k), quartic);

        let cubic = HalfPowerSeries::from_terms([(3 * k, TrigPoly::new(0.0, &[0.0, 0.0, 3.0 * b, 0.0, 0.0, 0.0, 0.0, 0.0, b], &[]))]).unwrap();
        let t = &structure(&cubic, k).unwrap()[&(3 * k)];
        assert_eq!((t.a, t.b(1), t.b(3)), (0.0, 3.0 * b, b));

        let simple = HalfPowerSeries::from_terms([(4, TrigPoly::new(1.0, &[0.0, 0.0, 0.0, 1.0], &[]))]).unwrap();
        let t = &structure(&simple, 4).unwrap()[&4];
        assert_eq!((t.a, t.b(1), t.c(1)), (1.0, 1.0, 0.0));

        let bad = HalfPowerSeries::from_terms([(4, TrigPoly::cos_term(2, 1.0))]).unwrap();
        assert_eq!(structure(&bad, 4), Err(NormalFormError::NonResonantHarmonic { s: 4, n: 2, k: 4 }));
    }

    #[test]
    fn degenerate_examples() {
        let f = degenerate_reduce(1.0, 1.0, 0.0, 4);
        assert!(f.is_degenerate);
        assert_eq!(f.phase, 0.0);
        for i in 0..16 {
            let x = TAU * i as f64 / 16.0;
            assert!((f.psi0.eval(x) - 2.0 * (2.0 * x).cos().powi(2)).abs() < 1e-14);
        }
        let f = degenerate_reduce(1.0, -1.0, 0.0, 4);
        assert!(f.is_degenerate);
        assert!((f.phase - PI).abs() < 1e-15);
        for i in 0..16 {
            let x = TAU * i as f64 / 16.0;
            assert!((f.psi0.eval(x) - (1.0 - (4.0 * x).cos())).abs() < 1e-14);
        }
        assert!(!degenerate_reduce(2.0, 1.0, 0.0, 4).is_degenerate);
        assert!(!degenerate_reduce(0.0, 0.0, 0.0, 4).is_degenerate);
    }

    #[test]
    fn degenerate_phase_agrees_at_sixteen_angles() {
        for &(a, b, c) in &[(5.0, 3.0, 4.0), (-5.0, 3.0, -4.0), (-2.0, 0.0, 2.0), (1.0, -0.6, -0.8)] {
            let k = 6;
            let f = degenerate_reduce(a, b, c, k);
            assert!(f.is_degenerate);
            for i in 0..16 {
                let x = TAU * i as f64 / 16.0;
                let direct = a + b * (k as f64 * x).cos() + c * (k as f64 * x).sin();
                let squared = 2.0 * a * ((k as f64 * x + f.phase) / 2.0).cos().powi(2);
                assert!((direct - squared).abs() < 1e-13);
                assert!((f.psi0.eval(x) - squared).abs() < 1e-13);
            }
        }
    }
}
