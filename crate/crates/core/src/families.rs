//! Hamiltonian families with known verdicts.

use serde::{Deserialize, Serialize};

use crate::hamiltonian::HalfPowerSeries;
use crate::trigpoly::TrigPoly;

/// `1 - cos qφ`.
pub fn one_minus_cos(q: usize) -> TrigPoly {
    &TrigPoly::constant(1.0) - &TrigPoly::cos_term(q, 1.0)
}

/// `(1 - cos qφ) r^{q/2} + (s + κ(1 - cos qφ)) r^{q/2+1}`.
pub fn mansilla_vidal(q: u32, s: f64, kappa: f64) -> HalfPowerSeries {
    let psi0 = one_minus_cos(q as usize);
    let psi1 = &TrigPoly::constant(s) + &psi0.scale(kappa);
    HalfPowerSeries::from_terms([(q, psi0), (q + 2, psi1)]).expect("q >= 2")
}

/// Fourth-order resonance: the `q = 4` member of [`mansilla_vidal`].
pub fn markeyev(s: f64, kappa: f64) -> HalfPowerSeries {
    mansilla_vidal(4, s, kappa)
}

/// `(1 + sin φ) r² + a r³`.
pub fn intro_example(a: f64) -> HalfPowerSeries {
    HalfPowerSeries::from_terms([(4, TrigPoly::new(1.0, &[], &[1.0])), (6, TrigPoly::constant(a))]).expect("valid")
}

/// `4B cos³(kφ) r^{3k/2} + s cos(kφ) r^{3k/2+1}`, with
/// `4cos³x = 3cos x + cos 3x`. Zeros of order three at `kφ = π/2 mod π`.
pub fn cubic_family(k: u32, b: f64, s: f64) -> HalfPowerSeries {
    let k_ = k as usize;
    let psi0 = &TrigPoly::cos_term(k_, 3.0 * b) + &TrigPoly::cos_term(3 * k_, b);
    HalfPowerSeries::from_terms([(3 * k, psi0), (3 * k + 2, TrigPoly::cos_term(k_, s))]).expect("k >= 1")
}

/// `B(3 + 4cos 2kφ + cos 4kφ) r^{2k} + s r^{2k+1}`, i.e. `8B cos⁴(kφ)`.
/// Zeros of order four.
pub fn quartic_family(k: u32, b: f64, s: f64) -> HalfPowerSeries {
    let k_ = k as usize;
    let psi0 = &(&TrigPoly::constant(3.0 * b) + &TrigPoly::cos_term(2 * k_, 4.0 * b)) + &TrigPoly::cos_term(4 * k_, b);
    HalfPowerSeries::from_terms([(4 * k, psi0), (4 * k + 2, TrigPoly::constant(s))]).expect("k >= 1")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Markeyev,
    MansillaVidal,
    CubicFamily,
    QuarticFamily,
    IntroExample,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Markeyev, Family::MansillaVidal, Family::CubicFamily, Family::QuarticFamily, Family::IntroExample];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Markeyev => "markeyev",
            Family::MansillaVidal => "mansilla-vidal",
            Family::CubicFamily => "cubic-family",
            Family::QuarticFamily => "quartic-family",
            Family::IntroExample => "intro-example",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Family parameters. Unused ones are ignored by a given family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub s: f64,
    pub kappa: f64,
    pub q: u32,
    pub a: f64,
    pub b: f64,
    /// Harmonic `k` of the cubic and quartic families.
    pub k: u32,
}

impl Default for FamilyParams {
    fn default() -> Self {
        Self { s: 1.0, kappa: 0.0, q: 4, a: 1.0, b: 1.0, k: 1 }
    }
}

impl Family {
    pub fn build(&self, p: &FamilyParams) -> HalfPowerSeries {
        match self {
            Family::Markeyev => markeyev(p.s, p.kappa),
            Family::MansillaVidal => mansilla_vidal(p.q, p.s, p.kappa),
            Family::CubicFamily => cubic_family(p.k, p.b, p.s),
            Family::QuarticFamily => quartic_family(p.k, p.b, p.s),
            Family::IntroExample => intro_example(p.a),
        }
    }

    /// Resonant frequency whose rotating-frame normal form is this family,
    /// when there is one: `1/4` for Markeyev, `1/q` for Mansilla–Vidal.
    pub fn frequency(&self, p: &FamilyParams) -> Option<(u32, u32)> {
        match self {
            Family::Markeyev => Some((1, 4)),
            Family::MansillaVidal => Some((1, p.q)),
            Family::CubicFamily | Family::QuarticFamily => Some((1, p.k)),
            Family::IntroExample => None,
        }
    }

    /// Parameters shown in reports.
    pub fn describe(&self, p: &FamilyParams) -> String {
        match self {
            Family::Markeyev => format!("s={}, kappa={}", p.s, p.kappa),
            Family::MansillaVidal => format!("q={}, s={}, kappa={}", p.q, p.s, p.kappa),
            Family::CubicFamily | Family::QuarticFamily => format!("k={}, b={}, s={}", p.k, p.b, p.s),
            Family::IntroExample => format!("a={}", p.a),
        }
    }
}
