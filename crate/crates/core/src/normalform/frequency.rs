use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrequencyError {
    #[error("frequency numerator and denominator must be positive")]
    NonPositive,
    #[error("cannot parse frequency `{0}`; expected `p/k`, `p` or `nonresonant:<value>`")]
    Syntax(String),
}

/// Characteristic frequency `ω`: a reduced rational `p/k`, or a marker for
/// the case without resonance relations (`M_ω = {0}`) that keeps the numeric
/// value for residual computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Frequency {
    Rational { p: u32, k: u32 },
    Nonresonant { value: f64 },
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Frequency {
    /// `p/k` reduced to lowest terms.
    pub fn rational(p: u32, k: u32) -> Result<Self, FrequencyError> {
        if p == 0 || k == 0 {
            return Err(FrequencyError::NonPositive);
        }
        let g = gcd(p, k);
        Ok(Self::Rational { p: p / g, k: k / g })
    }

    pub fn nonresonant(value: f64) -> Self {
        Self::Nonresonant { value }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Rational { p, k } => p as f64 / k as f64,
            Self::Nonresonant { value } => value,
        }
    }

    /// Resonance order `k`, if any.
    pub fn order(&self) -> Option<u32> {
        match *self {
            Self::Rational { k, .. } => Some(k),
            Self::Nonresonant { .. } => None,
        }
    }

    /// Whether the mode `e^{i(d φ + l t)}` is resonant, i.e. `l = ω d`.
    /// Integer-exact for rational `ω`.
    pub fn is_resonant(&self, d: i64, l: i64) -> bool {
        match *self {
            Self::Rational { p, k } => p as i64 * d == l * k as i64,
            Self::Nonresonant { .. } => d == 0 && l == 0,
        }
    }

    /// `|ω d - l|`, exactly zero on resonant modes.
    pub fn detuning(&self, d: i64, l: i64) -> f64 {
        match *self {
            Self::Rational { p, k } => (p as i64 * d - l * k as i64).unsigned_abs() as f64 / k as f64,
            Self::Nonresonant { value } => {
                if self.is_resonant(d, l) {
                    0.0
                } else {
                    (value * d as f64 - l as f64).abs()
                }
            }
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational { p, k } => write!(f, "{p}/{k}"),
            Self::Nonresonant { value } => write!(f, "nonresonant:{value}"),
        }
    }
}

impl FromStr for Frequency {
    type Err = FrequencyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || FrequencyError::Syntax(s.to_string());
        if let Some(v) = s.strip_prefix("nonresonant:") {
            let value: f64 = v.parse().map_err(|_| bad())?;
            return if value.is_finite() { Ok(Self::nonresonant(value)) } else { Err(bad()) };
        }
        let (p, k) = match s.split_once('/') {
            Some((p, k)) => (p.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        Self::rational(p, k)
    }
}

/// The module `M_ω = {d ∈ Z : ω d ∈ Z} = kZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResonanceModule {
    /// Generator `k`; `None` for the trivial module `{0}`.
    pub order: Option<u32>,
}

impl ResonanceModule {
    pub fn contains(&self, d: i64) -> bool {
        match self.order {
            Some(k) => d % k as i64 == 0,
            None => d == 0,
        }
    }
}

impl fmt::Display for ResonanceModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            Some(1) => write!(f, "M = Z"),
            Some(k) => write!(f, "M = {k}Z"),
            None => write!(f, "M = {{0}}: no resonance relations"),
        }
    }
}

pub fn resonance_module(f: &Frequency) -> ResonanceModule {
    ResonanceModule { order: f.order() }
}
