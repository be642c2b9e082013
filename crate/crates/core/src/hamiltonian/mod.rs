//! Hamiltonians in action-angle form as truncated half-power series.
//!
//! `H(r, φ) = Σ_j ψ_j(φ) r^{j/2}` with integer half-indices `j ≥ 2`. The
//! truncation order `J` is carried explicitly; nothing here extends it.

pub(crate) mod text;

pub use text::ParseError;

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trigpoly::TrigPoly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonianError {
    #[error("negative action r = {0}")]
    NegativeAction(f64),
    #[error("half-index {0} is below 2")]
    HalfIndexTooSmall(u32),
    #[error("half-index {j} exceeds truncation order {order}")]
    BeyondOrder { j: u32, order: u32 },
    #[error("no term of order r^(3/2) or higher")]
    OnlyLinear,
    #[error("quadratic term depends on the angle; expected a pure rotation ω r")]
    AngleDependentQuadratic,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleActionState {
    pub r: f64,
    pub phi: f64,
}

impl AngleActionState {
    pub fn new(r: f64, phi: f64) -> Self {
        Self { r, phi }
    }
}

/// `x = √(2r) cos φ, y = √(2r) sin φ`, inverted. The origin maps to `φ = 0`.
pub fn to_action_angle(s: CartesianState) -> AngleActionState {
    let r = 0.5 * (s.x * s.x + s.y * s.y);
    if r == 0.0 {
        return AngleActionState { r: 0.0, phi: 0.0 };
    }
    AngleActionState { r, phi: s.y.atan2(s.x).rem_euclid(TAU) }
}

pub fn to_cartesian(s: AngleActionState) -> CartesianState {
    let rho = (2.0 * s.r).sqrt();
    let (sn, cs) = s.phi.sin_cos();
    CartesianState { x: rho * cs, y: rho * sn }
}

impl From<CartesianState> for AngleActionState {
    fn from(s: CartesianState) -> Self {
        to_action_angle(s)
    }
}

impl From<AngleActionState> for CartesianState {
    fn from(s: AngleActionState) -> Self {
        to_cartesian(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPowerSeries {
    terms: BTreeMap<u32, TrigPoly>,
    order: u32,
}

impl HalfPowerSeries {
    /// Empty series truncated at half-index `order`.
    pub fn new(order: u32) -> Self {
        Self { terms: BTreeMap::new(), order: order.max(2) }
    }

    /// Builds a series from `(j, ψ_j)` pairs; the order is the largest `j`.
    pub fn from_terms<I>(terms: I) -> Result<Self, HamiltonianError>
    where
        I: IntoIterator<Item = (u32, TrigPoly)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let order = terms.iter().map(|(j, _)| *j).max().unwrap_or(2);
        let mut h = Self::new(order);
        for (j, p) in terms {
            h.add_term(j, &p)?;
        }
        Ok(h)
    }

    /// `ω r`.
    pub fn rotation(omega: f64) -> Self {
        let mut h = Self::new(2);
        h.add_term(2, &TrigPoly::constant(omega)).expect("j = 2 is valid");
        h
    }

    pub fn with_term(mut self, j: u32, p: TrigPoly) -> Result<Self, HamiltonianError> {
        if j > self.order {
            self.order = j;
        }
        self.add_term(j, &p)?;
        Ok(self)
    }

    /// Adds `p r^{j/2}` to the series. Terms that cancel are removed.
    pub fn add_term(&mut self, j: u32, p: &TrigPoly) -> Result<(), HamiltonianError> {
        if j < 2 {
            return Err(HamiltonianError::HalfIndexTooSmall(j));
        }
        if j > self.order {
            return Err(HamiltonianError::BeyondOrder { j, order: self.order });
        }
        let sum = match self.terms.get(&j) {
            Some(q) => q + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, sum);
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn set_order(&mut self, order: u32) -> Result<(), HamiltonianError> {
        if let Some(&j) = self.terms.keys().next_back() {
            if j > order {
                return Err(HamiltonianError::BeyondOrder { j, order });
            }
        }
        self.order = order.max(2);
        Ok(())
    }

    pub fn term(&self, j: u32) -> Option<&TrigPoly> {
        self.terms.get(&j)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &TrigPoly)> {
        self.terms.iter().map(|(j, p)| (*j, p))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rotation frequency `ω` if the quadratic term is a constant.
    pub fn linear_frequency(&self) -> Option<f64> {
        match self.terms.get(&2) {
            None => Some(0.0),
            Some(p) if p.is_constant() => Some(p.a0()),
            Some(_) => None,
        }
    }

    /// The series with the quadratic term dropped.
    pub fn without_rotation(&self) -> Self {
        let mut h = self.clone();
        h.terms.remove(&2);
        h
    }

    /// Returns `H(r, φ - c)`.
    pub fn shift_angle(&self, c: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|(j, p)| (*j, p.shift(c))).collect(),
            order: self.order,
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut h = Self::new(self.order);
        for (j, p) in self.terms() {
            h.add_term(j, &p.scale(k)).expect("same order");
        }
        h
    }

    fn check(s: AngleActionState) -> Result<f64, HamiltonianError> {
        if s.r < 0.0 {
            Err(HamiltonianError::NegativeAction(s.r))
        } else {
            Ok(s.r.sqrt())
        }
    }

    pub fn eval(&self, s: AngleActionState) -> Result<f64, HamiltonianError> {
        let q = Self::check(s)?;
        Ok(self.terms().map(|(j, p)| p.eval(s.phi) * q.powi(j as i32)).sum())
    }

    /// `∂H/∂r = Σ ψ_j (j/2) r^{j/2 - 1}`; at `r = 0` only `ψ_2` survives.
    pub fn partial_r(&self, s: AngleActionState) -> Result<f64, HamiltonianError> {
        let q = Self::check(s)?;
        Ok(self
            .terms()
            .map(|(j, p)| p.eval(s.phi) * 0.5 * j as f64 * q.powi(j as i32 - 2))
            .sum())
    }

    pub fn partial_phi(&self, s: AngleActionState) -> Result<f64, HamiltonianError> {
        let q = Self::check(s)?;
        if q == 0.0 {
            return Ok(0.0);
        }
        Ok(self.terms().map(|(j, p)| p.eval_derivative(1, s.phi) * q.powi(j as i32)).sum())
    }

    /// `∂²H/∂r²`. Unbounded at `r = 0` when a `j = 3` term is present.
    pub fn partial_rr(&self, s: AngleActionState) -> Result<f64, HamiltonianError> {
        let q = Self::check(s)?;
        Ok(self
            .terms()
            .filter(|(j, _)| *j > 2)
            .map(|(j, p)| {
                let e = 0.5 * j as f64;
                p.eval(s.phi) * e * (e - 1.0) * q.powi(j as i32 - 4)
            })
            .sum())
    }

    pub fn partial_r_phi(&self, s: AngleActionState) -> Result<f64, HamiltonianError> {
        let q = Self::check(s)?;
        Ok(self
            .terms()
            .map(|(j, p)| p.eval_derivative(1, s.phi) * 0.5 * j as f64 * q.powi(j as i32 - 2))
            .sum())
    }

    /// Extracts `r^α ψ₀ + r^{α+γ} ψ₁` from the lowest two orders above a pure
    /// rotation.
    pub fn leading_pair(&self) -> Result<DegeneratePair, HamiltonianError> {
        if self.linear_frequency().is_none() {
            return Err(HamiltonianError::AngleDependentQuadratic);
        }
        let mut it = self.terms.iter().filter(|(j, _)| **j >= 3);
        let (&m, psi0) = it.next().ok_or(HamiltonianError::OnlyLinear)?;
        let next = it.next();
        Ok(DegeneratePair {
            psi0: psi0.clone(),
            psi1: next.map(|(_, p)| p.clone()).unwrap_or_default(),
            alpha_half: m,
            gamma_half: next.map(|(&j, _)| j - m),
        })
    }

    /// Parses the `j n kind coeff` text format.
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        text::parse(src)
    }

    /// Writes the text format; [`HalfPowerSeries::parse`] reads it back exactly.
    pub fn to_text(&self) -> String {
        text::write(self)
    }
}

impl fmt::Display for HalfPowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(j, p)| {
                let pow = if j % 2 == 0 { format!("r^{}", j / 2) } else { format!("r^({j}/2)") };
                format!("({p})·{pow}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Leading pair `r^α ψ₀ + r^{α+γ} ψ₁`, with `α = m/2` and `γ = n/2` stored as
/// half-indices `m` and `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegeneratePair {
    pub psi0: TrigPoly,
    pub psi1: TrigPoly,
    pub alpha_half: u32,
    /// `None` when the series has no second term; `psi1` is then zero.
    pub gamma_half: Option<u32>,
}

impl DegeneratePair {
    pub fn new(psi0: TrigPoly, psi1: TrigPoly, alpha_half: u32, gamma_half: u32) -> Self {
        Self { psi0, psi1, alpha_half, gamma_half: Some(gamma_half) }
    }

    pub fn alpha(&self) -> f64 {
        0.5 * self.alpha_half as f64
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma_half.map(|g| 0.5 * g as f64)
    }

    /// `ψ(r, ·) = ψ₀ + r^γ ψ₁`.
    pub fn psi_at(&self, r: f64) -> TrigPoly {
        match self.gamma() {
            Some(g) => &self.psi0 + &self.psi1.scale(r.powf(g)),
            None => self.psi0.clone(),
        }
    }

    pub fn shift(&self, c: f64) -> Self {
        Self { psi0: self.psi0.shift(c), psi1: self.psi1.shift(c), ..self.clone() }
    }

    /// The two-term Hamiltonian `r^α ψ₀ + r^{α+γ} ψ₁`.
    pub fn truncated(&self) -> HalfPowerSeries {
        let mut terms = vec![(self.alpha_half, self.psi0.clone())];
        if let Some(g) = self.gamma_half {
            terms.push((self.alpha_half + g, self.psi1.clone()));
        }
        HalfPowerSeries::from_terms(terms).expect("alpha_half >= 3")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn intro(a: f64) -> HalfPowerSeries {
        HalfPowerSeries::from_terms([
            (4, TrigPoly::new(1.0, &[], &[1.0])),
            (6, TrigPoly::constant(a)),
        ])
        .unwrap()
    }

    #[test]
    fn action_angle_examples() {
        let s = to_action_angle(CartesianState { x: SQRT_2, y: 0.0 });
        assert!((s.r - 1.0).abs() < 1e-15 && s.phi == 0.0);
        let s = to_action_angle(CartesianState { x: 0.0, y: SQRT_2 });
        assert!((s.r - 1.0).abs() < 1e-15 && (s.phi - FRAC_PI_2).abs() < 1e-15);
        let back = to_action_angle(to_cartesian(AngleActionState::new(0.3, 2.0)));
        assert!((back.r - 0.3).abs() < 1e-14 && (back.phi - 2.0).abs() < 1e-14);
        let o = to_action_angle(CartesianState { x: 0.0, y: 0.0 });
        assert_eq!((o.r, o.phi), (0.0, 0.0));
    }

    #[test]
    fn partials_examples() {
        let rot = HalfPowerSeries::rotation(0.25);
        let s = AngleActionState::new(0.7, 1.3);
        assert_eq!(rot.partial_r(s).unwrap(), 0.25);
        assert_eq!(rot.partial_phi(s).unwrap(), 0.0);

        let h = intro(1.0);
        let s = AngleActionState::new(1.0, FRAC_PI_2);
        assert!((h.partial_r(s).unwrap() - 7.0).abs() < 1e-14);

        let m = HalfPowerSeries::from_terms([(4, TrigPoly::new(1.0, &[0.0, 0.0, 0.0, -1.0], &[]))]).unwrap();
        let s = AngleActionState::new(0.5, FRAC_PI_2);
        assert!(m.eval(s).unwrap().abs() < 1e-15);
        assert!(m.partial_phi(s).unwrap().abs() < 1e-14);
    }

    #[test]
    fn negative_action_rejected() {
        let h = intro(1.0);
        assert_eq!(
            h.eval(AngleActionState::new(-1e-3, 0.0)),
            Err(HamiltonianError::NegativeAction(-1e-3))
        );
    }

    #[test]
    fn origin_conventions() {
        let h = intro(1.0).with_term(2, TrigPoly::constant(0.5)).unwrap();
        let o = AngleActionState::new(0.0, 1.0);
        assert_eq!(h.eval(o).unwrap(), 0.0);
        assert_eq!(h.partial_r(o).unwrap(), 0.5);
        assert_eq!(h.partial_phi(o).unwrap(), 0.0);
    }

    #[test]
    fn leading_pair_examples() {
        let markeyev = HalfPowerSeries::from_terms([
            (4, TrigPoly::new(1.0, &[0.0, 0.0, 0.0, -1.0], &[])),
            (6, TrigPoly::new(1.0 + 2.0, &[0.0, 0.0, 0.0, -2.0], &[])),
        ])
        .unwrap();
        let p = markeyev.leading_pair().unwrap();
        assert_eq!((p.alpha(), p.gamma()), (2.0, Some(1.0)));
        assert_eq!(p.psi0.cos_coeff(4), -1.0);

        let p = intro(-1.0).leading_pair().unwrap();
        assert_eq!(p.psi1, TrigPoly::constant(-1.0));
        assert_eq!(p.alpha_half, 4);

        let cubic = HalfPowerSeries::from_terms([(6, TrigPoly::constant(1.0))]).unwrap();
        let p = cubic.leading_pair().unwrap();
        assert_eq!(p.psi0, TrigPoly::constant(1.0));
        assert!(p.gamma_half.is_none() && p.psi1.is_zero());

        assert_eq!(HalfPowerSeries::rotation(1.0).leading_pair(), Err(HamiltonianError::OnlyLinear));
        let rot_plus = intro(1.0).with_term(2, TrigPoly::constant(0.25)).unwrap();
        assert_eq!(rot_plus.leading_pair().unwrap().alpha_half, 4);
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut h = intro(1.0);
        h.add_term(6, &TrigPoly::constant(-1.0)).unwrap();
        assert!(h.term(6).is_none());
        assert_eq!(h.order(), 6);
        assert!(h.add_term(1, &TrigPoly::constant(1.0)).is_err());
        assert!(h.add_term(7, &TrigPoly::constant(1.0)).is_err());
    }
}
