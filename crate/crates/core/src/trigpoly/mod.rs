//! Real trigonometric polynomials in one angle.
//!
//! A [`TrigPoly`] stores `a0 + Σ (ac[n] cos nφ + as[n] sin nφ)` for
//! `n = 1..=N` in real cosine/sine form, so realness is an invariant of the
//! representation. Arrays are kept trimmed: the top harmonic always carries a
//! nonzero coefficient unless the polynomial is identically zero.

mod eig;
mod roots;

pub use roots::{find_zeros, ZeroInfo, ZeroTolerances};

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("trigonometric polynomial is identically zero")]
    IdenticallyZero,
    #[error("zero near phi = {phi:.12} could not be resolved: {reason}")]
    IllConditioned { phi: f64, reason: String },
    #[error("non-finite coefficient in trigonometric polynomial")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPoly {
    a0: f64,
    /// `cos[n - 1]` multiplies `cos nφ`.
    cos: Vec<f64>,
    /// `sin[n - 1]` multiplies `sin nφ`.
    sin: Vec<f64>,
}

impl Default for TrigPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl TrigPoly {
    /// Builds a polynomial from a constant term and cosine/sine coefficients
    /// for harmonics `1..`. The two slices may differ in length.
    pub fn new(a0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let n = cos.len().max(sin.len());
        let mut c = vec![0.0; n];
        let mut s = vec![0.0; n];
        c[..cos.len()].copy_from_slice(cos);
        s[..sin.len()].copy_from_slice(sin);
        let mut p = Self { a0, cos: c, sin: s };
        p.trim();
        p
    }

    pub fn try_new(a0: f64, cos: &[f64], sin: &[f64]) -> Result<Self, TrigError> {
        let p = Self::new(a0, cos, sin);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(TrigError::NonFinite)
        }
    }

    pub fn zero() -> Self {
        Self { a0: 0.0, cos: Vec::new(), sin: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(c, &[], &[])
    }

    /// `c · cos(nφ)`; `n = 0` yields the constant `c`.
    pub fn cos_term(n: usize, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(n, c, 0.0);
        p
    }

    /// `c · sin(nφ)`; `n = 0` yields zero.
    pub fn sin_term(n: usize, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(n, 0.0, c);
        p
    }

    /// Adds `c·cos nφ + s·sin nφ` in place (for `n = 0` only `c` is used).
    pub fn add_term(&mut self, n: usize, c: f64, s: f64) {
        if n == 0 {
            self.a0 += c;
            return;
        }
        if self.cos.len() < n {
            self.cos.resize(n, 0.0);
            self.sin.resize(n, 0.0);
        }
        self.cos[n - 1] += c;
        self.sin[n - 1] += s;
        self.trim();
    }

    fn trim(&mut self) {
        while let (Some(&c), Some(&s)) = (self.cos.last(), self.sin.last()) {
            if c == 0.0 && s == 0.0 {
                self.cos.pop();
                self.sin.pop();
            } else {
                break;
            }
        }
    }

    /// Largest harmonic with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Cosine coefficient of harmonic `n` (`n = 0` is the constant term).
    pub fn cos_coeff(&self, n: usize) -> f64 {
        if n == 0 {
            self.a0
        } else {
            self.cos.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    pub fn sin_coeff(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.sin.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    /// Iterates `(n, cos_n, sin_n)` over harmonics `1..=N`.
    pub fn harmonics(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(i, (&c, &s))| (i + 1, c, s))
    }

    pub fn is_zero(&self) -> bool {
        self.a0 == 0.0 && self.cos.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.cos.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.a0.is_finite() && self.cos.iter().chain(&self.sin).all(|c| c.is_finite())
    }

    pub fn eval(&self, phi: f64) -> f64 {
        self.harmonics().fold(self.a0, |acc, (n, c, s)| {
            let x = n as f64 * phi;
            acc + c * x.cos() + s * x.sin()
        })
    }

    /// Value of the `m`-th derivative at `phi` without building the
    /// derivative polynomial. Uses `d^m/dx^m cos x = cos(x + mπ/2)`.
    pub fn eval_derivative(&self, m: u32, phi: f64) -> f64 {
        if m == 0 {
            return self.eval(phi);
        }
        let shift = (m % 4) as f64 * FRAC_PI_2;
        self.harmonics().fold(0.0, |acc, (n, c, s)| {
            let nf = n as f64;
            let x = nf * phi + shift;
            acc + nf.powi(m as i32) * (c * x.cos() + s * x.sin())
        })
    }

    pub fn derivative(&self) -> Self {
        let mut cos = Vec::with_capacity(self.degree());
        let mut sin = Vec::with_capacity(self.degree());
        for (n, c, s) in self.harmonics() {
            let nf = n as f64;
            cos.push(nf * s);
            sin.push(-nf * c);
        }
        Self::new(0.0, &cos, &sin)
    }

    pub fn nth_derivative(&self, m: u32) -> Self {
        (0..m).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, k: f64) -> Self {
        let cos: Vec<f64> = self.cos.iter().map(|c| c * k).collect();
        let sin: Vec<f64> = self.sin.iter().map(|s| s * k).collect();
        Self::new(self.a0 * k, &cos, &sin)
    }

    /// Returns `q(φ) = p(φ - c)`.
    pub fn shift(&self, c: f64) -> Self {
        let mut cos = Vec::with_capacity(self.degree());
        let mut sin = Vec::with_capacity(self.degree());
        for (n, a, b) in self.harmonics() {
            let (sn, cn) = (n as f64 * c).sin_cos();
            cos.push(a * cn - b * sn);
            sin.push(a * sn + b * cn);
        }
        Self::new(self.a0, &cos, &sin)
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> f64 {
        self.a0.abs() + self.cos.iter().chain(&self.sin).map(|c| c.abs()).sum::<f64>()
    }

    /// Magnitude bound for the `m`-th derivative: `m! · Σ n^m (|ac_n| + |as_n|)`
    /// (the constant term counts only for `m = 0`).
    pub fn derivative_scale(&self, m: u32) -> f64 {
        if m == 0 {
            return self.l1_norm();
        }
        let fact: f64 = (1..=m).map(f64::from).product();
        let sum: f64 = self
            .harmonics()
            .map(|(n, c, s)| (n as f64).powi(m as i32) * (c.abs() + s.abs()))
            .sum();
        fact * sum
    }

    /// Product via product-to-sum identities.
    pub fn multiply(&self, other: &Self) -> Self {
        let n = self.degree() + other.degree();
        let mut cos = vec![0.0; n + 1];
        let mut sin = vec![0.0; n + 1];
        // harmonic 0 of each factor is (a0, 0)
        let lhs = std::iter::once((0usize, self.a0, 0.0)).chain(self.harmonics());
        for (i, ci, si) in lhs {
            let rhs = std::iter::once((0usize, other.a0, 0.0)).chain(other.harmonics());
            for (j, cj, sj) in rhs {
                let sum = i + j;
                let diff = i.abs_diff(j);
                // cos i cos j = ½[cos(i-j) + cos(i+j)]
                cos[sum] += 0.5 * ci * cj;
                cos[diff] += 0.5 * ci * cj;
                // sin i sin j = ½[cos(i-j) - cos(i+j)]
                cos[sum] -= 0.5 * si * sj;
                cos[diff] += 0.5 * si * sj;
                // sin i cos j = ½[sin(i+j) + sin(i-j)]
                sin[sum] += 0.5 * si * cj;
                // cos i sin j = ½[sin(i+j) - sin(i-j)]
                sin[sum] += 0.5 * ci * sj;
                if i >= j {
                    sin[diff] += 0.5 * si * cj - 0.5 * ci * sj;
                } else {
                    sin[diff] -= 0.5 * si * cj - 0.5 * ci * sj;
                }
            }
        }
        // sin 0φ vanishes identically
        Self::new(cos[0], &cos[1..], &sin[1..])
    }

    pub fn find_zeros(&self, tol: &ZeroTolerances) -> Result<Vec<ZeroInfo>, TrigError> {
        find_zeros(self, tol)
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;

    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        out.a0 += rhs.a0;
        for (n, c, s) in rhs.harmonics() {
            out.add_term(n, c, s);
        }
        out
    }
}

impl Add for TrigPoly {
    type Output = TrigPoly;

    fn add(self, rhs: TrigPoly) -> TrigPoly {
        &self + &rhs
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;

    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;

    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &(-rhs)
    }
}

impl Sub for TrigPoly {
    type Output = TrigPoly;

    fn sub(self, rhs: TrigPoly) -> TrigPoly {
        &self - &rhs
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;

    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.multiply(rhs)
    }
}

impl Mul for TrigPoly {
    type Output = TrigPoly;

    fn mul(self, rhs: TrigPoly) -> TrigPoly {
        self.multiply(&rhs)
    }
}

impl fmt::Display for TrigPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.a0 != 0.0 {
            parts.push(format!("{}", self.a0));
        }
        for (n, c, s) in self.harmonics() {
            if c != 0.0 {
                parts.push(format!("{c}·cos({n}φ)"));
            }
            if s != 0.0 {
                parts.push(format!("{s}·sin({n}φ)"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}
