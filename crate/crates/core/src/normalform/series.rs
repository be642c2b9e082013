//! Time-periodic Hamiltonian coefficients
//! `H = Σ c_{μνl} e^{ilt} e^{i(μ-ν)φ} r^{(μ+ν)/2}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::text::{field, real, tokens};
use crate::hamiltonian::ParseError;

/// Key `(μ, ν, l)` of one mode.
pub type Mode = (u32, u32, i64);

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TimePeriodicSeries {
    #[serde(with = "entries_serde")]
    entries: BTreeMap<Mode, Complex64>,
}

impl TimePeriodicSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c` to the coefficient of `(μ, ν, l)`; exact cancellation removes
    /// the entry. Requires `μ + ν ≥ 2`.
    pub fn add(&mut self, mu: u32, nu: u32, l: i64, c: Complex64) {
        assert!(mu + nu >= 2, "mu + nu must be at least 2");
        let e = self.entries.entry((mu, nu, l)).or_default();
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.entries.remove(&(mu, nu, l));
        }
    }

    /// Adds `c` at `(μ, ν, l)` and its conjugate at `(ν, μ, -l)`, keeping the
    /// series real. On self-conjugate keys only the real part is added.
    pub fn add_real_pair(&mut self, mu: u32, nu: u32, l: i64, c: Complex64) {
        if mu == nu && l == 0 {
            self.add(mu, nu, l, Complex64::new(c.re, 0.0));
        } else {
            self.add(mu, nu, l, c);
            self.add(nu, mu, -l, c.conj());
        }
    }

    pub fn get(&self, mu: u32, nu: u32, l: i64) -> Complex64 {
        self.entries.get(&(mu, nu, l)).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest `μ + ν`.
    pub fn order(&self) -> u32 {
        self.entries.keys().map(|(m, n, _)| m + n).max().unwrap_or(2)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(Mode) -> bool) {
        self.entries.retain(|k, _| keep(*k));
    }

    /// `max |c(μ,ν,l) - conj c(ν,μ,-l)|`; zero for a real Hamiltonian.
    pub fn reality_defect(&self) -> f64 {
        self.entries
            .iter()
            .map(|(&(m, n, l), c)| (c - self.get(n, m, -l).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).sum()
    }

    /// Complex value of the sum; real up to rounding when the series is real.
    pub fn eval_complex(&self, r: f64, phi: f64, t: f64) -> Complex64 {
        let q = r.sqrt();
        self.entries
            .iter()
            .map(|(&(m, n, l), c)| {
                let d = m as f64 - n as f64;
                c * Complex64::from_polar(q.powi((m + n) as i32), d * phi + l as f64 * t)
            })
            .sum()
    }

    pub fn eval(&self, r: f64, phi: f64, t: f64) -> f64 {
        self.eval_complex(r, phi, t).re
    }

    /// Reads lines `mu nu l re im`; `#` starts a comment.
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut s = Self::new();
        for (idx, raw) in src.lines().enumerate() {
            let ln = idx + 1;
            let toks = tokens(raw);
            if toks.is_empty() {
                continue;
            }
            if toks.len() != 5 {
                let col = toks.get(5).map_or(raw.len() + 1, |t| t.0);
                return Err(ParseError::new(ln, col, format!("expected 5 fields `mu nu l re im`, found {}", toks.len())));
            }
            let mu: u32 = field(ln, toks[0], "mu")?;
            let nu: u32 = field(ln, toks[1], "nu")?;
            if mu + nu < 2 {
                return Err(ParseError::new(ln, toks[0].0, "mu + nu must be at least 2"));
            }
            let l: i64 = field(ln, toks[2], "time harmonic")?;
            let re = real(ln, toks[3], "real part")?;
            let im = real(ln, toks[4], "imaginary part")?;
            s.add(mu, nu, l, Complex64::new(re, im));
        }
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&(m, n, l), c) in &self.entries {
            writeln!(out, "{m} {n} {l} {:?} {:?}", c.re, c.im).unwrap();
        }
        out
    }
}

mod entries_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        mu: u32,
        nu: u32,
        l: i64,
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Mode, Complex64>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Entry> = m
            .iter()
            .map(|(&(mu, nu, l), c)| Entry { mu, nu, l, re: c.re, im: c.im })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Mode, Complex64>, D::Error> {
        let v = Vec::<Entry>::deserialize(d)?;
        Ok(v.into_iter().map(|e| ((e.mu, e.nu, e.l), Complex64::new(e.re, e.im))).collect())
    }
}
