//! Stability decisions for `H = r^α ψ₀(φ) + r^{α+γ} ψ₁(φ) + …` and the
//! numerical certificates behind them.
//!
//! Equations of motion throughout: `φ̇ = ∂H/∂r`, `ṙ = -∂H/∂φ`.

mod chetaev;
mod twist;

pub use chetaev::{chetaev_certificate, ChetaevCertificate, ChetaevError, ChetaevOptions, ChetaevSample};
pub use twist::{twist_check, TwistError, TwistOptions, TwistReport};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::{DegeneratePair, HamiltonianError};
use crate::normalform::{degenerate_reduce, synthesize, Structure, DEGENERACY_TOLERANCE};
use crate::trigpoly::{TrigError, TrigPoly, ZeroInfo, ZeroTolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("even criterion needs all zeros of even multiplicity; zero at {phi0:.12} has multiplicity {mult}")]
    OddMultiplicity { phi0: f64, mult: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Stable,
    Unstable,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "TheoremA-nozero")]
    TheoremANoZero,
    #[serde(rename = "TheoremA-simplezero")]
    TheoremASimpleZero,
    #[serde(rename = "Even-A")]
    EvenA,
    #[serde(rename = "Even-B")]
    EvenB,
    Odd,
    #[serde(rename = "Prescreen-oddB")]
    PrescreenOddB,
    #[serde(rename = "Prescreen-CgtD")]
    PrescreenCgtD,
    #[serde(rename = "Prescreen-CltD")]
    PrescreenCltD,
    /// A nonzero constant below the resonance order.
    #[serde(rename = "Prescreen-twist")]
    PrescreenTwist,
    None,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

/// A zero of `ψ₀` with the sign data a criterion used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub phi0: f64,
    pub mult: u32,
    pub lead: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi1_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi1_derivative: Option<f64>,
}

impl From<ZeroInfo> for Witness {
    fn from(z: ZeroInfo) -> Self {
        Self { phi0: z.phi0, mult: z.mult, lead: z.lead, psi1_value: None, psi1_derivative: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub criterion: Criterion,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn new(kind: VerdictKind, criterion: Criterion, witnesses: Vec<Witness>) -> Self {
        Self { kind, criterion, witnesses, note: None }
    }

    fn inconclusive(witnesses: Vec<Witness>, note: &str) -> Self {
        Self { kind: VerdictKind::Inconclusive, criterion: Criterion::None, witnesses, note: Some(note.into()) }
    }

    pub fn is_stable(&self) -> bool {
        self.kind == VerdictKind::Stable
    }

    pub fn is_unstable(&self) -> bool {
        self.kind == VerdictKind::Unstable
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.criterion)
    }
}

/// Values of `ψ₁` below `τ · scale` count as zero.
fn vanishes(v: f64, scale: f64, tol: &ZeroTolerances) -> bool {
    v.abs() <= tol.mult * scale.max(f64::MIN_POSITIVE)
}

/// No zeros: stable. A simple zero: unstable. Otherwise inconclusive.
pub fn classify_theorem_a(psi: &TrigPoly, tol: &ZeroTolerances) -> Result<Verdict, ClassifyError> {
    let zeros = psi.find_zeros(tol)?;
    if zeros.is_empty() {
        return Ok(Verdict::new(VerdictKind::Stable, Criterion::TheoremANoZero, vec![]));
    }
    let simple: Vec<Witness> = zeros.iter().filter(|z| z.mult == 1).map(|&z| z.into()).collect();
    if !simple.is_empty() {
        return Ok(Verdict::new(VerdictKind::Unstable, Criterion::TheoremASimpleZero, simple));
    }
    Ok(Verdict::inconclusive(
        zeros.into_iter().map(Witness::from).collect(),
        "all zeros are multiple",
    ))
}

/// Unstable if `ψ₀^{(m)}(φ₀) ψ₁'(φ₀) > 0` at some zero of odd multiplicity `m > 1`.
pub fn classify_odd(pair: &DegeneratePair, tol: &ZeroTolerances) -> Result<Verdict, ClassifyError> {
    let zeros = pair.psi0.find_zeros(tol)?;
    let scale = pair.psi1.derivative_scale(1);
    let mut hits = Vec::new();
    let mut seen = Vec::new();
    for z in zeros.iter().filter(|z| z.mult > 1 && z.mult % 2 == 1) {
        let d = pair.psi1.eval_derivative(1, z.phi0);
        let w = Witness { psi1_derivative: Some(d), ..Witness::from(*z) };
        seen.push(w);
        if !vanishes(d, scale, tol) && z.lead * d > 0.0 {
            hits.push(w);
        }
    }
    if !hits.is_empty() {
        return Ok(Verdict::new(VerdictKind::Unstable, Criterion::Odd, hits));
    }
    let note = if seen.is_empty() {
        "no zero of odd multiplicity above one"
    } else {
        "sign condition fails at every odd-multiplicity zero"
    };
    Ok(Verdict::inconclusive(seen, note))
}

/// Even-multiplicity criterion. Requires every zero of `ψ₀` to have even
/// multiplicity.
pub fn classify_even(pair: &DegeneratePair, tol: &ZeroTolerances) -> Result<Verdict, ClassifyError> {
    let zeros = pair.psi0.find_zeros(tol)?;
    if let Some(z) = zeros.iter().find(|z| z.mult % 2 == 1) {
        return Err(ClassifyError::OddMultiplicity { phi0: z.phi0, mult: z.mult });
    }
    let scale = pair.psi1.l1_norm();
    let ws: Vec<Witness> = zeros
        .iter()
        .map(|z| Witness { psi1_value: Some(pair.psi1.eval(z.phi0)), ..Witness::from(*z) })
        .collect();
    if ws.is_empty() {
        return Ok(Verdict::inconclusive(ws, "psi0 has no zeros; the even criterion does not apply"));
    }
    let common: Vec<Witness> = ws
        .iter()
        .filter(|w| vanishes(w.psi1_value.unwrap(), scale, tol))
        .copied()
        .collect();
    if !common.is_empty() {
        return Ok(Verdict::inconclusive(
            common,
            "psi1 vanishes at a zero of psi0; recurse with higher-order terms",
        ));
    }
    let negative: Vec<Witness> = ws.iter().filter(|w| w.lead * w.psi1_value.unwrap() < 0.0).copied().collect();
    if negative.is_empty() {
        Ok(Verdict::new(VerdictKind::Stable, Criterion::EvenA, ws))
    } else {
        Ok(Verdict::new(VerdictKind::Unstable, Criterion::EvenB, negative))
    }
}

/// Simple-zero test, then the odd criterion, then the even one when all
/// zeros are even.
pub fn classify(pair: &DegeneratePair, tol: &ZeroTolerances) -> Result<Verdict, ClassifyError> {
    let a = classify_theorem_a(&pair.psi0, tol)?;
    if a.kind != VerdictKind::Inconclusive {
        return Ok(a);
    }
    let odd = classify_odd(pair, tol)?;
    if odd.kind == VerdictKind::Unstable {
        return Ok(odd);
    }
    if a.witnesses.iter().all(|w| w.mult % 2 == 0) {
        return classify_even(pair, tol);
    }
    Ok(Verdict { note: Some("mixed multiplicities; only the odd criterion applies".into()), ..odd })
}

/// Outcome of [`prescreen`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Prescreen {
    Decided(Verdict),
    /// Further analysis needed on the leading pair; `phase` is set when it
    /// came from a degenerate `H_k`.
    Pair { pair: DegeneratePair, phase: Option<f64> },
}

/// Resonance-order shortcuts on a normal-form structure of order `k`.
pub fn prescreen(st: &Structure, k: u32, tol: &ZeroTolerances) -> Result<Prescreen, ClassifyError> {
    let pair_of = |phase| -> Result<Prescreen, ClassifyError> {
        let h = synthesize(st, k).without_rotation();
        Ok(Prescreen::Pair { pair: h.leading_pair()?, phase })
    };
    if k < 3 {
        return pair_of(None);
    }
    if let Some((&s, _)) = st.range(3..k).find(|(_, t)| !t.is_zero()) {
        let mut v = Verdict::new(VerdictKind::Stable, Criterion::PrescreenTwist, vec![]);
        v.note = Some(format!("nonzero constant at order r^({s}/2) below the resonance order"));
        return Ok(Prescreen::Decided(v));
    }
    let hk = match st.get(&k) {
        Some(t) if !t.is_zero() => t,
        _ => return pair_of(None),
    };
    let psi_k = synthesize(&Structure::from([(k, hk.clone())]), k).term(k).cloned().unwrap_or_default();
    if k % 2 == 1 {
        let a = classify_theorem_a(&psi_k, tol)?;
        if a.kind == VerdictKind::Inconclusive {
            return pair_of(None);
        }
        let criterion = match a.kind {
            VerdictKind::Unstable => Criterion::PrescreenOddB,
            _ => a.criterion,
        };
        return Ok(Prescreen::Decided(Verdict { criterion, ..a }));
    }
    let (a, b, c) = (hk.a, hk.b(1), hk.c(1));
    let d = b.hypot(c);
    let form = degenerate_reduce(a, b, c, k);
    if form.is_degenerate {
        return pair_of(Some(form.phase));
    }
    let scale = a.abs().max(d);
    if (a.abs() - d).abs() <= DEGENERACY_TOLERANCE * scale {
        return pair_of(None);
    }
    let witnesses = if a.abs() < d {
        psi_k.find_zeros(tol)?.into_iter().map(Witness::from).collect()
    } else {
        vec![]
    };
    Ok(Prescreen::Decided(if a.abs() > d {
        Verdict::new(VerdictKind::Stable, Criterion::PrescreenCgtD, witnesses)
    } else {
        Verdict::new(VerdictKind::Unstable, Criterion::PrescreenCltD, witnesses)
    }))
}
