use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::{Format, Grid, RunConfig};
use crate::classifier::{ChetaevCertificate, ChetaevError, ChetaevOptions, TwistOptions, TwistReport, Verdict};
use crate::families::{Family, FamilyParams};
use crate::hamiltonian::{AngleActionState, DegeneratePair, HalfPowerSeries};
use crate::normalform::{Frequency, NormalFormReport, DEGENERACY_TOLERANCE, NF_TOLERANCE};
use crate::simulator::{EscapeSummary, StepControl, Trajectory};
use crate::trigpoly::ZeroTolerances;

/// Every default the run used, so a report can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Defaults {
    pub tolerances: ZeroTolerances,
    pub nf_tolerance: f64,
    pub degeneracy_tolerance: f64,
    pub grid: Grid,
    pub horizon: f64,
    pub epsilon: f64,
    pub step_control: StepControl,
    pub escape_step_control: StepControl,
    pub chetaev: ChetaevOptions,
    pub twist: TwistOptions,
    pub twist_level: f64,
    pub init: AngleActionState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub defaults: Defaults,
}

impl Header {
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cfg.command.name().into(),
            defaults: Defaults {
                tolerances: cfg.tolerances,
                nf_tolerance: NF_TOLERANCE,
                degeneracy_tolerance: DEGENERACY_TOLERANCE,
                grid: cfg.grid,
                horizon: cfg.horizon(),
                epsilon: cfg.epsilon,
                step_control: StepControl::default(),
                escape_step_control: StepControl::escape(),
                chetaev: ChetaevOptions::default(),
                twist: TwistOptions::default(),
                twist_level: cfg.h0,
                init: cfg.init,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSummary {
    /// `family`, `hamiltonian` or `series`.
    pub kind: String,
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<String>,
    /// The autonomous Hamiltonian that was analyzed, in input syntax.
    pub hamiltonian: String,
}

impl SourceSummary {
    pub fn family(f: Family, p: &FamilyParams, h: &HalfPowerSeries, omega: Option<Frequency>) -> Self {
        Self {
            kind: "family".into(),
            name: f.name().into(),
            params: Some(f.describe(p)),
            omega: omega.map(|w| w.to_string()),
            hamiltonian: h.to_text(),
        }
    }

    pub fn file(path: &Path, kind: &str, h: &HalfPowerSeries, omega: Option<Frequency>) -> Self {
        Self {
            kind: kind.into(),
            name: path.display().to_string(),
            params: None,
            omega: omega.map(|w| w.to_string()),
            hamiltonian: h.to_text(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrescreenSummary {
    pub k: u32,
    /// The resonance shortcuts settled the verdict.
    pub decided: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSummary {
    pub alpha: f64,
    pub gamma: Option<f64>,
    pub psi0: String,
    pub psi1: String,
}

impl From<&DegeneratePair> for PairSummary {
    fn from(p: &DegeneratePair) -> Self {
        Self { alpha: p.alpha(), gamma: p.gamma(), psi0: p.psi0.to_string(), psi1: p.psi1.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateOutcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ChetaevCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl From<Result<ChetaevCertificate, ChetaevError>> for CertificateOutcome {
    fn from(r: Result<ChetaevCertificate, ChetaevError>) -> Self {
        match r {
            Ok(c) => Self { passed: true, certificate: Some(c), failure: None },
            Err(e) => Self { passed: false, certificate: None, failure: Some(e.to_string()) },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub pair: Option<PairSummary>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelOrbitSummary {
    pub mu: f64,
    pub r0: f64,
    pub max_r: f64,
    /// `max |r - (1 + sin φ)|` over accepted steps.
    pub level_defect: f64,
    pub steps: usize,
}

impl LevelOrbitSummary {
    pub fn new(mu: f64, t: &Trajectory) -> Self {
        Self {
            mu,
            r0: t.samples.first().map_or(t.last.r, |s| s.r),
            max_r: t.max_r,
            level_defect: t.samples.iter().map(|s| s.h.abs()).fold(0.0, f64::max),
            steps: t.accepted,
        }
    }
}

/// Simulation results. Evidence only; the verdict comes from the analysis.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Empirical {
    pub grid: Grid,
    pub horizon: f64,
    pub epsilon: f64,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub escape: Option<EscapeSummary>,
    /// Escapes iff the verdict is Unstable; `None` for an inconclusive verdict.
    pub consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_orbit: Option<LevelOrbitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub header: Header,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prescreen: Option<PrescreenSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analytic: Option<Analysis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<Empirical>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistReport>,
}

impl Report {
    pub fn new(header: Header) -> Self {
        Self { header, source: None, normal_form: None, prescreen: None, analytic: None, empirical: None, twist: None }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("plain data");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut o = String::new();
        {
            let h = &self.header;
            let d = &h.defaults;
            let t = &d.tolerances;
            writeln!(o, "# {} {} {}", h.tool, h.version, h.command).unwrap();
            writeln!(o, "tolerances: circle={:e} cluster={:e} mult={:e}", t.circle, t.cluster, t.mult).unwrap();
            writeln!(o, "normal form tolerance: {:e}, degeneracy tolerance: {:e}", d.nf_tolerance, d.degeneracy_tolerance)
                .unwrap();
            writeln!(o, "sweep: grid={} horizon={:e} epsilon={}", d.grid, d.horizon, d.epsilon).unwrap();
            let (s, e) = (&d.step_control, &d.escape_step_control);
            writeln!(o, "integrator: rtol={:e} atol={:e} drift_spike={:e} (sweeps rtol={:e})", s.rtol, s.atol, s.drift_spike, e.rtol)
                .unwrap();
            let c = &d.chetaev;
            writeln!(o, "chetaev: a={} grid={}x{}", c.a, c.angle_samples, c.radius_samples).unwrap();
            let w = &d.twist;
            writeln!(o, "twist: nodes={} fd_step={:e} cross_check={:e} h0={:e}", w.nodes, w.fd_step, w.cross_check, d.twist_level)
                .unwrap();
        }
        if let Some(s) = &self.source {
            writeln!(o, "\n## input").unwrap();
            writeln!(o, "{}: {}", s.kind, s.name).unwrap();
            if let Some(p) = &s.params {
                writeln!(o, "params: {p}").unwrap();
            }
            if let Some(w) = &s.omega {
                writeln!(o, "omega: {w}").unwrap();
            }
            for line in s.hamiltonian.lines() {
                writeln!(o, "  {line}").unwrap();
            }
        }
        if let Some(nf) = &self.normal_form {
            writeln!(o, "\n## normal form").unwrap();
            writeln!(o, "omega: {}", nf.frequency).unwrap();
            writeln!(o, "module: {}", nf.module).unwrap();
            writeln!(o, "residual: {:e}", nf.residual).unwrap();
            writeln!(o, "reality defect: {:e}", nf.reality_defect).unwrap();
            if let Some(h) = &nf.autonomous {
                writeln!(o, "autonomous: {h}").unwrap();
            }
            if let Some(st) = &nf.resonant {
                for (s, t) in st {
                    write!(o, "  r^({s}/2): A={}", t.a).unwrap();
                    for (j, (b, c)) in &t.harmonics {
                        write!(o, " B{j}={b} C{j}={c}").unwrap();
                    }
                    writeln!(o).unwrap();
                }
            }
        }
        if let Some(p) = &self.prescreen {
            writeln!(o, "\n## prescreen").unwrap();
            write!(o, "k={} {}", p.k, if p.decided { "decided" } else { "degenerate, reduced to a pair" }).unwrap();
            if let Some(ph) = p.phase {
                write!(o, " phase={ph}").unwrap();
            }
            writeln!(o).unwrap();
        }
        if let Some(a) = &self.analytic {
            writeln!(o, "\n## analytic verdict").unwrap();
            if let Some(p) = &a.pair {
                let g = p.gamma.map_or("-".to_string(), |g| g.to_string());
                writeln!(o, "pair: alpha={} gamma={g}", p.alpha).unwrap();
                writeln!(o, "  psi0 = {}", p.psi0).unwrap();
                writeln!(o, "  psi1 = {}", p.psi1).unwrap();
            }
            writeln!(o, "verdict: {}", a.verdict).unwrap();
            for w in &a.verdict.witnesses {
                write!(o, "  zero phi0={:.12} mult={} lead={}", w.phi0, w.mult, w.lead).unwrap();
                if let Some(v) = w.psi1_value {
                    write!(o, " psi1={v}").unwrap();
                }
                if let Some(v) = w.psi1_derivative {
                    write!(o, " psi1'={v}").unwrap();
                }
                writeln!(o).unwrap();
            }
            if let Some(n) = &a.verdict.note {
                writeln!(o, "note: {n}").unwrap();
            }
            if let Some(c) = &a.certificate {
                match (&c.certificate, &c.failure) {
                    (Some(c), _) => writeln!(
                        o,
                        "chetaev certificate: passed, delta={:e} min V/(delta r^(2a+g))={:.6} min slope={:e} on {}x{} samples",
                        c.delta, c.min_v_relative, c.min_neg_slope, c.angle_samples, c.radius_samples
                    )
                    .unwrap(),
                    (None, Some(f)) => writeln!(o, "chetaev certificate: failed, {f}").unwrap(),
                    _ => {}
                }
            }
        }
        if let Some(e) = &self.empirical {
            writeln!(o, "\n## empirical evidence").unwrap();
            if let (Some(lo), Some(hi)) = (e.r_min, e.r_max) {
                writeln!(o, "initial radii: {lo:e} .. {hi:e}").unwrap();
            }
            if let Some(s) = &e.escape {
                write!(o, "escapes past epsilon={}: {}/{} within T={:e}", s.epsilon, s.escapes, s.total, s.horizon).unwrap();
                if let Some(t) = s.first_escape_time {
                    write!(o, ", first at t={t:.6e}").unwrap();
                }
                writeln!(o).unwrap();
                writeln!(o, "max relative energy drift: {:e}", s.max_drift_relative).unwrap();
                if s.failures > 0 {
                    writeln!(o, "integration failures: {}", s.failures).unwrap();
                }
            }
            match e.consistent {
                Some(true) => writeln!(o, "consistent with the verdict").unwrap(),
                Some(false) => writeln!(o, "NOT consistent with the verdict").unwrap(),
                None => {}
            }
            if let Some(l) = &e.level_orbit {
                writeln!(
                    o,
                    "level orbit mu={}: r0={:.6e} max r={:.6} level defect={:e}",
                    l.mu, l.r0, l.max_r, l.level_defect
                )
                .unwrap();
            }
            if let Some(n) = &e.note {
                writeln!(o, "note: {n}").unwrap();
            }
        }
        if let Some(t) = &self.twist {
            writeln!(o, "\n## twist").unwrap();
            writeln!(o, "h0={:e} I={:e} lambda={:.12e}", t.h0, t.action, t.lambda).unwrap();
            writeln!(o, "d2h/dI2={:.12e} finite differences={:.12e} agrees={}", t.d2h_di2, t.d2h_di2_fd, t.agrees).unwrap();
        }
        o
    }
}
