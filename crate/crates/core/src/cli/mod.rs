//! Batch front end: parse, normal form, prescreen, classify, certify,
//! simulate, report.
//!
//! Exit status reflects tool errors only; an unstable verdict is a normal
//! result.

mod report;

pub use report::{
    Analysis, CertificateOutcome, Defaults, Empirical, Header, LevelOrbitSummary, PairSummary, PrescreenSummary,
    Report, SourceSummary,
};

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{
    chetaev_certificate, classify, prescreen, twist_check, ChetaevOptions, ClassifyError, Criterion, Prescreen,
    TwistError, TwistOptions,
};
use crate::families::{Family, FamilyParams};
use crate::hamiltonian::text::tokens;
use crate::hamiltonian::{AngleActionState, DegeneratePair, HalfPowerSeries, HamiltonianError, ParseError};
use crate::normalform::{analyze, structure, Frequency, NormalFormError, TimePeriodicSeries, NF_TOLERANCE};
use crate::simulator::{
    default_inits, escape_experiment, integrate, level_orbit, SimError, StepControl, LEVEL_ORBIT_HORIZON,
};
use crate::trigpoly::ZeroTolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Normalform,
    Simulate,
    Twist,
    Examples,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Escape-sweep grid, written `AxR` (angles by radii).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub angles: usize,
    pub radii: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { angles: 16, radii: 8 }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("grid must look like 16x8, got `{s}`");
        let (a, r) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let angles: usize = a.trim().parse().map_err(|_| bad())?;
        let radii: usize = r.trim().parse().map_err(|_| bad())?;
        if angles == 0 || radii == 0 {
            return Err(bad());
        }
        Ok(Self { angles, radii })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.angles, self.radii)
    }
}

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_SWEEP_HORIZON: f64 = 1e4;
pub const DEFAULT_SIMULATE_HORIZON: f64 = 1e3;
pub const DEFAULT_TWIST_LEVEL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub omega: Option<Frequency>,
    pub tolerances: ZeroTolerances,
    pub grid: Grid,
    /// `None` picks the command's default.
    pub horizon: Option<f64>,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Run the escape sweep for `classify` as well.
    pub simulate: bool,
    pub init: AngleActionState,
    pub h0: f64,
    pub example: Option<Family>,
    pub params: FamilyParams,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            omega: None,
            tolerances: ZeroTolerances::default(),
            grid: Grid::default(),
            horizon: None,
            epsilon: DEFAULT_EPSILON,
            out: None,
            format: Format::Json,
            simulate: false,
            init: AngleActionState::new(1e-2, 0.0),
            h0: DEFAULT_TWIST_LEVEL,
            example: None,
            params: FamilyParams::default(),
        }
    }

    pub fn example(family: Family, params: FamilyParams) -> Self {
        Self { example: Some(family), params, ..Self::new(Command::Examples) }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(match self.command {
            Command::Simulate => DEFAULT_SIMULATE_HORIZON,
            _ => DEFAULT_SWEEP_HORIZON,
        })
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        let t = &self.tolerances;
        for (name, v) in [("circle", t.circle), ("cluster", t.cluster), ("mult", t.mult)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.horizon().is_finite() && self.horizon() != 0.0) {
            return bad(format!("horizon must be finite and nonzero, got {}", self.horizon()));
        }
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return bad(format!("h0 must be positive, got {}", self.h0));
        }
        match (self.command, &self.input, self.example) {
            (Command::Examples, _, None) => return bad("examples needs a family name".into()),
            (Command::Examples, _, Some(_)) => {}
            (_, None, _) => return bad(format!("{} needs --input", self.command.name())),
            (_, Some(p), _) if !p.is_file() => return bad(format!("input file {} does not exist", p.display())),
            _ => {}
        }
        if self.command == Command::Normalform && self.omega.is_none() {
            return bad("normalform needs --omega".into());
        }
        if self.command == Command::Simulate && (self.init.r.is_nan() || self.init.r <= 0.0) {
            return bad(format!("initial r must be positive, got {}", self.init.r));
        }
        Ok(())
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Normalform => "normalform",
            Command::Simulate => "simulate",
            Command::Twist => "twist",
            Command::Examples => "examples",
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

/// Command line of the `hamstab` binary.
#[derive(Debug, Parser)]
#[command(name = "hamstab", version, about = "Stability of resonant Hamiltonian equilibria", allow_negative_numbers = true)]
pub struct Args {
    pub command: Command,
    /// Family for `examples`: markeyev, mansilla-vidal, cubic-family, quartic-family, intro-example.
    pub example: Option<String>,
    /// Hamiltonian (`j n kind coeff`) or time-periodic series (`mu nu l re im`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Characteristic frequency: `p/k` or `nonresonant:<value>`.
    #[arg(long)]
    pub omega: Option<Frequency>,
    #[arg(long = "tol-mult")]
    pub tol_mult: Option<f64>,
    #[arg(long = "tol-circle")]
    pub tol_circle: Option<f64>,
    #[arg(long = "tol-cluster")]
    pub tol_cluster: Option<f64>,
    /// Escape sweep, angles x radii.
    #[arg(long)]
    pub grid: Option<Grid>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also run the escape sweep after `classify`.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long, default_value_t = 1e-2)]
    pub r0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    /// Energy level for `twist`.
    #[arg(long, default_value_t = DEFAULT_TWIST_LEVEL)]
    pub h0: f64,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
}

impl TryFrom<Args> for RunConfig {
    type Error = PipelineError;

    fn try_from(a: Args) -> Result<Self, Self::Error> {
        let example = match (&a.example, a.command) {
            (Some(name), Command::Examples) => Some(Family::from_name(name).ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                PipelineError::Config(format!("unknown family `{name}`; expected one of {}", names.join(", ")))
            })?),
            (Some(name), c) => {
                return Err(PipelineError::Config(format!("unexpected argument `{name}` for {}", c.name())));
            }
            (None, _) => None,
        };
        let d = FamilyParams::default();
        let params = FamilyParams {
            s: a.s.unwrap_or(d.s),
            kappa: a.kappa.unwrap_or(d.kappa),
            q: a.q.unwrap_or(d.q),
            a: a.a.unwrap_or(d.a),
            b: a.b.unwrap_or(d.b),
            k: a.k.unwrap_or(d.k),
        };
        if example == Some(Family::MansillaVidal) && params.q < 2 {
            return Err(PipelineError::Config(format!("q must be at least 2, got {}", params.q)));
        }
        if params.k == 0 {
            return Err(PipelineError::Config("k must be at least 1".into()));
        }
        let t = ZeroTolerances::default();
        let cfg = RunConfig {
            command: a.command,
            input: a.input,
            omega: a.omega,
            tolerances: ZeroTolerances {
                circle: a.tol_circle.unwrap_or(t.circle),
                cluster: a.tol_cluster.unwrap_or(t.cluster),
                mult: a.tol_mult.unwrap_or(t.mult),
            },
            grid: a.grid.unwrap_or_default(),
            horizon: a.horizon,
            epsilon: a.epsilon,
            out: a.out,
            format: a.format,
            simulate: a.simulate,
            init: AngleActionState::new(a.r0, a.phi0),
            h0: a.h0,
            example,
            params,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// What an input file holds, decided by the field count of its first line.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Hamiltonian(HalfPowerSeries),
    Series(TimePeriodicSeries),
}

pub fn parse_input(src: &str) -> Result<Input, ParseError> {
    for (idx, line) in src.lines().enumerate() {
        match tokens(line).len() {
            0 => continue,
            4 => return HalfPowerSeries::parse(src).map(Input::Hamiltonian),
            5 => return TimePeriodicSeries::parse(src).map(Input::Series),
            n => {
                return Err(ParseError::new(
                    idx + 1,
                    1,
                    format!("expected 4 fields `j n kind coeff` or 5 fields `mu nu l re im`, found {n}"),
                ));
            }
        }
    }
    Ok(Input::Hamiltonian(HalfPowerSeries::new(2)))
}

pub fn read_input(path: &Path) -> Result<Input, PipelineError> {
    let shown = path.display().to_string();
    let src = fs::read_to_string(path).map_err(|source| PipelineError::Io { path: shown.clone(), source })?;
    parse_input(&src).map_err(|source| PipelineError::Parse { path: shown, source })
}

fn read_hamiltonian(path: &Path) -> Result<HalfPowerSeries, PipelineError> {
    match read_input(path)? {
        Input::Hamiltonian(h) => Ok(h),
        Input::Series(_) => Err(PipelineError::Config(format!(
            "{} holds a time-periodic series; this command needs a Hamiltonian `j n kind coeff`",
            path.display()
        ))),
    }
}

/// Runs the command and returns the rendered output (report or CSV).
pub fn run(cfg: &RunConfig) -> Result<String, PipelineError> {
    cfg.validate()?;
    let header = Header::new(cfg);
    match cfg.command {
        Command::Simulate => {
            let h = read_hamiltonian(cfg.input.as_deref().expect("validated"))?;
            let t = integrate(&h, cfg.init, cfg.horizon(), &StepControl::default())?;
            Ok(t.to_csv())
        }
        Command::Twist => {
            let h = read_hamiltonian(cfg.input.as_deref().expect("validated"))?;
            let twist = twist_check(&h, cfg.h0, &TwistOptions::default())?;
            Ok(Report { twist: Some(twist), ..Report::new(header) }.render(cfg.format))
        }
        Command::Normalform => {
            let omega = cfg.omega.expect("validated");
            let series = match read_input(cfg.input.as_deref().expect("validated"))? {
                Input::Series(s) => s,
                Input::Hamiltonian(_) => {
                    return Err(PipelineError::Config(
                        "normalform needs a time-periodic series `mu nu l re im`".into(),
                    ));
                }
            };
            let nf = analyze(&series, &omega)?;
            Ok(Report { normal_form: Some(nf), ..Report::new(header) }.render(cfg.format))
        }
        Command::Classify | Command::Examples => {
            let report = pipeline(cfg, header)?;
            Ok(report.render(cfg.format))
        }
    }
}

/// The full analysis behind `classify` and `examples`.
pub fn pipeline(cfg: &RunConfig, header: Header) -> Result<Report, PipelineError> {
    let mut report = Report::new(header);
    let (h, omega) = match (cfg.command, cfg.example) {
        (Command::Examples, Some(family)) => {
            let h = family.build(&cfg.params);
            let omega = family.frequency(&cfg.params).map(|(p, k)| Frequency::rational(p, k).expect("k >= 1"));
            report.source = Some(SourceSummary::family(family, &cfg.params, &h, omega));
            (h, omega)
        }
        _ => {
            let path = cfg.input.as_deref().expect("validated");
            match read_input(path)? {
                Input::Hamiltonian(h) => {
                    report.source = Some(SourceSummary::file(path, "hamiltonian", &h, cfg.omega));
                    (h, cfg.omega)
                }
                Input::Series(s) => {
                    let omega = cfg.omega.ok_or_else(|| {
                        PipelineError::Config("a time-periodic series needs --omega".into())
                    })?;
                    let nf = analyze(&s, &omega)?;
                    if nf.residual > NF_TOLERANCE {
                        return Err(NormalFormError::NotInNormalForm { residual: nf.residual }.into());
                    }
                    let h = nf.autonomous.clone().ok_or_else(|| {
                        PipelineError::Config("a nonresonant frequency leaves no angle dependence to classify".into())
                    })?;
                    report.source = Some(SourceSummary::file(path, "series", &h, Some(omega)));
                    report.normal_form = Some(nf);
                    (h, Some(omega))
                }
            }
        }
    };

    let tol = &cfg.tolerances;
    let k = omega.and_then(|w| w.order());
    let (verdict, pair) = match k {
        Some(k) => {
            let st = structure(&h.without_rotation(), k)?;
            match prescreen(&st, k, tol)? {
                Prescreen::Decided(v) => {
                    report.prescreen = Some(PrescreenSummary { k, decided: true, phase: None });
                    (v, h.without_rotation().leading_pair().ok())
                }
                Prescreen::Pair { pair, phase } => {
                    report.prescreen = Some(PrescreenSummary { k, decided: false, phase });
                    (classify(&pair, tol)?, Some(pair))
                }
            }
        }
        None => {
            let pair = h.without_rotation().leading_pair()?;
            (classify(&pair, tol)?, Some(pair))
        }
    };

    let certificate = match (&pair, verdict.criterion) {
        (Some(p), Criterion::EvenB) => Some(CertificateOutcome::from(chetaev_certificate(p, &ChetaevOptions::default()))),
        _ => None,
    };
    report.analytic = Some(Analysis { pair: pair.as_ref().map(PairSummary::from), verdict, certificate });

    if cfg.command == Command::Examples || cfg.simulate {
        report.empirical = Some(empirical(cfg, &h, pair.as_ref(), report.analytic.as_ref().unwrap()));
    }
    Ok(report)
}

fn empirical(
    cfg: &RunConfig,
    h: &HalfPowerSeries,
    pair: Option<&DegeneratePair>,
    analysis: &Analysis,
) -> Empirical {
    let mut e = Empirical {
        grid: cfg.grid,
        horizon: cfg.horizon(),
        epsilon: cfg.epsilon,
        ..Empirical::default()
    };
    match pair {
        Some(p) => {
            let inits = default_inits(p, cfg.epsilon, cfg.grid.angles, cfg.grid.radii);
            let mut s = escape_experiment(h, cfg.epsilon, &inits, cfg.horizon(), &StepControl::escape());
            s.records.clear();
            e.r_min = inits.first().map(|s| s.r);
            e.r_max = inits.last().map(|s| s.r);
            e.consistent = if analysis.verdict.is_unstable() {
                Some(s.escapes > 0)
            } else if analysis.verdict.is_stable() {
                Some(s.escapes == 0)
            } else {
                None
            };
            e.escape = Some(s);
        }
        None => e.note = Some("no leading pair; escape sweep skipped".into()),
    }
    if cfg.example == Some(Family::IntroExample) && cfg.params.a == -1.0 {
        e.level_orbit = level_orbit(0.1, LEVEL_ORBIT_HORIZON, &StepControl::default())
            .ok()
            .map(|t| LevelOrbitSummary::new(0.1, &t));
    }
    e
}
