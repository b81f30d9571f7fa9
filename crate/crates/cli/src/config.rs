//! Run configuration: a TOML file with fixed sections, parsed strictly.
//!
//! Every section is optional and falls back to its defaults. Unknown keys
//! are rejected by the parser; values are validated after parsing and
//! errors point at the line of the offending key.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use udd::{BathSpec, QuadratureSpec, SequenceKind, XState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Times in units of `1/omega_d`, frequencies and temperature in units
    /// of `omega_d`.
    #[default]
    OmegaD,
    /// Times in seconds, `omega_d`, `theta` and filter frequencies in rad/s.
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Uniform,
    Uhrig,
    Custom,
}

impl From<Kind> for SequenceKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Uniform => SequenceKind::Uniform,
            Kind::Uhrig => SequenceKind::Uhrig,
            Kind::Custom => SequenceKind::Custom,
        }
    }
}

impl From<SequenceKind> for Kind {
    fn from(kind: SequenceKind) -> Self {
        match kind {
            SequenceKind::Uniform => Kind::Uniform,
            SequenceKind::Uhrig => Kind::Uhrig,
            SequenceKind::Custom => Kind::Custom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub units: Units,
    pub bath: BathSection,
    pub sequence: SequenceSection,
    pub grid: GridSection,
    pub state: StateSection,
    pub ghz: GhzSection,
    pub death: DeathSection,
    pub filter: FilterSection,
    pub quadrature: QuadratureSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            units: Units::OmegaD,
            bath: BathSection::default(),
            sequence: SequenceSection::default(),
            grid: GridSection::default(),
            state: StateSection::default(),
            ghz: GhzSection::default(),
            death: DeathSection::default(),
            filter: FilterSection::default(),
            quadrature: QuadratureSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathSection {
    pub alpha: Vec<f64>,
    pub omega_d: f64,
    pub theta: f64,
}

impl Default for BathSection {
    fn default() -> Self {
        Self {
            alpha: vec![0.25],
            omega_d: 1.0,
            theta: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SequenceSection {
    pub kinds: Vec<Kind>,
    pub n: Vec<usize>,
    /// Pulse instants of the custom sequence.
    pub custom: Vec<f64>,
    /// Duration of the custom sequence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custom_total: Option<f64>,
}

impl Default for SequenceSection {
    fn default() -> Self {
        Self {
            kinds: vec![Kind::Uniform, Kind::Uhrig],
            n: vec![10],
            custom: Vec::new(),
            custom_total: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 20.0,
            points: 101,
        }
    }
}

impl GridSection {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

/// X state with real coherence `z = |z|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub z: f64,
}

impl Default for StateSection {
    fn default() -> Self {
        Self {
            a: 0.0,
            b: 0.5,
            c: 0.5,
            d: 0.0,
            z: 0.5,
        }
    }
}

impl StateSection {
    pub fn x_state(&self) -> udd::Result<XState> {
        XState::real(self.a, self.b, self.c, self.d, self.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GhzSection {
    pub qubits: Vec<u32>,
}

impl Default for GhzSection {
    fn default() -> Self {
        Self { qubits: vec![2, 4, 8] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeathSection {
    pub horizon: f64,
    pub step: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
}

impl Default for DeathSection {
    fn default() -> Self {
        Self {
            horizon: 20.0,
            step: 0.05,
            t2: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSection {
    pub omega_start: f64,
    pub omega_stop: f64,
    pub points: usize,
    /// Duration of the canonical sequences.
    pub total: f64,
}

impl Default for FilterSection {
    fn default() -> Self {
        Self {
            omega_start: 0.0,
            omega_stop: 50.0,
            points: 501,
            total: 1.0,
        }
    }
}

impl FilterSection {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.omega_start, self.omega_stop, self.points)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSection {
    fn default() -> Self {
        let spec = QuadratureSpec::default();
        Self {
            rel_tol: spec.rel_tol,
            abs_tol: spec.abs_tol,
            max_subdivisions: spec.max_subdivisions,
        }
    }
}

impl QuadratureSection {
    pub fn spec(&self) -> udd::Result<QuadratureSpec> {
        QuadratureSpec::new(self.rel_tol, self.abs_tol, self.max_subdivisions)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// `points` values from `start` to `stop`; one point gives `[start]`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (points - 1) as f64;
            (0..points)
                .map(|k| {
                    if k + 1 == points {
                        stop
                    } else {
                        start + (stop - start) * (k as f64 / last)
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.path, line, self.message),
            None => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// A failed check: `section.key` and what is wrong with it.
#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub section: &'static str,
    pub key: &'static str,
    pub message: String,
}

fn issue(section: &'static str, key: &'static str, message: impl Into<String>) -> Issue {
    Issue {
        section,
        key,
        message: message.into(),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let name = path.display().to_string();
        let source = std::fs::read_to_string(path).map_err(|e| ConfigError {
            path: name.clone(),
            line: None,
            message: e.to_string(),
        })?;
        Self::parse(&source, &name)
    }

    /// Parse and validate; `name` labels error messages.
    pub fn parse(source: &str, name: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(source).map_err(|e| ConfigError {
            path: name.to_string(),
            line: e.span().map(|span| line_of(source, span.start)),
            message: e.message().trim().to_string(),
        })?;
        config.validate().map_err(|found| ConfigError {
            path: name.to_string(),
            line: locate(source, found.section, found.key),
            message: format!("[{}] {}: {}", found.section, found.key, found.message),
        })?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every value the commands rely on.
    pub fn validate(&self) -> Result<(), Issue> {
        let bath = &self.bath;
        if bath.alpha.is_empty() {
            return Err(issue("bath", "alpha", "at least one coupling is required"));
        }
        if !(bath.omega_d > 0.0) || !bath.omega_d.is_finite() {
            return Err(issue(
                "bath",
                "omega_d",
                format!("must be finite and > 0, got {}", bath.omega_d),
            ));
        }
        for &alpha in &bath.alpha {
            BathSpec::ohmic(alpha, 1.0, 0.0).map_err(|e| issue("bath", "alpha", e.to_string()))?;
        }
        BathSpec::ohmic(0.0, 1.0, bath.theta).map_err(|e| issue("bath", "theta", e.to_string()))?;

        let seq = &self.sequence;
        if seq.kinds.is_empty() {
            return Err(issue("sequence", "kinds", "at least one sequence kind is required"));
        }
        if seq.n.is_empty() && seq.kinds.iter().any(|&k| k != Kind::Custom) {
            return Err(issue("sequence", "n", "at least one pulse count is required"));
        }
        if seq.kinds.contains(&Kind::Custom) {
            let Some(total) = seq.custom_total else {
                return Err(issue(
                    "sequence",
                    "custom_total",
                    "required when kinds contains \"custom\"",
                ));
            };
            udd::PulseSequence::custom(seq.custom.clone(), total)
                .map_err(|e| issue("sequence", "custom", e.to_string()))?;
        }

        let grid = &self.grid;
        if grid.points == 0 {
            return Err(issue("grid", "points", "must be >= 1"));
        }
        if !(grid.start >= 0.0) || !grid.start.is_finite() {
            return Err(issue(
                "grid",
                "start",
                format!("must be finite and >= 0, got {}", grid.start),
            ));
        }
        if !grid.stop.is_finite() || (grid.points > 1 && !(grid.stop > grid.start)) {
            return Err(issue(
                "grid",
                "stop",
                format!("must be finite and > start, got {}", grid.stop),
            ));
        }

        self.state.x_state().map_err(|e| issue("state", "z", e.to_string()))?;

        if self.ghz.qubits.is_empty() {
            return Err(issue("ghz", "qubits", "at least one qubit count is required"));
        }
        if let Some(&n) = self.ghz.qubits.iter().find(|&&n| n < 2) {
            return Err(issue("ghz", "qubits", format!("qubit counts must be >= 2, got {n}")));
        }

        let death = &self.death;
        if !(death.horizon > 0.0) || !death.horizon.is_finite() {
            return Err(issue(
                "death",
                "horizon",
                format!("must be finite and > 0, got {}", death.horizon),
            ));
        }
        if !(death.step > 0.0) || !death.step.is_finite() {
            return Err(issue(
                "death",
                "step",
                format!("must be finite and > 0, got {}", death.step),
            ));
        }
        if let Some(t2) = death.t2 {
            udd::PhenomenologicalModel::new(t2).map_err(|e| issue("death", "t2", e.to_string()))?;
        }

        let filter = &self.filter;
        if filter.points == 0 {
            return Err(issue("filter", "points", "must be >= 1"));
        }
        if !(filter.omega_start >= 0.0) || !filter.omega_start.is_finite() {
            return Err(issue(
                "filter",
                "omega_start",
                format!("must be finite and >= 0, got {}", filter.omega_start),
            ));
        }
        if !filter.omega_stop.is_finite() || (filter.points > 1 && !(filter.omega_stop > filter.omega_start)) {
            return Err(issue(
                "filter",
                "omega_stop",
                format!("must be finite and > omega_start, got {}", filter.omega_stop),
            ));
        }
        if !(filter.total > 0.0) || !filter.total.is_finite() {
            return Err(issue(
                "filter",
                "total",
                format!("must be finite and > 0, got {}", filter.total),
            ));
        }

        self.quadrature
            .spec()
            .map_err(|e| issue("quadrature", "rel_tol", e.to_string()))?;
        Ok(())
    }
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

/// Line of `key` inside `[section]`, if the file sets it.
fn locate(source: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = "";
    for (index, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('[') {
            current = rest.split(']').next().unwrap_or("").trim();
            continue;
        }
        if current != section {
            continue;
        }
        if let Some((name, _)) = line.split_once('=') {
            if name.trim().trim_matches('"') == key {
                return Some(index + 1);
            }
        }
    }
    // fall back to the section header
    source
        .lines()
        .position(|l| {
            l.trim().trim_start_matches('[').trim_end_matches(']').trim() == section && l.trim().starts_with('[')
        })
        .map(|i| i + 1)
}
