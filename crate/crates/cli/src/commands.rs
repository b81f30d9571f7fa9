//! The five subcommands. Each builds a [`Report`]: a CSV table plus the
//! cells that failed. Cells are evaluated on the current rayon pool and
//! assembled in config order.

use rayon::prelude::*;
use udd::coherence::signal_at;
use udd::entanglement::{concurrence_at, death_time, death_time_with, ghz_coherence, CoherenceSource};
use udd::pulse_sequence::{filter_exact, filter_uhrig_approx, filter_uniform_closed};
use udd::{BathSpec, DeathTime, GhzSpec, PhenomenologicalModel, PulseSequence, QuadratureSpec, XState};

use crate::cache::{filter_key, Cache};
use crate::config::{Kind, RunConfig, Units};
use crate::output::{number, Table, FAILED};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Filter,
    Signal,
    Concurrence,
    Death,
    Ghz,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Filter => "filter",
            Command::Signal => "signal",
            Command::Concurrence => "concurrence",
            Command::Death => "death",
            Command::Ghz => "ghz",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    /// One message per failed cell, in table order.
    pub failures: Vec<String>,
}

type Cell = Result<f64, String>;

/// Converts between config units and the dimensionless units of the
/// library (`omega_d = 1`).
#[derive(Debug, Clone, Copy)]
struct Scale {
    omega_d: f64,
    si: bool,
}

impl Scale {
    fn new(config: &RunConfig) -> Self {
        Self {
            omega_d: config.bath.omega_d,
            si: config.units == Units::Si,
        }
    }

    fn time_in(self, t: f64) -> f64 {
        if self.si {
            t * self.omega_d
        } else {
            t
        }
    }

    fn time_out(self, tau: f64) -> f64 {
        if self.si {
            tau / self.omega_d
        } else {
            tau
        }
    }

    fn freq_in(self, w: f64) -> f64 {
        if self.si {
            w / self.omega_d
        } else {
            w
        }
    }

    /// `|f|^2` has units of time squared.
    fn abs2_out(self, v: f64) -> f64 {
        if self.si {
            v / (self.omega_d * self.omega_d)
        } else {
            v
        }
    }

    fn time_column(self) -> &'static str {
        if self.si {
            "t_s"
        } else {
            "omega_d_t"
        }
    }
}

/// One pulse sequence from the config.
#[derive(Debug, Clone)]
struct Sequence {
    label: String,
    n: usize,
    /// Canonical kinds are stretched to each time; custom pulses are fixed.
    template: PulseSequence,
}

fn sequences(config: &RunConfig, scale: Scale) -> udd::Result<Vec<Sequence>> {
    let mut out = Vec::new();
    for &kind in &config.sequence.kinds {
        if kind == Kind::Custom {
            let times: Vec<f64> = config.sequence.custom.iter().map(|&t| scale.time_in(t)).collect();
            let total = scale.time_in(config.sequence.custom_total.unwrap_or(f64::NAN));
            let template = PulseSequence::custom(times, total)?;
            out.push(Sequence {
                label: format!("custom:n={}", template.len()),
                n: template.len(),
                template,
            });
            continue;
        }
        for &n in &config.sequence.n {
            out.push(Sequence {
                label: format!("{}:n={n}", udd::SequenceKind::from(kind)),
                n,
                template: PulseSequence::canonical(kind.into(), n, 1.0)?,
            });
        }
    }
    Ok(out)
}

/// A (coupling, sequence) curve.
#[derive(Debug, Clone)]
struct Curve {
    alpha: f64,
    bath: BathSpec,
    sequence: Sequence,
}

impl Curve {
    fn label(&self) -> String {
        format!("{}:alpha={}", self.sequence.label, number(self.alpha))
    }
}

fn curves(config: &RunConfig, scale: Scale) -> udd::Result<Vec<Curve>> {
    let seqs = sequences(config, scale)?;
    let theta = scale.freq_in(config.bath.theta);
    let mut out = Vec::new();
    for &alpha in &config.bath.alpha {
        let bath = BathSpec::ohmic(alpha, 1.0, theta)?;
        for sequence in &seqs {
            out.push(Curve {
                alpha,
                bath,
                sequence: sequence.clone(),
            });
        }
    }
    Ok(out)
}

fn header(command: Command, config: &RunConfig) -> Vec<String> {
    let mut lines = vec![format!("udd {} v{}", command.name(), env!("CARGO_PKG_VERSION"))];
    lines.push(String::new());
    lines.extend(config.to_toml().lines().map(str::to_string));
    lines
}

fn cell_text(cell: &Cell, describe: impl FnOnce() -> String, failures: &mut Vec<String>) -> String {
    match cell {
        Ok(v) => number(*v),
        Err(e) => {
            failures.push(format!("{}: {e}", describe()));
            FAILED.to_string()
        }
    }
}

pub fn run(command: Command, config: &RunConfig, cache: Option<&Cache>) -> Result<Report, String> {
    let setup = |e: udd::Error| e.to_string();
    let quad = config.quadrature.spec().map_err(setup)?;
    let scale = Scale::new(config);
    let mut report = match command {
        Command::Filter => filter(config, scale, cache).map_err(setup)?,
        Command::Signal => signal_like(config, scale, &quad, command).map_err(setup)?,
        Command::Concurrence => signal_like(config, scale, &quad, command).map_err(setup)?,
        Command::Ghz => signal_like(config, scale, &quad, command).map_err(setup)?,
        Command::Death => death(config, scale, &quad).map_err(setup)?,
    };
    let mut comments = header(command, config);
    comments.append(&mut report.table.comments);
    report.table.comments = comments;
    Ok(report)
}

fn filter(config: &RunConfig, scale: Scale, cache: Option<&Cache>) -> udd::Result<Report> {
    let omegas = config.filter.values();
    let total = scale.time_in(config.filter.total);
    let mut columns = vec!["omega".to_string()];
    let mut evaluated: Vec<(Vec<Cell>, Vec<Option<f64>>)> = Vec::new();
    for seq in sequences(config, scale)? {
        let acting = match seq.template.kind() {
            udd::SequenceKind::Custom => seq.template.clone(),
            kind => PulseSequence::canonical(kind, seq.n, total)?,
        };
        let dimless: Vec<f64> = omegas.iter().map(|&w| scale.freq_in(w)).collect();
        let exact = exact_column(&acting, &dimless, cache);
        let closed: Vec<Option<f64>> = dimless
            .iter()
            .map(|&w| match acting.kind() {
                udd::SequenceKind::Uniform => filter_uniform_closed(seq.n, acting.total(), w).ok(),
                // the Bessel form holds for w t / 2 <= n
                udd::SequenceKind::Uhrig if 0.5 * w * acting.total() <= seq.n as f64 => {
                    filter_uhrig_approx(seq.n, acting.total(), w).ok()
                }
                udd::SequenceKind::Uhrig => None,
                udd::SequenceKind::Custom => None,
            })
            .collect();
        columns.push(format!("abs2_exact:{}", seq.label));
        columns.push(format!("abs2_closed:{}", seq.label));
        evaluated.push((exact, closed));
    }
    let mut table = Table::new(columns);
    table.comment(
        "closed: tan/cos form (uniform, even n) or Bessel form (uhrig, w t / 2 <= n); empty where not applicable",
    );
    let mut failures = Vec::new();
    for (i, &omega) in omegas.iter().enumerate() {
        let mut row = vec![number(omega)];
        for (k, (exact, closed)) in evaluated.iter().enumerate() {
            let label = &table.columns[1 + 2 * k];
            let exact = exact[i].as_ref().map(|&v| scale.abs2_out(v)).map_err(Clone::clone);
            row.push(cell_text(
                &exact,
                || format!("{label} at omega={}", number(omega)),
                &mut failures,
            ));
            row.push(closed[i].map(|v| number(scale.abs2_out(v))).unwrap_or_default());
        }
        table.push(row);
    }
    Ok(Report { table, failures })
}

fn exact_column(seq: &PulseSequence, omegas: &[f64], cache: Option<&Cache>) -> Vec<Cell> {
    let eval = || -> Vec<Cell> {
        omegas
            .par_iter()
            .map(|&w| filter_exact(seq, w).map(|f| f.abs_squared).map_err(|e| e.to_string()))
            .collect()
    };
    let Some(cache) = cache else {
        return eval();
    };
    let key = filter_key(seq.times(), seq.total(), omegas);
    match cache.get_or_compute(&key, omegas.len(), || {
        eval().into_iter().collect::<Result<Vec<f64>, String>>()
    }) {
        Ok(values) => values.into_iter().map(Ok).collect(),
        Err(_) => eval(),
    }
}

/// `S(t)` on the grid for every curve, curve-major.
fn signal_cells(curves: &[Curve], times: &[f64], quad: &QuadratureSpec) -> Vec<Cell> {
    let width = times.len();
    (0..curves.len() * width)
        .into_par_iter()
        .map(|index| {
            let curve = &curves[index / width];
            signal_at(&curve.bath, &curve.sequence.template, times[index % width], quad).map_err(|e| e.to_string())
        })
        .collect()
}

fn signal_like(config: &RunConfig, scale: Scale, quad: &QuadratureSpec, command: Command) -> udd::Result<Report> {
    let grid = config.grid.values();
    let times: Vec<f64> = grid.iter().map(|&t| scale.time_in(t)).collect();
    let curves = curves(config, scale)?;
    let signals = signal_cells(&curves, &times, quad);
    let width = times.len();

    let state = config.state.x_state()?;
    let ghz: Vec<GhzSpec> = config
        .ghz
        .qubits
        .iter()
        .map(|&n| GhzSpec::new(n))
        .collect::<udd::Result<_>>()?;

    // per output column: source curve and GHZ size
    let mut columns = vec![scale.time_column().to_string()];
    let mut sources: Vec<(usize, Option<GhzSpec>)> = Vec::new();
    for (c, curve) in curves.iter().enumerate() {
        match command {
            Command::Signal => {
                columns.push(format!("S:{}", curve.label()));
                sources.push((c, None));
            }
            Command::Concurrence => {
                columns.push(format!("C:{}", curve.label()));
                sources.push((c, None));
            }
            _ => {
                for spec in &ghz {
                    columns.push(format!("G{}:{}", spec.qubit_count(), curve.label()));
                    sources.push((c, Some(*spec)));
                }
            }
        }
    }
    let mut table = Table::new(columns);
    match command {
        Command::Concurrence => table.comment(format!(
            "C = max(0, 2|z| (S - r)), r = {}",
            state.r().map(number).unwrap_or_else(|| "undefined (z = 0)".to_string())
        )),
        Command::Ghz => table.comment("G<N> = S^(N/2)"),
        _ => {}
    }
    let mut failures = Vec::new();
    for (i, &t) in grid.iter().enumerate() {
        let mut row = vec![number(t)];
        for (k, &(c, spec)) in sources.iter().enumerate() {
            let cell = signals[c * width + i]
                .clone()
                .and_then(|s| transform(command, &state, spec, s));
            let label = &table.columns[k + 1];
            row.push(cell_text(
                &cell,
                || format!("{label} at {}={}", scale.time_column(), number(t)),
                &mut failures,
            ));
        }
        table.push(row);
    }
    Ok(Report { table, failures })
}

fn transform(command: Command, state: &XState, ghz: Option<GhzSpec>, s: f64) -> Cell {
    let out = match (command, ghz) {
        (Command::Concurrence, _) => concurrence_at(state, s),
        (Command::Ghz, Some(spec)) => ghz_coherence(&spec, s),
        _ => Ok(s),
    };
    out.map_err(|e| e.to_string())
}

fn death(config: &RunConfig, scale: Scale, quad: &QuadratureSpec) -> udd::Result<Report> {
    let state = config.state.x_state()?;
    let horizon = scale.time_in(config.death.horizon);
    let step = scale.time_in(config.death.step);
    let theta = scale.freq_in(config.bath.theta);
    let kinds = &config.sequence.kinds;
    let counts: Vec<usize> = if kinds.iter().all(|&k| k == Kind::Custom) {
        vec![config.sequence.custom.len()]
    } else {
        config.sequence.n.clone()
    };
    let seqs = sequences(config, scale)?;
    let template = |kind: Kind, n: usize| -> &PulseSequence {
        let found = seqs
            .iter()
            .find(|s| Kind::from(s.template.kind()) == kind && (kind == Kind::Custom || s.n == n));
        &found.expect("sequence listed in config").template
    };

    let mut rows: Vec<(f64, usize)> = Vec::new();
    for &alpha in &config.bath.alpha {
        for &n in &counts {
            rows.push((alpha, n));
        }
    }
    let cells: Vec<Result<DeathTime, String>> = (0..rows.len() * kinds.len())
        .into_par_iter()
        .map(|index| {
            let (alpha, n) = rows[index / kinds.len()];
            let seq = template(kinds[index % kinds.len()], n);
            let bath = BathSpec::ohmic(alpha, 1.0, theta).map_err(|e| e.to_string())?;
            death_time_with(&state, |t| signal_at(&bath, seq, t, quad), horizon, step).map_err(|e| e.to_string())
        })
        .collect();
    let phenomenological = match config.death.t2 {
        Some(t2) => {
            let model = PhenomenologicalModel::new(scale.time_in(t2))?;
            Some(death_time(&state, &CoherenceSource::Phenomenological(model)).map_err(|e| e.to_string()))
        }
        None => None,
    };

    let mut columns = vec!["alpha".to_string(), "n".to_string(), "r".to_string()];
    columns.extend(kinds.iter().map(|&k| udd::SequenceKind::from(k).to_string()));
    if phenomenological.is_some() {
        columns.push("phenomenological".to_string());
    }
    let mut table = Table::new(columns);
    table.comment(format!(
        "death time of the concurrence ({}); \"never\" if S stays above r up to the horizon",
        scale.time_column()
    ));
    let r = state.r().map(number).unwrap_or_default();
    let show = |cell: &Result<DeathTime, String>| -> Cell {
        cell.clone().map(|d| match d {
            DeathTime::At(t) => scale.time_out(t),
            DeathTime::Never { .. } => f64::INFINITY,
        })
    };
    let mut failures = Vec::new();
    for (row_index, &(alpha, n)) in rows.iter().enumerate() {
        let mut row = vec![number(alpha), n.to_string(), r.clone()];
        let mut cells_out: Vec<&Result<DeathTime, String>> =
            (0..kinds.len()).map(|k| &cells[row_index * kinds.len() + k]).collect();
        if let Some(p) = &phenomenological {
            cells_out.push(p);
        }
        for (k, cell) in cells_out.into_iter().enumerate() {
            let value = show(cell);
            let text = match value {
                Ok(v) if v.is_infinite() => "never".to_string(),
                _ => cell_text(
                    &value,
                    || format!("{} death time at alpha={}, n={n}", table.columns[3 + k], number(alpha)),
                    &mut failures,
                ),
            };
            row.push(text);
        }
        table.push(row);
    }
    Ok(Report { table, failures })
}
