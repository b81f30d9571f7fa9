//! Coherence survival `S(t) = |zeta(t)|^2` of a pulsed qubit.
//!
//! `S(t) = exp(-2 I)` with `I = int_0^omega_d J(w) (n(w) + 1/2) |f(w)|^2 dw`.
//! For the canonical sequences the pulse train is regenerated with its
//! total duration equal to the evaluation time, so the pulses stretch with
//! `t`. Custom sequences keep fixed physical pulse instants and can only be
//! observed up to their declared duration.

use rayon::prelude::*;

use crate::bath::BathSpec;
use crate::error::{domain, invalid, Error, Result};
use crate::numerics::{integrate, QuadratureSpec};
use crate::pulse_sequence::{filter_exact, filter_uniform_closed, PulseSequence, SequenceKind};

/// Exponents below this are treated as a quadrature bug.
const NEGATIVE_EXPONENT_SLACK: f64 = -1e-10;

/// Sampled coherence signal.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceCurve {
    times: Vec<f64>,
    signal: Vec<f64>,
}

impl CoherenceCurve {
    pub fn new(times: Vec<f64>, signal: Vec<f64>) -> Result<Self> {
        if times.len() != signal.len() {
            return Err(invalid("coherence curve", "times and signal differ in length"));
        }
        check_grid(&times)?;
        if let Some(s) = signal.iter().find(|&&s| !(s > 0.0 && s <= 1.0)) {
            return Err(invalid("coherence curve", format!("signal {s} outside (0, 1]")));
        }
        Ok(Self { times, signal })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn signal(&self) -> &[f64] {
        &self.signal
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.signal.iter().copied())
    }
}

/// Exponential dephasing with a fixed `T2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhenomenologicalModel {
    t2: f64,
}

impl PhenomenologicalModel {
    pub fn new(t2: f64) -> Result<Self> {
        if t2 > 0.0 && t2.is_finite() {
            Ok(Self { t2 })
        } else {
            Err(invalid("phenomenological model", format!("T2 must be > 0, got {t2}")))
        }
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    /// Two-qubit coherence factor `exp(-2t/T2)`; each qubit contributes
    /// `exp(-t/T2)`.
    pub fn signal(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain(format!("time must be >= 0, got {t}")));
        }
        Ok((-2.0 * t / self.t2).exp())
    }
}

pub fn phenomenological_signal(model: &PhenomenologicalModel, t: f64) -> Result<f64> {
    model.signal(t)
}

/// `J(w) (n(w) + 1/2) |f(w)|^2` for one sequence.
pub struct DecoherenceIntegrand<'a> {
    bath: &'a BathSpec,
    seq: &'a PulseSequence,
}

impl<'a> DecoherenceIntegrand<'a> {
    pub fn new(bath: &'a BathSpec, seq: &'a PulseSequence) -> Self {
        Self { bath, seq }
    }

    /// Value at `w = 0`: `2 alpha theta |f(0)|^2` (zero at `theta = 0`).
    pub fn limit_at_zero(&self) -> f64 {
        let f0 = filter_exact(self.seq, 0.0).map(|f| f.abs_squared).unwrap_or(0.0);
        self.bath.low_frequency_limit() * f0
    }

    pub fn at(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return self.limit_at_zero();
        }
        let weight = self.bath.dephasing_weight(omega);
        if weight == 0.0 {
            return 0.0;
        }
        weight * filter_exact(self.seq, omega).map(|f| f.abs_squared).unwrap_or(f64::NAN)
    }

    /// Oscillations of `|f|^2` over `[0, omega_d]`.
    pub fn oscillations(&self) -> f64 {
        self.bath.omega_d() * self.seq.total() / std::f64::consts::PI
    }
}

/// `2 I`, the exponent of `S`, for a sequence observed over its full
/// duration.
pub fn decoherence_exponent(bath: &BathSpec, seq: &PulseSequence, quad: &QuadratureSpec) -> Result<f64> {
    let integrand = DecoherenceIntegrand::new(bath, seq);
    exponent_from(|w| integrand.at(w), bath, integrand.oscillations(), quad)
}

fn exponent_from<F: Fn(f64) -> f64>(f: F, bath: &BathSpec, oscillations: f64, quad: &QuadratureSpec) -> Result<f64> {
    if bath.alpha() == 0.0 {
        return Ok(0.0);
    }
    let integral = integrate(f, 0.0, bath.omega_d(), oscillations, quad)?;
    let exponent = 2.0 * integral;
    if exponent.is_nan() || exponent < NEGATIVE_EXPONENT_SLACK {
        return Err(Error::Consistency(format!(
            "decoherence exponent {exponent} is negative"
        )));
    }
    Ok(exponent)
}

/// The sequence actually acting on `[0, t]`.
fn sequence_at(seq: &PulseSequence, t: f64) -> Result<PulseSequence> {
    match seq.kind() {
        SequenceKind::Custom => seq.truncated(t),
        kind => PulseSequence::canonical(kind, seq.len(), t),
    }
}

fn with_context(e: Error, t: f64, n: usize, bath: &BathSpec) -> Error {
    match e {
        Error::Convergence { .. } | Error::Consistency(_) => Error::Signal {
            t,
            n,
            alpha: bath.alpha(),
            source: Box::new(e),
        },
        other => other,
    }
}

/// `S(t)`.
///
/// Uniform and Uhrig sequences are rescaled to duration `t`; custom
/// sequences are truncated at `t`, which must not exceed their total.
pub fn signal_at(bath: &BathSpec, seq: &PulseSequence, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("signal needs finite t >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let acting = sequence_at(seq, t)?;
    let exponent = decoherence_exponent(bath, &acting, quad).map_err(|e| with_context(e, t, acting.len(), bath))?;
    Ok((-exponent).exp())
}

/// `S(t)` for `n` equidistant pulses (`n` even) through the closed tan/cos
/// form of `|f|^2`. Quadrature nodes next to a tan pole fall back to the
/// exact filter.
pub fn signal_uniform_closed(bath: &BathSpec, n: usize, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain(format!("signal needs finite t > 0, got {t}")));
    }
    let seq = PulseSequence::uniform(n, t)?;
    filter_uniform_closed(n, t, 0.0)?;
    let f = |w: f64| {
        let weight = bath.dephasing_weight(w);
        if weight == 0.0 {
            return 0.0;
        }
        let abs2 = match filter_uniform_closed(n, t, w) {
            Ok(v) => v,
            Err(Error::Pole { .. }) => filter_exact(&seq, w).map(|f| f.abs_squared).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        };
        weight * abs2
    };
    let oscillations = bath.omega_d() * t / std::f64::consts::PI;
    let exponent = exponent_from(f, bath, oscillations, quad).map_err(|e| with_context(e, t, n, bath))?;
    Ok((-exponent).exp())
}

fn check_grid(times: &[f64]) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for &t in times {
        if !(t >= 0.0) || !t.is_finite() || t <= prev {
            return Err(invalid(
                "time grid",
                format!("grid must be non-negative and strictly increasing near {t}"),
            ));
        }
        prev = t;
    }
    Ok(())
}

/// `S` over a time grid for a canonical sequence of `n` pulses that
/// stretches with each grid time. Grid points are evaluated in parallel and
/// returned in grid order.
pub fn signal_curve(
    bath: &BathSpec,
    kind: SequenceKind,
    n: usize,
    times: &[f64],
    quad: &QuadratureSpec,
) -> Result<CoherenceCurve> {
    check_grid(times)?;
    if kind == SequenceKind::Custom {
        return Err(invalid("signal curve", "custom sequences use signal_curve_fixed"));
    }
    // template; signal_at regenerates it at every grid time
    let template = PulseSequence::canonical(kind, n, 1.0)?;
    curve_over(bath, &template, times, quad)
}

/// `S` over a time grid for fixed pulse instants; every grid time must lie
/// within the sequence's duration.
pub fn signal_curve_fixed(
    bath: &BathSpec,
    seq: &PulseSequence,
    times: &[f64],
    quad: &QuadratureSpec,
) -> Result<CoherenceCurve> {
    check_grid(times)?;
    let custom = PulseSequence::custom(seq.times().to_vec(), seq.total())?;
    curve_over(bath, &custom, times, quad)
}

fn curve_over(bath: &BathSpec, seq: &PulseSequence, times: &[f64], quad: &QuadratureSpec) -> Result<CoherenceCurve> {
    let signal = times
        .par_iter()
        .map(|&t| signal_at(bath, seq, t, quad))
        .collect::<Result<Vec<_>>>()?;
    CoherenceCurve::new(times.to_vec(), signal)
}
