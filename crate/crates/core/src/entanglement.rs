//! Two-qubit X states, their concurrence under dephasing, entanglement
//! death times and GHZ coherence.
//!
//! In the basis `|uu>, |ud>, |du>, |dd>` an X state has populations
//! `a, b, c, d` on the diagonal and the single coherence `z = rho_23`.
//! Each qubit dephases through its own bath, so populations stay put while
//! `z` is multiplied by the coherence survival `S(t)`.

use num_complex::Complex64;

use crate::bath::BathSpec;
use crate::coherence::{signal_at, PhenomenologicalModel};
use crate::error::{domain, invalid, Result};
use crate::numerics::QuadratureSpec;
use crate::pulse_sequence::{PulseSequence, SequenceKind};

const TRACE_TOLERANCE: f64 = 1e-12;

/// Relative width to which death times are bisected.
pub const DEFAULT_BISECTION_TOLERANCE: f64 = 1e-9;

/// Scan step, in units of `1 / omega_d`, for microscopic death times.
pub const DEFAULT_SCAN_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    z: Complex64,
}

impl XState {
    pub fn new(a: f64, b: f64, c: f64, d: f64, z: Complex64) -> Result<Self> {
        let pops = [a, b, c, d];
        if pops.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(invalid("X state", format!("populations must be >= 0, got {pops:?}")));
        }
        let trace = a + b + c + d;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(invalid("X state", format!("populations sum to {trace}, not 1")));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(invalid("X state", "coherence must be finite"));
        }
        // b c >= |z|^2, with rounding slack for states built at the boundary
        if z.norm_sqr() > b * c * (1.0 + 4.0 * f64::EPSILON) {
            return Err(invalid(
                "X state",
                format!("not positive: |z|^2 = {} exceeds b c = {}", z.norm_sqr(), b * c),
            ));
        }
        Ok(Self { a, b, c, d, z })
    }

    /// X state with a real coherence.
    pub fn real(a: f64, b: f64, c: f64, d: f64, z: f64) -> Result<Self> {
        Self::new(a, b, c, d, Complex64::new(z, 0.0))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `r = sqrt(a d) / |z|`; `None` when `z = 0`.
    pub fn r(&self) -> Option<f64> {
        let mag = self.z.norm();
        (mag > 0.0).then(|| (self.a * self.d).sqrt() / mag)
    }
}

/// `max(0, 2 (|z| - sqrt(a d)))`.
pub fn concurrence(state: &XState) -> f64 {
    let mag = state.z.norm();
    if mag == 0.0 {
        return 0.0;
    }
    (2.0 * (mag - (state.a * state.d).sqrt())).max(0.0)
}

fn check_survival(survival: f64) -> Result<()> {
    if survival > 0.0 && survival <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("survival must lie in (0, 1], got {survival}")))
    }
}

/// Dephased state: `z -> z S`, populations unchanged.
pub fn evolve_state(state: &XState, survival: f64) -> Result<XState> {
    check_survival(survival)?;
    Ok(XState {
        z: state.z * survival,
        ..*state
    })
}

/// Concurrence after dephasing, `max(0, 2|z|(S - r))`.
pub fn concurrence_at(state: &XState, survival: f64) -> Result<f64> {
    let evolved = evolve_state(state, survival)?;
    Ok(concurrence(&evolved))
}

/// Outcome of a death-time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeathTime {
    /// Concurrence first reaches zero at this time.
    At(f64),
    /// No crossing; for finite searches `min_signal` is the smallest `S`
    /// seen, for the closed form it is absent.
    Never { min_signal: Option<f64> },
}

impl DeathTime {
    pub fn time(&self) -> Option<f64> {
        match *self {
            DeathTime::At(t) => Some(t),
            DeathTime::Never { .. } => None,
        }
    }
}

/// Where `S(t)` comes from when solving for a death time.
#[derive(Debug, Clone)]
pub enum CoherenceSource {
    /// `S = exp(-2t/T2)`.
    Phenomenological(PhenomenologicalModel),
    /// `S` from the bath and a pulse sequence, scanned forward up to
    /// `horizon` in steps of `step` (both in time units).
    Microscopic(MicroscopicSource),
}

#[derive(Debug, Clone)]
pub struct MicroscopicSource {
    pub bath: BathSpec,
    pub kind: SequenceKind,
    pub n: usize,
    pub horizon: f64,
    pub step: f64,
    pub quadrature: QuadratureSpec,
}

impl MicroscopicSource {
    /// Scan step defaulting to `0.05 / omega_d`.
    pub fn new(bath: BathSpec, kind: SequenceKind, n: usize, horizon: f64) -> Self {
        Self {
            step: DEFAULT_SCAN_STEP / bath.omega_d(),
            bath,
            kind,
            n,
            horizon,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn signal(&self, t: f64) -> Result<f64> {
        let template = PulseSequence::canonical(self.kind, self.n, 1.0)?;
        signal_at(&self.bath, &template, t, &self.quadrature)
    }
}

/// Time at which the concurrence of `state` first vanishes.
///
/// The phenomenological source uses the closed form `(T2/2) ln(1/r)`. The
/// microscopic source scans `S(t)` forward at its step and bisects the
/// first bracket with `S <= r`; pulse-protected `S(t)` need not be
/// monotone, so crossings narrower than the step can be missed.
pub fn death_time(state: &XState, source: &CoherenceSource) -> Result<DeathTime> {
    match source {
        CoherenceSource::Phenomenological(model) => match trivial_death(state) {
            Ok(done) => Ok(done),
            Err(r) => Ok(DeathTime::At(0.5 * model.t2() * (1.0 / r).ln())),
        },
        CoherenceSource::Microscopic(micro) => death_time_with(state, |t| micro.signal(t), micro.horizon, micro.step),
    }
}

/// Death time for an arbitrary `S(t)`, scanned as for a microscopic source.
pub fn death_time_with<F>(state: &XState, signal: F, horizon: f64, step: f64) -> Result<DeathTime>
where
    F: Fn(f64) -> Result<f64>,
{
    match trivial_death(state) {
        Ok(done) => Ok(done),
        Err(r) => first_crossing(signal, r, horizon, step, DEFAULT_BISECTION_TOLERANCE),
    }
}

/// Cases settled by `r` alone; otherwise `Err(r)` with `0 < r < 1`.
fn trivial_death(state: &XState) -> std::result::Result<DeathTime, f64> {
    match state.r() {
        // z = 0: never entangled; report as already dead
        None => Ok(DeathTime::At(0.0)),
        Some(0.0) => Ok(DeathTime::Never { min_signal: None }),
        Some(r) if r >= 1.0 => Ok(DeathTime::At(0.0)),
        Some(r) => Err(r),
    }
}

/// First `t` in `(0, horizon]` with `signal(t) <= threshold`, found by a
/// forward scan at `step` and bisection to relative width `rel_tol`.
pub fn first_crossing<F>(signal: F, threshold: f64, horizon: f64, step: f64, rel_tol: f64) -> Result<DeathTime>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(step > 0.0) || !(horizon > 0.0) || !horizon.is_finite() {
        return Err(domain(format!(
            "scan needs step > 0 and horizon > 0, got {step}, {horizon}"
        )));
    }
    if !(rel_tol > 0.0) {
        return Err(domain("bisection tolerance must be > 0"));
    }
    if signal(0.0)? <= threshold {
        return Ok(DeathTime::At(0.0));
    }
    let steps = (horizon / step).ceil() as usize;
    let mut lo = 0.0;
    let mut min_signal = f64::INFINITY;
    for k in 1..=steps {
        let hi = (k as f64 * step).min(horizon);
        let s = signal(hi)?;
        min_signal = min_signal.min(s);
        if s <= threshold {
            return bisect(&signal, threshold, lo, hi, rel_tol).map(DeathTime::At);
        }
        lo = hi;
    }
    Ok(DeathTime::Never {
        min_signal: Some(min_signal),
    })
}

fn bisect<F>(signal: &F, threshold: f64, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    // invariant: signal(lo) > threshold >= signal(hi)
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if signal(mid)? <= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// GHZ state of `qubit_count >= 2` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhzSpec {
    qubit_count: u32,
}

impl GhzSpec {
    pub fn new(qubit_count: u32) -> Result<Self> {
        if qubit_count >= 2 {
            Ok(Self { qubit_count })
        } else {
            Err(invalid(
                "GHZ spec",
                format!("needs at least 2 qubits, got {qubit_count}"),
            ))
        }
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubit_count
    }
}

/// Magnitude of the GHZ off-diagonal prefactor, `S^(N/2)`.
pub fn ghz_coherence(spec: &GhzSpec, survival: f64) -> Result<f64> {
    check_survival(survival)?;
    if spec.qubit_count == 2 {
        return Ok(survival);
    }
    Ok(survival.powf(0.5 * f64::from(spec.qubit_count)))
}
