//! Pi-pulse timing sequences and their filter functions.
//!
//! A sequence of instantaneous pi pulses at `0 < T_1 < ... < T_n < T` turns
//! the system-bath coupling into `F(tau) B(tau)`, where the switching
//! function `F` flips sign at every pulse. Its Fourier transform over
//! `[0, T]`,
//!
//! ```text
//! f(w) = -i/w [1 + (-1)^(n+1) e^(-iwT) + 2 sum_j (-1)^j e^(-iwT_j)],
//! ```
//!
//! is the filter function whose squared modulus weights the bath spectrum.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, invalid, Error, Result};
use crate::numerics::bessel_jn;

/// Below this value of `|w T|` the filter evaluators switch to a Taylor
/// series about `w = 0`.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// `|cos(w T / (2n + 2))|` below which the closed uniform form reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-6;

const SERIES_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceKind {
    /// Equidistant pulses, `T_j = j T / (n + 1)`.
    Uniform,
    /// Uhrig's sequence, `T_j = T sin^2(pi j / (2n + 2))`.
    Uhrig,
    /// Arbitrary user-supplied pulse instants.
    Custom,
}

impl SequenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SequenceKind::Uniform => "uniform",
            SequenceKind::Uhrig => "uhrig",
            SequenceKind::Custom => "custom",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SequenceKind::Uniform),
            "uhrig" => Ok(SequenceKind::Uhrig),
            "custom" => Ok(SequenceKind::Custom),
            other => Err(invalid(
                "sequence kind",
                format!("expected uniform, uhrig or custom, got {other:?}"),
            )),
        }
    }
}

/// Ordered pulse instants strictly inside `(0, total)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    times: Vec<f64>,
    total: f64,
    kind: SequenceKind,
}

/// Filter function at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterValue {
    pub value: Complex64,
    pub abs_squared: f64,
}

impl FilterValue {
    fn new(value: Complex64) -> Self {
        Self {
            value,
            abs_squared: value.norm_sqr(),
        }
    }
}

fn check_total(total: f64) -> Result<()> {
    if total > 0.0 && total.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "pulse sequence",
            format!("total duration must be > 0, got {total}"),
        ))
    }
}

impl PulseSequence {
    /// `n` equidistant pulses over `total`.
    pub fn uniform(n: usize, total: f64) -> Result<Self> {
        check_total(total)?;
        let step = 1.0 / (n as f64 + 1.0);
        let times = (1..=n).map(|j| total * (j as f64 * step)).collect();
        Ok(Self {
            times,
            total,
            kind: SequenceKind::Uniform,
        })
    }

    /// `n` pulses at Uhrig's instants over `total`.
    pub fn uhrig(n: usize, total: f64) -> Result<Self> {
        check_total(total)?;
        let denom = 2.0 * (n as f64 + 1.0);
        let times = (1..=n).map(|j| total * (PI * j as f64 / denom).sin().powi(2)).collect();
        Ok(Self {
            times,
            total,
            kind: SequenceKind::Uhrig,
        })
    }

    /// Arbitrary pulse instants, strictly increasing and strictly inside
    /// `(0, total)`.
    pub fn custom(times: Vec<f64>, total: f64) -> Result<Self> {
        check_total(total)?;
        let mut prev = 0.0;
        for (i, &t) in times.iter().enumerate() {
            if !t.is_finite() || t <= prev || t >= total {
                return Err(invalid(
                    "pulse sequence",
                    format!("pulse {i} at {t} is not strictly increasing inside (0, {total})"),
                ));
            }
            prev = t;
        }
        Ok(Self {
            times,
            total,
            kind: SequenceKind::Custom,
        })
    }

    /// A uniform or Uhrig sequence of `n` pulses over `total`.
    pub fn canonical(kind: SequenceKind, n: usize, total: f64) -> Result<Self> {
        match kind {
            SequenceKind::Uniform => Self::uniform(n, total),
            SequenceKind::Uhrig => Self::uhrig(n, total),
            SequenceKind::Custom => Err(invalid("pulse sequence", "custom sequences need explicit pulse times")),
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// Number of pulses.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The same physical pulses observed up to time `t <= total`: pulses at
    /// or after `t` are dropped.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= self.total) {
            return Err(domain(format!(
                "cannot observe a sequence of duration {} at t = {t}",
                self.total
            )));
        }
        let keep = self.times.partition_point(|&tj| tj < t);
        Ok(Self {
            times: self.times[..keep].to_vec(),
            total: t,
            kind: self.kind,
        })
    }

    /// Sign of the coupling at time `t`. At a pulse instant the post-pulse
    /// sign is returned.
    pub fn switching(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.total).contains(&t) {
            return Err(domain(format!(
                "switching function needs 0 <= t <= {}, got {t}",
                self.total
            )));
        }
        let flips = self.times.partition_point(|&tj| tj <= t);
        Ok(if flips % 2 == 0 { 1.0 } else { -1.0 })
    }

    /// Constant-sign intervals `(start, end, sign)` covering `[0, total]`.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.times.len();
        (0..=n).map(move |j| {
            let start = if j == 0 { 0.0 } else { self.times[j - 1] };
            let end = if j == n { self.total } else { self.times[j] };
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (start, end, sign)
        })
    }

    /// Normalised moments `int_0^1 u^k F(u T) du` for `k = 0..=order`.
    fn moments(&self, order: usize) -> Vec<f64> {
        let mut m = vec![0.0; order + 1];
        for (start, end, sign) in self.segments() {
            let (a, b) = (start / self.total, end / self.total);
            let (mut pa, mut pb) = (a, b);
            for (k, mk) in m.iter_mut().enumerate() {
                *mk += sign * (pb - pa) / (k as f64 + 1.0);
                pa *= a;
                pb *= b;
            }
        }
        m
    }
}

/// `f(w)` from the pulse instants. Exact for any sequence; finite at `w = 0`.
pub fn filter_exact(seq: &PulseSequence, omega: f64) -> Result<FilterValue> {
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(domain(format!("filter needs finite omega >= 0, got {omega}")));
    }
    let total = seq.total;
    if omega * total < SERIES_THRESHOLD {
        // f(w) = T sum_k (-i w T)^k mu_k / k!
        let mu = seq.moments(SERIES_ORDER);
        let z = Complex64::new(0.0, -omega * total);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &m) in mu.iter().enumerate().rev() {
            acc = acc * z / (k as f64 + 1.0) + m;
        }
        return Ok(FilterValue::new(acc * total));
    }
    let phase = |t: f64| Complex64::from_polar(1.0, -omega * t);
    let n = seq.len();
    let mut bracket = Complex64::new(1.0, 0.0);
    if n.is_multiple_of(2) {
        bracket -= phase(total);
    } else {
        bracket += phase(total);
    }
    for (j, &tj) in seq.times.iter().enumerate() {
        let w = if j % 2 == 0 { -2.0 } else { 2.0 };
        bracket += phase(tj) * w;
    }
    Ok(FilterValue::new(Complex64::new(0.0, -1.0) * bracket / omega))
}

/// Closed form of `|f(w)|^2` for `n` (even) equidistant pulses,
/// `4 tan^2(wT/(2n+2)) cos^2(wT/2) / w^2`.
pub fn filter_uniform_closed(n: usize, total: f64, omega: f64) -> Result<f64> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(domain(format!("closed uniform filter needs even n >= 2, got {n}")));
    }
    check_total(total).map_err(|e| domain(e.to_string()))?;
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(domain(format!("filter needs finite omega >= 0, got {omega}")));
    }
    let segment = total / (n as f64 + 1.0);
    let x = 0.5 * omega * segment;
    let cos_x = x.cos();
    if cos_x.abs() < POLE_TOLERANCE {
        return Err(Error::Pole { omega });
    }
    // 2 tan(x) / w = segment * tan(x) / x
    let tan_ratio = if omega * total < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 + x2 / 3.0 + 2.0 * x2 * x2 / 15.0
    } else {
        x.tan() / x
    };
    let c = (0.5 * omega * total).cos();
    Ok((segment * tan_ratio * c).powi(2))
}

/// Bessel-function form of `|f(w)|^2` for Uhrig's sequence,
/// `16 (n+1)^2 J_{n+1}(wT/2)^2 / w^2`.
pub fn filter_uhrig_approx(n: usize, total: f64, omega: f64) -> Result<f64> {
    if n < 1 {
        return Err(domain("Bessel filter form needs n >= 1"));
    }
    check_total(total).map_err(|e| domain(e.to_string()))?;
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(domain(format!("filter needs finite omega >= 0, got {omega}")));
    }
    if omega == 0.0 {
        return Ok(0.0);
    }
    let x = 0.5 * omega * total;
    let order = u32::try_from(n + 1).map_err(|_| domain("pulse count too large"))?;
    // 16 (n+1)^2 J^2 / w^2 = 4 (n+1)^2 T^2 (J / x)^2
    let ratio = bessel_jn(order, x) / x;
    let scale = 2.0 * (n as f64 + 1.0) * total;
    Ok((scale * ratio).powi(2))
}
