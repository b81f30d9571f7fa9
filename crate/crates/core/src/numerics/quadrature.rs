//! Globally adaptive Gauss-Legendre quadrature for oscillatory integrands.
//!
//! Each panel carries its single-rule estimate and the estimate from its two
//! halves; their difference is the panel error. The panel with the largest
//! error is split until the summed error meets the tolerance. The caller
//! supplies the number of oscillations expected on the interval so that the
//! starting grid already resolves every period.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

const RULE_POINTS: usize = 16;
const PANELS_PER_OSCILLATION: f64 = 2.0;
const MIN_PANELS: usize = 4;

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(invalid(
                "quadrature spec",
                format!("rel_tol must be > 0, got {}", self.rel_tol),
            ));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(invalid(
                "quadrature spec",
                format!("abs_tol must be >= 0, got {}", self.abs_tol),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(invalid("quadrature spec", "max_subdivisions must be >= 1"));
        }
        Ok(())
    }
}

/// Result of an integration together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Integrates `f` over `[lower, upper]`.
///
/// `oscillations` is the approximate number of periods of `f` on the
/// interval (zero for smooth integrands). The integrand is never evaluated at
/// either endpoint.
pub fn integrate<F>(f: F, lower: f64, upper: f64, oscillations: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_error(f, lower, upper, oscillations, spec).map(|i| i.value)
}

pub fn integrate_with_error<F>(
    f: F,
    lower: f64,
    upper: f64,
    oscillations: f64,
    spec: &QuadratureSpec,
) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
        return Err(Error::Domain(format!(
            "integration needs finite lower < upper, got [{lower}, {upper}]"
        )));
    }
    let hint = if oscillations.is_finite() {
        oscillations.max(0.0)
    } else {
        0.0
    };
    let initial = ((PANELS_PER_OSCILLATION * hint).ceil() as usize + MIN_PANELS).min(spec.max_subdivisions.max(1));

    let width = (upper - lower) / initial as f64;
    let mut heap = BinaryHeap::with_capacity(2 * initial);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..initial {
        let a = lower + width * i as f64;
        let b = if i + 1 == initial { upper } else { a + width };
        let p = Panel::new(&f, a, b, gauss(&f, a, b));
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    let mut panels = initial;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            // running sums drift; confirm against a fresh summation
            let exact_err = compensated_sum(heap.iter().map(|p| p.error));
            if exact_err <= target {
                break;
            }
            total_err = exact_err;
        }
        if panels >= spec.max_subdivisions {
            let value = ordered_sum(&heap);
            return Err(Error::Convergence {
                estimate: value,
                error_bound: compensated_sum(heap.iter().map(|p| p.error)),
                subdivisions: panels,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            // panel can no longer be split in floating point
            let value = ordered_sum(&heap) + worst.value;
            return Err(Error::Convergence {
                estimate: value,
                error_bound: total_err,
                subdivisions: panels,
            });
        }
        let left = Panel::new(&f, worst.a, mid, worst.left);
        let right = Panel::new(&f, mid, worst.b, worst.right);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }

    let error = compensated_sum(heap.iter().map(|p| p.error));
    Ok(Integral {
        value: ordered_sum(&heap),
        error,
        panels,
    })
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Sum of panel values in left-to-right order, independent of heap layout.
fn ordered_sum(heap: &BinaryHeap<Panel>) -> f64 {
    let mut panels: Vec<(f64, f64)> = heap.iter().map(|p| (p.a, p.value)).collect();
    panels.sort_by(|x, y| x.0.total_cmp(&y.0));
    compensated_sum(panels.into_iter().map(|(_, v)| v))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    left: f64,
    right: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64) -> Self {
        let mid = 0.5 * (a + b);
        let left = gauss(f, a, mid);
        let right = gauss(f, mid, b);
        let value = left + right;
        Self {
            a,
            b,
            value,
            error: (whole - value).abs(),
            left,
            right,
        }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let rule = legendre_rule();
    let half = 0.5 * (b - a);
    let centre = 0.5 * (a + b);
    let mut sum = 0.0;
    for &(x, w) in rule {
        sum += w * (f(centre - half * x) + f(centre + half * x));
    }
    sum * half
}

/// Positive Gauss-Legendre nodes and weights, found by Newton iteration on
/// `P_n`.
fn legendre_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = RULE_POINTS;
        let nf = n as f64;
        (0..n / 2)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
                let mut deriv = 0.0;
                for _ in 0..100 {
                    let (p, dp) = legendre(n, x);
                    deriv = dp;
                    let dx = p / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                let (_, dp) = legendre(n, x);
                if dp != 0.0 {
                    deriv = dp;
                }
                (x, 2.0 / ((1.0 - x * x) * deriv * deriv))
            })
            .collect()
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
