//! Independent oracles shared by the integration and acceptance tests.
//!
//! Nothing here calls the filter or quadrature code under test.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `int_0^T e^{-iw tau} F(tau) d tau` by 8-panel x 5-point Gauss-Legendre
/// on each constant-sign stretch, with the sign read from `switching`.
pub fn filter_time_domain(pulses: &[f64], total: f64, omega: f64, switching: impl Fn(f64) -> f64) -> Complex64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
        (0.906_179_845_938_664, 0.236_926_885_056_189_08),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    ];
    let mut edges = vec![0.0];
    edges.extend_from_slice(pulses);
    edges.push(total);
    let mut acc = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let sign = switching(0.5 * (a + b));
        // enough panels that each covers well under one period
        let panels = 8 + ((b - a) * omega).ceil() as usize * 4;
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let c = a + (p as f64 + 0.5) * h;
            for &(x, wt) in &NODES {
                let tau = c + 0.5 * h * x;
                acc += Complex64::from_polar(1.0, -omega * tau) * (sign * wt * 0.5 * h);
            }
        }
    }
    acc
}

/// `|f(w)|^2` straight from the pulse instants, no series branch.
pub fn filter_abs2_direct(pulses: &[f64], total: f64, omega: f64) -> f64 {
    let n = pulses.len();
    let mut bracket = Complex64::new(1.0, 0.0);
    let end_sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    bracket += Complex64::from_polar(end_sign, -omega * total);
    for (j, &tj) in pulses.iter().enumerate() {
        let sign = if j % 2 == 0 { -2.0 } else { 2.0 };
        bracket += Complex64::from_polar(sign, -omega * tj);
    }
    bracket.norm_sqr() / (omega * omega)
}

pub fn uniform_times(n: usize, total: f64) -> Vec<f64> {
    (1..=n).map(|j| j as f64 * total / (n as f64 + 1.0)).collect()
}

pub fn uhrig_times(n: usize, total: f64) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            total
                * (std::f64::consts::PI * j as f64 / (2.0 * (n as f64 + 1.0)))
                    .sin()
                    .powi(2)
        })
        .collect()
}

/// `J(w) (n(w) + 1/2)` for the Ohmic bath, written out from scratch.
pub fn ohmic_weight(alpha: f64, omega_d: f64, theta: f64, omega: f64) -> f64 {
    if omega >= omega_d {
        return 0.0;
    }
    let occupation = if theta == 0.0 {
        0.0
    } else {
        1.0 / ((omega / theta).exp() - 1.0)
    };
    2.0 * alpha * omega * (occupation + 0.5)
}

/// Midpoint rule with `panels` panels, summed in fixed order.
pub fn midpoint(f: impl Fn(f64) -> f64 + Sync, lower: f64, upper: f64, panels: usize) -> f64 {
    let h = (upper - lower) / panels as f64;
    let chunk = 10_000;
    let partial: Vec<f64> = (0..panels.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * chunk).min(panels);
            let mut s = 0.0;
            let mut carry = 0.0;
            for i in c * chunk..end {
                let v = f(lower + (i as f64 + 0.5) * h);
                let t = s + v;
                carry += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
                s = t;
            }
            s + carry
        })
        .collect();
    partial.iter().sum::<f64>() * h
}

/// Decoherence integral `int_0^omega_d J (n + 1/2) |f|^2 dw` by brute force.
pub fn decoherence_integral_oracle(
    alpha: f64,
    omega_d: f64,
    theta: f64,
    pulses: &[f64],
    total: f64,
    panels: usize,
) -> f64 {
    midpoint(
        |w| ohmic_weight(alpha, omega_d, theta, w) * filter_abs2_direct(pulses, total, w),
        0.0,
        omega_d,
        panels,
    )
}

/// `S = exp(-2 I)` by brute force.
pub fn signal_oracle(alpha: f64, omega_d: f64, theta: f64, pulses: &[f64], total: f64, panels: usize) -> f64 {
    (-2.0 * decoherence_integral_oracle(alpha, omega_d, theta, pulses, total, panels)).exp()
}

/// Cosine integral `Ci(x)` for `x > 0`: ascending series below 2, Lentz
/// continued fraction for `E1(ix)` above.
pub fn cosine_integral(x: f64) -> f64 {
    assert!(x > 0.0);
    if x <= 2.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            let k2 = 2.0 * k as f64;
            term *= -x * x / ((k2 - 1.0) * k2);
            sum += term / k2;
        }
        return EULER_GAMMA + x.ln() + sum;
    }
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(x.cos(), -x.sin());
    -h.re
}

/// `S(t)` for free decay at zero temperature:
/// `exp(-8 alpha int_0^omega_d sin^2(w t/2)/w dw)` with the integral written
/// as `(ln(omega_d t) + gamma - Ci(omega_d t)) / 2`.
pub fn free_decay_closed_form(alpha: f64, omega_d: f64, t: f64) -> f64 {
    let x = omega_d * t;
    let integral = 0.5 * (x.ln() + EULER_GAMMA - cosine_integral(x));
    (-8.0 * alpha * integral).exp()
}

/// Sorted pulse instants strictly inside `(0, total)`.
pub fn random_pulses<R: Rng>(rng: &mut R, n: usize, total: f64) -> Vec<f64> {
    let mut t: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..0.99) * total).collect();
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(got.abs())
    }
}
