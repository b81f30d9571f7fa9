//! Bessel functions of the first kind and integer order.
//!
//! Three regimes:
//! - `|x| < 2`: ascending power series, no cancellation there.
//! - `|x| >= 25` and `order <= |x|`: Hankel asymptotic expansion for `J_0`,
//!   `J_1` followed by upward recurrence, which is stable below the turning
//!   point `order ~ x`.
//! - otherwise: Miller's downward recurrence normalised with
//!   `J_0 + 2 sum J_2k = 1`.

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;
const RESCALE: f64 = 1e250;

/// `J_order(x)`.
pub fn bessel_jn(order: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        let v = bessel_jn(order, -x);
        return if order.is_multiple_of(2) { v } else { -v };
    }
    if x < SERIES_LIMIT {
        power_series(order, x)
    } else if x >= ASYMPTOTIC_LIMIT && f64::from(order) <= x {
        upward(order, x)
    } else {
        miller(order, x)
    }
}

fn power_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=order {
        lead *= half / f64::from(k);
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let n = f64::from(order);
    for k in 1..200 {
        let k = f64::from(k);
        term *= q / (k * (n + k));
        sum += term;
        if term.abs() < f64::EPSILON * sum.abs() * 1e-2 {
            break;
        }
    }
    lead * sum
}

/// Hankel expansion of `J_nu(x)` for large `x`.
fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..120 {
        let kf = f64::from(k);
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        if a.abs() >= last || a == 0.0 {
            break;
        }
        last = a.abs();
        // a_k / x^k enters P with sign (-1)^(k/2) for even k, Q with (-1)^((k-1)/2) for odd k
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn upward(order: u32, x: f64) -> f64 {
    let j0 = hankel(0.0, x);
    if order == 0 {
        return j0;
    }
    let j1 = hankel(1.0, x);
    let (mut prev, mut cur) = (j0, j1);
    for k in 1..order {
        let next = 2.0 * f64::from(k) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn miller(order: u32, x: f64) -> f64 {
    let top = f64::from(order).max(x);
    let start = (top + 20.0 + (50.0 * top).sqrt()) as u32;
    let start = start + start % 2;
    let (mut above, mut cur) = (0.0_f64, 1e-300_f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let below = 2.0 * f64::from(k) / x * cur - above;
        above = cur;
        cur = below;
        let idx = k - 1;
        if idx == order {
            wanted = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            above /= RESCALE;
            norm /= RESCALE;
            wanted /= RESCALE;
        }
    }
    norm += cur;
    wanted / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Ascending series summed to a fixed 50 terms, independent of the
    /// early-exit logic above.
    fn series_oracle(order: u32, x: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..50u32 {
            let mut term = if k % 2 == 0 { 1.0 } else { -1.0 };
            for i in 1..=k {
                term *= (0.5 * x) * (0.5 * x) / f64::from(i) / f64::from(i + order);
            }
            for i in 1..=order {
                term *= 0.5 * x / f64::from(i);
            }
            sum += term;
        }
        sum
    }

    #[test]
    fn at_origin() {
        assert_eq!(bessel_jn(0, 0.0), 1.0);
        for k in 1..=64 {
            assert_eq!(bessel_jn(k, 0.0), 0.0);
        }
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_jn(0, 2.404_825_557_695_773).abs() < 1e-12);
    }

    #[test]
    fn matches_series_oracle() {
        assert_relative_eq!(bessel_jn(11, 5.0), series_oracle(11, 5.0), max_relative = 1e-10);
        for &(n, x) in &[(0, 3.0), (3, 7.5), (20, 9.0), (1, 1.9), (8, 2.0)] {
            assert_relative_eq!(bessel_jn(n, x), series_oracle(n, x), max_relative = 1e-10);
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn reference_values() {
        // 30-digit reference values
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_55),
            (1, 1.0, 0.440_050_585_744_933_52),
            (0, 10.0, -0.245_935_764_451_348_34),
            (5, 50.0, -0.081_400_247_696_569_64),
            (11, 5.0, 3.509_274_497_662_090_1e-4),
            (30, 12.5, 7.836_631_126_330_117e-10),
            (64, 200.0, -0.034_059_764_963_014_577),
            (64, 30.0, 4.175_075_352_440_615e-16),
            (3, 199.5, 0.041_157_455_967_513_96),
            (51, 25.0, 2.551_147_064_316_463e-12),
            (40, 150.0, -0.053_178_029_743_433_99),
            (2, 2.5, 0.446_059_058_439_617_2),
            (7, -3.3, -0.004_669_088_605_359_158),
        ];
        for (n, x, want) in cases {
            assert_relative_eq!(bessel_jn(n, x), want, max_relative = 1e-10);
        }
    }

    #[test]
    fn three_term_recurrence() {
        for &x in &[0.5, 5.0, 50.0] {
            for k in 1..=30u32 {
                let lhs = bessel_jn(k - 1, x) + bessel_jn(k + 1, x);
                let rhs = 2.0 * f64::from(k) / x * bessel_jn(k, x);
                let scale = lhs.abs().max(rhs.abs());
                assert!((lhs - rhs).abs() <= 1e-9 * scale, "k={k} x={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn normalization_sum() {
        for i in 1..=40 {
            let x = 0.5 * f64::from(i);
            let s: f64 = bessel_jn(0, x) + 2.0 * (1..=40).map(|k| bessel_jn(2 * k, x)).sum::<f64>();
            assert!((s - 1.0).abs() < 1e-9, "x={x}: {s}");
        }
    }

    #[test]
    fn regimes_agree_at_boundaries() {
        for n in [0u32, 1, 4, 12, 24] {
            let lo = miller(n, ASYMPTOTIC_LIMIT);
            let hi = upward(n, ASYMPTOTIC_LIMIT);
            assert!((lo - hi).abs() < 1e-13, "n={n}: {lo} vs {hi}");
            assert!((power_series(n, SERIES_LIMIT) - miller(n, SERIES_LIMIT)).abs() < 1e-15);
        }
    }
}
