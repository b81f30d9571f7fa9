mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udd::pulse_sequence::{filter_exact, filter_uhrig_approx, filter_uniform_closed};
use udd::PulseSequence;

#[test]
fn exact_matches_time_domain_for_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let total = rng.gen_range(0.5..20.0);
        let n = rng.gen_range(0..25);
        let seq = PulseSequence::custom(random_pulses(&mut rng, n, total), total).unwrap();
        for k in 1..=50 {
            let omega = 10.0 / total * k as f64 / 50.0;
            let exact = filter_exact(&seq, omega).unwrap().abs_squared;
            let oracle = filter_time_domain(seq.times(), total, omega, |t| seq.switching(t).unwrap()).norm_sqr();
            assert!(rel_err(exact, oracle) <= 1e-8, "n={n} w={omega}: {exact} vs {oracle}");
        }
    }
}

#[test]
fn closed_uniform_form_matches_exact() {
    for n in [2usize, 4, 10] {
        let total = 1.0;
        let seq = PulseSequence::uniform(n, total).unwrap();
        let mut checked = 0;
        let mut k = 0;
        while checked < 100 {
            k += 1;
            let omega = 0.0371 + 0.2113 * k as f64;
            let x = omega * total / (2.0 * n as f64 + 2.0);
            if x.cos().abs() < 0.05 || (0.5 * omega * total).cos().abs() < 0.05 {
                continue;
            }
            let exact = filter_exact(&seq, omega).unwrap().abs_squared;
            let closed = filter_uniform_closed(n, total, omega).unwrap();
            assert!(rel_err(closed, exact) <= 1e-10, "n={n} w={omega}");
            checked += 1;
        }
    }
}

#[test]
fn closed_uniform_small_frequency_limit() {
    // series of the closed form at w -> 0 equals f(0)^2 = (T/(n+1))^2
    for n in [2usize, 6] {
        let seq = PulseSequence::uniform(n, 2.0).unwrap();
        let a = filter_uniform_closed(n, 2.0, 0.0).unwrap();
        let b = filter_exact(&seq, 0.0).unwrap().abs_squared;
        assert!(rel_err(a, b) < 1e-14);
        assert!(rel_err(a, (2.0 / (n as f64 + 1.0)).powi(2)) < 1e-14);
    }
}

#[test]
fn uhrig_bessel_form_tracks_exact() {
    for n in [10usize, 50] {
        let total = 3.0;
        let seq = PulseSequence::uhrig(n, total).unwrap();
        let mut worst: f64 = 0.0;
        for k in 1..=400 {
            let omega = 2.0 * n as f64 / total * k as f64 / 400.0;
            let exact = filter_exact(&seq, omega).unwrap().abs_squared;
            if exact <= 1e-12 {
                continue;
            }
            worst = worst.max(rel_err(filter_uhrig_approx(n, total, omega).unwrap(), exact));
        }
        assert!(worst < 1e-6, "n={n}: {worst}");
    }
}

#[test]
fn cosine_integral_oracle_sane() {
    for (x, want) in [
        (0.5, -0.177_784_078_806_612_9),
        (2.0, 0.422_980_828_774_865),
        (2.5, 0.285_871_196_365_383_5),
        (10.0, -0.045_456_433_004_455_37),
        (40.0, 0.019_020_007_896_208_765),
    ] {
        assert!((cosine_integral(x) - want).abs() < 1e-13, "x={x}");
    }
}
