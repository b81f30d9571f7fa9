mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use udd::coherence::{signal_at, signal_curve, signal_uniform_closed};
use udd::{BathSpec, PulseSequence, QuadratureSpec, SequenceKind};

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

#[test]
fn free_decay_matches_cosine_integral_form() {
    for alpha in [0.25, 0.01] {
        let bath = BathSpec::ohmic(alpha, 1.0, 0.0).unwrap();
        let free = PulseSequence::uniform(0, 1.0).unwrap();
        for t in [0.3, 1.0, 10.0, 37.5] {
            let s = signal_at(&bath, &free, t, &quad()).unwrap();
            assert!(
                rel_err(s, free_decay_closed_form(alpha, 1.0, t)) < 1e-6,
                "alpha={alpha} t={t}"
            );
        }
    }
    // the same in physical units: only omega_d t matters
    let bath = BathSpec::ohmic(0.25, 4.0, 0.0).unwrap();
    let s = signal_at(&bath, &PulseSequence::uniform(0, 1.0).unwrap(), 2.5, &quad()).unwrap();
    assert!(rel_err(s, free_decay_closed_form(0.25, 1.0, 10.0)) < 1e-6);
}

#[test]
fn random_tuples_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let alpha = rng.gen_range(0.001..0.25);
        let theta = if rng.gen_bool(0.4) {
            0.0
        } else {
            rng.gen_range(0.01..2.0)
        };
        let n = rng.gen_range(0..=50);
        let kind = if rng.gen_bool(0.5) {
            SequenceKind::Uniform
        } else {
            SequenceKind::Uhrig
        };
        let t = rng.gen_range(0.5..60.0);
        let bath = BathSpec::ohmic(alpha, 1.0, theta).unwrap();
        let seq = PulseSequence::canonical(kind, n, 1.0).unwrap();
        let s = signal_at(&bath, &seq, t, &quad()).unwrap();
        let pulses = match kind {
            SequenceKind::Uniform => uniform_times(n, t),
            _ => uhrig_times(n, t),
        };
        let oracle = signal_oracle(alpha, 1.0, theta, &pulses, t, 1_000_000);
        assert!(
            rel_err(s, oracle) <= 1e-6,
            "alpha={alpha} theta={theta} n={n} {kind} t={t}: {s} vs {oracle}"
        );
    }
}

#[test]
fn closed_route_agrees() {
    for n in [2usize, 4, 10] {
        for (t, theta) in [(3.0, 0.0), (25.0, 0.5), (60.0, 0.0)] {
            let bath = BathSpec::ohmic(0.1, 1.0, theta).unwrap();
            let a = signal_at(&bath, &PulseSequence::uniform(n, 1.0).unwrap(), t, &quad()).unwrap();
            let b = signal_uniform_closed(&bath, n, t, &quad()).unwrap();
            assert!(rel_err(a, b) <= 1e-6, "n={n} t={t}");
        }
    }
}

#[test]
fn weak_coupling_uhrig_curve_against_coarse_oracle() {
    let bath = BathSpec::ohmic(0.001, 1.0, 0.0).unwrap();
    let grid: Vec<f64> = (1..=20).map(f64::from).collect();
    let curve = signal_curve(&bath, SequenceKind::Uhrig, 10, &grid, &quad()).unwrap();
    for (t, s) in curve.iter() {
        let oracle = signal_oracle(0.001, 1.0, 0.0, &uhrig_times(10, t), t, 100_000);
        assert!(rel_err(s, oracle) < 1e-7, "t={t}");
    }
    // flat near one, then a drop as the filter passband reaches the cutoff
    assert!(curve.signal()[..10].iter().all(|&s| s > 1.0 - 1e-6));
    assert!(curve.signal()[19] < curve.signal()[9]);
}

#[test]
fn heat_and_coupling_order() {
    let seq = PulseSequence::uhrig(10, 1.0).unwrap();
    for t in [5.0, 15.0, 30.0] {
        let mut prev = 1.0;
        for alpha in [0.001, 0.01, 0.1, 0.25] {
            let s = signal_at(&BathSpec::ohmic(alpha, 1.0, 0.0).unwrap(), &seq, t, &quad()).unwrap();
            assert!(s < prev);
            prev = s;
        }
        let cold = signal_at(&BathSpec::ohmic(0.1, 1.0, 0.0).unwrap(), &seq, t, &quad()).unwrap();
        let warm = signal_at(&BathSpec::ohmic(0.1, 1.0, 0.3).unwrap(), &seq, t, &quad()).unwrap();
        assert!(cold >= warm);
    }
}

/// Uhrig protects better than equidistant pulses until the Bessel passband
/// of its filter reaches the cutoff; for n = 10 the two signals cross at
/// omega_d t ~ 18.89, a little before 2n.
#[test]
fn uhrig_beats_uniform_below_crossover() {
    for alpha in [0.25, 0.01] {
        let bath = BathSpec::ohmic(alpha, 1.0, 0.0).unwrap();
        let grid: Vec<f64> = (1..=36).map(|k| 0.5 * k as f64).collect();
        let uhrig = signal_curve(&bath, SequenceKind::Uhrig, 10, &grid, &quad()).unwrap();
        let uniform = signal_curve(&bath, SequenceKind::Uniform, 10, &grid, &quad()).unwrap();
        for ((t, u), s) in uhrig.iter().zip(uniform.signal()) {
            assert!(u >= *s, "t={t}: uhrig {u} < uniform {s}");
        }
    }
}

#[test]
fn uhrig_uniform_crossover_location() {
    let bath = BathSpec::ohmic(0.1, 1.0, 0.0).unwrap();
    let gap = |t: f64| {
        signal_at(&bath, &PulseSequence::uhrig(10, 1.0).unwrap(), t, &quad()).unwrap()
            - signal_at(&bath, &PulseSequence::uniform(10, 1.0).unwrap(), t, &quad()).unwrap()
    };
    let (mut lo, mut hi) = (17.0, 20.0);
    assert!(gap(lo) > 0.0 && gap(hi) < 0.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - 18.8886).abs() < 1e-3, "crossover at {lo}");
}

#[test]
fn more_pulses_help_at_short_times() {
    let bath = BathSpec::ohmic(0.01, 1.0, 0.0).unwrap();
    let s = |n| signal_at(&bath, &PulseSequence::uhrig(n, 1.0).unwrap(), 5.0, &quad()).unwrap();
    assert!(s(50) >= s(10) && s(10) >= s(2));
}
