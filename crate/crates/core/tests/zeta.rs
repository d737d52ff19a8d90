mod common;

use hlz::zeta::{self, PrimeTable};
use proptest::prelude::*;

#[test]
fn z_matches_oracle_across_crossover() {
    for t in [
        10.0, 14.0, 50.5, 150.0, 199.9, 200.1, 1000.0, 4321.1, 31_415.9,
    ] {
        let z = zeta::z_eval(t, zeta::DEFAULT_RS_TERMS).unwrap();
        let o = common::z_oracle(t);
        assert!((z.z - o).abs() <= 1e-8, "t={t}: {} vs {o}", z.z);
        assert!(
            (z.z - o).abs() <= z.err.max(1e-12) * 10.0,
            "t={t}: err bound {}",
            z.err
        );
    }
}

#[test]
fn theta_matches_log_gamma() {
    for t in [10.0, 100.0, 1e3, 1e5] {
        let ours = zeta::theta(t).unwrap();
        let exact = common::theta_exact(t);
        assert!(
            (ours - exact).abs() <= zeta::theta_truncation_bound(t) + 1e-13 * exact.abs(),
            "t={t}"
        );
    }
}

#[test]
fn zero_count_to_1000() {
    // N(1000) = 649. The scan step of 0.4 mean spacings skips some close
    // pairs, so only a lower bound holds; every reported zero is genuine.
    let zeros = zeta::zeros_in(10.0, 1000.0).unwrap();
    assert!(zeros.len() <= 649 && zeros.len() >= 630, "{}", zeros.len());
    for z in &zeros {
        let g = z.gamma.get();
        assert!(
            common::z_oracle(g - 1e-6) * common::z_oracle(g + 1e-6) <= 0.0,
            "gamma={g}"
        );
    }
    assert!((zeta::smooth_zero_count(1000.0).unwrap() - 649.0).abs() < 1.0);
    for w in zeros.windows(2) {
        assert!(w[1].gamma.get() > w[0].gamma.get());
    }
}

#[test]
fn zeros_bracket_a_sign_change() {
    for z in zeta::zeros_in(5000.0, 5010.0).unwrap() {
        let g = z.gamma.get();
        let w = z.bracket_width.max(1e-12);
        let a = zeta::z_value(g - w, zeta::DEFAULT_RS_TERMS);
        let b = zeta::z_value(g + w, zeta::DEFAULT_RS_TERMS);
        assert!(a * b <= 0.0, "gamma={g}");
        assert!(w <= 1e-6);
    }
}

#[test]
fn prime_counts() {
    let table = PrimeTable::new(1_000_000);
    assert_eq!(table.pi(1e6).unwrap(), 78_498);
    for x in [0u64, 1, 2, 3, 10, 7919, 7920, 65_536, 999_983] {
        assert_eq!(table.pi(x as f64).unwrap(), common::prime_count(x), "x={x}");
    }
    assert!(table.pi(1e6 + 1.0).is_err());
}

#[test]
fn domain_errors() {
    assert!(zeta::z_eval(9.0, 2).is_err());
    assert!(zeta::z_eval(f64::INFINITY, 2).is_err());
    assert!(zeta::zeros_in(20.0, 10.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn z_is_pure(t in 10.0f64..1e6) {
        let a = zeta::z_eval(t, 2).unwrap();
        let b = zeta::z_eval(t, 2).unwrap();
        prop_assert_eq!(a.z.to_bits(), b.z.to_bits());
        prop_assert_eq!(a.err.to_bits(), b.err.to_bits());
    }

    #[test]
    fn more_terms_never_loosen_the_bound(t in 200.0f64..1e6) {
        let mut prev = f64::INFINITY;
        for k in 0..=zeta::MAX_RS_TERMS {
            let e = zeta::z_eval(t, k).unwrap().err;
            prop_assert!(e <= prev, "terms={} err={} prev={}", k, e, prev);
            prev = e;
        }
    }

    #[test]
    fn prime_pi_steps_by_at_most_one(x in 2u64..200_000) {
        let a = zeta::prime_pi(x as f64 - 1.0).unwrap();
        let b = zeta::prime_pi(x as f64).unwrap();
        prop_assert!(b == a || b == a + 1);
    }
}
