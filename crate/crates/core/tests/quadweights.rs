mod common;

use common::{fixture_rows, rel};
use fracflow::quadweights::*;
use fracflow::special::gamma;
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn first_weights_match_binomial_fixture() {
    let rows = fixture_rows("cq_weights.txt");
    assert_eq!(rows.len(), 6 * 64);
    for alpha in [0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let w = CqWeights::new(alpha, 0.01, 63).unwrap();
        for r in rows.iter().filter(|r| r[0] == alpha) {
            let j = r[1] as usize;
            assert!((w.scaled(j) - r[2]).abs() <= 1e-12 * r[2].abs().max(1e-300) || w.scaled(j) == r[2], "alpha {alpha} j {j}");
        }
    }
}

#[test]
fn weight_examples() {
    let w = CqWeights::new(0.3, 0.02, 4).unwrap();
    assert!(rel(w.omega(0), 0.02f64.powf(-0.3)) < 1e-15);
    assert!(rel(w.omega(1), -0.3 * 0.02f64.powf(-0.3)) < 1e-15);
    let w = CqWeights::new(1.0, 0.1, 5).unwrap();
    let want = [10.0f64, -10.0, 0.0, 0.0, 0.0, 0.0];
    for (j, v) in want.iter().enumerate() {
        assert!((w.omega(j) - v).abs() < 1e-13, "j {j}");
    }
    for j in 2..=5 {
        assert_eq!(w.scaled(j), 0.0);
    }
}

#[test]
fn partial_sums_positive_and_decreasing() {
    for alpha in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let w = CqWeights::new(alpha, 1e-3, 10_000).unwrap();
        for n in 0..10_000 {
            assert!(w.partial_sum(n) > 0.0);
            assert!(w.partial_sum(n + 1) < w.partial_sum(n), "alpha {alpha} n {n}");
        }
        // a_N = Γ(N+1-α) / (Γ(1-α) N!) ~ N^(-α) / Γ(1-α)
        for n in [10usize, 100, 1000, 10_000] {
            let exact = (fracflow::special::ln_gamma(n as f64 + 1.0 - alpha).0
                - fracflow::special::ln_gamma(n as f64 + 1.0).0)
                .exp()
                / gamma(1.0 - alpha);
            assert!(rel(w.partial_sum(n), exact) < 1e-9, "alpha {alpha} n {n}");
        }
        if alpha >= 0.3 {
            assert!(w.partial_sum(10_000) < 0.05, "alpha {alpha}: {}", w.partial_sum(10_000));
        }
    }
}

#[test]
fn inverse_sequence() {
    for alpha in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let c = c_sequence(alpha, 10_000).unwrap().c;
        assert_eq!(c[0], 1.0);
        assert!(rel(c[1], alpha) < 1e-15);
        for (n, &cn) in c.iter().enumerate() {
            assert!(cn > 0.0);
            assert!(rel(cn, inverse_coefficient(alpha, n)) < 1e-9, "alpha {alpha} n {n}");
        }
        let r = c[10_000] * 1e4f64.powf(1.0 - alpha) * gamma(alpha);
        assert!((0.98..=1.02).contains(&r), "alpha {alpha}: {r}");
        assert!(rel(inverse_coefficient_asymptotic(alpha, 10_000), c[10_000]) < 0.02);
    }
    assert!(c_sequence(1.0, 3).is_err());
}

#[test]
fn cq_application_examples() {
    let w = CqWeights::new(1.0, 0.1, 4).unwrap();
    let u = DVector::from_vec(vec![1.0, -2.0, 3.0]);
    let hist = vec![u.clone(); 5];
    assert!(w.apply_cq(&hist).unwrap().amax() < 1e-12);
    let u1 = DVector::from_vec(vec![0.5, 0.0, 1.0]);
    let d = w.apply_cq(&[u.clone(), u1.clone()]).unwrap();
    assert!((d - (&u1 - &u) / 0.1).amax() < 1e-12);
    assert!(w.apply_cq(&[]).is_err());
    assert!(w.apply_cq(&[u.clone(), DVector::zeros(2)]).is_err());
    assert!(w.apply_cq(&vec![u; 6]).is_err());
}

#[test]
fn riemann_liouville_of_power_converges() {
    // the RL derivative of t^α is Γ(α+1), a constant
    for alpha in [0.3, 0.6, 0.9] {
        let t = 1.0;
        let mut errs = vec![];
        for n in [40usize, 80, 160, 320] {
            let tau = t / n as f64;
            let w = CqWeights::new(alpha, tau, n).unwrap();
            let hist: Vec<DVector<f64>> = (0..=n).map(|j| DVector::from_element(1, (j as f64 * tau).powf(alpha))).collect();
            errs.push((w.apply_cq(&hist).unwrap()[0] - gamma(alpha + 1.0)).abs());
        }
        for p in errs.windows(2) {
            let order = (p[0] / p[1]).log2();
            assert!(order > 0.9, "alpha {alpha}: {errs:?}");
        }
    }
}

#[test]
fn rejects_bad_parameters() {
    assert!(CqWeights::new(0.0, 0.1, 3).is_err());
    assert!(CqWeights::new(1.1, 0.1, 3).is_err());
    assert!(CqWeights::new(0.5, 0.0, 3).is_err());
    assert!(CqWeights::new(0.5, f64::NAN, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_follow_closed_form(alpha in 0.01f64..1.0, j in 0usize..60) {
        let w = CqWeights::new(alpha, 0.5, 60).unwrap();
        let c = scaled_weight_closed_form(alpha, j);
        prop_assert!((w.scaled(j) - c).abs() <= 1e-11 * c.abs().max(1e-300));
        // ω̃_j < 0 for j ≥ 1 and the total sum stays positive
        if j >= 1 {
            prop_assert!(w.scaled(j) < 0.0);
        }
        prop_assert!(w.partial_sum(j) > 0.0);
    }

    #[test]
    fn scaled_weights_independent_of_step(alpha in 0.05f64..1.0, tau in 1e-4f64..1.0) {
        let a = CqWeights::new(alpha, tau, 20).unwrap();
        let b = CqWeights::new(alpha, 1.0, 20).unwrap();
        for j in 0..=20 {
            prop_assert_eq!(a.scaled(j), b.scaled(j));
            prop_assert!((a.omega(j) - a.scaled(j) * tau.powf(-alpha)).abs() <= 1e-12 * a.omega(j).abs().max(1e-300));
        }
    }

    #[test]
    fn convolution_inverse(alpha in 0.05f64..0.95, n in 1usize..200) {
        // Σ_j ω̃_j c_{n-j} = 0 for n ≥ 1
        let w = CqWeights::new(alpha, 1.0, n).unwrap();
        let c = c_sequence(alpha, n).unwrap().c;
        let s: f64 = (0..=n).map(|j| w.scaled(j) * c[n - j]).sum();
        prop_assert!(s.abs() < 1e-13);
    }
}
