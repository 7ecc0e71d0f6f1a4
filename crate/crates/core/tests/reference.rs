use fracflow::femcore::{FemSystem, Mesh1d};
use fracflow::quadweights::CqWeights;
use fracflow::reference::*;
use fracflow::special::gamma;
use fracflow::stepper::*;
use nalgebra::DVector;

fn random(n: usize, seed: u64) -> DVector<f64> {
    let mut g = Lcg64::new(seed);
    DVector::from_fn(n, |_, _| g.next_symmetric())
}

fn close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    (a - b).amax() <= tol * b.amax().max(1.0)
}

#[test]
fn operators_are_linear() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 40).unwrap(), 0.3).unwrap();
    let eig = sys.eigen().unwrap();
    let (v, w) = (random(40, 1), random(40, 2));
    for alpha in [0.35, 0.9] {
        let op = SpectralOperator::new(&eig, &sys.mass, 0.5, alpha).unwrap();
        for t in [0.1, 2.0] {
            let comb = &v * 2.5 - &w * 0.75;
            let e = op.apply_e(t, &v).unwrap() * 2.5 - op.apply_e(t, &w).unwrap() * 0.75;
            assert!(close(&op.apply_e(t, &comb).unwrap(), &e, 1e-12));
            let f = op.apply_f(t, &v).unwrap() * 2.5 - op.apply_f(t, &w).unwrap() * 0.75;
            assert!(close(&op.apply_f(t, &comb).unwrap(), &f, 1e-12));
        }
    }
}

#[test]
fn short_time_limit() {
    let sys = FemSystem::new(Mesh1d::new(-1.0, 1.0, 30).unwrap(), 0.5).unwrap();
    let eig = sys.eigen().unwrap();
    let v = random(30, 4);
    let t = 1e-12f64;
    let av = sys.mass.solve(&(&sys.stiffness * &v)).unwrap();
    for alpha in [0.5f64, 0.9, 1.0] {
        let op = SpectralOperator::new(&eig, &sys.mass, 1.0, alpha).unwrap();
        let u = op.apply_e(t, &v).unwrap();
        // E_{a,1}(-x) = 1 - x / Gamma(1 + a) + O(x^2); t^a = 1e-6 at a = 1/2
        let want = &v - &av * (t.powf(alpha) / gamma(1.0 + alpha));
        assert!(close(&u, &want, 1e-8), "alpha {alpha}: {:e}", (&u - &want).amax());
        if alpha >= 0.9 {
            assert!(close(&u, &v, 1e-8));
        }
    }
    let op = SpectralOperator::new(&eig, &sys.mass, 1.0, 0.5).unwrap();
    assert!(op.apply_e(0.0, &v).is_err());
    assert!(op.apply_f(-1.0, &v).is_err());
}

#[test]
fn alpha_one_reduces_to_exponentials() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 2.0, 25).unwrap(), 0.7).unwrap();
    let eig = sys.eigen().unwrap();
    let op = SpectralOperator::new(&eig, &sys.mass, 1.0, 1.0).unwrap();
    let v = random(25, 8);
    for k in [0usize, 3, 24] {
        let phi = eig.modes.column(k).into_owned();
        let lam = eig.lambdas[k];
        for t in [0.05f64, 0.7] {
            let want = &phi * (-lam * t).exp();
            assert!(close(&op.apply_e(t, &phi).unwrap(), &want, 1e-12));
            let src = &phi * ((1.0 - (-lam * t).exp()) / lam);
            assert!(close(&op.exact_constant_source(t, &phi).unwrap(), &src, 1e-12));
        }
    }
    for t in [0.1, 1.0] {
        assert!(close(&op.apply_f(t, &v).unwrap(), &op.apply_e(t, &v).unwrap(), 1e-13));
    }
}

#[test]
fn f_coefficients_are_positive() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 30).unwrap(), 0.5).unwrap();
    let eig = sys.eigen().unwrap();
    for alpha in [0.3, 0.6, 0.95] {
        let op = SpectralOperator::new(&eig, &sys.mass, 1.0, alpha).unwrap();
        for t in [0.1, 1.0] {
            for k in 0..30 {
                let phi = eig.modes.column(k).into_owned();
                let c = eig.modal_coefficients(&sys.mass, &op.apply_f(t, &phi).unwrap()).unwrap();
                assert!(c[k] > 0.0, "alpha {alpha} t {t} k {k}");
            }
        }
    }
}

#[test]
fn constant_source_steady_state() {
    let sys = FemSystem::new(Mesh1d::new(-1.0, 1.0, 20).unwrap(), 0.5).unwrap();
    let eig = sys.eigen().unwrap();
    let eps2 = 0.3f64;
    let phi = eig.modes.column(0).into_owned();
    let lam = eig.lambdas[0];
    for alpha in [0.5, 0.8] {
        let op = SpectralOperator::new(&eig, &sys.mass, eps2, alpha).unwrap();
        let mut last = f64::INFINITY;
        for t in [1e2, 1e4, 1e6] {
            let c = eig.modal_coefficients(&sys.mass, &op.exact_constant_source(t, &phi).unwrap()).unwrap();
            let dev = (c[0] * eps2 * lam - 1.0).abs();
            assert!(dev < last, "alpha {alpha}: deviation grows at t {t}");
            last = dev;
        }
        assert!(last < 0.05, "alpha {alpha}: {last}");
        let zero = op.exact_constant_source(1.0, &DVector::zeros(20)).unwrap();
        assert_eq!(zero.amax(), 0.0);
    }
}

#[test]
fn l2_contraction_and_smoothing() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 200).unwrap(), 0.5).unwrap();
    let eig = sys.eigen().unwrap();
    let v = random(200, 21);
    let v0 = eig.interpolated_norm(&sys.mass, &v, 0.0).unwrap();
    for alpha in [0.4, 0.7] {
        let op = SpectralOperator::new(&eig, &sys.mass, 1.0, alpha).unwrap();
        let mut consts = Vec::new();
        for t in [0.1, 0.3, 1.0, 3.0, 10.0] {
            let u = op.apply_e(t, &v).unwrap();
            assert!(eig.interpolated_norm(&sys.mass, &u, 0.0).unwrap() <= v0);
            consts.push(t.powf(alpha) * eig.interpolated_norm(&sys.mass, &u, 2.0).unwrap() / v0);
        }
        let mean = consts.iter().sum::<f64>() / consts.len() as f64;
        for c in &consts {
            assert!((c / mean - 1.0).abs() <= 0.2, "alpha {alpha}: {consts:?}");
        }
    }
    let op = SpectralOperator::new(&eig, &sys.mass, 1.0, 1.0).unwrap();
    for t in [0.1, 1.0, 10.0] {
        assert!(eig.interpolated_norm(&sys.mass, &op.apply_e(t, &v).unwrap(), 0.0).unwrap() <= v0);
    }
}

#[test]
fn stepper_converges_to_exact_linear() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 63).unwrap(), 0.5).unwrap();
    let eig = sys.eigen().unwrap();
    let alpha = 0.6;
    let op = SpectralOperator::new(&eig, &sys.mass, 1.0, alpha).unwrap();
    let v = eig.modes.column(0).into_owned() + eig.modes.column(2).into_owned() * 0.5;
    let exact = op.exact_linear(1.0, &v).unwrap();
    let zero = make_reaction(ReactionKind::Zero, 1.0).unwrap();
    let p = FracParams::new(alpha, 0.5, 1.0, 1.0, 1.0).unwrap();
    let mut errs = Vec::new();
    for n in [20, 40, 80] {
        let w = CqWeights::new(alpha, 1.0 / n as f64, n).unwrap();
        let u = run(&sys, p, &w, &zero, v.clone(), n).unwrap();
        errs.push(sys.l2_norm(&(u.final_state() - &exact)));
    }
    for pair in errs.windows(2) {
        let order = (pair[0] / pair[1]).log2();
        assert!((order - 1.0).abs() < 0.15, "{errs:?}");
    }
}

#[test]
fn reference_and_nesting() {
    let coarse = Mesh1d::new(-1.0, 1.0, 15).unwrap();
    let fine = coarse.refine(4).unwrap();
    let sys = FemSystem::new(fine, 0.5).unwrap();
    let g = make_reaction(ReactionKind::Cubic, 0.5).unwrap();
    let p = FracParams::new(0.7, 0.5, 0.1, 0.2, 0.5).unwrap();
    let v = InitialDatum::Sine { k: 1, amplitude: 0.5 }.build(&sys, None).unwrap();
    let r = richardson_reference(&sys, p, &g, v, 0.0025).unwrap();
    r.check_anchor(&coarse, 0.02, 8, 4).unwrap();
    assert!(r.check_anchor(&coarse, 0.01, 8, 4).is_err());
    assert!(r.check_anchor(&coarse, 0.0037, 1, 1).is_err());
    // the reference compared with itself
    let own = r.sample(&sys.mesh, 0.2).unwrap();
    assert_eq!((&own - r.trajectory.final_state()).amax(), 0.0);
    assert!(r.sample(&coarse, 0.201).is_err());

    let u = random(15, 3);
    let up = prolongate(&coarse, &fine, &u).unwrap();
    assert_eq!(inject(&coarse, &fine, &up).unwrap(), u);
    // midpoints of the coarse elements are averages
    assert!((up[1] - 0.5 * u[0]).abs() < 1e-15);
    assert!((up[5] - 0.5 * (u[0] + u[1])).abs() < 1e-15);
    assert!(prolongate(&coarse, &Mesh1d::new(-1.0, 1.0, 20).unwrap(), &u).is_err());
    assert_eq!(steps_for(1.0, 0.25).unwrap(), 4);
    assert!(steps_for(1.0, 0.3).is_err());
}
