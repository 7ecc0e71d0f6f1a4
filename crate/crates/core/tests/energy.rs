mod common;

use common::rel;
use fracflow::energy::*;
use fracflow::femcore::{FemSystem, Mesh1d};
use fracflow::stepper::Lcg64;
use fracflow::FracError;
use nalgebra::DVector;
use proptest::prelude::*;

#[test]
fn zero_state() {
    let sys = FemSystem::new(Mesh1d::new(-1.0f64, 1.0, 25).unwrap(), 0.4).unwrap();
    let e = evaluate_energy(&sys, 0.3, &DVector::zeros(25)).unwrap();
    assert_eq!(e.dirichlet, 0.0);
    assert!((e.potential - 0.5).abs() < 1e-14);
    assert_eq!(e.fs, e.potential);
    assert!((e.k_eps.unwrap() - (0.15 - 0.0225)).abs() < 1e-15);
    assert!(evaluate_energy(&sys, 2.0, &DVector::zeros(25)).unwrap().k_eps.is_none());
    assert!(matches!(
        evaluate_energy(&sys, 0.3, &DVector::zeros(24)),
        Err(FracError::DimensionMismatch { expected: 25, found: 24 })
    ));
}

#[test]
fn dirichlet_of_modes_and_norms() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 40).unwrap(), 0.6).unwrap();
    let eig = sys.eigen().unwrap();
    let eps2 = 0.2;
    for k in [0usize, 7, 39] {
        let phi = eig.modes.column(k).into_owned();
        let e = evaluate_energy(&sys, eps2, &phi).unwrap();
        assert!(rel(e.dirichlet, eps2 / 2.0 * eig.lambdas[k]) < 1e-10, "k {k}");
    }
    let mut g = Lcg64::new(17);
    let u = DVector::from_fn(40, |_, _| g.next_symmetric());
    let e = evaluate_energy(&sys, eps2, &u).unwrap();
    let h1 = eig.interpolated_norm(&sys.mass, &u, 1.0).unwrap();
    assert!(rel(e.dirichlet, eps2 / 2.0 * h1 * h1) < 1e-10);
    assert_eq!(e.fs, e.dirichlet + e.potential);
    assert!(e.dirichlet >= 0.0 && e.potential >= 0.0);
}

#[test]
fn six_node_step_profile() {
    let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 6).unwrap(), 0.5).unwrap();
    let u = DVector::from_vec(vec![-0.8, -0.8, -0.8, 0.8, 0.8, 0.8]);
    let e = evaluate_energy(&sys, 0.5, &u).unwrap();
    assert!(rel(e.potential, 0.08872) < 1e-13);
    assert!(rel(e.dirichlet, 0.7198512319022439) < 1e-8);
    assert!(rel(e.fs, 0.8085712319022439) < 1e-8);
}

#[test]
fn shifted_well() {
    for eps2 in [0.0f64, 0.1, 0.5, 0.9] {
        let m = equilibrium_value(eps2).unwrap();
        assert!(shifted_potential(eps2, m).unwrap().abs() < 1e-15);
        assert!(shifted_potential(eps2, -m).unwrap().abs() < 1e-15);
    }
    // 0.70711 to five places
    assert_eq!((equilibrium_value(0.5f64).unwrap() * 1e5).round(), 70711.0);
    assert!(shifted_potential(1.0f64, 0.3).is_err());
    assert!(equilibrium_value(1.2f64).is_err());
}

#[test]
fn plateau_examples() {
    let mesh = Mesh1d::new(-1.0, 1.0, 99).unwrap();
    let c = 0.7;
    let step: Vec<f64> = mesh.nodes().iter().map(|&x| if x < 0.0 { -c } else { c }).collect();
    let (p, n) = plateau_detect(&mesh, &step).unwrap();
    assert_eq!((p, n), (c, -c));

    let flat = vec![0.3; 99];
    assert_eq!(plateau_side(&mesh, &flat, Side::Positive, PlateauOptions::default()).unwrap(), 0.3);
    assert!(matches!(plateau_detect(&mesh, &flat), Err(FracError::NoPlateau { side: "negative", .. })));

    // a smooth tanh front has flat tails on both sides
    let front: Vec<f64> = mesh.nodes().iter().map(|&x| c * (x / 0.05).tanh()).collect();
    let (p, n) = plateau_detect(&mesh, &front).unwrap();
    assert!((p - c).abs() < 1e-6 && (n + c).abs() < 1e-6);

    let short = Mesh1d::new(-1.0, 1.0, 15).unwrap();
    let s: Vec<f64> = short.nodes().iter().map(|&x| if x < 0.0 { -c } else { c }).collect();
    assert!(plateau_detect(&short, &s).is_err());
}

proptest! {
    #[test]
    fn shifted_potential_is_even_and_nonnegative(x in -3.0f64..3.0, eps2 in 0.0f64..0.99) {
        let a = shifted_potential(eps2, x).unwrap();
        prop_assert_eq!(a, shifted_potential(eps2, -x).unwrap());
        prop_assert!(a >= -1e-15);
        let m = equilibrium_value(eps2).unwrap();
        if (x.abs() - m).abs() > 1e-3 {
            prop_assert!(a > 0.0);
        }
    }

    #[test]
    fn energy_terms_add_up(seed in any::<u64>(), eps2 in 0.01f64..2.0) {
        let sys = FemSystem::new(Mesh1d::new(0.0, 1.0, 12).unwrap(), 0.5).unwrap();
        let mut g = Lcg64::new(seed);
        let u = DVector::from_fn(12, |_, _| 1.5 * g.next_symmetric());
        let e = evaluate_energy(&sys, eps2, &u).unwrap();
        prop_assert!(e.dirichlet >= 0.0 && e.potential >= 0.0);
        prop_assert!((e.fs - (e.dirichlet + e.potential)).abs() <= 1e-12 * e.fs);
    }
}
