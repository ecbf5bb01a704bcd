use poromech_core::error::Error;
use poromech_core::tensor::Tensor2;
use poromech_core::kinematics::*;
use approx::assert_relative_eq;
use proptest::prelude::*;

#[test]
fn deformation_gradient_cases() {
    let s = deformation_gradient(Tensor2::<f64>::zero()).unwrap();
    assert_eq!(s.f, Tensor2::identity());
    assert_eq!(s.j, 1.0);

    let s = deformation_gradient(Tensor2::diag(1.0, 0.0)).unwrap();
    assert_eq!(s.f, Tensor2::diag(2.0, 1.0));
    assert_eq!(s.j, 2.0);

    let err = deformation_gradient(Tensor2::diag(-1.2, 0.0)).unwrap_err();
    assert!(matches!(err, Error::NonPositiveJacobian { .. }));
}

#[test]
fn density_maps() {
    assert_eq!(push_density(100.0, 2.0).unwrap(), 50.0);
    assert_eq!(push_density(7.0, 1.0).unwrap(), 7.0);
    assert_eq!(push_density(0.0, 3.0).unwrap(), 0.0);
    assert!(push_density(1.0, 0.0).is_err());

    assert_relative_eq!(true_density(0.2, 1.0, 0.1).unwrap(), 2.0, max_relative = 1e-15);
    assert_relative_eq!(true_density(0.2, 2.0, 0.1).unwrap(), 1.0, max_relative = 1e-15);
    assert!(matches!(
        true_density(1.0, 1.0, 0.0),
        Err(Error::DegeneratePhase { .. })
    ));
}

#[test]
fn incompressible_solid_fractions() {
    let (s, f) = fractions_incompressible_solid(0.625, 1.0).unwrap();
    assert_eq!((s, f), (0.625, 0.375));
    let (s, f) = fractions_incompressible_solid(0.625, 1.25).unwrap();
    assert_relative_eq!(s, 0.5, max_relative = 1e-15);
    assert_relative_eq!(f, 0.5, max_relative = 1e-15);
    assert!(matches!(
        fractions_incompressible_solid(0.8, 0.5),
        Err(Error::DegeneratePhase { .. })
    ));
}

#[test]
fn affine_solid_fractions() {
    assert_eq!(fractions_affine_solid(0.8), 0.8);
    assert_eq!(fractions_affine_solid(0.9), 0.9);
    let m = VolumeFractionModel::AffineSolid { phi0s: 0.5 };
    for j in [0.7, 1.0, 1.9] {
        assert_eq!(m.solid_fraction(j).unwrap(), 0.5);
    }
}

#[test]
fn unsaturated_fractions() {
    let (s, i, c) = fractions_unsaturated(0.9, 50.0, 1.0, 1000.0).unwrap();
    assert_eq!(s, 0.9);
    assert_relative_eq!(i, 0.05, max_relative = 1e-14);
    assert_relative_eq!(c, 0.05, max_relative = 1e-12);
    let (_, i, c) = fractions_unsaturated(0.9, 0.0, 1.0, 1000.0).unwrap();
    assert_eq!(i, 0.0);
    assert_relative_eq!(c, 0.1, max_relative = 1e-14);
    assert!(matches!(
        fractions_unsaturated(0.9, 120.0, 1.0, 1000.0),
        Err(Error::DegeneratePhase { .. })
    ));
}

#[test]
fn permeability_pull_cases() {
    let k = pull_permeability(&Tensor2::identity(), &Tensor2::identity(), 1.0).unwrap();
    assert_eq!(k, Tensor2::identity());

    let f = Tensor2::diag(2.0, 1.0);
    let k = pull_permeability(&Tensor2::identity(), &f, 2.0).unwrap();
    assert!((k - Tensor2::diag(0.5, 2.0)).max_abs() < 1e-15);

    let r = Tensor2::rotation(0.7);
    let k = pull_permeability(&Tensor2::identity().scale(3.0), &r, r.det()).unwrap();
    assert!((k - Tensor2::identity().scale(3.0)).max_abs() < 1e-14);
}

#[test]
fn incompressible_matches_affine_at_unit_jacobian() {
    for phi0s in [0.1, 0.5, 0.625, 0.9] {
        let (s, _) = fractions_incompressible_solid(phi0s, 1.0).unwrap();
        assert_eq!(s, fractions_affine_solid(phi0s));
    }
}

proptest! {
    #[test]
    fn fractions_sum_to_one(phi0s in 0.05f64..0.95, j in 0.96f64..2.0, p0i in 0.0f64..40.0) {
        if let Ok((s, f)) = fractions_incompressible_solid(phi0s, j) {
            prop_assert!((s + f - 1.0).abs() <= 1e-14);
        }
        let s = fractions_affine_solid(phi0s);
        prop_assert!((s + (1.0 - s) - 1.0).abs() <= 1e-14);
        if let Ok((s, i, c)) = fractions_unsaturated(phi0s, p0i, j, 1000.0) {
            prop_assert!((s + i + c - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn permeability_pull_push_roundtrip(
        a in 0.1f64..10.0, b in 0.1f64..10.0, c in -0.9f64..0.9,
        f00 in 0.7f64..1.4, f01 in -0.3f64..0.3, f10 in -0.3f64..0.3, f11 in 0.7f64..1.4,
    ) {
        let off = c * (a * b).sqrt();
        let k_ref = Tensor2::new(a, off, off, b);
        let f = Tensor2::new(f00, f01, f10, f11);
        let j = f.det();
        prop_assume!((0.5..=2.0).contains(&j));
        let k_cur = push_permeability(&k_ref, &f, j).unwrap();
        let back = pull_permeability(&k_cur, &f, j).unwrap();
        prop_assert!((back - k_ref).max_abs() <= 1e-12 * k_ref.max_abs());
    }

    #[test]
    fn density_two_routes_agree(p0 in 0.0f64..1e3, j in 0.2f64..3.0, phi in 1e-3f64..1.0) {
        let via_partial = push_density(p0, j).unwrap() / phi;
        let direct = true_density(p0, j, phi).unwrap();
        prop_assert_eq!(via_partial, direct);
    }
}
