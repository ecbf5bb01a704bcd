use poromech_core::error::Error;
use poromech_core::verification::*;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn table() -> TerzaghiParams<f64> {
    TerzaghiParams {
        w: 10e3,
        k_f: 2270e6,
        phi_f: 0.375,
        lambda_tilde: 40e6,
        mu_tilde: 40e6,
        k_over_gamma: 1e-12,
        h: 1.0,
    }
}

#[test]
fn terzaghi_series_values() {
    assert_relative_eq!(terzaghi_pressure(1.0, 0.1, 200), 0.949_305_362_68, max_relative = 1e-10);
    assert!(terzaghi_pressure(0.5f64, 50.0, 200).abs() < 1e-40);
    // the t̄ = 0 partial sums at z̄ = 1 approach 1
    assert!((terzaghi_pressure(1.0f64, 0.0, 20000) - 1.0).abs() < 1e-4);
}

#[test]
fn terzaghi_scaling_values() {
    let (p, _) = terzaghi_scaling(&table());
    assert_relative_eq!(p, 9_805.615_550_755_9, max_relative = 1e-12);
    let stiff = TerzaghiParams { k_f: 1e30, ..table() };
    assert_relative_eq!(terzaghi_scaling(&stiff).0, 10e3, max_relative = 1e-15);
    let dry = TerzaghiParams { phi_f: 1e-30, ..table() };
    assert_relative_eq!(terzaghi_scaling(&dry).0, 10e3, max_relative = 1e-15);
}

#[test]
fn mandel_constant_values() {
    let c = mandel_constants(&MandelParams { base: table(), a: 1.0 });
    assert_relative_eq!(c.nu, 0.25, max_relative = 1e-15);
    assert_relative_eq!(c.k_u, 6.12e9, max_relative = 1e-12);
    assert_relative_eq!(c.b, 0.989_106_753_81, max_relative = 1e-9);
    assert_relative_eq!(c.nu_u, 0.496_739_130_43, max_relative = 1e-9);
    let stiff = mandel_constants(&MandelParams { base: TerzaghiParams { k_f: 1e30, ..table() }, a: 1.0 });
    assert_relative_eq!(stiff.b, 1.0, max_relative = 1e-12);
    assert_relative_eq!(stiff.nu_u, 0.5, max_relative = 1e-12);
}

#[test]
fn alpha_roots() {
    let r = mandel_alpha_roots(0.25, 0.5, 3).unwrap();
    assert_relative_eq!(r[0], 1.324_194_449_6, max_relative = 1e-10);
    let c = mandel_constants(&MandelParams { base: table(), a: 1.0 });
    let r = mandel_alpha_roots(c.nu, c.nu_u, DEFAULT_TERMS).unwrap();
    assert_relative_eq!(r[0], 1.327_945_677_0, max_relative = 1e-9);
    assert_relative_eq!(r[1], 4.641_630_161_5, max_relative = 1e-9);
    let cc = (1.0 - c.nu) / (c.nu_u - c.nu);
    let pi = std::f64::consts::PI;
    for (k, a) in r.iter().enumerate() {
        assert!(alpha_residual(*a, cc) < 1e-12 * (1.0 + cc * a));
        let lo = k as f64 * pi;
        assert!(*a > lo && *a < lo + pi / 2.0);
        if k < 10 {
            assert!((a.tan() - cc * a).abs() < 1e-12 * (1.0 + cc * a), "root {k}");
        }
    }
    assert!(r.windows(2).all(|w| w[1] > w[0]));
    assert!(matches!(mandel_alpha_roots(0.3, 0.2, 3), Err(Error::RootBracketFailure { .. })));
}

#[test]
fn mandel_series_properties() {
    let c = mandel_constants(&MandelParams { base: table(), a: 1.0 });
    let r = mandel_alpha_roots(c.nu, c.nu_u, DEFAULT_TERMS).unwrap();
    assert!(mandel_pressure(0.3, 100.0, &r).abs() < 1e-30);
    assert!((mandel_pressure(0.0, 1e-6, &r) - 1.0).abs() < 2e-3);
    for t in [1e-3, 0.1, 1.0] {
        assert!(mandel_pressure(1.0, t, &r).abs() < 1e-12);
        assert!(mandel_pressure(-1.0, t, &r).abs() < 1e-12);
    }
    // Mandel effect: the centre rises above its early value
    let early = mandel_pressure(0.0, 1e-6, &r);
    let peak = (1..=400).map(|k| mandel_pressure(0.0, k as f64 * 1e-3, &r)).fold(0.0, f64::max);
    assert!(peak > early);
    let (t, v) = mandel_center_peak(&r);
    assert_relative_eq!(t, 0.067_647_020_57, max_relative = 1e-6);
    assert_relative_eq!(v, 1.090_764_200_2, max_relative = 1e-9);
}

#[test]
fn l2_cases() {
    let s = [(0.0, 1.0), (1.0, 2.0)];
    assert_eq!(l2_error(&s, |x| 1.0 + x).unwrap().value, 0.0);
    let e = l2_error(&s, |_| 0.0).unwrap();
    assert!(!e.relative);
    assert_relative_eq!(e.value, 5f64.sqrt());
    let scaled: Vec<(f64, f64)> = s.iter().map(|(x, v)| (*x, v * (1.0 + 1e-3))).collect();
    assert_relative_eq!(l2_error(&scaled, |x| 1.0 + x).unwrap().value, 1e-3, max_relative = 1e-10);
    let empty: [(f64, f64); 0] = [];
    assert!(matches!(l2_error(&empty, |_| 0.0), Err(Error::EmptyField)));
}

#[test]
fn single_precision_series() {
    let v = terzaghi_pressure(1.0f32, 0.1f32, 200);
    assert!((v - 0.949_305_4).abs() < 1e-5);
}

proptest! {
    #[test]
    fn series_stable_under_doubling(z in 0.0f64..1.0, t in 0.01f64..2.0) {
        let a = terzaghi_pressure(z, t, 200);
        let b = terzaghi_pressure(z, t, 400);
        prop_assert!((a - b).abs() < 1e-10);
    }
}
