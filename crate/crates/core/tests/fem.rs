mod common;

use common::*;
use poromech_core::fem::{BoundaryCondition, Discretization, StepInput};
use poromech_core::solver::{time_step, NewtonConfig, TimeLoopState};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn step<'a>(dt: f64, previous: &'a [f64], perm: &'a [f64]) -> StepInput<'a> {
    StepInput { dt, previous, permeability: perm }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn tight() -> NewtonConfig {
    NewtonConfig { rel_tol: 1e-10, abs_tol: 1e-14, ..NewtonConfig::default() }
}

/// Water-saturated box with its reference state at zero pressure.
fn water_box(nx: usize, ny: usize, bcs: Vec<BoundaryCondition>) -> Discretization {
    let model = mixture(neo_hookean(64e6, 64e6), 0.625, vec![water()]);
    discretize(problem(unit_mesh(nx, ny), model, 1e-7, bcs), 0.0)
}

#[test]
fn stress_free_uniform_state_has_zero_residual() {
    let d = water_box(3, 2, vec![]);
    let x = d.uniform_state(&[0.375 * 1000.0]).unwrap();
    let perm = d.permeability_at(&x).unwrap();
    let r = d.assemble_residual(&x, &step(1.0, &x, &perm)).unwrap();
    assert!(norm(&r) < 1e-12, "{}", norm(&r));
}

#[test]
fn pressurised_box_balanced_by_tractions() {
    let p = 2e5;
    let model = mixture(neo_hookean(10e6, 5e6), 0.7, vec![water(), air()]);
    let p0 = model.initial_masses(&[0.2, 0.1], p).unwrap();
    let bcs = ["left", "right", "bottom", "top"]
        .iter()
        .zip([[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]])
        .map(|(tag, n)| BoundaryCondition::Traction { tag: tag.to_string(), traction: [-p * n[0], -p * n[1]] })
        .collect();
    let mut mesh = unit_mesh(3, 3);
    distort(&mut mesh, 0.08);
    let d = discretize(problem(mesh, model, 1e-7, bcs), p);
    let x = d.uniform_state(&p0).unwrap();
    let perm = d.permeability_at(&x).unwrap();
    let r = d.assemble_residual(&x, &step(1.0, &x, &perm)).unwrap();
    assert!(norm(&r) < 1e-10, "{}", norm(&r));
}

#[test]
fn affine_patch_test_on_distorted_mesh() {
    let mut mesh = unit_mesh(3, 3);
    distort(&mut mesh, 0.1);
    let coords = mesh.lattice_coords();
    let nx = mesh.nx;
    let model = mixture(small_strain(3e6, 2e6), 0.5, vec![]);
    let d = discretize(problem(mesh, model, 1.0, vec![]), 0.0);
    let a = [[1e-3, -2e-4], [5e-4, 2e-3]];
    let mut x = vec![0.0; d.n_dofs()];
    for (n, p) in coords.iter().enumerate() {
        for c in 0..2 {
            x[d.dofs.u(n, c)] = a[c][0] * p[0] + a[c][1] * p[1];
        }
    }
    let r = d.assemble_residual(&x, &step(1.0, &x, &[])).unwrap();
    let w = 2 * nx + 1;
    let scale = norm(&r);
    assert!(scale > 0.0);
    for (n, p) in coords.iter().enumerate() {
        let (i, j) = (n % w, n / w);
        let boundary = i == 0 || j == 0 || i == w - 1 || j == w - 1;
        if !boundary {
            for c in 0..2 {
                assert!(r[d.dofs.u(n, c)].abs() < 1e-12 * scale, "node {n} at {p:?}");
            }
        }
    }
    // boundary reactions balance
    for c in 0..2 {
        let total: f64 = (0..coords.len()).map(|n| r[d.dofs.u(n, c)]).sum();
        assert!(total.abs() < 1e-12 * scale);
    }
}

fn mixed_problem() -> Discretization {
    let model = mixture(neo_hookean(10e6, 5e6), 0.7, vec![water(), air()]);
    let bcs = vec![
        BoundaryCondition::Displacement { tag: "bottom".into(), component: 1, value: 0.0 },
        BoundaryCondition::Displacement { tag: "left".into(), component: 0, value: 0.0 },
        BoundaryCondition::Traction { tag: "top".into(), traction: [1e3, -2e4] },
        BoundaryCondition::Drained { tag: "top".into(), fluid: 0, pressure: 1.5e5 },
        BoundaryCondition::MassFlux { tag: "right".into(), fluid: 1, rate: 1e-4, segment: Some((0.4, 0.5)) },
    ];
    let mut mesh = unit_mesh(2, 2);
    distort(&mut mesh, 0.1);
    let mut prob = problem(mesh, model, 1e-7, bcs);
    prob.gravity = Some([0.0, -9.81]);
    discretize(prob, 2e5)
}

fn perturbed(d: &Discretization, seed: u64) -> Vec<f64> {
    let p0 = d.problem.model.initial_masses(&[0.2, 0.1], 2e5).unwrap();
    let mut x = d.uniform_state(&p0).unwrap();
    let mut rng = StdRng::seed_from_u64(seed);
    for g in 0..d.dofs.n_u {
        if d.dofs.fixed[g].is_none() {
            x[g] += 2e-3 * rng.random_range(-1.0..1.0);
        }
    }
    for i in 0..2 {
        for c in 0..d.dofs.n_corners {
            x[d.dofs.p(i, c)] *= 1.0 + 0.01 * rng.random_range(-1.0..1.0);
            x[d.dofs.mu(i, c)] *= 1.0 + 0.05 * rng.random_range(-1.0..1.0);
        }
    }
    x
}

#[test]
fn tangent_matches_central_differences() {
    let d = mixed_problem();
    let x = perturbed(&d, 11);
    let prev = perturbed(&d, 12);
    let perm = d.permeability_at(&x).unwrap();
    let s = step(0.5, &prev, &perm);
    let sys = d.assemble_tangent(&x, &s).unwrap();
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10 {
        let mut delta: Vec<f64> = (0..d.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect();
        // perturb each block at its natural size
        for (g, v) in delta.iter_mut().enumerate() {
            *v *= x[g].abs().max(1e-3);
        }
        let h = 1e-6;
        let xp: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a + h * b).collect();
        let xm: Vec<f64> = x.iter().zip(&delta).map(|(a, b)| a - h * b).collect();
        let rp = d.assemble_residual(&xp, &s).unwrap();
        let rm = d.assemble_residual(&xm, &s).unwrap();
        let fd: Vec<f64> = rp.iter().zip(&rm).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        let kd = sys.matrix.mul_vec(&delta);
        let err: Vec<f64> = fd.iter().zip(&kd).map(|(a, b)| a - b).collect();
        let rel = norm(&err) / norm(&kd);
        assert!(rel < 1e-5, "relative tangent error {rel:e}");
    }
}

#[test]
fn elastic_tangent_is_symmetric() {
    let model = mixture(neo_hookean(10e6, 5e6), 0.5, vec![]);
    let mut mesh = unit_mesh(2, 3);
    distort(&mut mesh, 0.1);
    let d = discretize(problem(mesh, model, 1.0, vec![]), 0.0);
    let mut rng = StdRng::seed_from_u64(5);
    let x: Vec<f64> = (0..d.n_dofs()).map(|_| 0.02 * rng.random_range(-1.0..1.0)).collect();
    let k = d.assemble_tangent(&x, &step(1.0, &x, &[])).unwrap().matrix;
    let mut max = 0.0f64;
    let mut asym = 0.0f64;
    for r in 0..k.n {
        for (c, v) in k.row(r) {
            max = max.max(v.abs());
            asym = asym.max((v - k.get(c, r)).abs());
        }
    }
    assert!(asym <= 1e-12 * max, "{asym} vs {max}");
}

#[test]
fn constrained_rows_are_identity() {
    let d = water_box(2, 2, vec![BoundaryCondition::Displacement { tag: "bottom".into(), component: 1, value: -1e-3 }]);
    let x = d.uniform_state(&[375.0]).unwrap();
    let perm = d.permeability_at(&x).unwrap();
    let sys = d.assemble_tangent(&x, &step(1.0, &x, &perm)).unwrap();
    let mut count = 0;
    for (g, f) in d.dofs.fixed.iter().enumerate() {
        if let Some(v) = f {
            count += 1;
            let row: Vec<(usize, f64)> = sys.matrix.row(g).collect();
            assert_eq!(row, vec![(g, 1.0)]);
            assert_eq!(x[g], *v);
            assert_eq!(sys.rhs[g], 0.0);
        }
    }
    assert_eq!(count, 5);
}

#[test]
fn dead_load_resultant() {
    let bcs = vec![BoundaryCondition::Traction { tag: "top".into(), traction: [0.0, -10e3] }];
    let model = mixture(neo_hookean(64e6, 64e6), 0.625, vec![water()]);
    let mut mesh = unit_mesh(3, 4);
    distort(&mut mesh, 0.1);
    let d = discretize(problem(mesh, model, 1e-7, bcs), 0.0);
    let coords = d.problem.mesh.lattice_coords();
    let fy: f64 = (0..coords.len()).map(|n| d.load[d.dofs.u(n, 1)]).sum();
    let fx: f64 = (0..coords.len()).map(|n| d.load[d.dofs.u(n, 0)]).sum();
    assert!((fy + 10e3).abs() < 1e-9);
    assert!(fx.abs() < 1e-12);
}

#[test]
fn injection_rates_integrate_the_segment() {
    for (center, width) in [(0.5, 0.4), (0.37, 0.21), (0.0, 0.5), (0.5, 3.0)] {
        let bcs = vec![BoundaryCondition::MassFlux {
            tag: "bottom".into(),
            fluid: 0,
            rate: 4.4,
            segment: Some((center, width)),
        }];
        let d = water_box(5, 2, bcs);
        let covered = ((center + width / 2.0).min(1.0) - (center - width / 2.0).max(0.0)).max(0.0);
        assert!((d.injection_rate(0) - 4.4 * covered).abs() < 1e-12, "{center} {width}");
    }
    let whole = water_box(3, 1, vec![BoundaryCondition::MassFlux { tag: "left".into(), fluid: 0, rate: 2.0, segment: None }]);
    assert!((whole.injection_rate(0) - 2.0).abs() < 1e-12);
}

fn gas_box(rate: f64) -> (Discretization, Vec<f64>) {
    let model = mixture(neo_hookean(1e6, 1e6), 0.8, vec![air()]);
    let bcs = vec![
        BoundaryCondition::Displacement { tag: "bottom".into(), component: 1, value: 0.0 },
        BoundaryCondition::Displacement { tag: "left".into(), component: 0, value: 0.0 },
        BoundaryCondition::Traction { tag: "right".into(), traction: [-1e5, 0.0] },
        BoundaryCondition::Traction { tag: "top".into(), traction: [0.0, -1e5] },
        BoundaryCondition::MassFlux { tag: "bottom".into(), fluid: 0, rate, segment: Some((0.5, 0.3)) },
    ];
    let d = discretize(problem(unit_mesh(3, 3), model, 1e-5, bcs), 1e5);
    let p0 = d.problem.model.initial_masses(&[0.2], 1e5).unwrap();
    let x = d.uniform_state(&p0).unwrap();
    (d, x)
}

#[test]
fn closed_box_stays_at_rest() {
    let (d, x) = gas_box(0.0);
    let s = TimeLoopState::new(&d, x.clone()).unwrap();
    let s = time_step(&d, &s, 10.0, &tight()).unwrap();
    let dev = x.iter().zip(&s.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-12 * x.iter().map(|v| v.abs()).fold(0.0, f64::max), "{dev}");
}

#[test]
fn injected_mass_is_conserved() {
    let rate = 1e-6;
    let (d, x) = gas_box(rate);
    let m0 = d.fluid_mass(&x, 0);
    let mut s = TimeLoopState::new(&d, x).unwrap();
    for _ in 0..5 {
        s = time_step(&d, &s, 20.0, &tight()).unwrap();
        let expected = m0 + d.injection_rate(0) * s.t;
        let m = d.fluid_mass(&s.x, 0);
        assert!((m - expected).abs() <= 1e-10 * expected, "{m} vs {expected}");
    }
    assert!((d.injection_rate(0) - rate * 0.3).abs() < 1e-18);
}

#[test]
fn assembly_is_deterministic() {
    let d = mixed_problem();
    let x = perturbed(&d, 21);
    let perm = d.permeability_at(&x).unwrap();
    let a = d.assemble_tangent(&x, &step(0.1, &x, &perm)).unwrap();
    let b = d.assemble_tangent(&x, &step(0.1, &x, &perm)).unwrap();
    assert_eq!(a.rhs.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.rhs.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
    assert_eq!(a.matrix, b.matrix);
}
