//! Built-in scenarios.

use crate::constitutive::{
    CompressibleLiquidParams, FluidModel, IdealGasParams, IncompressibleLiquidParams, PermeabilityParams, VdWParams,
};
use crate::error::{Error, Result};
use crate::Tensor;
use crate::io::config::{
    BoundaryConfig, FluidConfig, FluxConfig, FractionKind, Geometry, Probe, ScenarioConfig, SolidConfig, SolidKind,
    TimeConfig, Verification, STANDARD_GRAVITY,
};
use crate::verification::{mandel_scaling, terzaghi_scaling, MandelParams, TerzaghiParams};

pub const PRESETS: &[(&str, &str)] = &[
    ("terzaghi", "one-dimensional consolidation under a 10 kPa load"),
    ("mandel", "plane-strain consolidation between rigid plates"),
    ("vdw_injection", "CO2 (van der Waals) injection at 270 K"),
    ("vdw_injection_285", "CO2 (van der Waals) injection at 285 K"),
    ("vdw_injection_320", "CO2 (van der Waals) injection at 320 K"),
    ("two_gas", "injection of a second ideal gas into a gas-saturated medium"),
    ("unsaturated", "liquid injection into a gas-filled medium"),
];

pub const CONSOLIDATION_LOAD: f64 = 10e3;
const WATER_BULK: f64 = 2270e6;
const WATER_RHO: f64 = 1000.0;
const CONSOLIDATION_K: f64 = 1e-7;
const GAS_R: f64 = 8.32;
/// Initial volume fraction of a fluid that is absent at the start.
pub const TRACE_FRACTION: f64 = 1e-4;

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    match name {
        "terzaghi" => Ok(terzaghi()),
        "mandel" => Ok(mandel()),
        "vdw_injection" => vdw_injection(270.0),
        "vdw_injection_285" => vdw_injection(285.0),
        "vdw_injection_320" => vdw_injection(320.0),
        "two_gas" => two_gas(),
        "unsaturated" => unsaturated(),
        other => Err(Error::validation("preset", format!("unknown preset `{other}`"))),
    }
}

fn consolidation_solid() -> SolidConfig {
    // φ₀ₛ λ = φ₀ₛ μ = 40 MPa
    SolidConfig { kind: SolidKind::NeoHookean, lambda: 64e6, mu: 64e6, phi0: 0.625, fractions: FractionKind::IncompressibleSolid }
}

fn water() -> FluidConfig {
    FluidConfig {
        name: "water".into(),
        model: FluidModel::CompressibleLiquid(CompressibleLiquidParams { bulk_modulus: WATER_BULK, rho_ref: WATER_RHO }),
        phi0: 0.375,
        permeability: PermeabilityParams::Conductivity { k_tilde: CONSOLIDATION_K, g: STANDARD_GRAVITY },
    }
}

fn bc(tag: &str) -> BoundaryConfig {
    BoundaryConfig { tag: tag.into(), ..Default::default() }
}

/// Oracle parameters of a consolidation scenario: `λ̃ = φ₀ₛλ`,
/// `μ̃ = φ₀ₛμ`, and the Darcy mobility `φ k̃/(ρ g)`.
pub fn consolidation_params(c: &ScenarioConfig) -> Result<TerzaghiParams<f64>> {
    let [f] = c.fluids.as_slice() else {
        return Err(Error::validation("fluids", "consolidation checks need exactly one fluid"));
    };
    let FluidModel::CompressibleLiquid(l) = f.model else {
        return Err(Error::validation("fluids", "consolidation checks need a compressible liquid"));
    };
    let PermeabilityParams::Conductivity { k_tilde, g } = f.permeability else {
        return Err(Error::validation("permeability", "consolidation checks need a hydraulic conductivity"));
    };
    let w = c
        .boundaries
        .iter()
        .find(|b| b.tag == "top")
        .and_then(|b| b.traction)
        .map(|t| -t[1])
        .ok_or_else(|| Error::validation("bc.top", "consolidation checks need a top traction"))?;
    let s = c.solid.phi0;
    Ok(TerzaghiParams {
        w,
        k_f: l.bulk_modulus,
        phi_f: f.phi0,
        lambda_tilde: s * c.solid.lambda,
        mu_tilde: s * c.solid.mu,
        k_over_gamma: f.phi0 * k_tilde / (l.rho_ref * g),
        h: match c.verification {
            Verification::Mandel => c.geometry.lx,
            _ => c.geometry.ly,
        },
    })
}

pub fn terzaghi() -> ScenarioConfig {
    let mut c = ScenarioConfig {
        name: "terzaghi".into(),
        verification: Verification::Terzaghi,
        gravity: false,
        geometry: Geometry { lx: 0.05, ly: 1.0, nx: 1, ny: 80 },
        solid: consolidation_solid(),
        fluids: vec![water()],
        initial_pressure: 0.0,
        boundaries: vec![
            BoundaryConfig { traction: Some([0.0, -CONSOLIDATION_LOAD]), drained: vec![("water".into(), 0.0)], ..bc("top") },
            BoundaryConfig { displacement: [None, Some(0.0)], ..bc("bottom") },
            BoundaryConfig { displacement: [Some(0.0), None], ..bc("left") },
            BoundaryConfig { displacement: [Some(0.0), None], ..bc("right") },
        ],
        time: TimeConfig { t_end: 1.0, dt: 1.0, dt0: None, output_times: vec![], n_outputs: 50 },
        probes: vec![
            Probe { name: "bottom".into(), point: [0.0, 0.0] },
            Probe { name: "middle".into(), point: [0.0, 0.5] },
        ],
    };
    let (_, ts) = terzaghi_scaling(&consolidation_params(&c).expect("preset is consistent"));
    c.time = TimeConfig {
        t_end: 0.5 * ts,
        dt: ts / 1000.0,
        dt0: Some(1e-6 * ts),
        output_times: [0.05, 0.1, 0.2, 0.5].iter().map(|t| t * ts).collect(),
        n_outputs: 50,
    };
    c
}

pub fn mandel() -> ScenarioConfig {
    let mut c = ScenarioConfig {
        name: "mandel".into(),
        verification: Verification::Mandel,
        gravity: false,
        geometry: Geometry { lx: 1.0, ly: 0.5, nx: 40, ny: 2 },
        solid: consolidation_solid(),
        fluids: vec![water()],
        initial_pressure: 0.0,
        boundaries: vec![
            BoundaryConfig { traction: Some([0.0, -CONSOLIDATION_LOAD]), plate: [false, true], ..bc("top") },
            BoundaryConfig { displacement: [None, Some(0.0)], ..bc("bottom") },
            BoundaryConfig { displacement: [Some(0.0), None], ..bc("left") },
            BoundaryConfig { drained: vec![("water".into(), 0.0)], ..bc("right") },
        ],
        time: TimeConfig { t_end: 1.0, dt: 1.0, dt0: None, output_times: vec![], n_outputs: 50 },
        probes: vec![
            Probe { name: "A".into(), point: [0.0, 0.0] },
            Probe { name: "B".into(), point: [0.5, 0.0] },
            Probe { name: "C".into(), point: [0.875, 0.0] },
        ],
    };
    let params = MandelParams { base: consolidation_params(&c).expect("preset is consistent"), a: c.geometry.lx };
    let (_, ts) = mandel_scaling(&params);
    c.time = TimeConfig {
        t_end: 0.5 * ts,
        dt: ts / 1000.0,
        dt0: Some(1e-6 * ts),
        output_times: [0.01, 0.05, 0.1, 0.25, 0.5].iter().map(|t| t * ts).collect(),
        n_outputs: 50,
    };
    c
}

/// Gas-injection layout: 10 m × 5 m, injection at the top center over two
/// elements, rollers on the sides, fixed bottom, the initial pressure held
/// on the sides and bottom and balanced on top by a confining traction.
/// Vertical stress of the undeformed initial state.
pub fn initial_stress(c: &ScenarioConfig) -> Result<f64> {
    let model = c.mixture()?;
    let phi0: Vec<f64> = c.fluids.iter().map(|f| f.phi0).collect();
    let masses = model.initial_masses(&phi0, c.initial_pressure)?;
    Ok(model.evaluate(&Tensor::identity(), &masses)?.piola.0[1][1])
}

fn injection_layout(c: &mut ScenarioConfig, injected: &str, rate: f64, drained: &[&str]) -> Result<()> {
    let p = c.initial_pressure;
    let drain: Vec<(String, f64)> = drained.iter().map(|f| (f.to_string(), p)).collect();
    let load = initial_stress(c)?;
    c.boundaries = vec![
        BoundaryConfig {
            traction: Some([0.0, load]),
            flux: vec![FluxConfig { fluid: injected.into(), rate, center: Some(0.5 * c.geometry.lx), width: None }],
            ..bc("top")
        },
        BoundaryConfig { displacement: [Some(0.0), Some(0.0)], drained: drain.clone(), ..bc("bottom") },
        BoundaryConfig { displacement: [Some(0.0), None], drained: drain.clone(), ..bc("left") },
        BoundaryConfig { displacement: [Some(0.0), None], drained: drain, ..bc("right") },
    ];
    let (lx, ly) = (c.geometry.lx, c.geometry.ly);
    c.probes = (0..=4)
        .map(|k| Probe { name: format!("z{k}"), point: [0.5 * lx, ly * (1.0 - 0.25 * k as f64)] })
        .collect();
    Ok(())
}

/// Just below the vapour spinodal where there is one.
fn vdw_initial_pressure(temperature: f64) -> f64 {
    if temperature < 280.0 {
        5.17e6
    } else {
        6.02e6
    }
}

pub fn vdw_injection(temperature: f64) -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig {
        name: format!("vdw_injection_{temperature}"),
        verification: Verification::None,
        gravity: false,
        geometry: Geometry { lx: 10.0, ly: 5.0, nx: 20, ny: 10 },
        solid: SolidConfig { kind: SolidKind::NeoHookean, lambda: 57.7e6, mu: 38.46e6, phi0: 0.8, fractions: FractionKind::AffineSolid },
        fluids: vec![FluidConfig {
            name: "co2".into(),
            model: FluidModel::VanDerWaals(VdWParams { a: 0.364, b: 42.67e-6, c: 3.5, r: GAS_R, t: temperature, molar_mass: 0.044 }),
            phi0: 0.2,
            permeability: PermeabilityParams::Conductivity { k_tilde: 0.1, g: STANDARD_GRAVITY },
        }],
        initial_pressure: vdw_initial_pressure(temperature),
        boundaries: vec![],
        time: TimeConfig { t_end: 20.0, dt: 0.5, dt0: None, output_times: vec![5.0, 10.0, 20.0], n_outputs: 50 },
        probes: vec![],
    };
    injection_layout(&mut c, "co2", 4.4, &["co2"])?;
    Ok(c)
}

fn ideal_gas(name: &str, molar_mass: f64, phi0: f64, k_tilde: f64) -> FluidConfig {
    FluidConfig {
        name: name.into(),
        model: FluidModel::IdealGas(IdealGasParams { r: GAS_R, t: 300.0, xi: 1.0, molar_mass }),
        phi0,
        permeability: PermeabilityParams::Conductivity { k_tilde, g: STANDARD_GRAVITY },
    }
}

pub fn two_gas() -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig {
        name: "two_gas".into(),
        verification: Verification::None,
        gravity: false,
        geometry: Geometry { lx: 10.0, ly: 5.0, nx: 20, ny: 10 },
        solid: SolidConfig { kind: SolidKind::NeoHookean, lambda: 57.7e6, mu: 38.6e6, phi0: 0.8, fractions: FractionKind::IncompressibleSolid },
        fluids: vec![ideal_gas("gas1", 0.028, 0.2 - TRACE_FRACTION, 0.1), ideal_gas("gas2", 0.044, TRACE_FRACTION, 0.2)],
        initial_pressure: 4e7,
        boundaries: vec![],
        time: TimeConfig { t_end: 550.0, dt: 5.0, dt0: None, output_times: vec![100.0, 200.0, 550.0], n_outputs: 50 },
        probes: vec![],
    };
    injection_layout(&mut c, "gas2", 0.44, &["gas1"])?;
    Ok(c)
}

pub fn unsaturated() -> Result<ScenarioConfig> {
    let g = STANDARD_GRAVITY;
    let mut c = ScenarioConfig {
        name: "unsaturated".into(),
        verification: Verification::None,
        gravity: false,
        geometry: Geometry { lx: 10.0, ly: 5.0, nx: 20, ny: 10 },
        solid: SolidConfig { kind: SolidKind::NeoHookean, lambda: 57.7e6, mu: 38.6e6, phi0: 0.9, fractions: FractionKind::Unsaturated },
        fluids: vec![
            FluidConfig {
                name: "gas".into(),
                model: FluidModel::IdealGas(IdealGasParams { r: GAS_R, t: 300.0, xi: 1.0, molar_mass: 0.029 }),
                phi0: 0.1 - TRACE_FRACTION,
                permeability: PermeabilityParams::Intrinsic { kappa: 1.8e-7, gamma: 1.8e-5, g },
            },
            FluidConfig {
                name: "liquid".into(),
                model: FluidModel::IncompressibleLiquid(IncompressibleLiquidParams { rho_tilde: 1000.0 }),
                phi0: TRACE_FRACTION,
                permeability: PermeabilityParams::Intrinsic { kappa: 1.8e-7, gamma: 1e-3, g },
            },
        ],
        initial_pressure: 3300.0,
        boundaries: vec![],
        time: TimeConfig { t_end: 0.5, dt: 0.01, dt0: None, output_times: vec![0.1, 0.25, 0.5], n_outputs: 50 },
        probes: vec![],
    };
    // 200 L/(m²·s) of a 1000 kg/m³ liquid
    injection_layout(&mut c, "liquid", 200.0, &["gas"])?;
    Ok(c)
}
