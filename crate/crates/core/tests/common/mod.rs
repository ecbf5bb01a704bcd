#![allow(dead_code)]

use poromech_core::constitutive::{
    CompressibleLiquidParams, FluidModel, IdealGasParams, MixtureModel, NeoHookeanParams, PermeabilityParams,
    SmallStrainParams, SolidModel,
};
use poromech_core::fem::{build_structured_mesh, BoundaryCondition, Discretization, Mesh, Problem};
use poromech_core::kinematics::VolumeFractionModel;

pub fn water() -> FluidModel<f64> {
    FluidModel::CompressibleLiquid(CompressibleLiquidParams { bulk_modulus: 2270e6, rho_ref: 1000.0 })
}

pub fn air() -> FluidModel<f64> {
    FluidModel::IdealGas(IdealGasParams { r: 8.32, t: 300.0, xi: 1.0, molar_mass: 0.029 })
}

pub fn neo_hookean(lambda: f64, mu: f64) -> SolidModel<f64> {
    SolidModel::NeoHookean(NeoHookeanParams { lambda, mu })
}

pub fn small_strain(lambda: f64, mu: f64) -> SolidModel<f64> {
    SolidModel::SmallStrain(SmallStrainParams { lambda, mu })
}

pub fn conductivity(k: f64) -> PermeabilityParams<f64> {
    PermeabilityParams::Conductivity { k_tilde: k, g: 9.81 }
}

/// Moves interior corner nodes by a deterministic pattern.
pub fn distort(mesh: &mut Mesh, amount: f64) {
    let (nx, ny) = (mesh.nx, mesh.ny);
    for j in 1..ny {
        for i in 1..nx {
            let c = j * (nx + 1) + i;
            let s = ((i * 7 + j * 3) % 5) as f64 / 4.0 - 0.5;
            let t = ((i * 2 + j * 5) % 3) as f64 / 2.0 - 0.5;
            mesh.nodes[c][0] += amount * s;
            mesh.nodes[c][1] += amount * t;
        }
    }
}

pub fn mixture(solid: SolidModel<f64>, phi0s: f64, fluids: Vec<FluidModel<f64>>) -> MixtureModel<f64> {
    MixtureModel { solid, volume_fractions: VolumeFractionModel::IncompressibleSolid { phi0s }, fluids }
}

pub fn problem(mesh: Mesh, model: MixtureModel<f64>, perm: f64, bcs: Vec<BoundaryCondition>) -> Problem {
    let n = model.fluids.len();
    Problem { mesh, model, permeability: vec![conductivity(perm); n], gravity: None, bcs }
}

pub fn reference(model: &MixtureModel<f64>, p: f64) -> Vec<(f64, f64)> {
    model
        .fluids
        .iter()
        .map(|f| {
            let rho = f.density_at_pressure(p).unwrap();
            (rho, rho * f.pressure_slope(rho).unwrap())
        })
        .collect()
}

pub fn discretize(problem: Problem, p: f64) -> Discretization {
    let r = reference(&problem.model, p);
    Discretization::new(problem, &r).unwrap()
}

pub fn unit_mesh(nx: usize, ny: usize) -> Mesh {
    build_structured_mesh(nx, ny, 1.0, 1.0).unwrap()
}
