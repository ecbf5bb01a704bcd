//! Energy densities and everything derived from them: pressures, chemical
//! potentials, stresses, flux coefficients and the pressure-equality closure.

pub mod closure;
pub mod fluid;
pub mod linearized;
pub mod mixture;
pub mod solid;
pub mod transport;

pub use closure::{pressure_equality_closure, split_volume, VolumeSplit, TOL_CLOSURE};
pub use fluid::{CompressibleLiquidParams, FluidModel, IdealGasParams, IncompressibleLiquidParams, VdWParams};
pub use linearized::{linearized_stress, LinearizedParams};
pub use mixture::{MixtureModel, PointResponse};
pub use solid::{neo_hookean_energy, neo_hookean_piola, neo_hookean_tangent, NeoHookeanParams, SmallStrainParams, SolidModel};
pub use transport::{dissipation_density, fluid_flux, fluid_flux_from_density, PermeabilityParams};

use crate::error::{Error, Result};
use crate::kinematics::PhaseState;
use crate::scalar::Real;
use crate::tensor::Tensor2;

/// Constitutive description of one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseModel<T> {
    Solid(SolidModel<T>),
    Fluid(FluidModel<T>),
}

fn fluid_of<T: Real>(model: &PhaseModel<T>) -> Result<&FluidModel<T>> {
    match model {
        PhaseModel::Fluid(f) => Ok(f),
        PhaseModel::Solid(_) => Err(Error::validation("model", "expected a fluid phase")),
    }
}

/// `p = ρW'(ρ) − W(ρ)`.
pub fn fluid_pressure<T: Real>(model: &PhaseModel<T>, rho: T) -> Result<T> {
    fluid_of(model)?.pressure(rho)
}

/// `∂W₀/∂P₀` for one fluid. An incompressible liquid has no equation of
/// state of its own and takes `p/ρ̃` from the surrounding `pore_pressure`.
pub fn chemical_potential<T: Real>(model: &PhaseModel<T>, state: &PhaseState<T>, pore_pressure: Option<T>) -> Result<T> {
    match fluid_of(model)? {
        FluidModel::IncompressibleLiquid(l) => pore_pressure
            .map(|p| p / l.rho_tilde)
            .ok_or_else(|| Error::validation("pore_pressure", "required for an incompressible liquid")),
        f => f.chemical_potential(state.rho),
    }
}

/// First Piola stress of the whole mixture at fixed referential fluid masses.
pub fn total_piola<T: Real>(f: &Tensor2<T>, p0: &[T], model: &MixtureModel<T>) -> Result<Tensor2<T>> {
    Ok(model.evaluate(f, p0)?.piola)
}
