//! Darcy-type transport driven by chemical-potential gradients.

use crate::constitutive::fluid::FluidModel;
use crate::error::{Error, Result};
use crate::kinematics::PhaseState;
use crate::scalar::Real;
use crate::tensor::{Tensor2, Vector2};

/// Isotropic permeability of one fluid. The current permeability tensor is
/// `k I` with `k = k̃/g`, or `k = κρ/γ` from intrinsic properties.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PermeabilityParams<T> {
    /// Hydraulic conductivity `k̃` (m/s).
    Conductivity { k_tilde: T, g: T },
    /// Intrinsic permeability `κ` (m²) and viscosity `γ` (Pa·s).
    Intrinsic { kappa: T, gamma: T, g: T },
}

impl<T: Real> PermeabilityParams<T> {
    /// Scalar coefficient `k` (s) at true density `rho`.
    pub fn coefficient(&self, rho: T) -> T {
        match *self {
            Self::Conductivity { k_tilde, g } => k_tilde / g,
            Self::Intrinsic { kappa, gamma, .. } => kappa * rho / gamma,
        }
    }

    /// Hydraulic conductivity `k̃ = κρg/γ`.
    pub fn conductivity(&self, rho: T) -> T {
        match *self {
            Self::Conductivity { k_tilde, .. } => k_tilde,
            Self::Intrinsic { kappa, gamma, g } => kappa * rho * g / gamma,
        }
    }

    pub fn depends_on_density(&self) -> bool {
        matches!(self, Self::Intrinsic { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Conductivity { k_tilde, g } => k_tilde > T::zero() && g > T::zero(),
            Self::Intrinsic { kappa, gamma, g } => kappa > T::zero() && gamma > T::zero() && g > T::zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::validation("permeability", "parameters must be positive"))
        }
    }
}

/// `q = −P k ∇η`, with `P` the current partial density.
pub fn fluid_flux<T: Real>(partial_density: T, k: &Tensor2<T>, grad_eta: &Vector2<T>) -> Vector2<T> {
    k.apply(grad_eta).scale(-partial_density)
}

/// `∇μ = μ'(ρ) ∇ρ` for a single compressible fluid.
pub fn chemical_potential_gradient<T: Real>(model: &FluidModel<T>, rho: T, grad_rho: &Vector2<T>) -> Result<Vector2<T>> {
    Ok(grad_rho.scale(model.chemical_potential_slope(rho)?))
}

/// Flux of a single fluid from its state and true-density gradient, by the
/// chain rule through the chemical potential.
pub fn fluid_flux_from_density<T: Real>(
    model: &FluidModel<T>,
    state: &PhaseState<T>,
    j: T,
    grad_rho: &Vector2<T>,
    perm: &PermeabilityParams<T>,
) -> Result<Vector2<T>> {
    let grad_eta = chemical_potential_gradient(model, state.rho, grad_rho)?;
    let k = Tensor2::identity().scale(perm.coefficient(state.rho));
    Ok(fluid_flux(state.partial_density(j), &k, &grad_eta))
}

/// `P ∇η · K ∇η`, the local rate of energy dissipation.
pub fn dissipation_density<T: Real>(grad_eta: &Vector2<T>, p: T, k: &Tensor2<T>) -> T {
    p * grad_eta.dot(&k.apply(grad_eta))
}
