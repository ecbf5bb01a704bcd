//! Plane-strain kinematics, density maps and the referential/current
//! volume-fraction models.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::Tensor2;

/// Volume fractions below this floor are treated as a vanished phase.
pub const PHI_MIN: f64 = 1e-6;

/// Deformation at a material point. `j` is always `det f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationState<T> {
    pub f: Tensor2<T>,
    pub j: T,
    pub grad_u: Tensor2<T>,
}

impl<T: Real> DeformationState<T> {
    pub fn from_f(f: Tensor2<T>) -> Result<Self> {
        deformation_gradient(f - Tensor2::identity())
    }
}

/// Mass and volume bookkeeping for one phase at a material point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseState<T> {
    /// Mass per unit referential mixture volume.
    pub p0: T,
    /// Current volume fraction.
    pub phi: T,
    /// Referential volume fraction.
    pub phi0: T,
    /// True density, mass per unit current phase volume.
    pub rho: T,
}

impl<T: Real> PhaseState<T> {
    /// Builds a consistent state, deriving `rho` from `p0`, `j` and `phi`.
    pub fn new(p0: T, phi: T, phi0: T, j: T) -> Result<Self> {
        let rho = true_density(p0, j, phi)?;
        Ok(Self { p0, phi, phi0, rho })
    }

    /// Mass per unit current mixture volume.
    pub fn partial_density(&self, j: T) -> T {
        self.p0 / j
    }
}

/// How current volume fractions follow from the deformation and the
/// referential state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VolumeFractionModel<T> {
    /// Incompressible grains: solid volume is preserved, `φₛ = φ₀ₛ/J`.
    IncompressibleSolid { phi0s: T },
    /// Solid deformed affinely with the mixture, `φₛ = φ₀ₛ`.
    AffineSolid { phi0s: T },
    /// Affine solid plus an incompressible liquid of true density `rho_i_tilde`.
    UnsaturatedMixed { phi0s: T, rho_i_tilde: T },
}

impl<T: Real> VolumeFractionModel<T> {
    pub fn phi0s(&self) -> T {
        match *self {
            Self::IncompressibleSolid { phi0s }
            | Self::AffineSolid { phi0s }
            | Self::UnsaturatedMixed { phi0s, .. } => phi0s,
        }
    }

    pub fn solid_fraction(&self, j: T) -> Result<T> {
        match *self {
            Self::IncompressibleSolid { phi0s } => Ok(fractions_incompressible_solid(phi0s, j)?.0),
            Self::AffineSolid { phi0s } | Self::UnsaturatedMixed { phi0s, .. } => {
                Ok(fractions_affine_solid(phi0s))
            }
        }
    }

    /// Pore volume per unit referential volume, `J (1 − φₛ)`.
    pub fn pore_volume(&self, j: T) -> T {
        match *self {
            Self::IncompressibleSolid { phi0s } => j - phi0s,
            Self::AffineSolid { phi0s } | Self::UnsaturatedMixed { phi0s, .. } => {
                j * (T::one() - phi0s)
            }
        }
    }

    /// `d(pore_volume)/dJ`; both models are affine in `J`.
    pub fn pore_volume_slope(&self) -> T {
        match *self {
            Self::IncompressibleSolid { .. } => T::one(),
            Self::AffineSolid { phi0s } | Self::UnsaturatedMixed { phi0s, .. } => T::one() - phi0s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let phi0s = self.phi0s();
        if !(phi0s > T::zero() && phi0s < T::one()) {
            return Err(Error::validation(
                "phi0s",
                format!("solid fraction {phi0s} must lie in (0, 1)"),
            ));
        }
        if let Self::UnsaturatedMixed { rho_i_tilde, .. } = *self {
            if !(rho_i_tilde > T::zero()) {
                return Err(Error::validation("rho_i_tilde", "must be positive"));
            }
        }
        Ok(())
    }
}

fn check_jacobian<T: Real>(j: T) -> Result<()> {
    if j > T::zero() && j.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveJacobian { j: j.as_f64() })
    }
}

/// `F = I + ∇₀u`, `J = det F`.
pub fn deformation_gradient<T: Real>(grad_u: Tensor2<T>) -> Result<DeformationState<T>> {
    let f = Tensor2::identity() + grad_u;
    let j = f.det();
    check_jacobian(j)?;
    Ok(DeformationState { f, j, grad_u })
}

/// Referential to current partial density, `J⁻¹ P₀`.
pub fn push_density<T: Real>(p0: T, j: T) -> Result<T> {
    check_jacobian(j)?;
    Ok(p0 / j)
}

/// True density `ρ = J⁻¹ P₀ / φ`.
pub fn true_density<T: Real>(p0: T, j: T, phi: T) -> Result<T> {
    check_jacobian(j)?;
    if !(phi > T::lit(PHI_MIN)) {
        return Err(Error::DegeneratePhase {
            phase: 0,
            phi: phi.as_f64(),
        });
    }
    Ok(p0 / j / phi)
}

/// Incompressible solid grains: `φₛ = φ₀ₛ/J`, `φ_f = 1 − φₛ`.
pub fn fractions_incompressible_solid<T: Real>(phi0s: T, j: T) -> Result<(T, T)> {
    check_jacobian(j)?;
    let phi_s = phi0s / j;
    let phi_f = T::one() - phi_s;
    if !(phi_f > T::lit(PHI_MIN)) {
        return Err(Error::DegeneratePhase {
            phase: 0,
            phi: phi_f.as_f64(),
        });
    }
    Ok((phi_s, phi_f))
}

/// Affinely deformed solid: the solid fraction does not change.
pub fn fractions_affine_solid<T: Real>(phi0s: T) -> T {
    phi0s
}

/// Affine solid with an incompressible liquid of true density `rho_i_tilde`
/// and a compressible fluid filling the rest. Returns `(φₛ, φ_I, φ_c)`.
pub fn fractions_unsaturated<T: Real>(
    phi0s: T,
    p0_liquid: T,
    j: T,
    rho_i_tilde: T,
) -> Result<(T, T, T)> {
    check_jacobian(j)?;
    let phi_s = phi0s;
    let phi_i = p0_liquid / (j * rho_i_tilde);
    let phi_c = T::one() - phi_s - phi_i;
    if !(phi_c > T::lit(PHI_MIN)) {
        return Err(Error::DegeneratePhase {
            phase: 0,
            phi: phi_c.as_f64(),
        });
    }
    Ok((phi_s, phi_i, phi_c))
}

/// Referential permeability `K = J F⁻¹ k F⁻ᵀ`.
pub fn pull_permeability<T: Real>(k_current: &Tensor2<T>, f: &Tensor2<T>, j: T) -> Result<Tensor2<T>> {
    check_jacobian(j)?;
    let f_inv = f.inverse().ok_or(Error::NonPositiveJacobian { j: j.as_f64() })?;
    Ok(f_inv.matmul(k_current).matmul(&f_inv.transpose()).scale(j))
}

/// Current permeability `k = J⁻¹ F K Fᵀ`.
pub fn push_permeability<T: Real>(k_ref: &Tensor2<T>, f: &Tensor2<T>, j: T) -> Result<Tensor2<T>> {
    check_jacobian(j)?;
    Ok(f.matmul(k_ref).matmul(&f.transpose()).scale(T::one() / j))
}
