//! Energy density of the whole mixture at a material point and all of its
//! first and second derivatives with respect to `F` and the fluid masses.
//!
//! The compressible fluids share the volume left over by the solid and by any
//! incompressible liquid; the pressure-equality closure partitions it. By the
//! envelope property the closure adds no terms to the first derivatives:
//! `∂W₀/∂P₀ᵢ = W'ᵢ(ρᵢ)` and the fluid part of the stress is `−p ∂V/∂F`.

use crate::constitutive::closure::split_volume;
use crate::constitutive::fluid::FluidModel;
use crate::constitutive::solid::SolidModel;
use crate::error::{Error, Result};
use crate::kinematics::{VolumeFractionModel, PHI_MIN};
use crate::scalar::Real;
use crate::tensor::{Tensor2, Tensor4};

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureModel<T> {
    pub solid: SolidModel<T>,
    pub volume_fractions: VolumeFractionModel<T>,
    pub fluids: Vec<FluidModel<T>>,
}

/// Everything the discretization needs at one quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResponse<T> {
    /// `W₀`, per unit referential volume.
    pub energy: T,
    pub piola: Tensor2<T>,
    pub tangent: Tensor4<T>,
    /// `∂W₀/∂P₀ᵢ` per fluid.
    pub chemical_potential: Vec<T>,
    pub dpiola_dp0: Vec<Tensor2<T>>,
    pub dmu_df: Vec<Tensor2<T>>,
    /// `dmu_dp0[i][j] = ∂μᵢ/∂P₀ⱼ`.
    pub dmu_dp0: Vec<Vec<T>>,
    /// Common pore pressure (zero when there is no fluid).
    pub pressure: T,
    /// Pressure of each fluid as returned by its own equation of state;
    /// incompressible liquids report the common pressure.
    pub fluid_pressures: Vec<T>,
    pub phi_solid: T,
    /// Current volume fraction per fluid.
    pub phi: Vec<T>,
    /// True density per fluid.
    pub rho: Vec<T>,
}

impl<T: Real> MixtureModel<T> {
    pub fn validate(&self) -> Result<()> {
        self.solid.validate()?;
        self.volume_fractions.validate()?;
        for f in &self.fluids {
            f.validate()?;
        }
        let liquids: Vec<&FluidModel<T>> =
            self.fluids.iter().filter(|f| !f.is_compressible()).collect();
        if !liquids.is_empty() && liquids.len() == self.fluids.len() {
            return Err(Error::validation(
                "fluids",
                "at least one compressible fluid is required to carry the pore pressure",
            ));
        }
        if let VolumeFractionModel::UnsaturatedMixed { rho_i_tilde, .. } = self.volume_fractions {
            match liquids.as_slice() {
                [FluidModel::IncompressibleLiquid(l)] if l.rho_tilde == rho_i_tilde => {}
                _ => {
                    return Err(Error::validation(
                        "volume_fractions",
                        "the unsaturated model needs exactly one incompressible liquid with matching density",
                    ))
                }
            }
        }
        Ok(())
    }

    /// Evaluates the point response at deformation `f` and referential fluid
    /// masses `p0` (one per fluid, in model order).
    pub fn evaluate(&self, f: &Tensor2<T>, p0: &[T]) -> Result<PointResponse<T>> {
        let nf = self.fluids.len();
        if p0.len() != nf {
            return Err(Error::validation(
                "p0",
                format!("expected {nf} fluid masses, got {}", p0.len()),
            ));
        }
        let j = f.det();
        if !(j > T::zero() && j.is_finite()) {
            return Err(Error::NonPositiveJacobian { j: j.as_f64() });
        }
        let vf = &self.volume_fractions;
        let phi0s = vf.phi0s();
        let phi_solid = vf.solid_fraction(j)?;
        let a = vf.pore_volume_slope();

        let mut shared = vf.pore_volume(j);
        for (i, (model, mass)) in self.fluids.iter().zip(p0).enumerate() {
            if let FluidModel::IncompressibleLiquid(l) = model {
                if *mass < T::zero() {
                    return Err(Error::DegeneratePhase {
                        phase: i,
                        phi: (*mass / (j * l.rho_tilde)).as_f64(),
                    });
                }
                shared -= *mass / l.rho_tilde;
            }
        }

        let mut energy = phi0s * self.solid.energy(f)?;
        let mut piola = self.solid.piola(f)?.scale(phi0s);
        let mut tangent = self.solid.tangent(f)?.scale(phi0s);

        if nf == 0 {
            return Ok(PointResponse {
                energy,
                piola,
                tangent,
                chemical_potential: vec![],
                dpiola_dp0: vec![],
                dmu_df: vec![],
                dmu_dp0: vec![],
                pressure: T::zero(),
                fluid_pressures: vec![],
                phi_solid,
                phi: vec![],
                rho: vec![],
            });
        }

        if !(shared / j > T::lit(PHI_MIN)) {
            let phase = self.fluids.iter().position(|m| m.is_compressible()).unwrap_or(0);
            return Err(Error::DegeneratePhase {
                phase,
                phi: (shared / j).as_f64(),
            });
        }

        let compressible: Vec<usize> = (0..nf).filter(|&i| self.fluids[i].is_compressible()).collect();
        let pairs: Vec<(&FluidModel<T>, T)> =
            compressible.iter().map(|&i| (&self.fluids[i], p0[i])).collect();
        let split = split_volume(&pairs, shared, j).map_err(|e| match e {
            Error::DegeneratePhase { phase, phi } => Error::DegeneratePhase {
                phase: compressible[phase],
                phi,
            },
            other => other,
        })?;
        let p = split.pressure;
        let c = split.compliance;

        let mut mu = vec![T::zero(); nf];
        let mut s = vec![T::zero(); nf];
        let mut phi = vec![T::zero(); nf];
        let mut rho = vec![T::zero(); nf];
        let mut fluid_pressures = vec![p; nf];
        for (k, &i) in compressible.iter().enumerate() {
            let r = split.densities[k];
            energy += split.volumes[k] * self.fluids[i].energy(r)?;
            mu[i] = self.fluids[i].chemical_potential(r)?;
            s[i] = T::one() / r;
            phi[i] = split.volumes[k] / j;
            rho[i] = r;
            fluid_pressures[i] = split.pressures[k];
        }
        for (i, model) in self.fluids.iter().enumerate() {
            if let FluidModel::IncompressibleLiquid(l) = model {
                mu[i] = p / l.rho_tilde;
                s[i] = T::one() / l.rho_tilde;
                phi[i] = p0[i] / (j * l.rho_tilde);
                rho[i] = l.rho_tilde;
            }
        }

        let g = f.cofactor();
        piola = piola - g.scale(a * p);
        tangent = tangent + Tensor4::outer(&g, &g).scale(a * a / c) + Tensor4::cofactor_derivative().scale(-a * p);
        let dpiola_dp0: Vec<Tensor2<T>> = s.iter().map(|si| g.scale(-a * *si / c)).collect();
        let dmu_df = dpiola_dp0.clone();
        let dmu_dp0 = s
            .iter()
            .map(|si| s.iter().map(|sj| *si * *sj / c).collect())
            .collect();

        Ok(PointResponse {
            energy,
            piola,
            tangent,
            chemical_potential: mu,
            dpiola_dp0,
            dmu_df,
            dmu_dp0,
            pressure: p,
            fluid_pressures,
            phi_solid,
            phi,
            rho,
        })
    }

    /// Referential fluid masses of an undeformed state where fluid `i`
    /// occupies `phi0[i]` and every compressible fluid sits at pressure `p`.
    pub fn initial_masses(&self, phi0: &[T], p: T) -> Result<Vec<T>> {
        self.fluids
            .iter()
            .zip(phi0)
            .map(|(m, f)| Ok(*f * m.density_at_pressure(p)?))
            .collect()
    }
}
