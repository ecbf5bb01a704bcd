//! Large-deformation poromechanics derived from a single free-energy
//! functional: pointwise constitutive laws, a mixed finite-element
//! discretization, implicit time stepping and consolidation oracles.

pub mod constitutive;
pub mod error;
pub mod fem;
pub mod io;
pub mod kinematics;
pub mod scalar;
pub mod solver;
pub mod tensor;
pub mod verification;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Tensor = tensor::Tensor2<f64>;
pub type Vector = tensor::Vector2<f64>;
pub type Mixture = constitutive::MixtureModel<f64>;
pub type Fluid = constitutive::FluidModel<f64>;
pub type Solid = constitutive::SolidModel<f64>;
pub type VolumeFractions = kinematics::VolumeFractionModel<f64>;
pub type Permeability = constitutive::PermeabilityParams<f64>;
