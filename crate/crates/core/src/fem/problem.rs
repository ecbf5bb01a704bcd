//! Problem description consumed by the discretization.

use crate::constitutive::{MixtureModel, PermeabilityParams};
use crate::error::{Error, Result};
use crate::fem::mesh::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Dead load per unit referential length.
    Traction { tag: String, traction: [f64; 2] },
    /// Prescribed displacement component.
    Displacement { tag: String, component: usize, value: f64 },
    /// Ties one displacement component of every node on the tag to a
    /// single unknown (a rigid frictionless plate).
    RigidPlate { tag: String, component: usize },
    /// Prescribed fluid pressure (drained boundary).
    Drained { tag: String, fluid: usize, pressure: f64 },
    /// Inward mass flux (kg/(m²·s)) on the part of the tag whose edge
    /// coordinate lies in `center ± width/2`; the whole tag when `segment`
    /// is `None`.
    MassFlux {
        tag: String,
        fluid: usize,
        rate: f64,
        segment: Option<(f64, f64)>,
    },
}

impl BoundaryCondition {
    pub fn tag(&self) -> &str {
        match self {
            Self::Traction { tag, .. }
            | Self::Displacement { tag, .. }
            | Self::RigidPlate { tag, .. }
            | Self::Drained { tag, .. }
            | Self::MassFlux { tag, .. } => tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub mesh: Mesh,
    pub model: MixtureModel<f64>,
    /// One entry per fluid of `model`.
    pub permeability: Vec<PermeabilityParams<f64>>,
    /// Gravitational acceleration vector, when body forces are enabled.
    pub gravity: Option<[f64; 2]>,
    pub bcs: Vec<BoundaryCondition>,
}

impl Problem {
    pub fn validate(&self) -> Result<()> {
        self.mesh.validate()?;
        self.model.validate()?;
        let nf = self.model.fluids.len();
        if self.permeability.len() != nf {
            return Err(Error::validation("permeability", format!("expected {nf} entries")));
        }
        for p in &self.permeability {
            p.validate()?;
        }
        for bc in &self.bcs {
            self.mesh.tag(bc.tag())?;
            match bc {
                BoundaryCondition::Displacement { component, .. } | BoundaryCondition::RigidPlate { component, .. }
                    if *component > 1 =>
                {
                    return Err(Error::validation("component", "must be 0 (x) or 1 (y)"));
                }
                BoundaryCondition::Drained { fluid, .. } | BoundaryCondition::MassFlux { fluid, .. } if *fluid >= nf => {
                    return Err(Error::validation("fluid", format!("no fluid with index {fluid}")));
                }
                BoundaryCondition::MassFlux { segment: Some((_, w)), .. } if !(*w > 0.0) => {
                    return Err(Error::validation("width", "injection width must be positive"));
                }
                _ => {}
            }
        }
        Ok(())
    }
}
