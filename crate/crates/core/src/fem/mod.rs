//! Spatial discretization on structured quadrilateral meshes.

pub mod assembly;
pub mod dofmap;
pub mod mesh;
pub mod problem;
pub mod quadrature;
pub mod shape;
pub mod sparse;

pub use assembly::{Discretization, NodalFields, QuadPoint, Scaling, StepInput};
pub use dofmap::DofMap;
pub use mesh::{build_structured_mesh, BoundaryEdge, Mesh, Side};
pub use problem::{BoundaryCondition, Problem};
pub use shape::{shape_eval, Family, ShapeValues};
pub use sparse::{solve_linear, CsrMatrix, SparseSystem};
