//! Global numbering of displacement, fluid-mass and chemical-potential
//! unknowns.

use crate::error::Result;
use crate::fem::mesh::Mesh;
use crate::fem::problem::BoundaryCondition;

/// Unknown layout: displacements first (aliased components share an
/// index), then `P₀ᵢ` per fluid per corner, then `μᵢ` per fluid per corner.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    pub n_fluids: usize,
    pub n_corners: usize,
    /// Global index of raw displacement dof `2 node + component`.
    pub u_index: Vec<usize>,
    pub n_u: usize,
    pub p_offset: usize,
    pub mu_offset: usize,
    pub n_total: usize,
    /// Prescribed value of constrained global dofs.
    pub fixed: Vec<Option<f64>>,
    /// Drained pressure per `fluid * n_corners + corner`.
    pub drained: Vec<Option<f64>>,
}

/// Lattice nodes on a boundary tag, sorted and deduplicated.
pub fn lattice_nodes_on(mesh: &Mesh, tag: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for edge in mesh.tag(tag)? {
        let q = mesh.quadratic_nodes(edge.element);
        out.extend(edge.side.quadratic_nodes().iter().map(|&a| q[a]));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn corners_on(mesh: &Mesh, tag: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for edge in mesh.tag(tag)? {
        let c = mesh.elements[edge.element];
        out.extend(edge.side.linear_nodes().iter().map(|&a| c[a]));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl DofMap {
    pub fn new(mesh: &Mesh, n_fluids: usize, bcs: &[BoundaryCondition]) -> Result<Self> {
        let n_raw = 2 * mesh.n_lattice();
        let mut rep: Vec<usize> = (0..n_raw).collect();
        for bc in bcs {
            if let BoundaryCondition::RigidPlate { tag, component } = bc {
                let nodes = lattice_nodes_on(mesh, tag)?;
                let master = rep[2 * nodes[0] + component];
                for n in nodes {
                    rep[2 * n + component] = master;
                }
            }
        }
        let mut u_index = vec![usize::MAX; n_raw];
        let mut n_u = 0;
        for r in 0..n_raw {
            if rep[r] == r {
                u_index[r] = n_u;
                n_u += 1;
            }
        }
        for r in 0..n_raw {
            u_index[r] = u_index[rep[r]];
        }
        let n_corners = mesh.n_corners();
        let p_offset = n_u;
        let mu_offset = n_u + n_fluids * n_corners;
        let n_total = mu_offset + n_fluids * n_corners;
        let mut fixed = vec![None; n_total];
        let mut drained = vec![None; n_fluids * n_corners];
        for bc in bcs {
            match bc {
                BoundaryCondition::Displacement { tag, component, value } => {
                    for n in lattice_nodes_on(mesh, tag)? {
                        fixed[u_index[2 * n + component]] = Some(*value);
                    }
                }
                BoundaryCondition::Drained { tag, fluid, pressure } => {
                    for c in corners_on(mesh, tag)? {
                        drained[fluid * n_corners + c] = Some(*pressure);
                    }
                }
                _ => {}
            }
        }
        Ok(Self {
            n_fluids,
            n_corners,
            u_index,
            n_u,
            p_offset,
            mu_offset,
            n_total,
            fixed,
            drained,
        })
    }

    pub fn u(&self, node: usize, component: usize) -> usize {
        self.u_index[2 * node + component]
    }

    pub fn p(&self, fluid: usize, corner: usize) -> usize {
        self.p_offset + fluid * self.n_corners + corner
    }

    pub fn mu(&self, fluid: usize, corner: usize) -> usize {
        self.mu_offset + fluid * self.n_corners + corner
    }

    pub fn is_drained(&self, fluid: usize, corner: usize) -> bool {
        self.drained[fluid * self.n_corners + corner].is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::build_structured_mesh;

    #[test]
    fn every_dof_has_one_index() {
        let m = build_structured_mesh(2, 3, 1.0, 1.0).unwrap();
        let d = DofMap::new(&m, 2, &[]).unwrap();
        assert_eq!(d.n_u, 2 * m.n_lattice());
        assert_eq!(d.n_total, d.n_u + 4 * m.n_corners());
        let mut seen = vec![0; d.n_total];
        for &i in &d.u_index {
            seen[i] += 1;
        }
        for f in 0..2 {
            for c in 0..m.n_corners() {
                seen[d.p(f, c)] += 1;
                seen[d.mu(f, c)] += 1;
            }
        }
        assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn plate_aliasing_and_constraints() {
        let m = build_structured_mesh(2, 1, 1.0, 1.0).unwrap();
        let bcs = vec![
            BoundaryCondition::RigidPlate { tag: "top".into(), component: 1 },
            BoundaryCondition::Displacement { tag: "bottom".into(), component: 1, value: 0.0 },
            BoundaryCondition::Drained { tag: "right".into(), fluid: 0, pressure: 0.0 },
        ];
        let d = DofMap::new(&m, 1, &bcs).unwrap();
        let top = lattice_nodes_on(&m, "top").unwrap();
        assert_eq!(top.len(), 5);
        assert!(top.iter().all(|&n| d.u(n, 1) == d.u(top[0], 1)));
        assert_eq!(d.n_u, 2 * m.n_lattice() - 4);
        assert_eq!(d.fixed.iter().filter(|f| f.is_some()).count(), 5);
        assert_eq!(d.drained.iter().filter(|f| f.is_some()).count(), 2);
    }
}
