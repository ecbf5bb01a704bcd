//! Structured quadrilateral meshes with a derived biquadratic node lattice.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fem::shape::{shape_eval, Family};

/// Side of a quadrilateral, in the element's local frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

impl Side {
    /// Biquadratic local nodes along the side, in increasing edge coordinate.
    pub fn quadratic_nodes(self) -> [usize; 3] {
        match self {
            Side::Bottom => [0, 1, 2],
            Side::Right => [2, 5, 8],
            Side::Top => [6, 7, 8],
            Side::Left => [0, 3, 6],
        }
    }

    /// Bilinear local nodes along the side, in increasing edge coordinate.
    pub fn linear_nodes(self) -> [usize; 2] {
        match self {
            Side::Bottom => [0, 1],
            Side::Right => [1, 2],
            Side::Top => [3, 2],
            Side::Left => [0, 3],
        }
    }

    /// Local coordinates of the point at edge parameter `s ∈ [−1, 1]`.
    pub fn local_point(self, s: f64) -> [f64; 2] {
        match self {
            Side::Bottom => [s, -1.0],
            Side::Right => [1.0, s],
            Side::Top => [s, 1.0],
            Side::Left => [-1.0, s],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub element: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    /// Corner nodes, `j (nx + 1) + i`.
    pub nodes: Vec<[f64; 2]>,
    /// Counterclockwise corner connectivity, element `ey nx + ex`.
    pub elements: Vec<[usize; 4]>,
    pub tags: BTreeMap<String, Vec<BoundaryEdge>>,
}

pub fn build_structured_mesh(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidDimension(format!("need nx, ny >= 1, got {nx} x {ny}")));
    }
    if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
        return Err(Error::InvalidDimension(format!("need positive extents, got {lx} x {ly}")));
    }
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([lx * i as f64 / nx as f64, ly * j as f64 / ny as f64]);
        }
    }
    let mut elements = Vec::with_capacity(nx * ny);
    for ey in 0..ny {
        for ex in 0..nx {
            let n0 = ey * (nx + 1) + ex;
            elements.push([n0, n0 + 1, n0 + nx + 2, n0 + nx + 1]);
        }
    }
    let mut tags = BTreeMap::new();
    let edges = |side: Side, list: Vec<usize>| list.into_iter().map(|element| BoundaryEdge { element, side }).collect();
    tags.insert("bottom".into(), edges(Side::Bottom, (0..nx).collect()));
    tags.insert("top".into(), edges(Side::Top, (0..nx).map(|ex| (ny - 1) * nx + ex).collect()));
    tags.insert("left".into(), edges(Side::Left, (0..ny).map(|ey| ey * nx).collect()));
    tags.insert("right".into(), edges(Side::Right, (0..ny).map(|ey| ey * nx + nx - 1).collect()));
    Ok(Mesh { nx, ny, nodes, elements, tags })
}

impl Mesh {
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_corners(&self) -> usize {
        self.nodes.len()
    }

    /// Width of the biquadratic lattice in nodes.
    pub fn lattice_width(&self) -> usize {
        2 * self.nx + 1
    }

    pub fn n_lattice(&self) -> usize {
        (2 * self.nx + 1) * (2 * self.ny + 1)
    }

    /// Lattice indices of the nine biquadratic nodes of element `e`.
    pub fn quadratic_nodes(&self, e: usize) -> [usize; 9] {
        let (ex, ey) = (e % self.nx, e / self.nx);
        let w = self.lattice_width();
        let mut out = [0; 9];
        for b in 0..3 {
            for a in 0..3 {
                out[3 * b + a] = (2 * ey + b) * w + 2 * ex + a;
            }
        }
        out
    }

    /// Lattice index of corner node `c`.
    pub fn corner_to_lattice(&self, c: usize) -> usize {
        let (i, j) = (c % (self.nx + 1), c / (self.nx + 1));
        2 * j * self.lattice_width() + 2 * i
    }

    pub fn element_corners(&self, e: usize) -> [[f64; 2]; 4] {
        self.elements[e].map(|n| self.nodes[n])
    }

    /// Bilinear geometric map of element `e` at local point `xi`.
    pub fn map_point(&self, e: usize, xi: [f64; 2]) -> [f64; 2] {
        let s = shape_eval(Family::Bilinear, xi);
        let xs = self.element_corners(e);
        let mut x = [0.0; 2];
        for (a, na) in s.n.iter().enumerate() {
            x[0] += na * xs[a][0];
            x[1] += na * xs[a][1];
        }
        x
    }

    /// Coordinates of every lattice node.
    pub fn lattice_coords(&self) -> Vec<[f64; 2]> {
        let mut out = vec![[0.0; 2]; self.n_lattice()];
        for e in 0..self.n_elements() {
            for (a, &node) in self.quadratic_nodes(e).iter().enumerate() {
                out[node] = self.map_point(e, Family::Biquadratic.node_coords(a));
            }
        }
        out
    }

    pub fn tag(&self, name: &str) -> Result<&[BoundaryEdge]> {
        self.tags
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownBoundaryTag(name.to_string()))
    }

    /// Checks that every element's geometric map is orientation preserving.
    pub fn validate(&self) -> Result<()> {
        for e in 0..self.n_elements() {
            for xi in crate::fem::shape::BILINEAR_CORNERS {
                let jac = geometric_jacobian(&self.element_corners(e), xi);
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if !(det > 0.0) {
                    return Err(Error::InvalidDimension(format!("element {e} is inverted or degenerate")));
                }
            }
        }
        Ok(())
    }
}

/// `∂X/∂ξ` of the bilinear map, `jac[i][d] = ∂Xᵢ/∂ξ_d`.
pub fn geometric_jacobian(corners: &[[f64; 2]; 4], xi: [f64; 2]) -> [[f64; 2]; 2] {
    let s = shape_eval(Family::Bilinear, xi);
    let mut jac = [[0.0; 2]; 2];
    for a in 0..4 {
        for i in 0..2 {
            for d in 0..2 {
                jac[i][d] += corners[a][i] * s.dn[a][d];
            }
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let m = build_structured_mesh(2, 2, 1.0, 1.0).unwrap();
        assert_eq!(m.n_corners(), 9);
        assert_eq!(m.n_elements(), 4);
        assert_eq!(m.n_lattice(), 25);
        m.validate().unwrap();
    }

    #[test]
    fn unit_square_tags() {
        let m = build_structured_mesh(1, 1, 1.0, 1.0).unwrap();
        let mut seen = Vec::new();
        for (name, edges) in &m.tags {
            assert_eq!(edges.len(), 1, "{name}");
            seen.push(edges[0].side);
        }
        assert_eq!(seen.len(), 4);
        for s in [Side::Bottom, Side::Right, Side::Top, Side::Left] {
            assert_eq!(seen.iter().filter(|x| **x == s).count(), 1);
        }
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(build_structured_mesh(0, 1, 1.0, 1.0), Err(Error::InvalidDimension(_))));
        assert!(matches!(build_structured_mesh(1, 1, -1.0, 1.0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn lattice_is_consistent() {
        let m = build_structured_mesh(3, 2, 3.0, 1.0).unwrap();
        let xs = m.lattice_coords();
        assert_eq!(xs[m.corner_to_lattice(5)], m.nodes[5]);
        assert_eq!(xs[1], [0.5, 0.0]);
        assert!(m.tag("middle").is_err());
    }
}
