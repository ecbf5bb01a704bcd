//! Lagrange shape functions on the reference square `[−1, 1]²`.

/// Interpolation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Four corner nodes, counterclockwise from `(−1, −1)`.
    Bilinear,
    /// Nine nodes in tensor order: node `3b + a` sits at `(a − 1, b − 1)`.
    Biquadratic,
}

impl Family {
    pub fn nodes(self) -> usize {
        match self {
            Family::Bilinear => 4,
            Family::Biquadratic => 9,
        }
    }

    /// Local coordinates of node `a`.
    pub fn node_coords(self, a: usize) -> [f64; 2] {
        match self {
            Family::Bilinear => BILINEAR_CORNERS[a],
            Family::Biquadratic => [(a % 3) as f64 - 1.0, (a / 3) as f64 - 1.0],
        }
    }
}

pub const BILINEAR_CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

/// Values and local gradients of all shape functions of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeValues {
    pub n: Vec<f64>,
    pub dn: Vec<[f64; 2]>,
}

pub(crate) fn quadratic_1d(x: f64) -> ([f64; 3], [f64; 3]) {
    (
        [0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)],
        [x - 0.5, -2.0 * x, x + 0.5],
    )
}

pub fn shape_eval(family: Family, xi: [f64; 2]) -> ShapeValues {
    match family {
        Family::Bilinear => {
            let mut n = Vec::with_capacity(4);
            let mut dn = Vec::with_capacity(4);
            for c in BILINEAR_CORNERS {
                let (a, b) = (1.0 + c[0] * xi[0], 1.0 + c[1] * xi[1]);
                n.push(0.25 * a * b);
                dn.push([0.25 * c[0] * b, 0.25 * a * c[1]]);
            }
            ShapeValues { n, dn }
        }
        Family::Biquadratic => {
            let (lx, dx) = quadratic_1d(xi[0]);
            let (ly, dy) = quadratic_1d(xi[1]);
            let mut n = Vec::with_capacity(9);
            let mut dn = Vec::with_capacity(9);
            for b in 0..3 {
                for a in 0..3 {
                    n.push(lx[a] * ly[b]);
                    dn.push([dx[a] * ly[b], lx[a] * dy[b]]);
                }
            }
            ShapeValues { n, dn }
        }
    }
}
