//! Mixed discretization: biquadratic displacement, bilinear fluid mass and
//! a bilinear chemical-potential field per fluid.
//!
//! The chemical potential is carried as its own unknown, tied to the
//! constitutive value by an L² projection evaluated with the same
//! quadrature as the energy. Fluxes are driven by the gradient of that
//! field, which makes the discrete energy balance exact and lets drained
//! boundaries prescribe the potential directly.

use crate::constitutive::{FluidModel, PointResponse};
use crate::error::{Error, Result};
use crate::fem::dofmap::DofMap;
use crate::fem::mesh::{geometric_jacobian, Side};
use crate::fem::problem::{BoundaryCondition, Problem};
use crate::fem::quadrature::{gauss_1d, gauss_2d};
use crate::fem::shape::{shape_eval, Family};
use crate::fem::sparse::{CsrMatrix, SparseSystem};
use crate::tensor::{Tensor2, Vector2};

/// Precomputed shape data at one quadrature point.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPoint {
    /// Quadrature weight times the geometric Jacobian.
    pub weight: f64,
    pub x: [f64; 2],
    pub n1: [f64; 4],
    pub dn1: [[f64; 2]; 4],
    pub n2: [f64; 9],
    pub dn2: [[f64; 2]; 9],
}

/// Row scales of the assembled system.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaling {
    /// Multiplies the momentum rows (inverse of a stiffness).
    pub momentum: f64,
    /// Reference true density per fluid.
    pub density: Vec<f64>,
    /// Reference pressure (stiffness) per fluid.
    pub pressure: Vec<f64>,
}

/// What a time step needs besides the current iterate.
#[derive(Debug, Clone, Copy)]
pub struct StepInput<'a> {
    pub dt: f64,
    /// Unknowns at the start of the step.
    pub previous: &'a [f64],
    /// Permeability coefficient per `(element, point, fluid)`.
    pub permeability: &'a [f64],
}

/// Nodal post-processed fields on the corner nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalFields {
    pub displacement: Vec<[f64; 2]>,
    pub pressure: Vec<f64>,
    /// `[fluid][corner]`.
    pub fluid_pressure: Vec<Vec<f64>>,
    pub phi: Vec<Vec<f64>>,
    pub rho: Vec<f64>,
    pub rho_fluid: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Discretization {
    pub problem: Problem,
    pub dofs: DofMap,
    /// Quadrature data per element.
    pub points: Vec<Vec<QuadPoint>>,
    /// Prescribed chemical potential per `fluid * n_corners + corner`.
    pub drained_mu: Vec<Option<f64>>,
    pub scaling: Scaling,
    /// Consistent nodal forces of the tractions, by global dof.
    pub load: Vec<f64>,
    /// Consistent nodal injection rates, `[fluid][corner]` (kg/s per unit depth).
    pub injection: Vec<Vec<f64>>,
}

const NU: usize = 18;

/// Mobility of the pair `a`–`b` taken from the node with the higher
/// potential, and its derivative with respect to the nodal masses.
fn upstream(p: [f64; 4], mu: [f64; 4], a: usize, b: usize) -> (f64, [f64; 4]) {
    let mut d = [0.0; 4];
    if mu[a] > mu[b] {
        d[a] = 1.0;
        (p[a], d)
    } else if mu[b] > mu[a] {
        d[b] = 1.0;
        (p[b], d)
    } else {
        d[a] = 0.5;
        d[b] = 0.5;
        (0.5 * (p[a] + p[b]), d)
    }
}

fn slot_p(i: usize, a: usize) -> usize {
    NU + 8 * i + a
}

fn slot_mu(i: usize, a: usize) -> usize {
    NU + 8 * i + 4 + a
}

impl Discretization {
    /// Builds the discretization. `reference` gives `(density, stiffness)`
    /// per fluid for row scaling.
    pub fn new(problem: Problem, reference: &[(f64, f64)]) -> Result<Self> {
        problem.validate()?;
        let mesh = &problem.mesh;
        let nf = problem.model.fluids.len();
        if reference.len() != nf {
            return Err(Error::validation("reference", "one scale pair per fluid is required"));
        }
        let dofs = DofMap::new(mesh, nf, &problem.bcs)?;
        let rule = gauss_2d(3);
        let mut points = Vec::with_capacity(mesh.n_elements());
        for e in 0..mesh.n_elements() {
            let corners = mesh.element_corners(e);
            let mut pts = Vec::with_capacity(rule.len());
            for (xi, w) in &rule {
                let jac = geometric_jacobian(&corners, *xi);
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                if !(det > 0.0) {
                    return Err(Error::InvalidDimension(format!("element {e} has a non-positive geometric Jacobian")));
                }
                // ∇_X N = J⁻ᵀ ∇_ξ N
                let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
                let grad = |d: [f64; 2]| [d[0] * inv[0][0] + d[1] * inv[1][0], d[0] * inv[0][1] + d[1] * inv[1][1]];
                let s1 = shape_eval(Family::Bilinear, *xi);
                let s2 = shape_eval(Family::Biquadratic, *xi);
                let mut qp = QuadPoint {
                    weight: w * det,
                    x: mesh.map_point(e, *xi),
                    n1: [0.0; 4],
                    dn1: [[0.0; 2]; 4],
                    n2: [0.0; 9],
                    dn2: [[0.0; 2]; 9],
                };
                for a in 0..4 {
                    qp.n1[a] = s1.n[a];
                    qp.dn1[a] = grad(s1.dn[a]);
                }
                for a in 0..9 {
                    qp.n2[a] = s2.n[a];
                    qp.dn2[a] = grad(s2.dn[a]);
                }
                pts.push(qp);
            }
            points.push(pts);
        }

        let mut drained_mu = vec![None; dofs.drained.len()];
        for (k, d) in dofs.drained.iter().enumerate() {
            if let Some(p) = d {
                let i = k / dofs.n_corners;
                let mu = match &problem.model.fluids[i] {
                    FluidModel::IncompressibleLiquid(l) => p / l.rho_tilde,
                    f => f.chemical_potential(f.density_at_pressure(*p)?)?,
                };
                drained_mu[k] = Some(mu);
            }
        }

        let (_, shear) = problem.model.solid.lame();
        let scaling = Scaling {
            momentum: 1.0 / (problem.model.volume_fractions.phi0s() * shear),
            density: reference.iter().map(|r| r.0).collect(),
            pressure: reference.iter().map(|r| r.1).collect(),
        };

        let mut this = Self {
            problem,
            dofs,
            points,
            drained_mu,
            scaling,
            load: vec![],
            injection: vec![],
        };
        this.load = this.traction_load()?;
        this.injection = this.injection_rates()?;
        Ok(this)
    }

    pub fn n_dofs(&self) -> usize {
        self.dofs.n_total
    }

    fn n_fluids(&self) -> usize {
        self.dofs.n_fluids
    }

    pub fn points_per_element(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Global column index of every local slot of element `e`.
    fn element_dofs(&self, e: usize) -> Vec<usize> {
        let mesh = &self.problem.mesh;
        let q = mesh.quadratic_nodes(e);
        let c = mesh.elements[e];
        let nf = self.n_fluids();
        let mut out = vec![0; NU + 8 * nf];
        for a in 0..9 {
            for k in 0..2 {
                out[2 * a + k] = self.dofs.u(q[a], k);
            }
        }
        for i in 0..nf {
            for a in 0..4 {
                out[slot_p(i, a)] = self.dofs.p(i, c[a]);
                out[slot_mu(i, a)] = self.dofs.mu(i, c[a]);
            }
        }
        out
    }

    /// Global row and scale receiving each local equation slot.
    fn element_rows(&self, e: usize, dt: f64) -> Vec<Option<(usize, f64)>> {
        let mesh = &self.problem.mesh;
        let q = mesh.quadratic_nodes(e);
        let c = mesh.elements[e];
        let nf = self.n_fluids();
        let mut out = vec![None; NU + 8 * nf];
        for a in 0..9 {
            for k in 0..2 {
                let g = self.dofs.u(q[a], k);
                if self.dofs.fixed[g].is_none() {
                    out[2 * a + k] = Some((g, self.scaling.momentum));
                }
            }
        }
        for i in 0..nf {
            let (rho, stiff) = (self.scaling.density[i], self.scaling.pressure[i]);
            for a in 0..4 {
                let drained = self.dofs.is_drained(i, c[a]);
                if !drained {
                    out[slot_p(i, a)] = Some((self.dofs.p(i, c[a]), dt / rho));
                }
                let row = if drained { self.dofs.p(i, c[a]) } else { self.dofs.mu(i, c[a]) };
                out[slot_mu(i, a)] = Some((row, rho / stiff));
            }
        }
        out
    }

    fn gather(&self, x: &[f64], dofs: &[usize]) -> Vec<f64> {
        dofs.iter().map(|&g| x[g]).collect()
    }

    fn deformation(&self, local: &[f64], qp: &QuadPoint) -> Tensor2<f64> {
        let mut f = Tensor2::identity();
        for a in 0..9 {
            for k in 0..2 {
                for l in 0..2 {
                    f.0[k][l] += local[2 * a + k] * qp.dn2[a][l];
                }
            }
        }
        f
    }

    fn masses(&self, local: &[f64], qp: &QuadPoint) -> Vec<f64> {
        (0..self.n_fluids())
            .map(|i| (0..4).map(|a| qp.n1[a] * local[slot_p(i, a)]).sum())
            .collect()
    }

    /// Constitutive response at point `q` of element `e`.
    pub fn evaluate_point(&self, x: &[f64], e: usize, q: usize) -> Result<PointResponse<f64>> {
        let local = self.gather(x, &self.element_dofs(e));
        let qp = &self.points[e][q];
        let f = self.deformation(&local, qp);
        self.problem
            .model
            .evaluate(&f, &self.masses(&local, qp))
            .map_err(|err| err.at(e, q))
    }

    /// Visits the response at every quadrature point in a fixed order.
    pub fn for_each_point(
        &self,
        x: &[f64],
        mut visit: impl FnMut(usize, usize, &QuadPoint, &PointResponse<f64>),
    ) -> Result<()> {
        for e in 0..self.points.len() {
            let local = self.gather(x, &self.element_dofs(e));
            for (q, qp) in self.points[e].iter().enumerate() {
                let f = self.deformation(&local, qp);
                let r = self
                    .problem
                    .model
                    .evaluate(&f, &self.masses(&local, qp))
                    .map_err(|err| err.at(e, q))?;
                visit(e, q, qp, &r);
            }
        }
        Ok(())
    }

    /// Permeability coefficients at every point, with density-dependent
    /// laws evaluated at state `x`.
    pub fn permeability_at(&self, x: &[f64]) -> Result<Vec<f64>> {
        let nf = self.n_fluids();
        let mut out = Vec::with_capacity(self.points.len() * self.points_per_element() * nf);
        let perm = &self.problem.permeability;
        if perm.iter().all(|p| !p.depends_on_density()) {
            for _ in 0..self.points.len() * self.points_per_element() {
                out.extend(perm.iter().map(|p| p.coefficient(0.0)));
            }
            return Ok(out);
        }
        self.for_each_point(x, |_, _, _, r| {
            out.extend(perm.iter().zip(&r.rho).map(|(p, rho)| p.coefficient(*rho)));
        })?;
        Ok(out)
    }

    /// Residual and, on request, its Jacobian. Both are row scaled;
    /// constrained rows are `x − x*`.
    pub fn assemble(&self, x: &[f64], step: &StepInput, want_tangent: bool) -> Result<(Vec<f64>, Option<CsrMatrix>)> {
        let n = self.n_dofs();
        if x.len() != n || step.previous.len() != n {
            return Err(Error::validation("fields", format!("expected {n} unknowns")));
        }
        if !(step.dt > 0.0 && step.dt.is_finite()) {
            return Err(Error::InvalidTimeStep { dt: step.dt });
        }
        let nf = self.n_fluids();
        let nl = NU + 8 * nf;
        let nq = self.points_per_element();
        let gravity = self.problem.gravity;
        let dt = step.dt;
        let mut residual = vec![0.0; n];
        let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
        if want_tangent {
            triplets.reserve(self.points.len() * nl * nl + n);
        }

        let mut r = vec![0.0; nl];
        let mut k = vec![0.0; if want_tangent { nl * nl } else { 0 }];
        for e in 0..self.points.len() {
            let dofs = self.element_dofs(e);
            let rows = self.element_rows(e, dt);
            let local = self.gather(x, &dofs);
            let prev = self.gather(step.previous, &dofs);
            r.iter_mut().for_each(|v| *v = 0.0);
            k.iter_mut().for_each(|v| *v = 0.0);

            for (q, qp) in self.points[e].iter().enumerate() {
                let w = qp.weight;
                let f = self.deformation(&local, qp);
                let p0 = self.masses(&local, qp);
                let resp = self.problem.model.evaluate(&f, &p0).map_err(|err| err.at(e, q))?;
                let t = &resp.piola;

                // momentum
                for a in 0..9 {
                    for c in 0..2 {
                        let mut v = t.0[c][0] * qp.dn2[a][0] + t.0[c][1] * qp.dn2[a][1];
                        if let Some(g) = gravity {
                            v -= qp.n2[a] * g[c] * p0.iter().sum::<f64>();
                        }
                        r[2 * a + c] += w * v;
                    }
                }
                if want_tangent {
                    let tan = &resp.tangent;
                    for a in 0..9 {
                        for c in 0..2 {
                            let row = (2 * a + c) * nl;
                            for b in 0..9 {
                                for l in 0..2 {
                                    let mut v = 0.0;
                                    for ll in 0..2 {
                                        for m in 0..2 {
                                            v += tan.0[c][ll][l][m] * qp.dn2[a][ll] * qp.dn2[b][m];
                                        }
                                    }
                                    k[row + 2 * b + l] += w * v;
                                }
                            }
                            for i in 0..nf {
                                let dt_dp = &resp.dpiola_dp0[i];
                                let mut s = dt_dp.0[c][0] * qp.dn2[a][0] + dt_dp.0[c][1] * qp.dn2[a][1];
                                if let Some(g) = gravity {
                                    s -= qp.n2[a] * g[c];
                                }
                                for b in 0..4 {
                                    k[row + slot_p(i, b)] += w * s * qp.n1[b];
                                }
                            }
                        }
                    }
                }

                if nf == 0 {
                    continue;
                }
                let finv = f.inverse().ok_or(Error::NonPositiveJacobian { j: f.det() }).map_err(|err| err.at(e, q))?;
                let cinv = finv.matmul(&finv.transpose());
                for i in 0..nf {
                    let kc = step.permeability[(e * nq + q) * nf + i];
                    let pi = p0[i];
                    let mu: [f64; 4] = std::array::from_fn(|a| local[slot_mu(i, a)]);
                    let nodal: [f64; 4] = std::array::from_fn(|a| local[slot_p(i, a)]);
                    let grav = gravity.map(|g| f.transpose().apply(&Vector2::new(g[0], g[1])).scale(-1.0));
                    let cgrav = grav.map(|v| cinv.apply(&v));
                    let mu_i = resp.chemical_potential[i];
                    for a in 0..4 {
                        let dn_a = Vector2(qp.dn1[a]);
                        // upstream-weighted gradient seen by node a
                        let mut va = Vector2::zero();
                        for b in 0..4 {
                            if b != a {
                                va = va + Vector2(qp.dn1[b]).scale(upstream(nodal, mu, a, b).0 * (mu[b] - mu[a]));
                            }
                        }
                        let mut flux = cinv.apply(&va).scale(kc);
                        if let Some(cg) = cgrav {
                            flux = flux + cg.scale(pi * kc);
                        }
                        r[slot_p(i, a)] += w * (qp.n1[a] * (nodal[a] - prev[slot_p(i, a)]) / dt + dn_a.dot(&flux));
                        r[slot_mu(i, a)] += w * qp.n1[a] * (mu[a] - mu_i);
                        if !want_tangent {
                            continue;
                        }
                        let rt = slot_p(i, a) * nl;
                        let rm = slot_mu(i, a) * nl;
                        k[rt + slot_p(i, a)] += w * qp.n1[a] / dt;
                        k[rm + slot_mu(i, a)] += w * qp.n1[a];
                        for b in 0..4 {
                            let dn_b = Vector2(qp.dn1[b]);
                            let kab = w * kc * dn_a.dot(&cinv.apply(&dn_b));
                            if b != a {
                                let (lam, dlam) = upstream(nodal, mu, a, b);
                                k[rt + slot_mu(i, b)] += kab * lam;
                                k[rt + slot_mu(i, a)] -= kab * lam;
                                for (c, d) in dlam.iter().enumerate() {
                                    k[rt + slot_p(i, c)] += kab * d * (mu[b] - mu[a]);
                                }
                            }
                            if let Some(cg) = cgrav {
                                k[rt + slot_p(i, b)] += w * qp.n1[b] * kc * dn_a.dot(&cg);
                            }
                            for j in 0..nf {
                                k[rm + slot_p(j, b)] -= w * qp.n1[a] * resp.dmu_dp0[i][j] * qp.n1[b];
                            }
                        }
                        for b in 0..9 {
                            let dn_b = Vector2(qp.dn2[b]);
                            let z = cinv.apply(&dn_b);
                            for l in 0..2 {
                                // d(C⁻¹)/dF_lM contracted with ∇N_b
                                let fl = Vector2::new(finv.0[0][l], finv.0[1][l]);
                                let dcinv = |v: &Vector2<f64>| fl.scale(-z.dot(v)) - z.scale(fl.dot(v));
                                let mut dv = dcinv(&va);
                                if let (Some(g), Some(gv)) = (gravity, grav) {
                                    dv = dv + (dcinv(&gv) - z.scale(g[l])).scale(pi);
                                }
                                k[rt + 2 * b + l] += w * kc * dn_a.dot(&dv);
                                let dmf = &resp.dmu_df[i];
                                let s = dmf.0[l][0] * dn_b.0[0] + dmf.0[l][1] * dn_b.0[1];
                                k[rm + 2 * b + l] -= w * qp.n1[a] * s;
                            }
                        }
                    }
                }
            }

            for (s, row) in rows.iter().enumerate() {
                if let Some((g, scale)) = row {
                    residual[*g] += scale * r[s];
                    if want_tangent {
                        for (col, &gc) in dofs.iter().enumerate() {
                            let v = k[s * nl + col];
                            if v != 0.0 {
                                triplets.push((*g, gc, scale * v));
                            }
                        }
                    }
                }
            }
        }

        // external loads
        for (g, f) in self.load.iter().enumerate() {
            if *f != 0.0 && self.dofs.fixed[g].is_none() {
                residual[g] -= self.scaling.momentum * f;
            }
        }
        for i in 0..nf {
            for c in 0..self.dofs.n_corners {
                let rate = self.injection[i][c];
                if rate != 0.0 && !self.dofs.is_drained(i, c) {
                    residual[self.dofs.p(i, c)] -= dt / self.scaling.density[i] * rate;
                }
            }
        }

        // constraints
        for (g, fixed) in self.dofs.fixed.iter().enumerate() {
            if let Some(v) = fixed {
                residual[g] = x[g] - v;
                if want_tangent {
                    triplets.push((g, g, 1.0));
                }
            }
        }
        for (kk, mu) in self.drained_mu.iter().enumerate() {
            if let Some(mu) = mu {
                let (i, c) = (kk / self.dofs.n_corners, kk % self.dofs.n_corners);
                let g = self.dofs.mu(i, c);
                residual[g] = x[g] - mu;
                if want_tangent {
                    triplets.push((g, g, 1.0));
                }
            }
        }

        let matrix = want_tangent.then(|| CsrMatrix::from_triplets(n, triplets));
        Ok((residual, matrix))
    }

    pub fn assemble_residual(&self, x: &[f64], step: &StepInput) -> Result<Vec<f64>> {
        Ok(self.assemble(x, step, false)?.0)
    }

    /// Newton system `K δ = −R`.
    pub fn assemble_tangent(&self, x: &[f64], step: &StepInput) -> Result<SparseSystem> {
        let (r, k) = self.assemble(x, step, true)?;
        Ok(SparseSystem {
            matrix: k.expect("tangent requested"),
            rhs: r.iter().map(|v| -v).collect(),
        })
    }

    /// Edge parameter interval of `edge` inside the flux segment.
    fn clipped_interval(&self, e: usize, side: Side, segment: Option<(f64, f64)>) -> Option<(f64, f64)> {
        let Some((center, width)) = segment else {
            return Some((-1.0, 1.0));
        };
        let axis = match side {
            Side::Bottom | Side::Top => 0,
            Side::Left | Side::Right => 1,
        };
        let mesh = &self.problem.mesh;
        let t0 = mesh.map_point(e, side.local_point(-1.0))[axis];
        let t1 = mesh.map_point(e, side.local_point(1.0))[axis];
        let to_s = |t: f64| -1.0 + 2.0 * (t - t0) / (t1 - t0);
        let (a, b) = (to_s(center - 0.5 * width), to_s(center + 0.5 * width));
        let (lo, hi) = (a.min(b).max(-1.0), a.max(b).min(1.0));
        (hi > lo).then_some((lo, hi))
    }

    /// Integrates `N_a g(s)` along an edge: `visit(local point, dS weight)`.
    fn edge_points(&self, e: usize, side: Side, lo: f64, hi: f64, n: usize, mut visit: impl FnMut([f64; 2], f64)) {
        let corners = self.problem.mesh.element_corners(e);
        let axis = match side {
            Side::Bottom | Side::Top => 0,
            Side::Left | Side::Right => 1,
        };
        for &(s, w) in gauss_1d(n) {
            let sp = 0.5 * (lo + hi) + 0.5 * (hi - lo) * s;
            let xi = side.local_point(sp);
            let jac = geometric_jacobian(&corners, xi);
            let ds = (jac[0][axis].powi(2) + jac[1][axis].powi(2)).sqrt();
            visit(xi, w * 0.5 * (hi - lo) * ds);
        }
    }

    fn traction_load(&self) -> Result<Vec<f64>> {
        let mesh = &self.problem.mesh;
        let mut load = vec![0.0; self.n_dofs()];
        for bc in &self.problem.bcs {
            if let BoundaryCondition::Traction { tag, traction } = bc {
                for edge in mesh.tag(tag)? {
                    let q = mesh.quadratic_nodes(edge.element);
                    self.edge_points(edge.element, edge.side, -1.0, 1.0, 3, |xi, w| {
                        let s = shape_eval(Family::Biquadratic, xi);
                        for a in edge.side.quadratic_nodes() {
                            for c in 0..2 {
                                load[self.dofs.u(q[a], c)] += w * s.n[a] * traction[c];
                            }
                        }
                    });
                }
            }
        }
        Ok(load)
    }

    fn injection_rates(&self) -> Result<Vec<Vec<f64>>> {
        let mesh = &self.problem.mesh;
        let mut out = vec![vec![0.0; self.dofs.n_corners]; self.n_fluids()];
        for bc in &self.problem.bcs {
            if let BoundaryCondition::MassFlux { tag, fluid, rate, segment } = bc {
                for edge in mesh.tag(tag)? {
                    let Some((lo, hi)) = self.clipped_interval(edge.element, edge.side, *segment) else {
                        continue;
                    };
                    let c = mesh.elements[edge.element];
                    let target = &mut out[*fluid];
                    self.edge_points(edge.element, edge.side, lo, hi, 2, |xi, w| {
                        let s = shape_eval(Family::Bilinear, xi);
                        for a in edge.side.linear_nodes() {
                            target[c[a]] += w * s.n[a] * rate;
                        }
                    });
                }
            }
        }
        Ok(out)
    }

    /// Total prescribed injection rate of fluid `i`, kg/s per unit depth.
    pub fn injection_rate(&self, i: usize) -> f64 {
        self.injection[i].iter().sum()
    }

    /// `∫ P₀ᵢ dΩ₀`.
    pub fn fluid_mass(&self, x: &[f64], i: usize) -> f64 {
        let mut total = 0.0;
        for e in 0..self.points.len() {
            let c = self.problem.mesh.elements[e];
            for qp in &self.points[e] {
                let p: f64 = (0..4).map(|a| qp.n1[a] * x[self.dofs.p(i, c[a])]).sum();
                total += qp.weight * p;
            }
        }
        total
    }

    /// Discrete free energy: stored energy, minus gravitational potential,
    /// minus the work of dead loads and of the drained reservoirs.
    pub fn total_energy(&self, x: &[f64]) -> Result<f64> {
        let gravity = self.problem.gravity;
        let nf = self.n_fluids();
        let mut stored = 0.0;
        let mut reservoir = 0.0;
        for e in 0..self.points.len() {
            let dofs = self.element_dofs(e);
            let local = self.gather(x, &dofs);
            let c = self.problem.mesh.elements[e];
            for (q, qp) in self.points[e].iter().enumerate() {
                let f = self.deformation(&local, qp);
                let p0 = self.masses(&local, qp);
                let resp = self.problem.model.evaluate(&f, &p0).map_err(|err| err.at(e, q))?;
                let mut w0 = resp.energy;
                if let Some(g) = gravity {
                    let mut pos = qp.x;
                    for a in 0..9 {
                        pos[0] += qp.n2[a] * local[2 * a];
                        pos[1] += qp.n2[a] * local[2 * a + 1];
                    }
                    w0 -= p0.iter().sum::<f64>() * (g[0] * pos[0] + g[1] * pos[1]);
                }
                stored += qp.weight * w0;
                for i in 0..nf {
                    for a in 0..4 {
                        if let Some(mu) = self.drained_mu[i * self.dofs.n_corners + c[a]] {
                            reservoir += mu * qp.weight * qp.n1[a] * local[slot_p(i, a)];
                        }
                    }
                }
            }
        }
        let work: f64 = self.load.iter().zip(x).map(|(f, u)| f * u).sum();
        Ok(stored - reservoir - work)
    }

    /// `∫ Σᵢ P₀ᵢ ∇η·C⁻¹k∇η dΩ₀`, the instantaneous dissipation rate.
    pub fn dissipation(&self, x: &[f64], permeability: &[f64]) -> Result<f64> {
        let nf = self.n_fluids();
        let nq = self.points_per_element();
        let mut total = 0.0;
        for e in 0..self.points.len() {
            let local = self.gather(x, &self.element_dofs(e));
            for (q, qp) in self.points[e].iter().enumerate() {
                let f = self.deformation(&local, qp);
                let finv = f.inverse().ok_or(Error::NonPositiveJacobian { j: f.det() })?;
                let cinv = finv.matmul(&finv.transpose());
                let p0 = self.masses(&local, qp);
                for i in 0..nf {
                    let mut geta = Vector2::zero();
                    for a in 0..4 {
                        geta.0[0] += qp.dn1[a][0] * local[slot_mu(i, a)];
                        geta.0[1] += qp.dn1[a][1] * local[slot_mu(i, a)];
                    }
                    if let Some(g) = self.problem.gravity {
                        geta = geta - f.transpose().apply(&Vector2::new(g[0], g[1]));
                    }
                    let k = cinv.scale(permeability[(e * nq + q) * nf + i]);
                    total += qp.weight * crate::constitutive::dissipation_density(&geta, p0[i], &k);
                }
            }
        }
        Ok(total)
    }

    /// Uniform undeformed state with the given fluid masses; the chemical
    /// potentials are set to their constitutive values.
    pub fn uniform_state(&self, p0: &[f64]) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.n_dofs()];
        let resp = self.problem.model.evaluate(&Tensor2::identity(), p0)?;
        for i in 0..self.n_fluids() {
            for c in 0..self.dofs.n_corners {
                x[self.dofs.p(i, c)] = p0[i];
                x[self.dofs.mu(i, c)] = resp.chemical_potential[i];
            }
        }
        for (g, f) in self.dofs.fixed.iter().enumerate() {
            if let Some(v) = f {
                x[g] = *v;
            }
        }
        Ok(x)
    }

    /// Corner-node fields, averaging the response of adjacent elements.
    pub fn nodal_fields(&self, x: &[f64]) -> Result<NodalFields> {
        let mesh = &self.problem.mesh;
        let nc = mesh.n_corners();
        let nf = self.n_fluids();
        let mut count = vec![0usize; nc];
        let mut out = NodalFields {
            displacement: vec![[0.0; 2]; nc],
            pressure: vec![0.0; nc],
            fluid_pressure: vec![vec![0.0; nc]; nf],
            phi: vec![vec![0.0; nc]; nf],
            rho: vec![0.0; nc],
            rho_fluid: vec![vec![0.0; nc]; nf],
        };
        for c in 0..nc {
            let l = mesh.corner_to_lattice(c);
            out.displacement[c] = [x[self.dofs.u(l, 0)], x[self.dofs.u(l, 1)]];
        }
        for e in 0..mesh.n_elements() {
            let local = self.gather(x, &self.element_dofs(e));
            let corners = mesh.elements[e];
            let geo = mesh.element_corners(e);
            for (a, xi) in crate::fem::shape::BILINEAR_CORNERS.iter().enumerate() {
                let jac = geometric_jacobian(&geo, *xi);
                let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
                let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
                let s2 = shape_eval(Family::Biquadratic, *xi);
                let mut f = Tensor2::identity();
                for b in 0..9 {
                    let d = s2.dn[b];
                    let g = [d[0] * inv[0][0] + d[1] * inv[1][0], d[0] * inv[0][1] + d[1] * inv[1][1]];
                    for k in 0..2 {
                        for l in 0..2 {
                            f.0[k][l] += local[2 * b + k] * g[l];
                        }
                    }
                }
                let p0: Vec<f64> = (0..nf).map(|i| local[slot_p(i, a)]).collect();
                let c = corners[a];
                let r = match self.problem.model.evaluate(&f, &p0) {
                    Ok(r) => r,
                    // inadmissible interpolated corner state: nearest quadrature point
                    Err(err) if err.is_pointwise() => {
                        let node = mesh.nodes[c];
                        let d = |q: &QuadPoint| (q.x[0] - node[0]).powi(2) + (q.x[1] - node[1]).powi(2);
                        let pts = &self.points[e];
                        let q = (0..pts.len()).min_by(|&i, &j| d(&pts[i]).total_cmp(&d(&pts[j]))).unwrap_or(0);
                        self.evaluate_point(x, e, q)?
                    }
                    Err(err) => return Err(err.at(e, a)),
                };
                count[c] += 1;
                out.pressure[c] += r.pressure;
                let mut rho_mix = 0.0;
                for i in 0..nf {
                    out.fluid_pressure[i][c] += r.fluid_pressures[i];
                    out.phi[i][c] += r.phi[i];
                    out.rho_fluid[i][c] += r.rho[i];
                    rho_mix += r.phi[i] * r.rho[i];
                }
                out.rho[c] += rho_mix;
            }
        }
        for c in 0..nc {
            let n = count[c] as f64;
            out.pressure[c] /= n;
            out.rho[c] /= n;
            for i in 0..nf {
                out.fluid_pressure[i][c] /= n;
                out.phi[i][c] /= n;
                out.rho_fluid[i][c] /= n;
            }
        }
        Ok(out)
    }
}
