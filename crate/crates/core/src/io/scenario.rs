//! Scenario orchestration: build, step, sample, report.

use std::path::{Path, PathBuf};

use crate::constitutive::FluidModel;
use crate::error::{Error, Result};
use crate::fem::{build_structured_mesh, Discretization, NodalFields, Problem};
use crate::io::config::{ScenarioConfig, Verification, STANDARD_GRAVITY};
use crate::io::output::{write_csv, write_vtk, Series};
use crate::io::presets::consolidation_params;
use crate::solver::{dissipation_monitor, time_step, DissipationReport, NewtonConfig, TimeLoopState};
use crate::verification::{
    l2_error, mandel_alpha_roots, mandel_constants, mandel_pressure, mandel_scaling, terzaghi_pressure,
    terzaghi_scaling, MandelParams, DEFAULT_TERMS,
};

/// Overrides applied on top of a configuration.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub dt: Option<f64>,
    /// Multiplies both element counts.
    pub refine: Option<usize>,
}

impl RunOptions {
    pub fn apply(&self, config: &ScenarioConfig) -> Result<ScenarioConfig> {
        let mut c = config.clone();
        if let Some(dt) = self.dt {
            c.time.dt = dt;
        }
        if let Some(r) = self.refine {
            if r == 0 {
                return Err(Error::validation("refine", "must be at least 1"));
            }
            c.geometry.nx *= r;
            c.geometry.ny *= r;
        }
        c.validate()?;
        Ok(c)
    }
}

/// One accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub energy: f64,
    pub max_pressure: f64,
    /// Smallest fluid volume fraction over all quadrature points.
    pub min_phi: f64,
    pub newton_iterations: usize,
    /// Largest `|pᵢ − pⱼ| / max(pᵢ, pⱼ)` over quadrature points.
    pub closure_mismatch: f64,
    /// `∫ P₀ᵢ` per fluid.
    pub mass: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    pub t: f64,
    pub pressure: f64,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSeries {
    pub name: String,
    /// Corner node nearest to the requested point.
    pub node: usize,
    pub point: [f64; 2],
    pub samples: Vec<ProbeSample>,
}

/// Nodal fields at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub t: f64,
    pub fields: NodalFields,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub name: String,
    pub steps: Vec<StepRecord>,
    pub probes: Vec<ProbeSeries>,
    pub frames: Vec<Frame>,
    pub dissipation: DissipationReport,
    pub newton_iterations: usize,
    pub bisections: usize,
    pub checks: Vec<CheckResult>,
    /// For van der Waals fluids: whether any output frame has a
    /// pressure–specific-volume trace along the centre line that is not
    /// monotone (the signature of a phase change).
    pub non_monotone_trace: Option<bool>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub struct Simulation {
    pub config: ScenarioConfig,
    pub disc: Discretization,
    pub state: TimeLoopState,
    pub newton: NewtonConfig,
}

pub fn default_newton() -> NewtonConfig {
    NewtonConfig { rel_tol: 1e-10, abs_tol: 1e-13, max_iter: 30, max_halvings: 10 }
}

impl Simulation {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let g = &config.geometry;
        let mesh = build_structured_mesh(g.nx, g.ny, g.lx, g.ly)?;
        let model = config.mixture()?;
        let p = config.initial_pressure;
        let mut reference = Vec::new();
        for f in &model.fluids {
            reference.push(match f {
                FluidModel::IncompressibleLiquid(l) => {
                    (l.rho_tilde, config.solid.phi0 * (config.solid.lambda + 2.0 * config.solid.mu))
                }
                f => {
                    let rho = f.density_at_pressure(p)?;
                    (rho, rho * f.pressure_slope(rho)?)
                }
            });
        }
        let phi0: Vec<f64> = config.fluids.iter().map(|f| f.phi0).collect();
        let p0 = model.initial_masses(&phi0, p)?;
        let problem = Problem {
            mesh,
            model,
            permeability: config.fluids.iter().map(|f| f.permeability).collect(),
            gravity: config.gravity.then_some([0.0, -STANDARD_GRAVITY]),
            bcs: config.boundary_conditions()?,
        };
        let disc = Discretization::new(problem, &reference)?;
        let x = disc.uniform_state(&p0)?;
        let state = TimeLoopState::new(&disc, x)?;
        Ok(Self { config, disc, state, newton: default_newton() })
    }

    /// Output times in ascending order.
    pub fn output_times(&self) -> Vec<f64> {
        let t = &self.config.time;
        if t.output_times.is_empty() {
            (1..=t.n_outputs).map(|k| t.t_end * k as f64 / t.n_outputs as f64).collect()
        } else {
            let mut v = t.output_times.clone();
            v.sort_by(f64::total_cmp);
            v
        }
    }

    /// Length of the next step, shortened to land on `target`.
    fn next_dt(&self, target: f64) -> f64 {
        let t = &self.config.time;
        let dt = match (self.state.step, t.dt0) {
            (0, Some(d0)) => d0,
            _ => t.dt,
        };
        let remaining = target - self.state.t;
        if dt >= remaining * (1.0 - 1e-9) {
            remaining
        } else if dt > 0.5 * remaining {
            // avoid a sliver step just before the target
            0.5 * remaining
        } else {
            dt
        }
    }

    /// Takes one step towards `target` and returns its record.
    pub fn step_towards(&mut self, target: f64) -> Result<StepRecord> {
        let dt = self.next_dt(target);
        let next = time_step(&self.disc, &self.state, dt, &self.newton)?;
        let iterations = next.newton_iterations - self.state.newton_iterations;
        self.state = next;
        if self.state.t > target - 1e-12 * target.abs().max(1.0) {
            self.state.t = target;
            if let Some(last) = self.state.energy.last_mut() {
                last.0 = target;
            }
        }
        self.record(dt, iterations)
    }

    fn record(&self, dt: f64, iterations: usize) -> Result<StepRecord> {
        let mut max_pressure = f64::NEG_INFINITY;
        let mut min_phi = f64::INFINITY;
        let mut closure: f64 = 0.0;
        let models = &self.disc.problem.model.fluids;
        self.disc.for_each_point(&self.state.x, |_, _, _, r| {
            max_pressure = max_pressure.max(r.pressure);
            for (i, phi) in r.phi.iter().enumerate() {
                min_phi = min_phi.min(*phi);
                for j in 0..i {
                    if models[i].is_compressible() && models[j].is_compressible() {
                        let (a, b) = (r.fluid_pressures[i], r.fluid_pressures[j]);
                        let scale = a.abs().max(b.abs());
                        if scale > 0.0 {
                            closure = closure.max((a - b).abs() / scale);
                        }
                    }
                }
            }
        })?;
        Ok(StepRecord {
            step: self.state.step,
            t: self.state.t,
            dt,
            energy: self.state.energy.last().map_or(f64::NAN, |e| e.1),
            max_pressure,
            min_phi,
            newton_iterations: iterations,
            closure_mismatch: closure,
            mass: (0..self.disc.dofs.n_fluids).map(|i| self.disc.fluid_mass(&self.state.x, i)).collect(),
        })
    }

    pub fn advance_to(&mut self, target: f64, mut on_step: impl FnMut(&StepRecord)) -> Result<()> {
        while self.state.t < target {
            let rec = self.step_towards(target)?;
            on_step(&rec);
        }
        Ok(())
    }

    pub fn nodal_fields(&self) -> Result<NodalFields> {
        self.disc.nodal_fields(&self.state.x)
    }

    /// Index of the corner node nearest to `point`.
    pub fn nearest_corner(&self, point: [f64; 2]) -> usize {
        let nodes = &self.disc.problem.mesh.nodes;
        let d = |n: &[f64; 2]| (n[0] - point[0]).powi(2) + (n[1] - point[1]).powi(2);
        (0..nodes.len()).min_by(|&a, &b| d(&nodes[a]).total_cmp(&d(&nodes[b]))).unwrap_or(0)
    }
}

/// Numeric and analytic `p̄` along the verification line at time `t`.
pub fn consolidation_profile(config: &ScenarioConfig, fields: &NodalFields, nodes: &[[f64; 2]], t: f64) -> Result<Vec<[f64; 3]>> {
    let base = consolidation_params(config)?;
    let g = &config.geometry;
    let mut out = Vec::new();
    match config.verification {
        Verification::Terzaghi => {
            let (ps, ts) = terzaghi_scaling(&base);
            for (c, x) in nodes.iter().enumerate() {
                if x[0] == 0.0 {
                    let z = (g.ly - x[1]) / g.ly;
                    out.push([z, fields.pressure[c] / ps, terzaghi_pressure(z, t / ts, DEFAULT_TERMS)]);
                }
            }
        }
        Verification::Mandel => {
            let params = MandelParams { base, a: g.lx };
            let (ps, ts) = mandel_scaling(&params);
            let k = mandel_constants(&params);
            let roots = mandel_alpha_roots(k.nu, k.nu_u, DEFAULT_TERMS)?;
            for (c, x) in nodes.iter().enumerate() {
                if x[1] == 0.0 {
                    let xb = x[0] / g.lx;
                    out.push([xb, fields.pressure[c] / ps, mandel_pressure(xb, t / ts, &roots)]);
                }
            }
        }
        Verification::None => return Err(Error::validation("verification", "scenario has no closed-form solution")),
    }
    out.sort_by(|a, b| a[0].total_cmp(&b[0]));
    Ok(out)
}

/// Relative L² error of a profile from [`consolidation_profile`].
pub fn profile_error(profile: &[[f64; 3]]) -> Result<f64> {
    let samples: Vec<(f64, f64)> = profile.iter().map(|r| (r[2], r[1])).collect();
    Ok(l2_error(&samples, |a| *a)?.value)
}

/// Corner nodes on the vertical line through the middle of the domain,
/// top first.
pub fn centerline(config: &ScenarioConfig, nodes: &[[f64; 2]]) -> Vec<usize> {
    let xm = 0.5 * config.geometry.lx;
    let d = nodes.iter().map(|n| (n[0] - xm).abs()).fold(f64::INFINITY, f64::min);
    let mut line: Vec<usize> = (0..nodes.len()).filter(|&c| (nodes[c][0] - xm).abs() <= d + 1e-12).collect();
    line.sort_by(|&a, &b| nodes[b][1].total_cmp(&nodes[a][1]));
    line
}

/// `(1/ρ, p)` of fluid `i` at the given corners.
pub fn pressure_volume_trace(fields: &NodalFields, corners: &[usize], i: usize) -> Vec<[f64; 2]> {
    corners.iter().map(|&c| [1.0 / fields.rho_fluid[i][c], fields.fluid_pressure[i][c]]).collect()
}

/// True when pressure decreases strictly with specific volume along the trace.
pub fn is_monotone_trace(trace: &[[f64; 2]]) -> bool {
    let mut t = trace.to_vec();
    t.sort_by(|a, b| a[0].total_cmp(&b[0]));
    t.windows(2).all(|w| w[1][0] == w[0][0] || w[1][1] < w[0][1])
}

pub const TERZAGHI_TOLERANCE: f64 = 0.02;
pub const MANDEL_TOLERANCE: f64 = 0.03;

fn io_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })
}

/// Runs a scenario to `t_end`, writing outputs when a directory is given.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> Result<RunReport> {
    let config = options.apply(config)?;
    let mut sim = Simulation::new(config.clone())?;
    if let Some(dir) = &options.out_dir {
        io_dir(dir)?;
    }
    let nodes = sim.disc.problem.mesh.nodes.clone();
    let mut probes: Vec<ProbeSeries> = config
        .probes
        .iter()
        .map(|p| {
            let node = sim.nearest_corner(p.point);
            ProbeSeries { name: p.name.clone(), node, point: nodes[node], samples: vec![] }
        })
        .collect();
    let mut steps = Vec::new();
    let mut frames = Vec::new();
    let mut checks = Vec::new();
    let sample = |sim: &Simulation, probes: &mut Vec<ProbeSeries>| -> Result<NodalFields> {
        let f = sim.nodal_fields()?;
        for p in probes.iter_mut() {
            p.samples.push(ProbeSample {
                t: sim.state.t,
                pressure: f.pressure[p.node],
                phi: f.phi.iter().map(|v| v[p.node]).collect(),
            });
        }
        Ok(f)
    };
    let context = |e: Error| e.context(format!("scenario `{}`", config.name));
    sample(&sim, &mut probes).map_err(context)?;
    for (k, t_out) in sim.output_times().into_iter().enumerate() {
        loop {
            if sim.state.t >= t_out {
                break;
            }
            let rec = sim.step_towards(t_out).map_err(context)?;
            steps.push(rec);
            if sim.state.t < t_out {
                sample(&sim, &mut probes).map_err(context)?;
            }
        }
        let fields = sample(&sim, &mut probes).map_err(context)?;
        if config.verification != Verification::None {
            let profile = consolidation_profile(&config, &fields, &nodes, t_out)?;
            let err = profile_error(&profile)?;
            let limit = match config.verification {
                Verification::Mandel => MANDEL_TOLERANCE,
                _ => TERZAGHI_TOLERANCE,
            };
            checks.push(CheckResult { name: format!("L2 error at t = {t_out:.6e} s"), value: err, limit, passed: err <= limit });
            if let Some(dir) = &options.out_dir {
                let series = Series {
                    columns: vec!["coordinate".into(), "p_bar_numeric".into(), "p_bar_analytic".into()],
                    rows: profile.iter().map(|r| r.to_vec()).collect(),
                };
                write_csv(&series, &dir.join(format!("profile_{k:03}.csv")))?;
            }
        }
        if let Some(dir) = &options.out_dir {
            let names: Vec<String> = config.fluids.iter().map(|f| f.name.clone()).collect();
            write_vtk(&sim.disc.problem.mesh, &fields, &names, &dir.join(format!("fields_{k:03}.vtk")))?;
        }
        frames.push(Frame { t: t_out, fields });
    }
    let dissipation = dissipation_monitor(&sim.state.energy);
    let vdw: Vec<usize> = (0..config.fluids.len())
        .filter(|&i| matches!(config.fluids[i].model, FluidModel::VanDerWaals(_)))
        .collect();
    let line = centerline(&config, &nodes);
    let non_monotone_trace = (!vdw.is_empty()).then(|| {
        frames.iter().any(|f| vdw.iter().any(|&i| !is_monotone_trace(&pressure_volume_trace(&f.fields, &line, i))))
    });
    let report = RunReport {
        name: config.name.clone(),
        steps,
        probes,
        frames,
        dissipation,
        newton_iterations: sim.state.newton_iterations,
        bisections: sim.state.bisections,
        checks,
        non_monotone_trace,
    };
    if let Some(dir) = &options.out_dir {
        write_csv(&step_series(&report, &config), &dir.join("steps.csv"))?;
        if !report.probes.is_empty() {
            write_csv(&probe_series(&report, &config), &dir.join("probes.csv"))?;
        }
    }
    Ok(report)
}

pub fn step_series(report: &RunReport, config: &ScenarioConfig) -> Series {
    let mut columns: Vec<String> =
        ["step", "t", "dt", "energy", "max_p", "min_phi", "newton_iterations", "closure_mismatch"].map(String::from).to_vec();
    columns.extend(config.fluids.iter().map(|f| format!("mass_{}", f.name)));
    let rows = report
        .steps
        .iter()
        .map(|s| {
            let mut r = vec![s.step as f64, s.t, s.dt, s.energy, s.max_pressure, s.min_phi, s.newton_iterations as f64, s.closure_mismatch];
            r.extend(&s.mass);
            r
        })
        .collect();
    Series { columns, rows }
}

pub fn probe_series(report: &RunReport, config: &ScenarioConfig) -> Series {
    let mut columns = vec!["t".to_string()];
    for p in &report.probes {
        columns.push(format!("p_{}", p.name));
        columns.extend(config.fluids.iter().map(|f| format!("phi_{}_{}", f.name, p.name)));
    }
    let n = report.probes.first().map_or(0, |p| p.samples.len());
    let rows = (0..n)
        .map(|k| {
            let mut r = vec![report.probes[0].samples[k].t];
            for p in &report.probes {
                r.push(p.samples[k].pressure);
                r.extend(&p.samples[k].phi);
            }
            r
        })
        .collect();
    Series { columns, rows }
}
