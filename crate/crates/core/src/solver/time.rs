//! Backward-Euler time stepping with automatic step bisection.

use crate::error::{Error, Result};
use crate::fem::{solve_linear, Discretization, StepInput};
use crate::solver::newton::{newton_solve, NewtonConfig, NewtonProvider, NewtonReport};

/// Number of times a failing step may be split in half.
pub const MAX_BISECTIONS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeLoopState {
    pub t: f64,
    pub step: usize,
    pub x: Vec<f64>,
    /// Permeability coefficients frozen over the next step.
    pub permeability: Vec<f64>,
    /// `(t, E)` of every accepted state.
    pub energy: Vec<(f64, f64)>,
    pub newton_iterations: usize,
    pub bisections: usize,
}

impl TimeLoopState {
    pub fn new(disc: &Discretization, x: Vec<f64>) -> Result<Self> {
        let permeability = disc.permeability_at(&x)?;
        let e0 = disc.total_energy(&x)?;
        Ok(Self {
            t: 0.0,
            step: 0,
            x,
            permeability,
            energy: vec![(0.0, e0)],
            newton_iterations: 0,
            bisections: 0,
        })
    }
}

struct StepProblem<'a> {
    disc: &'a Discretization,
    previous: &'a [f64],
    permeability: &'a [f64],
    dt: f64,
}

impl StepProblem<'_> {
    fn input(&self) -> StepInput<'_> {
        StepInput { dt: self.dt, previous: self.previous, permeability: self.permeability }
    }
}

impl NewtonProvider for StepProblem<'_> {
    fn residual(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        self.disc.assemble_residual(x, &self.input())
    }

    fn correction(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        solve_linear(&self.disc.assemble_tangent(x, &self.input())?)
    }
}

/// One implicit solve over `dt` without bisection.
pub fn solve_step(
    disc: &Discretization,
    x: &[f64],
    permeability: &[f64],
    dt: f64,
    config: &NewtonConfig,
) -> Result<(Vec<f64>, NewtonReport)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep { dt });
    }
    let mut p = StepProblem { disc, previous: x, permeability, dt };
    newton_solve(&mut p, x.to_vec(), config)
}

fn retryable(e: &Error) -> bool {
    matches!(e.root(), Error::NewtonDiverged { .. }) || e.is_pointwise()
}

/// Advances `state` by `dt`, splitting the interval when Newton fails.
/// Every sub-step is accepted individually and recorded in the energy trace.
pub fn time_step(disc: &Discretization, state: &TimeLoopState, dt: f64, config: &NewtonConfig) -> Result<TimeLoopState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep { dt });
    }
    let mut s = state.clone();
    advance(disc, &mut s, dt, config, 0)?;
    Ok(s)
}

fn advance(disc: &Discretization, s: &mut TimeLoopState, dt: f64, config: &NewtonConfig, level: usize) -> Result<()> {
    match solve_step(disc, &s.x, &s.permeability, dt, config) {
        Ok((x, rep)) => {
            s.x = x;
            s.t += dt;
            s.step += 1;
            s.newton_iterations += rep.iterations;
            s.permeability = disc.permeability_at(&s.x)?;
            let e = disc.total_energy(&s.x)?;
            s.energy.push((s.t, e));
            Ok(())
        }
        Err(e) if retryable(&e) && level < MAX_BISECTIONS => {
            s.bisections += 1;
            advance(disc, s, 0.5 * dt, config, level + 1)?;
            advance(disc, s, 0.5 * dt, config, level + 1)
        }
        Err(e) => Err(e.context(format!("time step at t = {:e} with dt = {:e}", s.t, dt))),
    }
}

pub fn total_energy(disc: &Discretization, state: &TimeLoopState) -> Result<f64> {
    disc.total_energy(&state.x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissipationReport {
    /// `Eⁿ⁺¹ − Eⁿ` per accepted step.
    pub deltas: Vec<f64>,
    pub tolerance: f64,
    /// Steps (1-based) whose energy rose by more than the tolerance.
    pub violations: Vec<usize>,
}

impl DissipationReport {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Flags any step with `Eⁿ⁺¹ > Eⁿ + 1e-10 |E⁰|`.
pub fn dissipation_monitor(energy: &[(f64, f64)]) -> DissipationReport {
    let e0 = energy.first().map_or(0.0, |e| e.1.abs());
    let tolerance = 1e-10 * e0;
    let deltas: Vec<f64> = energy.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let violations = deltas
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > tolerance)
        .map(|(k, _)| k + 1)
        .collect();
    DissipationReport { deltas, tolerance, violations }
}
