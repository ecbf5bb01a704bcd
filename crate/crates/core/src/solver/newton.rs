//! Damped Newton iteration.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_iter: 25,
            max_halvings: 10,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::validation("newton", "tolerances must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("newton", "max_iter must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonReport {
    pub iterations: usize,
    pub initial_norm: f64,
    pub residual_norm: f64,
    pub halvings: usize,
}

/// Residual and linearized correction of a nonlinear system.
pub trait NewtonProvider {
    fn residual(&mut self, x: &[f64]) -> Result<Vec<f64>>;
    /// Solves `K(x) δ = −R(x)`.
    fn correction(&mut self, x: &[f64]) -> Result<Vec<f64>>;
}

/// Corrections below this fraction of the iterate are roundoff.
const STAGNATION: f64 = 1e-12;

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Pointwise failures of a trial state (inverted elements, vanished phases,
/// inadmissible densities) are treated as an infinitely large residual so
/// the line search backs off instead of aborting.
fn recoverable(e: &Error) -> bool {
    e.is_pointwise()
}

pub fn newton_solve<P: NewtonProvider>(provider: &mut P, guess: Vec<f64>, config: &NewtonConfig) -> Result<(Vec<f64>, NewtonReport)> {
    config.validate()?;
    let mut x = guess;
    let mut r = provider.residual(&x)?;
    let r0 = norm(&r);
    if !r0.is_finite() {
        return Err(Error::NewtonDiverged { iterations: 0, residual: r0 });
    }
    let mut rn = r0;
    let mut halvings = 0;
    let converged = |rn: f64| rn <= config.abs_tol || rn <= config.rel_tol * r0;
    if rn == 0.0 || converged(rn) {
        return Ok((x, NewtonReport { iterations: 0, initial_norm: r0, residual_norm: rn, halvings: 0 }));
    }
    for it in 1..=config.max_iter {
        let delta = match provider.correction(&x) {
            Ok(d) => d,
            Err(e) if matches!(e.root(), Error::SingularMatrix(_)) => {
                return Err(Error::NewtonDiverged { iterations: it, residual: rn }.context(e.to_string()))
            }
            Err(e) => return Err(e),
        };
        let mut step = 1.0;
        let mut accepted = None;
        for h in 0..=config.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + step * d).collect();
            match provider.residual(&trial) {
                Ok(rt) => {
                    let n = norm(&rt);
                    if n.is_finite() && (n < rn || converged(n)) {
                        accepted = Some((trial, rt, n));
                        halvings += h;
                        break;
                    }
                }
                Err(e) if recoverable(&e) => {}
                Err(e) => return Err(e),
            }
            step *= 0.5;
        }
        let Some((xt, rt, nt)) = accepted else {
            if norm(&delta) <= STAGNATION * norm(&x) {
                return Ok((x, NewtonReport { iterations: it, initial_norm: r0, residual_norm: rn, halvings }));
            }
            return Err(Error::NewtonDiverged { iterations: it, residual: rn });
        };
        x = xt;
        r = rt;
        rn = nt;
        if converged(rn) {
            return Ok((x, NewtonReport { iterations: it, initial_norm: r0, residual_norm: rn, halvings }));
        }
    }
    let _ = r;
    Err(Error::NewtonDiverged { iterations: config.max_iter, residual: rn })
}
