//! Pointwise pressure-equality closure: compressible fluids sharing a pore
//! volume partition it so that every fluid sits at the same pressure.

use crate::constitutive::fluid::FluidModel;
use crate::error::{Error, Result};
use crate::kinematics::PHI_MIN;
use crate::scalar::Real;

/// Relative pressure mismatch accepted by the closure solve.
pub const TOL_CLOSURE: f64 = 1e-10;
pub const MAX_CLOSURE_ITER: usize = 100;

/// Partition of a pore volume among compressible fluids.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSplit<T> {
    /// Volume occupied by each fluid per unit referential volume (`J φᵢ`).
    pub volumes: Vec<T>,
    pub densities: Vec<T>,
    pub pressures: Vec<T>,
    /// Common pressure (mean of the per-fluid values).
    pub pressure: T,
    /// `Σ Vᵢ / Kᵢ`, the volumetric compliance of the fluid mixture.
    pub compliance: T,
    pub iterations: usize,
}

fn degenerate<T: Real>(phase: usize, volume: T, j: T) -> Error {
    Error::DegeneratePhase {
        phase,
        phi: (volume / j).as_f64(),
    }
}

fn finish<T: Real>(
    fluids: &[(&FluidModel<T>, T)],
    volumes: Vec<T>,
    j: T,
    iterations: usize,
) -> Result<VolumeSplit<T>> {
    let mut densities = Vec::with_capacity(volumes.len());
    let mut pressures = Vec::with_capacity(volumes.len());
    let mut compliance = T::zero();
    for (i, ((model, mass), v)) in fluids.iter().zip(&volumes).enumerate() {
        if !(*v / j > T::lit(PHI_MIN)) || !(*mass > T::zero()) {
            return Err(degenerate(i, *v, j));
        }
        let rho = *mass / *v;
        pressures.push(model.pressure(rho)?);
        compliance += *v / model.bulk_modulus(rho)?;
        densities.push(rho);
    }
    let pressure = pressures.iter().copied().sum::<T>() / T::from_usize(pressures.len()).unwrap();
    Ok(VolumeSplit {
        volumes,
        densities,
        pressures,
        pressure,
        compliance,
        iterations,
    })
}

/// Splits `volume` (pore volume per referential volume available to the
/// compressible fluids) among `fluids`, given as `(model, P₀)` pairs.
pub fn split_volume<T: Real>(
    fluids: &[(&FluidModel<T>, T)],
    volume: T,
    j: T,
) -> Result<VolumeSplit<T>> {
    match fluids.len() {
        0 => Err(Error::validation("fluids", "closure needs at least one fluid")),
        1 => finish(fluids, vec![volume], j, 0),
        2 => split_two(fluids, volume, j),
        _ => split_many(fluids, volume, j),
    }
}

/// Pressure of one fluid holding `mass` in volume `v`; `+∞` when the
/// density leaves the admissible range from above.
fn pressure_in<T: Real>(model: &FluidModel<T>, mass: T, v: T) -> T {
    match model.pressure(mass / v) {
        Ok(p) => p,
        Err(_) => T::infinity(),
    }
}

/// Newton on the pressure difference with a bisection safeguard.
fn split_two<T: Real>(fluids: &[(&FluidModel<T>, T)], volume: T, j: T) -> Result<VolumeSplit<T>> {
    let (m1, p1) = (fluids[0].0, fluids[0].1);
    let (m2, p2) = (fluids[1].0, fluids[1].1);
    if !(p1 > T::zero()) {
        return Err(degenerate(0, T::zero(), j));
    }
    if !(p2 > T::zero()) {
        return Err(degenerate(1, T::zero(), j));
    }
    let floor = T::lit(PHI_MIN) * j;
    let mut lo = floor;
    let mut hi = volume - floor;
    if !(hi > lo) {
        return Err(degenerate(0, volume, j));
    }
    let diff = |v1: T| pressure_in(m1, p1, v1) - pressure_in(m2, p2, volume - v1);
    let (w1, w2) = (p1 / m1.amount_scale(), p2 / m2.amount_scale());
    let mut v1 = (volume * w1 / (w1 + w2)).max(lo).min(hi);
    let tol = T::lit(TOL_CLOSURE);

    for it in 0..MAX_CLOSURE_ITER {
        let pa = pressure_in(m1, p1, v1);
        let pb = pressure_in(m2, p2, volume - v1);
        let f = pa - pb;
        let scale = pa.abs().max(pb.abs());
        if f.is_finite() && f.abs() <= tol * scale {
            return finish(fluids, vec![v1, volume - v1], j, it);
        }
        // p₁ falls and p₂ rises as v1 grows
        if f > T::zero() {
            lo = v1;
        } else {
            hi = v1;
        }
        let slope = match (m1.bulk_modulus(p1 / v1), m2.bulk_modulus(p2 / (volume - v1))) {
            (Ok(k1), Ok(k2)) => -(k1 / v1 + k2 / (volume - v1)),
            _ => T::nan(),
        };
        let newton = v1 - f / slope;
        v1 = if f.is_finite() && slope < T::zero() && newton > lo && newton < hi {
            newton
        } else {
            T::lit(0.5) * (lo + hi)
        };
        if hi - lo <= T::epsilon() * volume {
            let f = diff(v1);
            let scale = pressure_in(m1, p1, v1).abs();
            if f.abs() <= tol * scale {
                return finish(fluids, vec![v1, volume - v1], j, it);
            }
            let phase = if f > T::zero() { 1 } else { 0 };
            let v = if phase == 0 { v1 } else { volume - v1 };
            return Err(degenerate(phase, v, j));
        }
    }
    Err(Error::ClosureNoConvergence {
        iterations: MAX_CLOSURE_ITER,
        residual: diff(v1).as_f64(),
    })
}

/// Three or more fluids: bisection on the common pressure in log space.
fn split_many<T: Real>(fluids: &[(&FluidModel<T>, T)], volume: T, j: T) -> Result<VolumeSplit<T>> {
    let occupied = |p: T| -> Result<T> {
        let mut total = T::zero();
        for (model, mass) in fluids {
            total += *mass / model.density_at_pressure(p)?;
        }
        Ok(total)
    };
    // Σ Vᵢ(p) decreases with p; bracket the root
    let mut lo = T::lit(1e-3);
    let mut hi = T::lit(1e3);
    let mut guard = 0;
    while occupied(lo)? < volume {
        lo = lo * T::lit(1e-3);
        guard += 1;
        if guard > 40 {
            return Err(Error::ClosureNoConvergence {
                iterations: guard,
                residual: f64::NAN,
            });
        }
    }
    while occupied(hi)? > volume {
        hi = hi * T::lit(1e3);
        guard += 1;
        if guard > 80 {
            return Err(Error::ClosureNoConvergence {
                iterations: guard,
                residual: f64::NAN,
            });
        }
    }
    for it in 0..4 * MAX_CLOSURE_ITER {
        let mid = (lo * hi).sqrt();
        if occupied(mid)? > volume {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= T::lit(TOL_CLOSURE) * T::lit(0.1) * hi {
            let p = (lo * hi).sqrt();
            let mut volumes: Vec<T> = fluids
                .iter()
                .map(|(m, mass)| m.density_at_pressure(p).map(|rho| *mass / rho))
                .collect::<Result<_>>()?;
            // distribute the rounding remainder proportionally
            let total: T = volumes.iter().copied().sum();
            for v in &mut volumes {
                *v = *v * volume / total;
            }
            return finish(fluids, volumes, j, it);
        }
    }
    Err(Error::ClosureNoConvergence {
        iterations: 4 * MAX_CLOSURE_ITER,
        residual: f64::NAN,
    })
}

/// Current volume fractions of the compressible fluids at a material point.
/// `pore_fraction` is the current volume fraction they share.
pub fn pressure_equality_closure<T: Real>(
    fluids: &[(&FluidModel<T>, T)],
    pore_fraction: T,
    j: T,
) -> Result<Vec<T>> {
    if !(pore_fraction > T::zero() && pore_fraction < T::one()) {
        return Err(Error::validation("pore_fraction", "must lie in (0, 1)"));
    }
    let total_mass: T = fluids.iter().map(|(_, m)| *m).sum();
    if !(total_mass > T::zero()) {
        return Err(Error::validation("fluids", "total fluid mass must be positive"));
    }
    let split = split_volume(fluids, pore_fraction * j, j)?;
    let mut phis: Vec<T> = split.volumes.iter().map(|v| *v / j).collect();
    // enforce Σφ = pore_fraction to rounding
    let n = phis.len();
    let rest: T = phis[..n - 1].iter().copied().sum();
    phis[n - 1] = pore_fraction - rest;
    Ok(phis)
}
