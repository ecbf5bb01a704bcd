//! Fluid equations of state expressed through a Helmholtz energy per unit
//! current volume `W(ρ)`. Everything downstream (pressure, chemical
//! potential, bulk modulus) is derived from `W`:
//!
//! * chemical potential per unit mass `μ = W'(ρ)`
//! * pressure `p = ρ W'(ρ) − W(ρ)`
//! * bulk modulus `K = ρ p'(ρ) = ρ² W''(ρ)`
//!
//! Molar models (ideal gas, van der Waals) take mass density at their
//! interface and convert with the molar mass.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealGasParams<T> {
    /// Gas constant, m³·Pa/(K·mol).
    pub r: T,
    /// Temperature, K.
    pub t: T,
    /// De-dimensionalizing constant inside the logarithm, m³/mol.
    pub xi: T,
    /// kg/mol.
    pub molar_mass: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdWParams<T> {
    /// Attraction constant, Pa·m⁶/mol².
    pub a: T,
    /// Co-volume, m³/mol.
    pub b: T,
    /// Dimensionless heat-capacity constant.
    pub c: T,
    pub r: T,
    pub t: T,
    pub molar_mass: T,
}

/// Barotropic liquid with constant bulk modulus: `p = K ln(ρ/ρ_ref)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressibleLiquidParams<T> {
    pub bulk_modulus: T,
    pub rho_ref: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncompressibleLiquidParams<T> {
    pub rho_tilde: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluidModel<T> {
    IdealGas(IdealGasParams<T>),
    VanDerWaals(VdWParams<T>),
    CompressibleLiquid(CompressibleLiquidParams<T>),
    IncompressibleLiquid(IncompressibleLiquidParams<T>),
}

impl<T: Real> IdealGasParams<T> {
    pub fn molar_energy(&self, n: T) -> T {
        let rt = self.r * self.t;
        let l = (T::lit(1.5) * rt).ln();
        -n * rt * (T::one() + T::lit(1.5) * l - (n * self.xi).ln())
    }

    pub fn molar_chemical_potential(&self, n: T) -> T {
        let rt = self.r * self.t;
        -rt * (T::lit(1.5) * (T::lit(1.5) * rt).ln() - (n * self.xi).ln())
    }

    pub fn molar_pressure(&self, n: T) -> T {
        n * self.r * self.t
    }
}

impl<T: Real> VdWParams<T> {
    pub fn critical_temperature(&self) -> T {
        T::lit(8.0) * self.a / (T::lit(27.0) * self.r * self.b)
    }

    pub fn critical_molar_density(&self) -> T {
        T::one() / (T::lit(3.0) * self.b)
    }

    pub fn critical_pressure(&self) -> T {
        self.a / (T::lit(27.0) * self.b * self.b)
    }

    fn check(&self, n: T) -> Result<()> {
        if n > T::zero() && n * self.b < T::one() {
            Ok(())
        } else {
            Err(Error::OutOfRangeDensity {
                rho: (n * self.molar_mass).as_f64(),
            })
        }
    }

    pub fn molar_energy(&self, n: T) -> Result<T> {
        self.check(n)?;
        let rt = self.r * self.t;
        let crt = self.c * rt;
        Ok(crt * n * (T::one() - crt.ln()) - n * rt * (T::one() / n - self.b).ln() - self.a * n * n)
    }

    pub fn molar_chemical_potential(&self, n: T) -> Result<T> {
        self.check(n)?;
        let rt = self.r * self.t;
        let crt = self.c * rt;
        Ok(crt * (T::one() - crt.ln()) - rt * (T::one() / n - self.b).ln()
            + rt / (T::one() - self.b * n)
            - T::lit(2.0) * self.a * n)
    }

    pub fn molar_pressure(&self, n: T) -> Result<T> {
        self.check(n)?;
        Ok(n * self.r * self.t / (T::one() - self.b * n) - self.a * n * n)
    }

    /// `dp/dn` at fixed temperature.
    pub fn molar_pressure_slope(&self, n: T) -> Result<T> {
        self.check(n)?;
        let rt = self.r * self.t;
        let q = T::one() - self.b * n;
        Ok(rt / q + self.b * rt * n / (q * q) - T::lit(2.0) * self.a * n)
    }
}

impl<T: Real> FluidModel<T> {
    pub fn is_compressible(&self) -> bool {
        !matches!(self, Self::IncompressibleLiquid(_))
    }

    pub fn molar_mass(&self) -> Option<T> {
        match self {
            Self::IdealGas(g) => Some(g.molar_mass),
            Self::VanDerWaals(v) => Some(v.molar_mass),
            _ => None,
        }
    }

    /// Mass scale used to weigh the initial guess of the closure solve.
    pub(crate) fn amount_scale(&self) -> T {
        match self {
            Self::IdealGas(g) => g.molar_mass,
            Self::VanDerWaals(v) => v.molar_mass,
            Self::CompressibleLiquid(l) => l.rho_ref,
            Self::IncompressibleLiquid(l) => l.rho_tilde,
        }
    }

    fn positive(rho: T) -> Result<()> {
        if rho > T::zero() && rho.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfRangeDensity { rho: rho.as_f64() })
        }
    }

    fn incompressible_err() -> Error {
        Error::validation(
            "fluid",
            "an incompressible liquid has no equation of state in density",
        )
    }

    /// Helmholtz energy per unit current volume, J/m³.
    pub fn energy(&self, rho: T) -> Result<T> {
        Self::positive(rho)?;
        match self {
            Self::IdealGas(g) => Ok(g.molar_energy(rho / g.molar_mass)),
            Self::VanDerWaals(v) => v.molar_energy(rho / v.molar_mass),
            Self::CompressibleLiquid(l) => {
                let s = rho / l.rho_ref;
                Ok(l.bulk_modulus * (s - T::one() - s.ln()))
            }
            Self::IncompressibleLiquid(_) => Ok(T::zero()),
        }
    }

    /// `W'(ρ)`, chemical potential per unit mass, J/kg.
    pub fn chemical_potential(&self, rho: T) -> Result<T> {
        Self::positive(rho)?;
        match self {
            Self::IdealGas(g) => Ok(g.molar_chemical_potential(rho / g.molar_mass) / g.molar_mass),
            Self::VanDerWaals(v) => Ok(v.molar_chemical_potential(rho / v.molar_mass)? / v.molar_mass),
            Self::CompressibleLiquid(l) => {
                Ok(l.bulk_modulus * (T::one() / l.rho_ref - T::one() / rho))
            }
            Self::IncompressibleLiquid(_) => Err(Self::incompressible_err()),
        }
    }

    /// `p = ρW' − W`, Pa.
    pub fn pressure(&self, rho: T) -> Result<T> {
        if rho == T::zero() && self.is_compressible() {
            return Ok(match self {
                Self::CompressibleLiquid(l) => T::neg_infinity() * l.bulk_modulus.signum(),
                _ => T::zero(),
            });
        }
        Self::positive(rho)?;
        match self {
            Self::IdealGas(g) => Ok(g.molar_pressure(rho / g.molar_mass)),
            Self::VanDerWaals(v) => v.molar_pressure(rho / v.molar_mass),
            Self::CompressibleLiquid(l) => Ok(l.bulk_modulus * (rho / l.rho_ref).ln()),
            Self::IncompressibleLiquid(_) => Err(Self::incompressible_err()),
        }
    }

    /// `dp/dρ` along the isotherm.
    pub fn pressure_slope(&self, rho: T) -> Result<T> {
        Self::positive(rho)?;
        match self {
            Self::IdealGas(g) => Ok(g.r * g.t / g.molar_mass),
            Self::VanDerWaals(v) => Ok(v.molar_pressure_slope(rho / v.molar_mass)? / v.molar_mass),
            Self::CompressibleLiquid(l) => Ok(l.bulk_modulus / rho),
            Self::IncompressibleLiquid(_) => Err(Self::incompressible_err()),
        }
    }

    /// `W''(ρ) = p'(ρ)/ρ`.
    pub fn chemical_potential_slope(&self, rho: T) -> Result<T> {
        Ok(self.pressure_slope(rho)? / rho)
    }

    /// Bulk modulus `ρ dp/dρ`.
    pub fn bulk_modulus(&self, rho: T) -> Result<T> {
        Ok(rho * self.pressure_slope(rho)?)
    }

    /// Smallest density at which the isotherm reaches pressure `p`.
    /// For a subcritical van der Waals fluid this is the gas branch.
    pub fn density_at_pressure(&self, p: T) -> Result<T> {
        let bad = || Error::validation("pressure", format!("no admissible density at p = {p}"));
        match self {
            Self::IdealGas(g) => {
                if p > T::zero() {
                    Ok(p * g.molar_mass / (g.r * g.t))
                } else {
                    Err(bad())
                }
            }
            Self::CompressibleLiquid(l) => Ok(l.rho_ref * (p / l.bulk_modulus).exp()),
            Self::IncompressibleLiquid(l) => Ok(l.rho_tilde),
            Self::VanDerWaals(v) => {
                if !(p > T::zero()) {
                    return Err(bad());
                }
                let n_max = T::one() / v.b;
                let samples = 4000;
                let mut prev = T::zero();
                for k in 0..=samples {
                    let n = if k == samples {
                        n_max * (T::one() - T::lit(1e-12))
                    } else {
                        let frac = T::from_usize(k).unwrap() / T::from_usize(samples).unwrap();
                        n_max * T::lit(10.0).powf(T::lit(-14.0) * (T::one() - frac))
                    };
                    if v.molar_pressure(n)? >= p {
                        let (mut a, mut b) = (prev, n);
                        for _ in 0..200 {
                            let m = T::lit(0.5) * (a + b);
                            if m <= a || m >= b {
                                break;
                            }
                            if v.molar_pressure(m)? >= p {
                                b = m;
                            } else {
                                a = m;
                            }
                        }
                        return Ok(T::lit(0.5) * (a + b) * v.molar_mass);
                    }
                    prev = n;
                }
                Err(bad())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(name, format!("must be positive, got {v}")))
            }
        };
        match self {
            Self::IdealGas(g) => {
                pos("r", g.r)?;
                pos("t", g.t)?;
                pos("xi", g.xi)?;
                pos("molar_mass", g.molar_mass)
            }
            Self::VanDerWaals(v) => {
                pos("a", v.a)?;
                pos("b", v.b)?;
                pos("c", v.c)?;
                pos("r", v.r)?;
                pos("t", v.t)?;
                pos("molar_mass", v.molar_mass)
            }
            Self::CompressibleLiquid(l) => {
                pos("bulk_modulus", l.bulk_modulus)?;
                pos("rho_ref", l.rho_ref)
            }
            Self::IncompressibleLiquid(l) => pos("rho_tilde", l.rho_tilde),
        }
    }
}
