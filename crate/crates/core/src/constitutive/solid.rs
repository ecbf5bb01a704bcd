//! Hyperelastic energies for the solid skeleton, per unit referential volume.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{Tensor2, Tensor4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeoHookeanParams<T> {
    pub lambda: T,
    pub mu: T,
}

/// Small-strain isotropic elasticity written in terms of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallStrainParams<T> {
    pub lambda: T,
    pub mu: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolidModel<T> {
    NeoHookean(NeoHookeanParams<T>),
    SmallStrain(SmallStrainParams<T>),
}

fn inverse_or_err<T: Real>(f: &Tensor2<T>) -> Result<(T, Tensor2<T>)> {
    let j = f.det();
    if !(j > T::zero()) {
        return Err(Error::NonPositiveJacobian { j: j.as_f64() });
    }
    let inv = f.inverse().ok_or(Error::NonPositiveJacobian { j: j.as_f64() })?;
    Ok((j, inv))
}

/// `W = μ/2 (tr FᵀF − 2) − μ ln J + λ/2 (ln J)²`.
pub fn neo_hookean_energy<T: Real>(f: &Tensor2<T>, params: &NeoHookeanParams<T>) -> Result<T> {
    let (j, _) = inverse_or_err(f)?;
    let lj = j.ln();
    let two = T::lit(2.0);
    Ok(params.mu / two * (f.ddot(f) - two) - params.mu * lj + params.lambda / two * lj * lj)
}

/// `∂W/∂F = μF − μF⁻ᵀ + λ ln J F⁻ᵀ`.
pub fn neo_hookean_piola<T: Real>(f: &Tensor2<T>, params: &NeoHookeanParams<T>) -> Result<Tensor2<T>> {
    let (j, inv) = inverse_or_err(f)?;
    let f_inv_t = inv.transpose();
    Ok(f.scale(params.mu) + f_inv_t.scale(params.lambda * j.ln() - params.mu))
}

pub fn neo_hookean_tangent<T: Real>(f: &Tensor2<T>, params: &NeoHookeanParams<T>) -> Result<Tensor4<T>> {
    let (j, inv) = inverse_or_err(f)?;
    let f_inv_t = inv.transpose();
    let c = params.mu - params.lambda * j.ln();
    let mut a = Tensor4::outer(&f_inv_t, &f_inv_t).scale(params.lambda);
    for i in 0..2 {
        for jj in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut v = c * inv.0[jj][k] * inv.0[l][i];
                    if i == k && jj == l {
                        v += params.mu;
                    }
                    a.0[i][jj][k][l] += v;
                }
            }
        }
    }
    Ok(a)
}

fn small_strain<T: Real>(f: &Tensor2<T>) -> Tensor2<T> {
    (*f - Tensor2::identity()).symmetric_part()
}

impl<T: Real> SolidModel<T> {
    pub fn energy(&self, f: &Tensor2<T>) -> Result<T> {
        match self {
            Self::NeoHookean(p) => neo_hookean_energy(f, p),
            Self::SmallStrain(p) => {
                let eps = small_strain(f);
                let tr = eps.trace();
                Ok(p.mu * eps.ddot(&eps) + T::lit(0.5) * p.lambda * tr * tr)
            }
        }
    }

    pub fn piola(&self, f: &Tensor2<T>) -> Result<Tensor2<T>> {
        match self {
            Self::NeoHookean(p) => neo_hookean_piola(f, p),
            Self::SmallStrain(p) => {
                let eps = small_strain(f);
                Ok(eps.scale(T::lit(2.0) * p.mu) + Tensor2::identity().scale(p.lambda * eps.trace()))
            }
        }
    }

    pub fn tangent(&self, f: &Tensor2<T>) -> Result<Tensor4<T>> {
        match self {
            Self::NeoHookean(p) => neo_hookean_tangent(f, p),
            Self::SmallStrain(p) => {
                let mut a = Tensor4::zero();
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            for l in 0..2 {
                                let mut v = T::zero();
                                if i == k && j == l {
                                    v += p.mu;
                                }
                                if i == l && j == k {
                                    v += p.mu;
                                }
                                if i == j && k == l {
                                    v += p.lambda;
                                }
                                a.0[i][j][k][l] = v;
                            }
                        }
                    }
                }
                Ok(a)
            }
        }
    }

    pub fn lame(&self) -> (T, T) {
        match self {
            Self::NeoHookean(p) => (p.lambda, p.mu),
            Self::SmallStrain(p) => (p.lambda, p.mu),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lambda, mu) = self.lame();
        if !(mu > T::zero()) {
            return Err(Error::validation("mu", "shear modulus must be positive"));
        }
        if !(lambda + mu > T::zero()) {
            return Err(Error::validation("lambda", "lambda + mu must be positive"));
        }
        Ok(())
    }
}
