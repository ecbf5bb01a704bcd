//! Small-strain limit of the saturated mixture.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::Tensor2;

/// Renormalized Lamé constants and fluid bulk modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedParams<T> {
    pub lambda_tilde: T,
    pub mu_tilde: T,
    pub k_f: T,
}

impl<T: Real> LinearizedParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_tilde", self.lambda_tilde),
            ("mu_tilde", self.mu_tilde),
            ("k_f", self.k_f),
        ] {
            if !(v > T::zero()) {
                return Err(Error::validation(name, "must be positive"));
            }
        }
        Ok(())
    }

    /// Constrained (oedometric) modulus `λ̃ + 2μ̃`.
    pub fn oedometric_modulus(&self) -> T {
        self.lambda_tilde + T::lit(2.0) * self.mu_tilde
    }
}

/// `σ = 2μ̃ε + λ̃ tr(ε) I − φ_f p I`.
pub fn linearized_stress<T: Real>(eps: &Tensor2<T>, p: T, params: &LinearizedParams<T>, phi_f: T) -> Tensor2<T> {
    eps.scale(T::lit(2.0) * params.mu_tilde)
        + Tensor2::identity().scale(params.lambda_tilde * eps.trace() - phi_f * p)
}
