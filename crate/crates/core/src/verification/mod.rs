//! Closed-form consolidation solutions used as oracles, and error norms.

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_TERMS: usize = 200;

/// Shrink applied to root brackets to stay clear of the tangent poles.
const BRACKET_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerzaghiParams<T> {
    /// Applied load, Pa.
    pub w: T,
    pub k_f: T,
    pub phi_f: T,
    pub lambda_tilde: T,
    pub mu_tilde: T,
    /// Darcy mobility `κ/γ`, m²/(Pa·s).
    pub k_over_gamma: T,
    /// Drainage length, m.
    pub h: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelParams<T> {
    pub base: TerzaghiParams<T>,
    /// Half-width of the specimen, m.
    pub a: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelConstants<T> {
    pub nu: T,
    pub nu_u: T,
    pub b: T,
    pub k_u: T,
}

/// `p̄(z̄, t̄)` of one-dimensional consolidation, drained at `z̄ = 0`.
pub fn terzaghi_pressure<T: Real>(z_bar: T, t_bar: T, n_terms: usize) -> T {
    let pi = T::PI();
    let mut sum = T::zero();
    for n in 0..n_terms {
        let m = T::from_usize(2 * n + 1).unwrap();
        let term = T::lit(4.0) / (pi * m)
            * (m * pi * z_bar / T::lit(2.0)).sin()
            * (-(m * m) * pi * pi * t_bar / T::lit(4.0)).exp();
        sum += term;
    }
    sum
}

impl<T: Real> TerzaghiParams<T> {
    pub fn validate(&self) -> Result<()> {
        let all = [self.w, self.k_f, self.phi_f, self.lambda_tilde, self.mu_tilde, self.k_over_gamma, self.h];
        if all.iter().all(|v| *v > T::zero() && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::validation("terzaghi", "all parameters must be positive"))
        }
    }

    pub fn oedometric_modulus(&self) -> T {
        self.lambda_tilde + T::lit(2.0) * self.mu_tilde
    }

    /// Consolidation coefficient `c = (κ/γ) K_f M / (K_f + φ_f M)`, m²/s.
    pub fn consolidation_coefficient(&self) -> T {
        let m = self.oedometric_modulus();
        self.k_over_gamma * self.k_f * m / (self.k_f + self.phi_f * m)
    }
}

/// `(p_scale, t_scale)` with `p = p_scale p̄` and `t = t_scale t̄`.
pub fn terzaghi_scaling<T: Real>(params: &TerzaghiParams<T>) -> (T, T) {
    let m = params.oedometric_modulus();
    let p_scale = params.w * params.k_f / (params.k_f + params.phi_f * m);
    let t_scale = params.h * params.h / params.consolidation_coefficient();
    (p_scale, t_scale)
}

pub fn mandel_constants<T: Real>(params: &MandelParams<T>) -> MandelConstants<T> {
    let p = &params.base;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let nu = p.lambda_tilde / (two * (p.lambda_tilde + p.mu_tilde));
    let k_u = p.lambda_tilde + two * p.mu_tilde / three + p.k_f / p.phi_f;
    let b = p.k_f / (p.phi_f * k_u);
    let q = b * (T::one() - two * nu);
    let nu_u = (three * nu + q) / (three - q);
    MandelConstants { nu, nu_u, b, k_u }
}

/// `(p_scale, t_scale)` of the Mandel problem.
pub fn mandel_scaling<T: Real>(params: &MandelParams<T>) -> (T, T) {
    let c = mandel_constants(params);
    let p_scale = c.b * (T::one() + c.nu_u) * params.base.w / T::lit(3.0);
    let t_scale = params.a * params.a / params.base.consolidation_coefficient();
    (p_scale, t_scale)
}

/// Residual of `tan α = cα` in the pole-free form `sin α − cα cos α`.
pub fn alpha_residual<T: Real>(alpha: T, c: T) -> T {
    (alpha.sin() - c * alpha * alpha.cos()).abs()
}

/// First `n_roots` positive solutions of `tan α / α = (1 − ν)/(ν_u − ν)`,
/// one per branch.
pub fn mandel_alpha_roots<T: Real>(nu: T, nu_u: T, n_roots: usize) -> Result<Vec<T>> {
    if !(nu < nu_u) {
        return Err(Error::RootBracketFailure { branch: 0 });
    }
    let c = (T::one() - nu) / (nu_u - nu);
    let pi = T::PI();
    let half = pi / T::lit(2.0);
    let eps = T::lit(BRACKET_EPS);
    let g = |a: T| a.sin() - c * a * a.cos();
    let mut roots = Vec::with_capacity(n_roots);
    for k in 0..n_roots {
        let base = pi * T::from_usize(k).unwrap();
        let (mut lo, mut hi) = (base + eps, base + half - eps);
        // on each branch cos α has the sign of (−1)^k; tan α − cα < 0 at lo
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let f = |a: T| sign * g(a);
        if !(f(lo) < T::zero() && f(hi) > T::zero()) {
            return Err(Error::RootBracketFailure { branch: k + 1 });
        }
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
        roots.push(root);
    }
    Ok(roots)
}

/// `p̄(x̄, t̄)` of the Mandel problem, drained at `x̄ = ±1`.
pub fn mandel_pressure<T: Real>(x_bar: T, t_bar: T, roots: &[T]) -> T {
    let mut sum = T::zero();
    for &a in roots {
        let (s, c) = (a.sin(), a.cos());
        sum += ((a * x_bar).cos() - c) * s / (a - s * c) * (-a * a * t_bar).exp();
    }
    T::lit(2.0) * sum
}

/// Time and value of the maximum centre pressure `(t̄, p̄)`, searched
/// over `t̄ ∈ [1e-4, 1]`.
pub fn mandel_center_peak<T: Real>(roots: &[T]) -> (T, T) {
    let n = 400;
    let at = |k: f64| T::lit(10f64.powf(-4.0 + 4.0 * k / n as f64));
    let p = |t: T| mandel_pressure(T::zero(), t, roots);
    let best = (0..=n).max_by(|&a, &b| p(at(a as f64)).partial_cmp(&p(at(b as f64))).unwrap_or(std::cmp::Ordering::Equal)).unwrap_or(0) as f64;
    let (mut lo, mut hi) = ((best - 1.0).max(0.0), (best + 1.0).min(n as f64));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if p(at(m1)) < p(at(m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let t = at(0.5 * (lo + hi));
    (t, p(t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2Error<T> {
    pub value: T,
    /// `false` when the reference norm vanished and `value` is absolute.
    pub relative: bool,
}

/// Relative discrete L² norm of `numeric − analytic` over the samples.
pub fn l2_error<T: Real, P>(samples: &[(P, T)], analytic: impl Fn(&P) -> T) -> Result<L2Error<T>> {
    if samples.is_empty() {
        return Err(Error::EmptyField);
    }
    let mut diff = T::zero();
    let mut refn = T::zero();
    for (pt, v) in samples {
        let a = analytic(pt);
        diff += (*v - a) * (*v - a);
        refn += a * a;
    }
    if refn > T::zero() {
        Ok(L2Error { value: (diff / refn).sqrt(), relative: true })
    } else {
        Ok(L2Error { value: diff.sqrt(), relative: false })
    }
}
