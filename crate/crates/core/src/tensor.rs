//! Small fixed-size 2-D tensors for plane-strain kinematics.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Real;

/// Two-component vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vector2<T>(pub [T; 2]);

/// Second-order tensor in two dimensions, row-major `m[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor2<T>(pub [[T; 2]; 2]);

/// Fourth-order tensor `a[i][j][k][l]`, used for `∂T/∂F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor4<T>(pub [[[[T; 2]; 2]; 2]; 2]);

impl<T: Real> Vector2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self([x, y])
    }

    pub fn zero() -> Self {
        Self([T::zero(); 2])
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self([self.0[0] * s, self.0[1] * s])
    }

    /// Outer product `a ⊗ b`.
    pub fn outer(&self, other: &Self) -> Tensor2<T> {
        let (a, b) = (self.0, other.0);
        Tensor2([[a[0] * b[0], a[0] * b[1]], [a[1] * b[0], a[1] * b[1]]])
    }
}

impl<T: Real> Tensor2<T> {
    pub fn new(m00: T, m01: T, m10: T, m11: T) -> Self {
        Self([[m00, m01], [m10, m11]])
    }

    pub fn zero() -> Self {
        Self([[T::zero(); 2]; 2])
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one())
    }

    pub fn diag(a: T, b: T) -> Self {
        Self([[a, T::zero()], [T::zero(), b]])
    }

    pub fn rotation(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self([[c, -s], [s, c]])
    }

    pub fn det(&self) -> T {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> T {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// Cofactor matrix `det(A) A⁻ᵀ`; linear in the entries for 2×2.
    pub fn cofactor(&self) -> Self {
        let m = &self.0;
        Self([[m[1][1], -m[1][0]], [-m[0][1], m[0][0]]])
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == T::zero() || !d.is_finite() {
            return None;
        }
        Some(self.cofactor().transpose().scale(T::one() / d))
    }

    pub fn scale(&self, s: T) -> Self {
        let m = &self.0;
        Self([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[T::zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }

    pub fn apply(&self, v: &Vector2<T>) -> Vector2<T> {
        let m = &self.0;
        Vector2([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    /// Double contraction `A : B = Aᵢⱼ Bᵢⱼ`.
    pub fn ddot(&self, other: &Self) -> T {
        let (a, b) = (&self.0, &other.0);
        a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
    }

    pub fn norm(&self) -> T {
        self.ddot(self).sqrt()
    }

    pub fn symmetric_part(&self) -> Self {
        (*self + self.transpose()).scale(T::lit(0.5))
    }

    pub fn max_abs(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl<T: Real> Tensor4<T> {
    pub fn zero() -> Self {
        Self([[[[T::zero(); 2]; 2]; 2]; 2])
    }

    /// `A ⊗ B` with `(A ⊗ B)ᵢⱼₖₗ = Aᵢⱼ Bₖₗ`.
    pub fn outer(a: &Tensor2<T>, b: &Tensor2<T>) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.0[i][j][k][l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        out
    }

    /// `∂ cof(F) / ∂F`, constant in two dimensions.
    pub fn cofactor_derivative() -> Self {
        let mut out = Self::zero();
        let one = T::one();
        // cof = [[F11, -F10], [-F01, F00]]
        out.0[0][0][1][1] = one;
        out.0[0][1][1][0] = -one;
        out.0[1][0][0][1] = -one;
        out.0[1][1][0][0] = one;
        out
    }

    /// Contraction `Aᵢⱼₖₗ Bₖₗ`.
    pub fn contract(&self, b: &Tensor2<T>) -> Tensor2<T> {
        let mut out = Tensor2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = T::zero();
                for k in 0..2 {
                    for l in 0..2 {
                        acc += self.0[i][j][k][l] * b.0[k][l];
                    }
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for v in out.0.iter_mut().flatten().flatten().flatten() {
            *v *= s;
        }
        out
    }
}

impl<T: Real> Add for Tensor4<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.0[i][j][k][l] += rhs.0[i][j][k][l];
                    }
                }
            }
        }
        out
    }
}

impl<T: Real> Add for Tensor2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        Self([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl<T: Real> Sub for Tensor2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-T::one())
    }
}

impl<T: Real> Neg for Tensor2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul<T> for Tensor2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real> Add for Vector2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl<T: Real> Sub for Vector2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl<T> Index<(usize, usize)> for Tensor2<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.0[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Tensor2<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.0[i][j]
    }
}

impl<T> Index<usize> for Vector2<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}
