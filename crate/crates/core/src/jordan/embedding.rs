//! The hypersphere through `C·I` swept out by the determinant-preserving
//! group, described at the base point through the traceless part `J0`.
//!
//! Tangent vectors at `x_o = C·I` are `C·T` for `T ∈ J0`, the second
//! derivative along `T̃ = T∘·` is `C(X∘Y)`, and it splits into a traceless
//! part `C(X∘Y)_0` and the transversal part `⅓C(X, Y) I`.

use crate::error::{Error, Result};
use crate::linalg::{det, Matrix};
use crate::scalar::Real;

use super::albert::JordanMatrix;
use super::octonion::Octonion;

/// Dimension of the hypersphere.
pub const N: usize = 26;

/// `√3 (−3 L1)^{−(n+2)/2}`: the scaling constant in its commonly quoted form.
pub fn stated_constant<T: Real>(l1: T) -> T {
    T::from_int(3).sqrt() * (-T::from_int(3) * l1).powi(-(N as i32 + 2) / 2)
}

/// Scaling for which `C·(orbit of I)` is Blaschke-normalized with mean
/// curvature `l1`: `C^{n+1} = √3 (−3 L1)^{−(n+2)/2}`.
pub fn unimodular_constant<T: Real>(l1: T) -> T {
    stated_constant(l1).powf(T::one() / T::from_int(N as i64 + 1))
}

#[derive(Clone, Debug)]
pub struct E6Embedding<T> {
    pub l1: T,
    pub c: T,
    pub x_o: JordanMatrix<T>,
    /// Basis of `J0` orthonormal for the trace form `(·,·)`.
    pub trace_basis: Vec<JordanMatrix<T>>,
}

impl<T: Real> E6Embedding<T> {
    pub fn new(l1: T) -> Result<Self> {
        if !(l1 < T::zero()) {
            return Err(Error::InvalidParams(format!("mean curvature must be negative, got {}", l1.to_f64_lossy())));
        }
        let c = unimodular_constant(l1);
        Ok(E6Embedding { l1, c, x_o: JordanMatrix::identity().scale(c), trace_basis: traceless_basis() })
    }

    /// `g_o = −(X, Y)/(3 L1)`.
    pub fn metric_factor(&self) -> T {
        -T::one() / (T::from_int(3) * self.l1)
    }

    pub fn g_o(&self, x: &JordanMatrix<T>, y: &JordanMatrix<T>) -> T {
        self.metric_factor() * x.inner(y)
    }

    /// Connection difference at `o`: `K(X, Y) = (X∘Y)_0`.
    pub fn difference_tensor(&self, x: &JordanMatrix<T>, y: &JordanMatrix<T>) -> JordanMatrix<T> {
        x.jordan(y).traceless_part()
    }

    /// `A_o(X, Y, Z) = g_o(K(X, Y), Z)`.
    pub fn a_o(&self, x: &JordanMatrix<T>, y: &JordanMatrix<T>, z: &JordanMatrix<T>) -> T {
        self.g_o(&self.difference_tensor(x, y), z)
    }

    /// Basis of `J0` orthonormal for `g_o`.
    pub fn metric_basis(&self) -> Vec<JordanMatrix<T>> {
        let s = self.metric_factor().sqrt().recip();
        self.trace_basis.iter().map(|b| b.scale(s)).collect()
    }

    pub fn affine_normal(&self) -> JordanMatrix<T> {
        self.x_o.scale(-self.l1)
    }

    /// `(tangent, transversal)` parts of `C(X∘Y)`.
    pub fn gauss_split(&self, x: &JordanMatrix<T>, y: &JordanMatrix<T>) -> (JordanMatrix<T>, JordanMatrix<T>) {
        let tangent = x.jordan(y).traceless_part().scale(self.c);
        let normal = JordanMatrix::identity().scale(self.c * x.inner(y) / T::from_int(3));
        (tangent, normal)
    }

    /// `(1/n) Σ_i` transversal part of the second derivative over a
    /// `g_o`-orthonormal basis.
    pub fn traced_normal(&self) -> JordanMatrix<T> {
        let sum = self
            .metric_basis()
            .iter()
            .fold(JordanMatrix::zero(), |acc, e| acc + self.gauss_split(e, e).1);
        sum.scale(T::one() / T::from_int(N as i64))
    }

    /// Gram matrix of `g_o` on the trace-orthonormal basis.
    pub fn metric_gram(&self) -> Matrix<T> {
        let b = &self.trace_basis;
        Matrix::from_fn(N, N, |i, j| self.g_o(&b[i], &b[j]))
    }

    /// Blaschke metric computed from determinants of the embedding in the
    /// trace-orthonormal frame, `|det G|^{−1/(n+2)} G` with
    /// `G_ij = det(C b_1, …, C b_n, C(b_i∘b_j))`.
    pub fn determinant_metric(&self) -> Matrix<T> {
        let b = &self.trace_basis;
        let mut frame = b.clone();
        frame.push(JordanMatrix::identity().scale(T::from_int(3).sqrt().recip()));
        let coords = |v: &JordanMatrix<T>| -> Vec<T> { frame.iter().map(|f| f.inner(v)).collect() };
        let tangent: Vec<Vec<T>> = b.iter().map(|v| coords(&v.scale(self.c))).collect();
        let big_g = Matrix::from_fn(N, N, |i, j| {
            let last = coords(&b[i].jordan(&b[j]).scale(self.c));
            det(&Matrix::from_fn(N + 1, N + 1, |r, k| if k < N { tangent[k][r] } else { last[r] }))
        });
        // |det G|^{-1/(n+2)} G with G prescaled so the determinant stays in range
        let s = big_g.max_abs();
        let h = det(&big_g.scale(s.recip())).abs();
        let e = -T::one() / T::from_int(N as i64 + 2);
        big_g.scale(h.powf(e) * s.powf(T::from_int(N as i64) * e))
    }
}

/// `(E1−E2)/√2`, `(E1+E2−2E3)/√6`, then `F_i(e_k)/√2`.
fn traceless_basis<T: Real>() -> Vec<JordanMatrix<T>> {
    let two = T::from_int(2);
    let mut basis = vec![
        JordanMatrix::diag([T::one(), -T::one(), T::zero()]).scale(two.sqrt().recip()),
        JordanMatrix::diag([T::one(), T::one(), -two]).scale(T::from_int(6).sqrt().recip()),
    ];
    for i in 0..3 {
        for k in 0..8 {
            basis.push(JordanMatrix::f(i, Octonion::unit(k)).scale(two.sqrt().recip()));
        }
    }
    basis
}
