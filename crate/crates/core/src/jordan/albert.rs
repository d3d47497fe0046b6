//! Hermitian 3×3 octonion matrices with the symmetric Jordan product.
//!
//! Layout of `X` with diagonal `ξ` and off-diagonal `x`:
//! ```text
//! [ ξ1   x3   x̄2 ]
//! [ x̄3   ξ2   x1 ]
//! [ x2   x̄1   ξ3 ]
//! ```
//! Coordinates (27): `ξ1, ξ2, ξ3`, then the 8 components of `x1`, `x2`, `x3`.

use std::ops::{Add, Neg, Sub};

use rand::Rng;

use super::octonion::Octonion;
use crate::linalg::Matrix;
use crate::scalar::Real;

pub const ALBERT_DIM: usize = 27;

/// Full 3×3 octonion matrix, used for products and brackets.
pub type OctMatrix<T> = [[Octonion<T>; 3]; 3];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanMatrix<T> {
    pub xi: [T; 3],
    pub x: [Octonion<T>; 3],
}

fn oct_matmul<T: Real>(a: &OctMatrix<T>, b: &OctMatrix<T>) -> OctMatrix<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Octonion::zero(), |s, k| s + a[i][k] * b[k][j]))
    })
}

fn oct_matsub<T: Real>(a: &OctMatrix<T>, b: &OctMatrix<T>) -> OctMatrix<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

/// Largest deviation of `m` from being Hermitian with real diagonal.
pub fn hermitian_defect<T: Real>(m: &OctMatrix<T>) -> T {
    let mut d = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            d = d.max(m[i][j].max_abs_diff(&m[j][i].conj()));
        }
    }
    d
}

impl<T: Real> JordanMatrix<T> {
    pub fn zero() -> Self {
        JordanMatrix { xi: [T::zero(); 3], x: [Octonion::zero(); 3] }
    }

    pub fn identity() -> Self {
        Self::diag([T::one(); 3])
    }

    pub fn diag(xi: [T; 3]) -> Self {
        JordanMatrix { xi, x: [Octonion::zero(); 3] }
    }

    /// Diagonal unit `E_i`, `i = 0..3`.
    pub fn e(i: usize) -> Self {
        let mut xi = [T::zero(); 3];
        xi[i] = T::one();
        Self::diag(xi)
    }

    /// `F_i(x)`: the matrix whose only nonzero off-diagonal slot is `x_i = x`.
    pub fn f(i: usize, x: Octonion<T>) -> Self {
        let mut m = Self::zero();
        m.x[i] = x;
        m
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        JordanMatrix {
            xi: std::array::from_fn(|_| T::from_f64_lossy(rng.gen_range(-1.0..1.0))),
            x: std::array::from_fn(|_| Octonion::random(rng)),
        }
    }

    /// Random element with zero trace.
    pub fn random_traceless<R: Rng>(rng: &mut R) -> Self {
        Self::random(rng).traceless_part()
    }

    pub fn to_oct_matrix(&self) -> OctMatrix<T> {
        let r = Octonion::real;
        let [x1, x2, x3] = self.x;
        [
            [r(self.xi[0]), x3, x2.conj()],
            [x3.conj(), r(self.xi[1]), x1],
            [x2, x1.conj(), r(self.xi[2])],
        ]
    }

    /// Reads the diagonal real parts and the upper slots `x1 = m12`,
    /// `x2 = m20`, `x3 = m01`; callers check Hermiticity separately.
    pub fn from_oct_matrix(m: &OctMatrix<T>) -> Self {
        JordanMatrix { xi: [m[0][0].re(), m[1][1].re(), m[2][2].re()], x: [m[1][2], m[2][0], m[0][1]] }
    }

    pub fn coords(&self) -> [T; ALBERT_DIM] {
        std::array::from_fn(|k| match k {
            0..=2 => self.xi[k],
            _ => self.x[(k - 3) / 8].0[(k - 3) % 8],
        })
    }

    pub fn from_coords(c: &[T]) -> Self {
        assert_eq!(c.len(), ALBERT_DIM);
        JordanMatrix {
            xi: [c[0], c[1], c[2]],
            x: std::array::from_fn(|i| Octonion(std::array::from_fn(|k| c[3 + 8 * i + k]))),
        }
    }

    /// Basis element `k` of the coordinate order.
    pub fn basis(k: usize) -> Self {
        let mut c = [T::zero(); ALBERT_DIM];
        c[k] = T::one();
        Self::from_coords(&c)
    }

    pub fn scale(&self, s: T) -> Self {
        JordanMatrix { xi: self.xi.map(|v| v * s), x: self.x.map(|o| o.scale(s)) }
    }

    pub fn trace(&self) -> T {
        self.xi[0] + self.xi[1] + self.xi[2]
    }

    /// `X - ⅓ tr(X) I`.
    pub fn traceless_part(&self) -> Self {
        *self - Self::identity().scale(self.trace() / T::from_int(3))
    }

    /// `X ∘ Y = ½(XY + YX)`.
    pub fn jordan(&self, other: &Self) -> Self {
        let (a, b) = (self.to_oct_matrix(), other.to_oct_matrix());
        let (ab, ba) = (oct_matmul(&a, &b), oct_matmul(&b, &a));
        let half = T::ratio(1, 2);
        let sum: OctMatrix<T> = std::array::from_fn(|i| std::array::from_fn(|j| (ab[i][j] + ba[i][j]).scale(half)));
        Self::from_oct_matrix(&sum)
    }

    /// `(X, Y) = tr(X ∘ Y)`.
    pub fn inner(&self, other: &Self) -> T {
        self.jordan(other).trace()
    }

    /// `X × Y = ½(2X∘Y − tr X·Y − tr Y·X + (tr X tr Y − (X, Y)) I)`.
    pub fn cross(&self, other: &Self) -> Self {
        let (tx, ty) = (self.trace(), other.trace());
        let two = T::from_int(2);
        let w = self.jordan(other).scale(two) - other.scale(tx) - self.scale(ty)
            + Self::identity().scale(tx * ty - self.inner(other));
        w.scale(T::ratio(1, 2))
    }

    /// `det X = ⅓ (X × X, X)`.
    pub fn det(&self) -> T {
        self.cross(self).inner(self) / T::from_int(3)
    }

    pub fn max_abs(&self) -> T {
        self.coords().iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }
}

impl<T: Real> Add for JordanMatrix<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        JordanMatrix {
            xi: std::array::from_fn(|i| self.xi[i] + rhs.xi[i]),
            x: std::array::from_fn(|i| self.x[i] + rhs.x[i]),
        }
    }
}

impl<T: Real> Sub for JordanMatrix<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Real> Neg for JordanMatrix<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

/// Real-linear operator on the 27 coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp27<T>(Matrix<T>);

impl<T: Real> LinOp27<T> {
    /// Matrix of a linear map, read off column by column on the basis.
    pub fn from_map(mut f: impl FnMut(&JordanMatrix<T>) -> JordanMatrix<T>) -> Self {
        let cols: Vec<[T; ALBERT_DIM]> = (0..ALBERT_DIM).map(|k| f(&JordanMatrix::basis(k)).coords()).collect();
        LinOp27(Matrix::from_fn(ALBERT_DIM, ALBERT_DIM, |i, j| cols[j][i]))
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn apply(&self, x: &JordanMatrix<T>) -> JordanMatrix<T> {
        JordanMatrix::from_coords(&self.0.mul_vec(&x.coords()))
    }

    pub fn trace(&self) -> T {
        self.0.trace()
    }

    pub fn compose(&self, other: &Self) -> Self {
        LinOp27(&self.0 * &other.0)
    }

    /// Commutator `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        LinOp27((&self.0 * &other.0).sub(&(&other.0 * &self.0)))
    }

    pub fn exp(&self) -> Self {
        LinOp27(crate::linalg::expm(&self.0))
    }
}

/// `X ↦ T ∘ X`.
pub fn mult_operator<T: Real>(t: &JordanMatrix<T>) -> LinOp27<T> {
    LinOp27::from_map(|x| t.jordan(x))
}

/// `X ↦ AX − XA` for an anti-Hermitian octonion matrix `A`, with the
/// Hermiticity defect of the result over the basis.
pub fn bracket_operator<T: Real>(a: &OctMatrix<T>) -> (LinOp27<T>, T) {
    let mut defect = T::zero();
    let op = LinOp27::from_map(|x| {
        let xm = x.to_oct_matrix();
        let c = oct_matsub(&oct_matmul(a, &xm), &oct_matmul(&xm, a));
        defect = defect.max(hermitian_defect(&c));
        JordanMatrix::from_oct_matrix(&c)
    });
    (op, defect)
}

/// Random anti-Hermitian matrix: imaginary diagonal, `a_ji = −ā_ij`.
/// With `traceless` the diagonal imaginary parts sum to zero.
pub fn random_anti_hermitian<T: Real, R: Rng>(rng: &mut R, traceless: bool) -> OctMatrix<T> {
    let imag = |o: Octonion<T>| Octonion(std::array::from_fn(|k| if k == 0 { T::zero() } else { o.0[k] }));
    let mut m: OctMatrix<T> = [[Octonion::zero(); 3]; 3];
    let mut diag: [Octonion<T>; 3] = std::array::from_fn(|_| imag(Octonion::random(rng)));
    if traceless {
        let mean = (diag[0] + diag[1] + diag[2]).scale(T::ratio(1, 3));
        diag = diag.map(|d| d - mean);
    }
    for i in 0..3 {
        m[i][i] = diag[i];
        for j in i + 1..3 {
            let z = Octonion::random(rng);
            m[i][j] = z;
            m[j][i] = -z.conj();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type J = JordanMatrix<f64>;

    #[test]
    fn coordinates_round_trip_and_hermitian_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = J::random(&mut rng);
        assert_eq!(J::from_coords(&x.coords()), x);
        assert_eq!(hermitian_defect(&x.to_oct_matrix()), 0.0);
        assert_eq!(J::from_oct_matrix(&x.to_oct_matrix()), x);
    }

    #[test]
    fn identity_values() {
        let i = J::identity();
        assert_eq!(i.det(), 1.0);
        assert_eq!(i.inner(&i), 3.0);
        assert_eq!((J::e(0) + J::e(1)).det(), 0.0);
        assert_eq!(J::diag([2.0, 3.0, 5.0]).det(), 30.0);
    }

    #[test]
    fn determinant_of_rank_one_matrix_vanishes() {
        // v v* for a column with real first entry: rank one over any composition algebra
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Octonion::<f64>::random(&mut rng);
        let x = J { xi: [1.0, a.norm_sqr(), 0.0], x: [Octonion::zero(), Octonion::zero(), a.conj()] };
        assert!(x.det().abs() < 1e-14);
    }

    #[test]
    fn determinant_is_cubic_and_inner_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x = J::random(&mut rng);
            assert!((x.scale(2.0).det() - 8.0 * x.det()).abs() < 1e-12);
            assert!(x.inner(&x) > 0.0);
            let y = J::random(&mut rng);
            assert!(x.jordan(&y).max_abs_diff(&y.jordan(&x)) < 1e-15);
        }
    }

    #[test]
    fn identity_operator_and_linearity() {
        let id = mult_operator(&J::identity());
        assert_eq!(id.matrix().max_abs_diff(&Matrix::identity(ALBERT_DIM)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (s, t) = (J::random(&mut rng), J::random(&mut rng));
        let lhs = mult_operator(&(s + t.scale(2.0)));
        let rhs = mult_operator(&s).matrix().add(&mult_operator(&t).matrix().scale(2.0));
        assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-14);
    }
}
