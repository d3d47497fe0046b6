//! Square matrices of jets: determinant, inverse, products.

use std::sync::Arc;

use super::jet::Jet;
use super::space::JetSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::{Real, Scalar};

/// Row-major matrix whose entries are jets over one space.
#[derive(Clone, Debug)]
pub struct JetMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Jet<T>>,
}

impl<T: Scalar> JetMatrix<T> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Jet<T>) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        JetMatrix { rows, cols, entries }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Jet<T>>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        JetMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Jet<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Jet<T>] {
        &self.entries
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        self.entries[0].space()
    }

    pub fn order(&self) -> usize {
        self.entries.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn value(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).value())
    }

    pub fn map(&self, f: impl Fn(&Jet<T>) -> Jet<T>) -> Self {
        JetMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn truncate(&self, order: usize) -> Self {
        self.map(|j| j.truncate(order))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        JetMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = self.at(i, 0) * rhs.at(0, j);
            for k in 1..self.cols {
                acc += &(self.at(i, k) * rhs.at(k, j));
            }
            acc
        })
    }

    /// Product with a constant matrix on the right.
    pub fn mul_const(&self, rhs: &Matrix<T>) -> Self {
        assert_eq!(self.cols, rhs.rows());
        JetMatrix::from_fn(self.rows, rhs.cols(), |i, j| {
            let mut acc = self.at(i, 0).scale(rhs[(0, j)]);
            for k in 1..self.cols {
                acc += &self.at(i, k).scale(rhs[(k, j)]);
            }
            acc
        })
    }

    /// Constant matrix times `self`.
    pub fn const_mul(lhs: &Matrix<T>, rhs: &Self) -> Self {
        assert_eq!(lhs.cols(), rhs.rows);
        JetMatrix::from_fn(lhs.rows(), rhs.cols, |i, j| {
            let mut acc = rhs.at(0, j).scale(lhs[(i, 0)]);
            for k in 1..rhs.rows {
                acc += &rhs.at(k, j).scale(lhs[(i, k)]);
            }
            acc
        })
    }

    /// Determinant by Laplace expansion memoized over column subsets.
    ///
    /// Needs no pivoting, so it is well defined even where the value part is
    /// singular. Cost is `O(2^n n)` jet products.
    pub fn det(&self) -> Jet<T> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let rows: Vec<Vec<Jet<T>>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.at(i, j).clone()).collect()).collect();
        let minors = subset_minors(&rows, self.cols);
        minors[(1usize << self.cols) - 1].clone().expect("full minor")
    }
}

/// For `k` row vectors of length `m`, returns `dp[mask]` = determinant of the
/// square block formed by the first `popcount(mask)` rows and the columns in
/// `mask` (increasing order), for every `mask` with `popcount <= k`.
pub(crate) fn subset_minors<T: Scalar>(rows: &[Vec<Jet<T>>], m: usize) -> Vec<Option<Jet<T>>> {
    assert!(m < usize::BITS as usize);
    let space = rows[0][0].space().clone();
    let order = rows.iter().flatten().map(Jet::order).min().unwrap_or(0);
    let mut dp: Vec<Option<Jet<T>>> = vec![None; 1 << m];
    dp[0] = Some(Jet::constant(&space, T::one()).truncate(order));
    let mut masks: Vec<usize> = (1..1usize << m).filter(|mk| mk.count_ones() as usize <= rows.len()).collect();
    masks.sort_by_key(|mk| mk.count_ones());
    for mask in masks {
        let k = mask.count_ones() as usize;
        let row = &rows[k - 1];
        let mut acc: Option<Jet<T>> = None;
        let mut pos = 0usize;
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let sub = dp[mask & !(1 << j)].as_ref().expect("smaller minor");
            let term = &row[j] * sub;
            let negative = (k - 1 + pos) % 2 == 1;
            acc = Some(match (acc, negative) {
                (None, false) => term,
                (None, true) => -term,
                (Some(a), false) => a + term,
                (Some(a), true) => a - term,
            });
            pos += 1;
        }
        dp[mask] = acc;
    }
    dp
}

impl<T: Real> JetMatrix<T> {
    /// Inverse via the exact finite Neumann series around the value part.
    ///
    /// With `M = M0 + N` and `N` free of constant terms, `(M0^{-1} N)^k`
    /// vanishes beyond the jet order, so the series terminates.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let m0 = self.value();
        let m0_inv = linalg::inverse(&m0).ok_or(Error::FrameSingular)?;
        let space = self.space().clone();
        let order = self.order();
        let nil = self.map(|j| j.add_scalar(-j.value()));
        let p = JetMatrix::const_mul(&m0_inv, &nil).truncate(order);
        let identity = JetMatrix::from_fn(n, n, |i, j| {
            Jet::constant(&space, if i == j { T::one() } else { T::zero() }).truncate(order)
        });
        let mut sum = identity.clone();
        let mut term = identity;
        for _ in 0..order {
            term = p.mul(&term).map(|j| -j);
            sum = JetMatrix::from_fn(n, n, |i, j| sum.at(i, j) + term.at(i, j));
        }
        Ok(sum.mul_const(&m0_inv))
    }

    /// Determinant as `det(M0) exp(tr log(I + M0^{-1} N))`.
    ///
    /// Polynomial cost; requires a nonsingular value part.
    pub fn det_nonsingular(&self) -> Result<Jet<T>> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let order = self.order();
        let m0 = self.value();
        let lu = linalg::Lu::new(&m0).ok_or(Error::FrameSingular)?;
        let nil = self.map(|j| j.add_scalar(-j.value()));
        let p = JetMatrix::const_mul(&lu.inverse(), &nil).truncate(order);
        let space = self.space().clone();
        let trace = |m: &JetMatrix<T>| (0..n).fold(Jet::zero(&space).truncate(order), |acc, i| acc + m.at(i, i));
        let mut log_tr = Jet::zero(&space).truncate(order);
        let mut power = p.clone();
        for k in 1..=order {
            let t = trace(&power).scale(T::ratio(1, k as i64));
            log_tr = if k % 2 == 1 { log_tr + t } else { log_tr - t };
            power = power.mul(&p);
        }
        Ok(log_tr.exp().scale(lu.det()))
    }

    /// Matrix exponential by scaling and squaring with a Taylor series.
    ///
    /// The series runs until its terms fall below machine precision in
    /// every coefficient.
    pub fn exp(&self) -> Self {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let order = self.order();
        let space = self.space().clone();
        let norm = self.value().max_abs() * T::from_int(n as i64);
        let mut squarings = 0u32;
        let mut scale = T::one();
        while norm * scale > T::ratio(1, 2) {
            scale = scale * T::ratio(1, 2);
            squarings += 1;
        }
        let a = self.map(|j| j.scale(scale));
        let mut sum = JetMatrix::from_fn(n, n, |i, j| {
            Jet::constant(&space, if i == j { T::one() } else { T::zero() }).truncate(order)
        });
        let mut term = sum.clone();
        for k in 1..=60 {
            term = term.mul(&a).map(|j| j.scale(T::ratio(1, k)));
            sum = JetMatrix::from_fn(n, n, |i, j| sum.at(i, j) + term.at(i, j));
            let size = term.entries.iter().flat_map(|j| j.coeffs().iter()).fold(T::zero(), |m, c| m.max(c.abs()));
            if size < T::epsilon() * T::ratio(1, 16) {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(space: &Arc<JetSpace>) -> JetMatrix<f64> {
        let u = Jet::variable(space, 0, 0.3);
        let v = Jet::variable(space, 1, -0.2);
        JetMatrix::from_entries(
            3,
            3,
            vec![
                u.exp(), &u * &v, v.add_scalar(1.0),
                u.sin(), v.cos().scale(2.0), Jet::constant(space, 0.5),
                (&u * &u).add_scalar(1.0), Jet::constant(space, -1.0), (&v + &u).exp(),
            ],
        )
    }

    #[test]
    fn series_determinant_matches_expansion() {
        let s = JetSpace::new(2, 4);
        let m = sample(&s);
        assert!(m.det_nonsingular().unwrap().max_abs_diff(&m.det()) < 1e-13);
    }

    #[test]
    fn inverse_times_matrix_is_identity_to_all_orders() {
        let s = JetSpace::new(2, 4);
        let m = sample(&s);
        let prod = m.mul(&m.inverse().unwrap());
        for i in 0..3 {
            for j in 0..3 {
                let want = Jet::constant(&s, if i == j { 1.0 } else { 0.0 });
                assert!(prod.at(i, j).max_abs_diff(&want) < 1e-13);
            }
        }
    }

    #[test]
    fn determinant_is_multiplicative_and_matches_values() {
        let s = JetSpace::new(2, 3);
        let m = sample(&s);
        let d = m.det();
        assert!((d.value() - linalg::det(&m.value())).abs() < 1e-14);
        let sq = m.mul(&m).det();
        assert!(sq.max_abs_diff(&(&d * &d)) < 1e-12);
    }

    #[test]
    fn exponential_matches_values_and_derivative() {
        // diagonal jets exponentiate entrywise
        let s = JetSpace::new(1, 4);
        let u = Jet::variable(&s, 0, 0.0);
        let c = |v: f64| Jet::constant(&s, v);
        let m = JetMatrix::from_entries(2, 2, vec![u.add_scalar(1.5), c(0.0), c(0.0), u.scale(-2.0).add_scalar(0.3)]);
        let e = m.exp();
        assert!((e.at(0, 0).partial(&[3]) - 1.5f64.exp()).abs() < 1e-12);
        assert!((e.at(1, 1).partial(&[2]) - 4.0 * 0.3f64.exp()).abs() < 1e-12);
        assert!(e.at(0, 1).max_abs_diff(&c(0.0)) < 1e-15);

        let rot = JetMatrix::from_entries(2, 2, vec![c(0.0), u.add_scalar(2.0), u.add_scalar(-2.0), c(0.0)]);
        let r = rot.exp().value();
        let want = linalg::expm(&rot.value());
        assert!(r.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn determinant_defined_at_singular_value() {
        // [[u, 1], [0, u]] has det u^2: zero value, nonzero second coefficient
        let s = JetSpace::new(1, 2);
        let u = Jet::variable(&s, 0, 0.0);
        let m = JetMatrix::from_entries(2, 2, vec![u.clone(), Jet::constant(&s, 1.0), Jet::zero(&s), u]);
        assert_eq!(m.det().coeffs(), &[0.0, 0.0, 1.0]);
    }
}
