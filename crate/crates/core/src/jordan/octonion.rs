//! Octonions by Cayley–Dickson doubling: `(a, b)(c, d) = (ac - d̄b, da + bc̄)`
//! applied to reals → complexes → quaternions → octonions, with basis
//! `e0 = 1, e1, …, e7` in doubling order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use rand::Rng;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Octonion<T>(pub [T; 8]);

fn conj_slice<T: Real>(x: &[T]) -> Vec<T> {
    x.iter().enumerate().map(|(k, &v)| if k == 0 { v } else { -v }).collect()
}

/// Product in the `2^k`-dimensional Cayley–Dickson algebra.
fn cd_mul<T: Real>(x: &[T], y: &[T]) -> Vec<T> {
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let db = cd_mul(&conj_slice(d), b);
    let da = cd_mul(d, a);
    let bc = cd_mul(b, &conj_slice(c));
    ac.iter().zip(&db).map(|(&p, &q)| p - q).chain(da.iter().zip(&bc).map(|(&p, &q)| p + q)).collect()
}

impl<T: Real> Octonion<T> {
    pub fn zero() -> Self {
        Octonion([T::zero(); 8])
    }

    pub fn real(v: T) -> Self {
        let mut c = [T::zero(); 8];
        c[0] = v;
        Octonion(c)
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    /// Basis unit `e_k`, `k = 0..8`.
    pub fn unit(k: usize) -> Self {
        let mut c = [T::zero(); 8];
        c[k] = T::one();
        Octonion(c)
    }

    pub fn random<R: Rng>(rng: &mut R) -> Self {
        Octonion(std::array::from_fn(|_| T::from_f64_lossy(rng.gen_range(-1.0..1.0))))
    }

    pub fn re(&self) -> T {
        self.0[0]
    }

    pub fn conj(&self) -> Self {
        Octonion(std::array::from_fn(|k| if k == 0 { self.0[0] } else { -self.0[k] }))
    }

    /// Euclidean inner product `Re(x ȳ)`.
    pub fn inner(&self, other: &Self) -> T {
        self.0.iter().zip(&other.0).fold(T::zero(), |s, (&a, &b)| s + a * b)
    }

    pub fn norm_sqr(&self) -> T {
        self.inner(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Octonion(self.0.map(|v| v * s))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0.iter().zip(&other.0).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Unit products `e_i e_j = sign · e_k` from the doubling formula.
fn unit_table() -> &'static [[(bool, usize); 8]; 8] {
    static TABLE: OnceLock<[[(bool, usize); 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let unit = |k: usize| -> Vec<f64> { (0..8).map(|m| if m == k { 1.0 } else { 0.0 }).collect() };
                let p = cd_mul(&unit(i), &unit(j));
                let k = (0..8).find(|&k| p[k] != 0.0).expect("unit product");
                (p[k] < 0.0, k)
            })
        })
    })
}

impl<T: Real> Mul for Octonion<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let table = unit_table();
        let mut out = [T::zero(); 8];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in rhs.0.iter().enumerate() {
                let (negative, k) = table[i][j];
                out[k] = if negative { out[k] - a * b } else { out[k] + a * b };
            }
        }
        Octonion(out)
    }
}

impl<T: Real> Add for Octonion<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Octonion(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl<T: Real> Sub for Octonion<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Octonion(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

impl<T: Real> Neg for Octonion<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Octonion(self.0.map(|v| -v))
    }
}

impl<T: Real> fmt::Display for Octonion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in self.0.iter().enumerate() {
            if *v == T::zero() {
                continue;
            }
            let sign = if *v < T::zero() { "-" } else if first { "" } else { "+" };
            let mag = v.abs();
            let unit = if k == 0 { String::new() } else { format!("e{k}") };
            if mag == T::one() && k != 0 {
                write!(f, "{sign}{unit}")?;
            } else {
                write!(f, "{sign}{mag}{unit}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `e_i e_j` as `(sign, k)` with `e_i e_j = sign · e_k`.
pub fn multiplication_table() -> [[(i8, usize); 8]; 8] {
    unit_table().map(|row| row.map(|(negative, k)| (if negative { -1 } else { 1 }, k)))
}
