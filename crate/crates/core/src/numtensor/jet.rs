//! Truncated multivariate Taylor jets.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_rational::Ratio;

use super::space::JetSpace;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Taylor expansion of a scalar function around a point, truncated at
/// `order`.
///
/// The coefficient stored for the multi-index `alpha` is `∂^alpha f / alpha!`
/// so products are plain truncated Cauchy products. Jets of different
/// orders combine to the smaller order; jets from different spaces do not
/// combine at all.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    space: Arc<JetSpace>,
    order: usize,
    coeffs: Vec<T>,
}

/// Elementary functions with closed-form Taylor coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElementaryFn {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Pow(Ratio<i64>),
    Neg,
    Recip,
}

impl<T: Scalar> Jet<T> {
    pub fn constant(space: &Arc<JetSpace>, value: T) -> Self {
        let mut coeffs = vec![T::zero(); space.len_upto(space.order())];
        coeffs[0] = value;
        Jet { space: space.clone(), order: space.order(), coeffs }
    }

    /// The coordinate function `u_var` expanded around `value`.
    pub fn variable(space: &Arc<JetSpace>, var: usize, value: T) -> Self {
        assert!(var < space.nvars(), "variable index out of range");
        let mut jet = Self::constant(space, value);
        if space.order() >= 1 {
            jet.coeffs[1 + var] = T::one();
        }
        jet
    }

    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Self::constant(space, T::zero())
    }

    pub fn from_coeffs(space: &Arc<JetSpace>, order: usize, coeffs: Vec<T>) -> Self {
        assert!(order <= space.order());
        assert_eq!(coeffs.len(), space.len_upto(order), "coefficient count");
        Jet { space: space.clone(), order, coeffs }
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> T {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Taylor coefficient of `alpha` (zero beyond the truncation order).
    pub fn coeff(&self, alpha: &[u8]) -> T {
        match self.space.index_of(alpha) {
            Some(k) if k < self.coeffs.len() => self.coeffs[k],
            _ => T::zero(),
        }
    }

    /// Partial derivative `∂^alpha f` at the expansion point.
    pub fn partial(&self, alpha: &[u8]) -> T {
        let k = self.space.index_of(alpha).expect("multi-index in space");
        T::from_int(self.space.alpha_factorial(k) as i64) * self.coeff(alpha)
    }

    /// First derivatives at the expansion point.
    pub fn gradient(&self) -> Vec<T> {
        (0..self.space.nvars())
            .map(|v| if self.order >= 1 { self.coeffs[1 + v] } else { T::zero() })
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Jet {
            space: self.space.clone(),
            order,
            coeffs: self.coeffs[..self.space.len_upto(order)].to_vec(),
        }
    }

    /// `∂f/∂u_var` as a jet of one lower order.
    pub fn derivative(&self, var: usize) -> Self {
        assert!(self.order >= 1, "derivative of an order-0 jet is undetermined");
        let order = self.order - 1;
        let len = self.space.len_upto(order);
        let coeffs = (0..len)
            .map(|k| {
                let up = self.space.raised(var, k).expect("raised index within order");
                let e = self.space.multi_index(k)[var] as i64 + 1;
                T::from_int(e) * self.coeffs[up]
            })
            .collect();
        Jet { space: self.space.clone(), order, coeffs }
    }

    pub fn scale(&self, s: T) -> Self {
        Jet {
            space: self.space.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::constant(&self.space, T::one()).truncate(self.order);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// `Σ_k taylor[k] (self - value)^k`, i.e. `f ∘ self` for a univariate `f`
    /// whose normalized derivatives at the value part are `taylor`.
    pub fn compose_series(&self, taylor: &[T]) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = T::zero();
        let terms = taylor.len().min(self.order + 1);
        let mut acc = Self::constant(&self.space, taylor[terms - 1]).truncate(self.order);
        for k in (0..terms - 1).rev() {
            acc = (&acc * &delta).add_scalar(taylor[k]);
        }
        acc
    }

    fn check_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space)
                || (self.space.nvars() == other.space.nvars() && self.space.order() == other.space.order()),
            "jets from different spaces"
        );
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        self.check_space(other);
        let order = self.order.min(other.order);
        let len = self.space.len_upto(order);
        let coeffs = (0..len).map(|k| f(self.coeffs[k], other.coeffs[k])).collect();
        Jet { space: self.space.clone(), order, coeffs }
    }

    fn product(&self, other: &Self) -> Self {
        self.check_space(other);
        let order = self.order.min(other.order);
        let mut coeffs = vec![T::zero(); self.space.len_upto(order)];
        for &(a, b, c) in self.space.products_upto(order) {
            coeffs[c as usize] += self.coeffs[a as usize] * other.coeffs[b as usize];
        }
        Jet { space: self.space.clone(), order, coeffs }
    }

    /// Maximum coefficient distance, for tests and tolerances.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let d = self - other;
        d.coeffs.iter().fold(T::zero(), |m, &c| if c.magnitude() > m { c.magnitude() } else { m })
    }
}

impl<T: Real> Jet<T> {
    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut taylor = vec![e; self.order + 1];
        let mut fact = T::one();
        for (k, t) in taylor.iter_mut().enumerate().skip(1) {
            fact = fact * T::from_int(k as i64);
            *t = e / fact;
        }
        self.compose_series(&taylor)
    }

    pub fn ln(&self) -> Result<Self> {
        let x0 = self.value();
        if !(x0 > T::zero()) {
            return Err(domain("log", x0));
        }
        let mut taylor = vec![x0.ln()];
        let mut pow = T::one();
        for k in 1..=self.order {
            pow = pow * x0;
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            taylor.push(sign / (T::from_int(k as i64) * pow));
        }
        Ok(self.compose_series(&taylor))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_series(&trig_taylor([s, c, -s, -c], self.order))
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_series(&trig_taylor([c, -s, -c, s], self.order))
    }

    pub fn recip(&self) -> Result<Self> {
        self.pow_ratio(Ratio::from_integer(-1))
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.pow_ratio(Ratio::new(1, 2))
    }

    /// `self^p` for a rational constant `p`.
    ///
    /// Non-negative integer powers are polynomial and defined everywhere;
    /// negative integers need a nonzero value part; fractional powers need a
    /// positive one.
    pub fn pow_ratio(&self, p: Ratio<i64>) -> Result<Self> {
        let x0 = self.value();
        if p.is_integer() && *p.numer() >= 0 {
            return Ok(self.powi(*p.numer() as u32));
        }
        if p.is_integer() {
            if x0 == T::zero() {
                return Err(domain("recip", x0));
            }
        } else if !(x0 > T::zero()) {
            return Err(domain("pow", x0));
        }
        let pf = T::ratio(*p.numer(), *p.denom());
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut binom = T::one();
        for k in 0..=self.order {
            if k > 0 {
                binom = binom * (pf - T::from_int(k as i64 - 1)) / T::from_int(k as i64);
            }
            taylor.push(binom * x0.pow_ratio(p - Ratio::from_integer(k as i64)));
        }
        Ok(self.compose_series(&taylor))
    }

    pub fn eval(&self, f: ElementaryFn) -> Result<Self> {
        match f {
            ElementaryFn::Exp => Ok(self.exp()),
            ElementaryFn::Log => self.ln(),
            ElementaryFn::Sqrt => self.sqrt(),
            ElementaryFn::Sin => Ok(self.sin()),
            ElementaryFn::Cos => Ok(self.cos()),
            ElementaryFn::Pow(p) => self.pow_ratio(p),
            ElementaryFn::Neg => Ok(-self),
            ElementaryFn::Recip => self.recip(),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.recip()?)
    }
}

/// Apply an elementary function to a jet.
pub fn jet_eval<T: Real>(f: ElementaryFn, x: &Jet<T>) -> Result<Jet<T>> {
    x.eval(f)
}

fn domain<T: Real>(func: &'static str, value: T) -> Error {
    Error::Domain { func, value: value.to_f64_lossy() }
}

fn trig_taylor<T: Real>(cycle: [T; 4], order: usize) -> Vec<T> {
    let mut fact = T::one();
    (0..=order)
        .map(|k| {
            if k > 0 {
                fact = fact * T::from_int(k as i64);
            }
            cycle[k % 4] / fact
        })
        .collect()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<T: Scalar> $tr<&Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                let f: fn(&Jet<T>, &Jet<T>) -> Jet<T> = $body;
                f(self, rhs)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: Jet<T>) -> Jet<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Jet<T>> for Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: &Jet<T>) -> Jet<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Scalar> $tr<Jet<T>> for &Jet<T> {
            type Output = Jet<T>;
            fn $method(self, rhs: Jet<T>) -> Jet<T> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.product(b));

impl<T: Real> Div<&Jet<T>> for &Jet<T> {
    type Output = Jet<T>;
    /// Floating-point semantics: a zero value part yields non-finite
    /// coefficients. Use [`Jet::checked_div`] to get a domain error instead.
    fn div(self, rhs: &Jet<T>) -> Jet<T> {
        let x0 = rhs.value();
        let mut taylor = Vec::with_capacity(rhs.order + 1);
        let mut p = T::one() / x0;
        for k in 0..=rhs.order {
            taylor.push(if k % 2 == 0 { p } else { -p });
            p = p / x0;
        }
        self * &rhs.compose_series(&taylor)
    }
}

impl<T: Scalar> Neg for &Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        self.scale(-T::one())
    }
}

impl<T: Scalar> Neg for Jet<T> {
    type Output = Jet<T>;
    fn neg(self) -> Jet<T> {
        (&self).neg()
    }
}

impl<T: Scalar> AddAssign<&Jet<T>> for Jet<T> {
    fn add_assign(&mut self, rhs: &Jet<T>) {
        *self = &*self + rhs;
    }
}

impl<T: Scalar> SubAssign<&Jet<T>> for Jet<T> {
    fn sub_assign(&mut self, rhs: &Jet<T>) {
        *self = &*self - rhs;
    }
}
