use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::ast::{BinOp, Expr};
use super::parser::{parse_source, DslSource};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::numtensor::{Jet, JetSpace, MAX_ORDER};
use crate::scalar::Real;

/// Squared singular-value ratio below which a Jacobian counts as rank deficient.
const RANK_RATIO: f64 = 1e-20;

/// A parametrized map `ℝⁿ → ℝⁿ⁺¹` that can be pushed through jets.
pub trait ChartMap<T: Real>: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    /// Ambient coordinates as functions of the given coordinate jets.
    fn eval(&self, u: &[Jet<T>]) -> Result<Vec<Jet<T>>>;
}

/// Chart backed by a closure.
pub struct FnChart<T, F> {
    dim: usize,
    f: F,
    _marker: std::marker::PhantomData<fn() -> T>,
}

impl<T, F> FnChart<T, F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnChart { dim, f, _marker: std::marker::PhantomData }
    }
}

impl<T, F> fmt::Debug for FnChart<T, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnChart(dim={})", self.dim)
    }
}

impl<T: Real, F> ChartMap<T> for FnChart<T, F>
where
    F: Fn(&[Jet<T>]) -> Result<Vec<Jet<T>>> + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, u: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        (self.f)(u)
    }
}

pub fn eval_expr<T: Real>(e: &Expr, u: &[Jet<T>], params: &BTreeMap<String, f64>) -> Result<Jet<T>> {
    let space = u[0].space();
    Ok(match e {
        Expr::Num(v) => Jet::constant(space, T::from_f64_lossy(*v)),
        Expr::Var(k) => u.get(*k).cloned().ok_or(Error::DimensionMismatch { expected: k + 1, found: u.len() })?,
        Expr::Param(p) => {
            let v = params.get(p).ok_or_else(|| Error::InvalidParams(format!("unbound parameter '{p}'")))?;
            Jet::constant(space, T::from_f64_lossy(*v))
        }
        Expr::Neg(a) => -eval_expr(a, u, params)?,
        Expr::Func(f, a) => eval_expr(a, u, params)?.eval(f.elementary())?,
        Expr::Pow(a, r) => eval_expr(a, u, params)?.pow_ratio(*r)?,
        Expr::Bin(op, a, b) => {
            let (x, y) = (eval_expr(a, u, params)?, eval_expr(b, u, params)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x.checked_div(&y)?,
            }
        }
    })
}

/// Chart defined by expression-language text.
#[derive(Clone, Debug)]
pub struct DslChart {
    source: DslSource,
}

impl DslChart {
    pub fn source(&self) -> &DslSource {
        &self.source
    }
}

impl<T: Real> ChartMap<T> for DslChart {
    fn dim(&self) -> usize {
        self.source.dim
    }

    fn eval(&self, u: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        self.source.components.iter().map(|e| eval_expr(e, u, &self.source.params)).collect()
    }
}

/// `x ↦ A x + b` applied after another chart.
#[derive(Debug)]
struct AffineImage<T: Real> {
    inner: Arc<dyn ChartMap<T>>,
    a: Matrix<f64>,
    b: Vec<f64>,
}

impl<T: Real> ChartMap<T> for AffineImage<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, u: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        let x = self.inner.eval(u)?;
        let space = u[0].space();
        Ok((0..x.len())
            .map(|i| {
                x.iter().enumerate().fold(Jet::constant(space, T::from_f64_lossy(self.b[i])), |acc, (j, xj)| {
                    acc + xj.scale(T::from_f64_lossy(self.a[(i, j)]))
                })
            })
            .collect())
    }
}

/// A parametrized hypersurface together with a sampling box.
#[derive(Clone)]
pub struct ChartDef<T: Real> {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    /// Per-coordinate `(lo, hi)` box used for random sampling.
    pub domain: Vec<(f64, f64)>,
    map: Arc<dyn ChartMap<T>>,
    source: Option<DslSource>,
}

impl<T: Real> fmt::Debug for ChartDef<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartDef")
            .field("label", &self.label)
            .field("dim", &self.dim())
            .field("params", &self.params)
            .field("domain", &self.domain)
            .finish()
    }
}

impl<T: Real> ChartDef<T> {
    pub fn new(label: impl Into<String>, map: Arc<dyn ChartMap<T>>, domain: Vec<(f64, f64)>) -> Self {
        assert_eq!(domain.len(), map.dim());
        ChartDef { label: label.into(), params: BTreeMap::new(), domain, map, source: None }
    }

    pub fn from_fn<F>(label: impl Into<String>, dim: usize, domain: Vec<(f64, f64)>, f: F) -> Self
    where
        F: Fn(&[Jet<T>]) -> Result<Vec<Jet<T>>> + Send + Sync + 'static,
    {
        Self::new(label, Arc::new(FnChart::new(dim, f)), domain)
    }

    pub fn from_source(source: DslSource) -> Self {
        let dim = source.dim;
        let params = source.params.clone();
        let map: Arc<dyn ChartMap<T>> = Arc::new(DslChart { source: source.clone() });
        ChartDef { label: "dsl".into(), params, domain: vec![(-0.5, 0.5); dim], map, source: Some(source) }
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim() + 1
    }

    pub fn map(&self) -> &Arc<dyn ChartMap<T>> {
        &self.map
    }

    /// Expression source, for charts that came from text.
    pub fn source(&self) -> Option<&DslSource> {
        self.source.as_ref()
    }

    pub fn with_params(mut self, params: &BTreeMap<String, f64>) -> Self {
        self.params.extend(params.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }

    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Result<Self> {
        if domain.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: domain.len() });
        }
        self.domain = domain;
        Ok(self)
    }

    /// Rebinds a parameter of a text-defined chart.
    pub fn bind(self, name: &str, value: f64) -> Result<Self> {
        let mut src = self.source.clone().ok_or_else(|| Error::InvalidParams("chart has no free parameters".into()))?;
        match src.params.get_mut(name) {
            Some(v) => *v = value,
            None => return Err(Error::InvalidParams(format!("unknown parameter '{name}'"))),
        }
        let domain = self.domain.clone();
        let mut out = ChartDef::from_source(src);
        out.label = self.label;
        out.domain = domain;
        Ok(out)
    }

    /// The image of this chart under `x ↦ A x + b`.
    pub fn affine_image(&self, a: &Matrix<f64>, b: &[f64]) -> Result<Self> {
        let m = self.ambient_dim();
        if a.rows() != m || a.cols() != m || b.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: a.rows() });
        }
        Ok(ChartDef {
            label: format!("affine({})", self.label),
            params: self.params.clone(),
            domain: self.domain.clone(),
            map: Arc::new(AffineImage { inner: self.map.clone(), a: a.clone(), b: b.to_vec() }),
            source: None,
        })
    }

    pub fn in_domain(&self, point: &[f64]) -> bool {
        point.len() == self.dim() && point.iter().zip(&self.domain).all(|(p, (lo, hi))| lo <= p && p <= hi)
    }
}

/// Parses chart text.
pub fn parse_chart<T: Real>(text: &str) -> Result<ChartDef<T>> {
    Ok(ChartDef::from_source(parse_source(text)?))
}

/// Taylor expansion of the chart around `point`, with an immersion check.
pub fn eval_chart_jet<T: Real>(chart: &ChartDef<T>, point: &[T], order: usize) -> Result<Vec<Jet<T>>> {
    let n = chart.dim();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParams(format!("jet order {order} outside 1..={MAX_ORDER}")));
    }
    let space = JetSpace::new(n, order);
    let u: Vec<Jet<T>> = point.iter().enumerate().map(|(i, &p)| Jet::variable(&space, i, p)).collect();
    let x = chart.map.eval(&u)?;
    if x.len() != n + 1 {
        return Err(Error::DimensionMismatch { expected: n + 1, found: x.len() });
    }
    if let Some(bad) = x.iter().flat_map(|j| j.coeffs().iter()).find(|c| !c.is_finite()) {
        return Err(Error::Domain { func: "chart", value: bad.to_f64_lossy() });
    }
    let jac: Vec<Vec<T>> = x.iter().map(Jet::gradient).collect();
    let gram = Matrix::from_fn(n, n, |i, j| (0..=n).fold(T::zero(), |s, a| s + jac[a][i] * jac[a][j]));
    let ev = linalg::sym_eigenvalues(&gram);
    if !(ev[0] > T::from_f64_lossy(RANK_RATIO) * ev[n - 1]) || !(ev[n - 1] > T::zero()) {
        return Err(Error::ImmersionFailure { dim: n });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_hypersphere_text_at_origin() {
        let c: ChartDef<f64> =
            parse_chart("dim 2; param C0=1; x1=exp(u1); x2=exp(u2); x3=C0*exp(-u1-u2);").unwrap();
        let x = eval_chart_jet(&c, &[0.0, 0.0], 1).unwrap();
        let vals: Vec<f64> = x.iter().map(Jet::value).collect();
        assert_eq!(vals, vec![1.0, 1.0, 1.0]);
        assert_eq!(x[2].gradient(), vec![-1.0, -1.0]);
        let c2 = c.bind("C0", 2.0).unwrap();
        assert_eq!(eval_chart_jet(&c2, &[0.0, 0.0], 1).unwrap()[2].value(), 2.0);
    }

    #[test]
    fn constant_chart_is_not_an_immersion() {
        let c: ChartDef<f64> = parse_chart("dim 1; x1 = 1; x2 = 1;").unwrap();
        assert_eq!(eval_chart_jet(&c, &[0.0], 2).unwrap_err(), Error::ImmersionFailure { dim: 1 });
    }

    #[test]
    fn domain_errors_propagate() {
        let c: ChartDef<f64> = parse_chart("dim 1; x1 = u1; x2 = log(u1);").unwrap();
        assert!(matches!(eval_chart_jet(&c, &[-1.0], 2), Err(Error::Domain { .. })));
    }

    #[test]
    fn affine_image_shifts_values() {
        let c: ChartDef<f64> = parse_chart("dim 1; x1 = u1; x2 = u1^2;").unwrap();
        let a = Matrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 0.5]]);
        let img = c.affine_image(&a, &[1.0, -1.0]).unwrap();
        let x = eval_chart_jet(&img, &[1.0], 1).unwrap();
        assert_eq!((x[0].value(), x[1].value()), (3.0, 0.5));
    }
}
