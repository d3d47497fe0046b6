use std::fmt;
use std::sync::Arc;

use super::index::CompositionIndex;
use crate::blaschke::{blaschke_at, check_hypersphere};
use crate::chart::{ChartDef, ChartMap};
use crate::error::{Error, Result};
use crate::numtensor::Jet;
use crate::report::CheckReport;
use crate::scalar::Real;

/// Half-width of the box the `t` coordinates are sampled from.
pub const T_BOX: f64 = 0.3;

/// A hyperbolic affine hypersphere centered at the origin.
#[derive(Clone, Debug)]
pub struct Factor<T: Real> {
    pub chart: ChartDef<T>,
    /// Its (negative, constant) affine mean curvature.
    pub l1: f64,
    /// Factor point used as the base point of the composition.
    pub base: Vec<f64>,
}

impl<T: Real> Factor<T> {
    pub fn new(chart: ChartDef<T>, l1: f64, base: Vec<f64>) -> Result<Self> {
        if !(l1 < 0.0) || !l1.is_finite() {
            return Err(Error::InvalidSpec(format!("factor mean curvature {l1} is not negative")));
        }
        if base.len() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), found: base.len() });
        }
        Ok(Factor { chart, l1, base })
    }

    /// Takes the mean curvature from the pipeline at the center of the domain box.
    pub fn measured(chart: ChartDef<T>) -> Result<Self> {
        let base: Vec<f64> = chart.domain.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
        let p: Vec<T> = base.iter().map(|&v| T::from_f64_lossy(v)).collect();
        let l1 = blaschke_at(&chart, &p)?.l1.to_f64_lossy();
        Factor::new(chart, l1, base)
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }
}

/// `r` points and `s` hypersphere factors with positive constants `c_1..c_K`.
#[derive(Clone, Debug)]
pub struct CompositionSpec<T: Real> {
    pub r: usize,
    pub factors: Vec<Factor<T>>,
    pub constants: Vec<f64>,
}

impl<T: Real> CompositionSpec<T> {
    pub fn new(r: usize, factors: Vec<Factor<T>>, constants: Vec<f64>) -> Result<Self> {
        let k = r + factors.len();
        if k < 2 {
            return Err(Error::InvalidSpec(format!("need at least two factors, got r + s = {k}")));
        }
        if constants.len() != k {
            return Err(Error::InvalidSpec(format!("expected {k} constants, got {}", constants.len())));
        }
        if let Some(c) = constants.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return Err(Error::InvalidSpec(format!("constant {c} is not positive")));
        }
        Ok(CompositionSpec { r, factors, constants })
    }

    /// Composition of `constants.len()` points.
    pub fn points(constants: Vec<f64>) -> Result<Self> {
        Self::new(constants.len(), Vec::new(), constants)
    }

    pub fn index(&self) -> CompositionIndex {
        CompositionIndex::new(self.r, self.factors.iter().map(Factor::dim).collect())
    }

    pub fn dim(&self) -> usize {
        self.index().n()
    }

    /// The constant `C` fixing the metric scale of the composition.
    pub fn big_c(&self) -> f64 {
        let n = self.dim() as f64;
        let mut prod = 1.0 / (n + 1.0);
        for c in &self.constants[..self.r] {
            prod *= c * c;
        }
        for (f, c) in self.factors.iter().zip(&self.constants[self.r..]) {
            let na = f.dim() as f64;
            prod *= c.powf(2.0 * (na + 1.0)) / ((na + 1.0).powf(na + 1.0) * (-f.l1).powf(na + 2.0));
        }
        prod.powf(1.0 / (n + 2.0))
    }

    /// Mean curvature `-1 / ((n + 1) C)` of the composition.
    pub fn l1(&self) -> f64 {
        -1.0 / ((self.dim() as f64 + 1.0) * self.big_c())
    }

    /// `t = 0` together with the factor base points.
    pub fn base_point(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.index().k() - 1];
        for f in &self.factors {
            p.extend_from_slice(&f.base);
        }
        p
    }

    /// Domain box: `[-T_BOX, T_BOX]` for each `t`, then the factor boxes.
    pub fn domain(&self) -> Vec<(f64, f64)> {
        let mut d = vec![(-T_BOX, T_BOX); self.index().k() - 1];
        for f in &self.factors {
            d.extend_from_slice(&f.chart.domain);
        }
        d
    }

    /// Hypersphere checks of every factor at its base point and two more box points.
    pub fn validate_factors(&self, tol: f64) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for (alpha, f) in self.factors.iter().enumerate() {
            for frac in [None, Some(0.25), Some(0.75)] {
                let p: Vec<T> = match frac {
                    None => f.base.iter().map(|&v| T::from_f64_lossy(v)).collect(),
                    Some(q) => f.chart.domain.iter().map(|(lo, hi)| T::from_f64_lossy(lo + q * (hi - lo))).collect(),
                };
                let inv = blaschke_at(&f.chart, &p)?;
                let rep = check_hypersphere(&inv, tol);
                for mut r in rep.reports() {
                    r.name = format!("factor{}_{}", alpha + 1, r.name);
                    out.push(r);
                }
                match rep.center {
                    None => return Err(Error::InvalidSpec(format!("factor {} is not a proper sphere", alpha + 1))),
                    Some(_) => {
                        let dev = (inv.l1.to_f64_lossy() - f.l1).abs();
                        out.push(CheckReport::new(format!("factor{}_l1", alpha + 1), dev, tol.max(1e-6)));
                    }
                }
            }
        }
        Ok(out)
    }
}

struct CompositionMap<T: Real> {
    index: CompositionIndex,
    constants: Vec<f64>,
    factors: Vec<Arc<dyn ChartMap<T>>>,
}

impl<T: Real> fmt::Debug for CompositionMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CompositionMap").field("index", &self.index).field("constants", &self.constants).finish()
    }
}

impl<T: Real> ChartMap<T> for CompositionMap<T> {
    fn dim(&self) -> usize {
        self.index.n()
    }

    fn eval(&self, u: &[Jet<T>]) -> Result<Vec<Jet<T>>> {
        let ix = &self.index;
        let k = ix.k();
        let space = u[0].space();
        let t = |lambda: usize| &u[ix.t_pos(lambda)];
        let mut out = Vec::with_capacity(ix.n() + 1);
        for a in 1..=k {
            // e_a = exp(-t^{a-1}/(n_a+1) + Σ_{b=a}^{K-1} t^b/f_b)
            let mut expo = Jet::zero(space);
            if a >= 2 {
                expo -= &t(a - 1).scale(T::ratio(1, ix.slot_dim(a) as i64 + 1));
            }
            for b in a..k {
                expo += &t(b).scale(T::ratio(1, ix.f(b) as i64));
            }
            let e = expo.exp().scale(T::from_f64_lossy(self.constants[a - 1]));
            if a <= ix.r() {
                out.push(e);
            } else {
                let alpha = a - ix.r();
                let x = self.factors[alpha - 1].eval(&u[ix.factor_range(alpha)])?;
                out.extend(x.iter().map(|xc| &e * xc));
            }
        }
        Ok(out)
    }
}

/// Chart of the composition in `(t, p_1, …, p_s)` coordinates.
pub fn compose_chart<T: Real>(spec: &CompositionSpec<T>) -> Result<ChartDef<T>> {
    let map = CompositionMap {
        index: spec.index(),
        constants: spec.constants.clone(),
        factors: spec.factors.iter().map(|f| f.chart.map().clone()).collect(),
    };
    let label = format!(
        "compose(r={}, factors=[{}])",
        spec.r,
        spec.factors.iter().map(|f| f.chart.label.as_str()).collect::<Vec<_>>().join(", ")
    );
    Ok(ChartDef::new(label, Arc::new(map), spec.domain()))
}
