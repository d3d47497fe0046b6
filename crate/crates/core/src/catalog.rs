//! Named hypersurfaces with known equiaffine invariants.
//!
//! Specs are written `name(args)`, for example `flat_hypersphere(2, 1)`,
//! `sl_so(3)` or `graph(x3 = u1^4 + u2^2)`.

use std::fmt;

use crate::calabi::{compose_chart, CompositionSpec};
use crate::chart::{parse_chart, ChartDef};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numtensor::{Jet, JetMatrix};
use crate::scalar::Real;

/// Invariants a catalog chart is known to have at every point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expected {
    pub l1: Option<f64>,
    pub pick: Option<f64>,
    pub l1_negative: bool,
    pub sphere: bool,
    /// `∇A = 0`.
    pub parallel: bool,
    /// `A = 0`.
    pub cubic_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "flat_hypersphere",
        params: "n0 >= 1, C0 > 0",
        summary: "flat hyperbolic sphere x1 ... x_{n0+1} = C0, product coordinates",
    },
    CatalogEntry { name: "unit_sphere", params: "n >= 1", summary: "upper hemisphere of |x| = 1" },
    CatalogEntry { name: "elliptic_paraboloid", params: "n >= 1", summary: "x_{n+1} = |u|^2 / 2" },
    CatalogEntry { name: "hyperboloid", params: "n >= 1", summary: "upper sheet x_{n+1} = sqrt(1 + |u|^2)" },
    CatalogEntry {
        name: "sl_so",
        params: "m >= 3",
        summary: "unimodular positive symmetric m x m matrices, exp of traceless symmetric",
    },
    CatalogEntry { name: "graph", params: "expression text", summary: "chart language source or x_k = f(u)" },
];

const MAX_DIM: usize = 32;
const MAX_M: usize = 7;

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogSpec {
    FlatHypersphere { n0: usize, c0: f64 },
    UnitSphere(usize),
    EllipticParaboloid(usize),
    Hyperboloid(usize),
    SlSo(usize),
    Graph(String),
}

fn count(name: &str, v: f64, min: usize, max: usize) -> Result<usize> {
    if v.fract() != 0.0 || v < min as f64 || v > max as f64 {
        return Err(Error::InvalidParams(format!("{name} must be an integer in {min}..={max}, got {v}")));
    }
    Ok(v as usize)
}

impl CatalogSpec {
    /// Builds a spec from a name and numeric arguments.
    pub fn from_args(name: &str, args: &[f64]) -> Result<Self> {
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!("{name} takes {k} argument(s), got {}", args.len())))
            }
        };
        Ok(match name {
            "flat_hypersphere" => {
                arity(2)?;
                let n0 = count("n0", args[0], 1, MAX_DIM - 1)?;
                if !(args[1] > 0.0) || !args[1].is_finite() {
                    return Err(Error::InvalidParams(format!("C0 must be positive, got {}", args[1])));
                }
                CatalogSpec::FlatHypersphere { n0, c0: args[1] }
            }
            "unit_sphere" | "elliptic_paraboloid" | "hyperboloid" => {
                arity(1)?;
                let n = count("n", args[0], 1, MAX_DIM)?;
                match name {
                    "unit_sphere" => CatalogSpec::UnitSphere(n),
                    "elliptic_paraboloid" => CatalogSpec::EllipticParaboloid(n),
                    _ => CatalogSpec::Hyperboloid(n),
                }
            }
            "sl_so" => {
                arity(1)?;
                CatalogSpec::SlSo(count("m", args[0], 3, MAX_M)?)
            }
            "graph" => return Err(Error::InvalidParams("graph takes expression text".into())),
            _ => return Err(Error::UnknownChart(name.into())),
        })
    }

    /// Parses `name(args)`; `graph(...)` takes the raw text between the
    /// outer parentheses.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, inner) = match text.find('(') {
            Some(open) if text.ends_with(')') => (text[..open].trim(), &text[open + 1..text.len() - 1]),
            Some(_) => return Err(Error::InvalidSpec(format!("missing closing ')' in '{text}'"))),
            None => (text, ""),
        };
        if name == "graph" {
            return Ok(CatalogSpec::Graph(inner.trim().to_string()));
        }
        if !ENTRIES.iter().any(|e| e.name == name) {
            return Err(Error::UnknownChart(name.into()));
        }
        let args = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| Error::InvalidSpec(format!("bad argument '{s}' in '{text}'"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_args(name, &args)
    }

    pub fn expected(&self) -> Expected {
        match self {
            CatalogSpec::FlatHypersphere { n0, c0 } => {
                let l1 = flat_spec::<f64>(*n0, *c0).map(|s| s.l1()).ok();
                // flat, so J = -L1; undefined for curves
                let pick = l1.filter(|_| *n0 >= 2).map(|v| -v);
                Expected { l1, pick, l1_negative: true, sphere: true, parallel: true, cubic_zero: false }
            }
            CatalogSpec::UnitSphere(_) => quadric(1.0),
            CatalogSpec::EllipticParaboloid(_) => quadric(0.0),
            CatalogSpec::Hyperboloid(_) => quadric(-1.0),
            CatalogSpec::SlSo(_) => Expected { l1_negative: true, sphere: true, parallel: true, ..Expected::default() },
            CatalogSpec::Graph(_) => Expected::default(),
        }
    }

    pub fn build<T: Real>(&self) -> Result<ChartDef<T>> {
        let mut chart = match self {
            CatalogSpec::FlatHypersphere { n0, c0 } => compose_chart(&flat_spec::<T>(*n0, *c0)?)?,
            CatalogSpec::UnitSphere(n) => {
                let half = 0.5 / (*n as f64).sqrt();
                graph_of(*n, vec![(-half, half); *n], |s| (-s).add_scalar(T::one()).sqrt())?
            }
            CatalogSpec::EllipticParaboloid(n) => graph_of(*n, vec![(-1.0, 1.0); *n], |s| Ok(s.scale(T::ratio(1, 2))))?,
            CatalogSpec::Hyperboloid(n) => graph_of(*n, vec![(-1.0, 1.0); *n], |s| s.add_scalar(T::one()).sqrt())?,
            CatalogSpec::SlSo(m) => sl_so_chart(*m),
            CatalogSpec::Graph(text) => parse_chart(&graph_source(text))?,
        };
        chart.label = self.to_string();
        Ok(chart)
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSpec::FlatHypersphere { n0, c0 } => write!(f, "flat_hypersphere({n0}, {c0})"),
            CatalogSpec::UnitSphere(n) => write!(f, "unit_sphere({n})"),
            CatalogSpec::EllipticParaboloid(n) => write!(f, "elliptic_paraboloid({n})"),
            CatalogSpec::Hyperboloid(n) => write!(f, "hyperboloid({n})"),
            CatalogSpec::SlSo(m) => write!(f, "sl_so({m})"),
            CatalogSpec::Graph(text) => write!(f, "graph({text})"),
        }
    }
}

fn quadric(l1: f64) -> Expected {
    Expected {
        l1: Some(l1),
        pick: Some(0.0),
        l1_negative: l1 < 0.0,
        sphere: true,
        parallel: true,
        cubic_zero: true,
    }
}

/// Pure-point composition with constants `(1, …, 1, C0)`.
fn flat_spec<T: Real>(n0: usize, c0: f64) -> Result<CompositionSpec<T>> {
    let mut constants = vec![1.0; n0];
    constants.push(c0);
    CompositionSpec::points(constants)
}

/// `x_i = u_i`, `x_{n+1} = h(|u|^2)`.
fn graph_of<T: Real>(
    n: usize,
    domain: Vec<(f64, f64)>,
    h: impl Fn(Jet<T>) -> Result<Jet<T>> + Send + Sync + 'static,
) -> Result<ChartDef<T>> {
    Ok(ChartDef::from_fn("graph", n, domain, move |u: &[Jet<T>]| {
        let s = u.iter().skip(1).fold(&u[0] * &u[0], |acc, v| acc + v * v);
        let mut out = u.to_vec();
        out.push(h(s)?);
        Ok(out)
    }))
}

/// Accepts full chart text, or a single `x_k = f(u)` line taken as the
/// graph over the first `k - 1` coordinates.
pub fn graph_source(text: &str) -> String {
    let t = text.trim().trim_end_matches(';');
    if t.contains("dim") {
        return text.to_string();
    }
    let Some((lhs, rhs)) = t.split_once('=') else {
        return text.to_string();
    };
    let k = match lhs.trim().strip_prefix('x').and_then(|d| d.parse::<usize>().ok()) {
        Some(k) if k >= 2 => k,
        _ => return text.to_string(),
    };
    let mut s = format!("dim {};\n", k - 1);
    for i in 1..k {
        s.push_str(&format!("x{i} = u{i};\n"));
    }
    s.push_str(&format!("x{k} = {};\n", rhs.trim()));
    s
}

/// Frobenius-orthonormal basis of traceless symmetric `m × m` matrices:
/// the diagonal `diag(1, …, 1, −k, 0, …)/√(k(k+1))`, then `(E_ij + E_ji)/√2`
/// for `i < j` row by row.
pub fn traceless_symmetric_basis(m: usize) -> Vec<Matrix<f64>> {
    let mut basis = Vec::new();
    for k in 1..m {
        let norm = ((k * (k + 1)) as f64).sqrt();
        basis.push(Matrix::from_fn(m, m, |i, j| match (i == j, i.cmp(&k)) {
            (true, std::cmp::Ordering::Less) => 1.0 / norm,
            (true, std::cmp::Ordering::Equal) => -(k as f64) / norm,
            _ => 0.0,
        }));
    }
    for i in 0..m {
        for j in i + 1..m {
            basis.push(Matrix::from_fn(m, m, |a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) {
                    std::f64::consts::FRAC_1_SQRT_2
                } else {
                    0.0
                }
            }));
        }
    }
    basis
}

/// Coordinates of a traceless symmetric matrix in [`traceless_symmetric_basis`].
pub fn traceless_symmetric_coords(s: &Matrix<f64>) -> Vec<f64> {
    let m = s.rows();
    traceless_symmetric_basis(m)
        .iter()
        .map(|b| (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| b[(i, j)] * s[(i, j)]).sum())
        .collect()
}

/// `u ↦` upper-triangular entries of `exp(Σ u_a B_a)`.
fn sl_so_chart<T: Real>(m: usize) -> ChartDef<T> {
    let basis = traceless_symmetric_basis(m);
    let dim = basis.len();
    ChartDef::from_fn("sl_so", dim, vec![(-0.5, 0.5); dim], move |u: &[Jet<T>]| {
        let s = JetMatrix::from_fn(m, m, |i, j| {
            basis
                .iter()
                .zip(u)
                .fold(Jet::zero(u[0].space()).truncate(u[0].order()), |acc, (b, ua)| {
                    acc + ua.scale(T::from_f64_lossy(b[(i, j)]))
                })
        });
        let e = s.exp();
        Ok((0..m).flat_map(|i| (i..m).map(move |j| (i, j))).map(|(i, j)| e.at(i, j).clone()).collect())
    })
}

/// Parses a catalog spec and builds its chart.
pub fn get_chart<T: Real>(text: &str) -> Result<ChartDef<T>> {
    CatalogSpec::parse(text)?.build()
}
