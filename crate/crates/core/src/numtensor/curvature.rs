//! Levi-Civita connection and curvature of a metric given as jets.
//!
//! Index conventions: `Γ^k_{ij}` is stored at `[k, i, j]`;
//! `R_{ijkl} = g(R(∂_k, ∂_l)∂_i, ∂_j)` with
//! `R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_{[X,Y]}`, so the unit sphere has
//! `R_{ijkl} = g_il g_jk - g_ik g_jl`. Ricci is `R_ij = g^{kl} R_{kijl}` and
//! the normalized scalar curvature is `χ = g^{il} g^{jk} R_{ijkl} / (n(n-1))`.

use super::jet::Jet;
use super::jetmat::JetMatrix;
use super::tensor::Tensor;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Real;

/// Relative eigenvalue threshold below which a metric counts as singular.
pub const SPD_RATIO: f64 = 1e-10;

/// Symmetric metric tensor field, components stored as jets.
#[derive(Clone, Debug)]
pub struct MetricField<T> {
    comps: JetMatrix<T>,
}

impl<T: Real> MetricField<T> {
    /// Validates squareness and a positive definite value part.
    pub fn new(comps: JetMatrix<T>) -> Result<Self> {
        if comps.rows() != comps.cols() {
            return Err(Error::DimensionMismatch { expected: comps.rows(), found: comps.cols() });
        }
        if comps.rows() != comps.space().nvars() {
            return Err(Error::DimensionMismatch { expected: comps.space().nvars(), found: comps.rows() });
        }
        check_spd(&comps.value())?;
        Ok(MetricField { comps })
    }

    pub fn dim(&self) -> usize {
        self.comps.rows()
    }

    pub fn order(&self) -> usize {
        self.comps.order()
    }

    pub fn comps(&self) -> &JetMatrix<T> {
        &self.comps
    }

    pub fn value(&self) -> Matrix<T> {
        self.comps.value()
    }

    pub fn inverse_value(&self) -> Matrix<T> {
        linalg::inverse(&self.value()).expect("SPD checked at construction")
    }
}

/// Smallest eigenvalue must exceed `SPD_RATIO` times the largest.
pub fn check_spd<T: Real>(g: &Matrix<T>) -> Result<()> {
    let ev = linalg::sym_eigenvalues(g);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if !(hi > T::zero()) || !(lo > T::from_f64_lossy(SPD_RATIO) * hi) {
        let ratio = if hi > T::zero() { (lo / hi).to_f64_lossy() } else { f64::NEG_INFINITY };
        return Err(Error::SingularMetric { ratio });
    }
    Ok(())
}

/// Christoffel symbols as jets of order `g.order() - 1`, flat `[k, i, j]`.
pub fn christoffel_jets<T: Real>(g: &MetricField<T>) -> Result<Vec<Jet<T>>> {
    let order = g.order();
    if order < 1 {
        return Err(Error::NotApplicable("christoffel needs metric jets of order >= 1".into()));
    }
    let n = g.dim();
    let ginv = g.comps().truncate(order - 1).inverse()?;
    // dg[(l * n + i) * n + j] = ∂_l g_ij
    let dg: Vec<Jet<T>> = (0..n)
        .flat_map(|l| (0..n).flat_map(move |i| (0..n).map(move |j| (l, i, j))))
        .map(|(l, i, j)| g.comps().at(i, j).derivative(l))
        .collect();
    let d = |l: usize, i: usize, j: usize| &dg[(l * n + i) * n + j];
    let half = T::ratio(1, 2);
    let mut out = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<Jet<T>> = None;
                for l in 0..n {
                    let bracket = &(d(i, j, l) + d(j, i, l)) - d(l, i, j);
                    let term = ginv.at(k, l) * &bracket;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a + term,
                    });
                }
                out.push(acc.expect("n >= 1").scale(half));
            }
        }
    }
    Ok(out)
}

/// Christoffel symbols at the expansion point.
pub fn christoffel<T: Real>(g: &MetricField<T>) -> Result<Tensor<T>> {
    let n = g.dim();
    let jets = christoffel_jets(g)?;
    Ok(Tensor::from_vec(n, 3, jets.iter().map(Jet::value).collect()))
}

/// Curvature of `g` at the expansion point.
#[derive(Clone, Debug)]
pub struct CurvatureData<T> {
    pub christoffel: Tensor<T>,
    pub riemann: Tensor<T>,
    pub ricci: Matrix<T>,
    pub chi: T,
}

impl<T: Real> CurvatureData<T> {
    /// Max violation of `R_ijkl = -R_jikl = -R_ijlk = R_klij`.
    pub fn symmetry_residual(&self) -> T {
        let r = &self.riemann;
        let n = r.dim();
        let mut worst = T::zero();
        for_each4(n, |i, j, k, l| {
            let v = r.get(&[i, j, k, l]);
            for e in [v + r.get(&[j, i, k, l]), v + r.get(&[i, j, l, k]), v - r.get(&[k, l, i, j])] {
                worst = worst.max(e.abs());
            }
        });
        worst
    }

    /// Max violation of the first Bianchi identity.
    pub fn bianchi_residual(&self) -> T {
        let r = &self.riemann;
        let n = r.dim();
        let mut worst = T::zero();
        for_each4(n, |i, j, k, l| {
            let s = r.get(&[i, j, k, l]) + r.get(&[i, k, l, j]) + r.get(&[i, l, j, k]);
            worst = worst.max(s.abs());
        });
        worst
    }
}

pub(crate) fn for_each4(n: usize, mut f: impl FnMut(usize, usize, usize, usize)) {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    f(i, j, k, l);
                }
            }
        }
    }
}

pub fn riemann<T: Real>(g: &MetricField<T>) -> Result<CurvatureData<T>> {
    if g.order() < 2 {
        return Err(Error::NotApplicable("riemann needs metric jets of order >= 2".into()));
    }
    let n = g.dim();
    let gam = christoffel_jets(g)?;
    let gv = g.value();
    let ginv = g.inverse_value();
    let gval = |k: usize, i: usize, j: usize| gam[(k * n + i) * n + j].value();
    let dgam: Vec<T> = (0..n)
        .flat_map(|d| (0..n * n * n).map(move |flat| (d, flat)))
        .map(|(d, flat)| gam[flat].derivative(d).value())
        .collect();
    let dg = |d: usize, k: usize, i: usize, j: usize| dgam[d * n * n * n + (k * n + i) * n + j];

    // R^m_{ikl} = ∂_k Γ^m_{li} - ∂_l Γ^m_{ki} + Γ^m_{kp} Γ^p_{li} - Γ^m_{lp} Γ^p_{ki}
    let rup = Tensor::from_fn(n, 4, |ix| {
        let (m, i, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut v = dg(k, m, l, i) - dg(l, m, k, i);
        for p in 0..n {
            v += gval(m, k, p) * gval(p, l, i) - gval(m, l, p) * gval(p, k, i);
        }
        v
    });
    let riem = Tensor::from_fn(n, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n).fold(T::zero(), |acc, m| acc + gv[(j, m)] * rup.get(&[m, i, k, l]))
    });
    let ricci = Matrix::from_fn(n, n, |i, j| {
        let mut v = T::zero();
        for k in 0..n {
            for l in 0..n {
                v += ginv[(k, l)] * riem.get(&[k, i, j, l]);
            }
        }
        v
    });
    let chi = if n < 2 {
        T::zero()
    } else {
        let mut s = T::zero();
        for_each4(n, |i, j, k, l| s += ginv[(i, l)] * ginv[(j, k)] * riem.get(&[i, j, k, l]));
        s / T::from_int((n * (n - 1)) as i64)
    };
    Ok(CurvatureData {
        christoffel: Tensor::from_vec(n, 3, gam.iter().map(Jet::value).collect()),
        riemann: riem,
        ricci,
        chi,
    })
}

/// Covariant derivative `A_{ijk,l}` of a symmetric 3-tensor field given as
/// jets (flat `[i, j, k]`), stored at `[i, j, k, l]`.
pub fn cov_deriv_sym3<T: Real>(a: &[Jet<T>], gamma: &Tensor<T>) -> Result<Tensor<T>> {
    let n = gamma.dim();
    if a.len() != n * n * n {
        return Err(Error::DimensionMismatch { expected: n * n * n, found: a.len() });
    }
    if a.iter().any(|j| j.order() < 1) {
        return Err(Error::NotApplicable("cubic form jets need order >= 1".into()));
    }
    let av = |i: usize, j: usize, k: usize| a[(i * n + j) * n + k].value();
    let da: Vec<Vec<T>> = a.iter().map(|j| j.gradient()).collect();
    Ok(Tensor::from_fn(n, 4, |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut v = da[(i * n + j) * n + k][l];
        for m in 0..n {
            v -= gamma.get(&[m, l, i]) * av(m, j, k)
                + gamma.get(&[m, l, j]) * av(i, m, k)
                + gamma.get(&[m, l, k]) * av(i, j, m);
        }
        v
    }))
}
