//! Blaschke structure of a hypersurface chart at a point.
//!
//! The conormal comes from the volume form, `G_ij = det(x_1, …, x_n, x_ij)`,
//! the metric is `g = |det G|^{-1/(n+2)} G`, the affine normal is
//! `ξ = Δ_g x / n`, and the induced connection, cubic form and shape
//! operator are read off the frame `(x_1, …, x_n, ξ)`:
//!
//! ```text
//! x_ij = Γ^k_ij x_k + h_ij ξ,   ∂_i ξ = -B^k_i x_k + τ_i ξ,   A^k_ij = Γ^k_ij - Γ̂^k_ij
//! ```

mod checks;

pub use checks::{
    check_alt_gauss, check_apolarity, check_codazzi, check_cubic_form, check_gauss, check_hypersphere,
    check_normalization, check_ricci, check_symmetry, check_trace, nabla_a_norm, structural_checks, trace_residual,
    HypersphereReport, Tolerances,
};

use num_rational::Ratio;

use crate::chart::{eval_chart_jet, ChartDef};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::numtensor::{christoffel_jets, cov_deriv_sym3, riemann, CurvatureData, Jet, JetMatrix, MetricField, Tensor};
use crate::scalar::Real;

/// Jet order the pipeline expands charts to.
pub const CHART_ORDER: usize = 4;

/// Pointwise equiaffine invariants with the data needed by the structural checks.
#[derive(Clone, Debug)]
pub struct BlaschkeInvariants<T> {
    pub point: Vec<T>,
    /// Position `x(point)` in ambient space.
    pub position: Vec<T>,
    pub g: Matrix<T>,
    pub g_inv: Matrix<T>,
    /// Cubic form `A_ijk`.
    pub a: Tensor<T>,
    /// Difference tensor `A^k_ij` stored at `[k, i, j]`.
    pub a_up: Tensor<T>,
    /// Affine shape form `B_ij`.
    pub b: Matrix<T>,
    pub xi: Vec<T>,
    pub l1: T,
    pub pick: T,
    pub chi: T,
    /// Columns `x_1, …, x_n, ξ`.
    pub frame: Matrix<T>,
    /// Normalization defect `τ_i`; vanishes for the affine normal.
    pub tau: Vec<T>,
    /// `max |h_ij - g_ij|` from the frame decomposition.
    pub h_residual: T,
    /// `true` when the determinant form was negative definite and got flipped.
    pub flipped: bool,
    /// Levi-Civita connection and curvature of `g`.
    pub curvature: CurvatureData<T>,
    /// Covariant derivative `A_ijk,l`.
    pub nabla_a: Tensor<T>,
    /// `∂_k g_ij` stored at `[i, j, k]`.
    pub dg: Tensor<T>,
    /// Induced connection `Γ^k_ij` at `[k, i, j]`.
    pub connection: Tensor<T>,
}

impl<T: Real> BlaschkeInvariants<T> {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }
}

fn tol_consistency<T: Real>() -> f64 {
    let eps = T::epsilon().to_f64_lossy();
    if eps < 1e-12 {
        1e-9
    } else {
        eps.sqrt() * 10.0
    }
}

/// Unit vector spanning the kernel of the transposed Jacobian.
fn transversal<T: Real>(x_k: &[Vec<Jet<T>>]) -> Vec<T> {
    let m = x_k[0].len();
    let jtj = Matrix::from_fn(m, m, |a, b| x_k.iter().fold(T::zero(), |s, row| s + row[a].value() * row[b].value()));
    let (_, vecs) = linalg::sym_eigen(&jtj);
    (0..m).map(|a| vecs[(a, 0)]).collect()
}

fn sum_jets<T: Real>(terms: impl Iterator<Item = Jet<T>>) -> Jet<T> {
    terms.reduce(|a, b| a + b).expect("nonempty sum")
}

/// Blaschke invariants of `chart` at `point`, from order-4 chart jets.
pub fn blaschke_at<T: Real>(chart: &ChartDef<T>, point: &[T]) -> Result<BlaschkeInvariants<T>> {
    let x = eval_chart_jet(chart, point, CHART_ORDER)?;
    let n = chart.dim();
    let m = n + 1;
    let space = x[0].space().clone();

    // x_k[k][a] order 3, x_kl[k][l][a] order 2
    let x_k: Vec<Vec<Jet<T>>> = (0..n).map(|k| x.iter().map(|c| c.derivative(k)).collect()).collect();
    let x_kl: Vec<Vec<Vec<Jet<T>>>> =
        (0..n).map(|k| (0..n).map(|l| x_k[k].iter().map(|c| c.derivative(l)).collect()).collect()).collect();

    // conormal ν with ν·y = det(x_1, …, x_n, y)
    let e = transversal(&x_k);
    let cols = JetMatrix::from_fn(m, m, |a, c| {
        if c < n {
            x_k[c][a].truncate(2)
        } else {
            Jet::constant(&space, e[a]).truncate(2)
        }
    });
    let vol = cols.det_nonsingular()?;
    let cols_inv = cols.inverse()?;
    let nu: Vec<Jet<T>> = (0..m).map(|a| cols_inv.at(n, a) * &vol).collect();

    let mut big_g = JetMatrix::from_fn(n, n, |i, j| sum_jets((0..m).map(|a| &nu[a] * &x_kl[i][j][a])));
    let ev = linalg::sym_eigenvalues(&big_g.value());
    let scale = ev.iter().fold(T::zero(), |s, v| s.max(v.abs()));
    let thresh = T::from_f64_lossy(crate::numtensor::SPD_RATIO) * scale;
    let flipped = if ev.iter().all(|&v| v > thresh) {
        false
    } else if ev.iter().all(|&v| v < -thresh) {
        big_g = big_g.map(|j| -j);
        true
    } else {
        return Err(Error::NonConvex);
    };
    let det_g = big_g.det_nonsingular()?;
    let factor = det_g.pow_ratio(Ratio::new(-1, (n + 2) as i64))?;
    let metric = MetricField::new(big_g.map(|j| j * &factor))?;
    let g = metric.value();
    let g_inv = metric.inverse_value();

    let hat = christoffel_jets(&metric)?;
    let hat_at = |k: usize, i: usize, j: usize| &hat[(k * n + i) * n + j];
    let ginv1 = metric.comps().truncate(1).inverse()?;

    // ξ = (1/n) g^{ij} (x_ij - Γ̂^k_ij x_k), order 1
    let inv_n = T::ratio(1, n as i64);
    let xi_jet: Vec<Jet<T>> = (0..m)
        .map(|a| {
            sum_jets((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
                let mut v = x_kl[i][j][a].truncate(1);
                for k in 0..n {
                    v -= &(hat_at(k, i, j) * &x_k[k][a]);
                }
                ginv1.at(i, j) * &v
            }))
            .scale(inv_n)
        })
        .collect();

    let frame_jet = JetMatrix::from_fn(m, m, |a, c| if c < n { x_k[c][a].truncate(1) } else { xi_jet[a].clone() });
    let frame = frame_jet.value();
    let frame_inv = frame_jet.inverse().map_err(|_| Error::FrameSingular)?;

    // x_ij = Γ^k_ij x_k + h_ij ξ, as order-1 jets
    let coeff = |i: usize, j: usize, k: usize| sum_jets((0..m).map(|a| frame_inv.at(k, a) * &x_kl[i][j][a]));
    let mut conn_jet: Vec<Jet<T>> = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                conn_jet.push(coeff(i, j, k));
            }
        }
    }
    let mut h_residual = T::zero();
    for i in 0..n {
        for j in 0..n {
            let h = coeff(i, j, n).value();
            h_residual = h_residual.max((h - g[(i, j)]).abs());
        }
    }
    let g_scale = T::one().max(g.max_abs());
    if (h_residual / g_scale).to_f64_lossy() > tol_consistency::<T>() || !h_residual.is_finite() {
        return Err(Error::Inconsistent { what: "affine fundamental form vs metric", residual: h_residual.to_f64_lossy() });
    }

    let a_up_jet: Vec<Jet<T>> = conn_jet.iter().zip(&hat).map(|(c, h)| c - h).collect();
    let g1 = metric.comps().truncate(1);
    let a_low_jet: Vec<Jet<T>> = (0..n * n * n)
        .map(|flat| {
            let (i, j, k) = (flat / (n * n), (flat / n) % n, flat % n);
            sum_jets((0..n).map(|l| g1.at(k, l) * &a_up_jet[(l * n + i) * n + j]))
        })
        .collect();

    // ∂_i ξ = -B^k_i x_k + τ_i ξ
    let frame_lu = linalg::Lu::new(&frame).ok_or(Error::FrameSingular)?;
    let mut shape_up = Matrix::zeros(n, n);
    let mut tau = vec![T::zero(); n];
    for i in 0..n {
        let dxi: Vec<T> = xi_jet.iter().map(|c| c.derivative(i).value()).collect();
        let c = frame_lu.solve(&dxi);
        for k in 0..n {
            shape_up[(k, i)] = -c[k];
        }
        tau[i] = c[n];
    }
    let b = Matrix::from_fn(n, n, |i, j| (0..n).fold(T::zero(), |s, k| s + g[(j, k)] * shape_up[(k, i)]));
    let l1 = (0..n).fold(T::zero(), |s, i| (0..n).fold(s, |s, j| s + g_inv[(i, j)] * b[(i, j)])) * inv_n;

    let a = Tensor::from_vec(n, 3, a_low_jet.iter().map(Jet::value).collect());
    let a_up = Tensor::from_vec(n, 3, a_up_jet.iter().map(Jet::value).collect());
    let pick = pick_invariant(&a, &g_inv);
    let curvature = riemann(&metric)?;
    let nabla_a = cov_deriv_sym3(&a_low_jet, &curvature.christoffel)?;
    let dg = Tensor::from_fn(n, 3, |ix| metric.comps().at(ix[0], ix[1]).gradient()[ix[2]]);

    Ok(BlaschkeInvariants {
        point: point.to_vec(),
        position: x.iter().map(Jet::value).collect(),
        g,
        g_inv,
        a,
        a_up,
        b,
        xi: xi_jet.iter().map(Jet::value).collect(),
        l1,
        pick,
        chi: curvature.chi,
        frame,
        tau,
        h_residual,
        flipped,
        curvature,
        nabla_a,
        dg,
        connection: Tensor::from_vec(n, 3, conn_jet.iter().map(Jet::value).collect()),
    })
}

/// `J = |A|²_g / (n(n-1))`, zero for curves.
pub fn pick_invariant<T: Real>(a: &Tensor<T>, g_inv: &Matrix<T>) -> T {
    let n = a.dim();
    if n < 2 {
        return T::zero();
    }
    let raised = raise_all(a, g_inv);
    let s = a.data().iter().zip(raised.data()).fold(T::zero(), |s, (&x, &y)| s + x * y);
    s / T::from_int((n * (n - 1)) as i64)
}

/// `A^{ijk}` with all three indices raised.
pub fn raise_all<T: Real>(a: &Tensor<T>, g_inv: &Matrix<T>) -> Tensor<T> {
    let n = a.dim();
    let mut t = a.clone();
    for slot in 0..3 {
        t = Tensor::from_fn(n, 3, |ix| {
            let mut s = T::zero();
            for p in 0..n {
                let mut jx = [ix[0], ix[1], ix[2]];
                jx[slot] = p;
                s += g_inv[(ix[slot], p)] * t.get(&jx);
            }
            s
        });
    }
    t
}

#[cfg(test)]
mod tests;
