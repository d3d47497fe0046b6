use rand::Rng;

use super::closed_form::closed_form;
use super::compose::{compose_chart, CompositionSpec, T_BOX};
use super::index::Block;
use crate::blaschke::{blaschke_at, BlaschkeInvariants};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::CheckReport;
use crate::scalar::Real;

/// Random composition coordinates: `t` in the `T_BOX` box, factor points in their boxes.
pub fn sample_points<T: Real, R: Rng>(spec: &CompositionSpec<T>, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let mut p: Vec<f64> = (0..spec.index().k() - 1).map(|_| rng.gen_range(-T_BOX..=T_BOX)).collect();
            for f in &spec.factors {
                p.extend(f.chart.domain.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)));
            }
            p
        })
        .collect()
}

fn to_t<T: Real>(p: &[f64]) -> Vec<T> {
    p.iter().map(|&v| T::from_f64_lossy(v)).collect()
}

/// Pipeline against closed form, one report per point: max deviation over `g` and `A`.
pub fn verify_composition<T: Real>(spec: &CompositionSpec<T>, points: &[Vec<f64>], tol: f64) -> Result<Vec<CheckReport>> {
    let chart = compose_chart(spec)?;
    points
        .iter()
        .map(|p| {
            let pt = to_t::<T>(p);
            let inv = blaschke_at(&chart, &pt)?;
            let cf = closed_form(spec, &pt)?;
            let dev = inv.g.max_abs_diff(&cf.g).max(inv.a.max_abs_diff(&cf.a)).max((inv.l1 - cf.l1).abs());
            Ok(CheckReport::new("composition", dev.to_f64_lossy(), tol))
        })
        .collect()
}

/// Largest `|A^k_ij|` whose block triple is not `(0,0,0)`, `(α,α,0)`,
/// `(α,0,α)`, `(0,α,α)` or `(α,α,α)`.
pub fn block_sparsity<T: Real>(spec: &CompositionSpec<T>, inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let ix = spec.index();
    let n = ix.n();
    let mut worst = T::zero();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let (bi, bj, bk) = (ix.block(i), ix.block(j), ix.block(k));
                let allowed = match (bi, bj, bk) {
                    (Block::Base, Block::Base, Block::Base) => true,
                    (x, y, Block::Base) => x == y,
                    (Block::Base, y, z) | (y, Block::Base, z) => y == z,
                    (x, y, z) => x == y && y == z,
                };
                if !allowed {
                    worst = worst.max(inv.a_up.get(&[k, i, j]).abs());
                }
            }
        }
    }
    CheckReport::new("block_sparsity", worst.to_f64_lossy(), tol)
}

fn restrict<T: Real>(m: &Matrix<T>, idx: &[usize]) -> Matrix<T> {
    Matrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Mean curvature vectors `H_α = tr_{g_α} σ^0_αα / n_α` and their Gram
/// matrix in `g`, which should be `((n-n_α)/(n_α+1))(-L1)` on the diagonal
/// and `L1` off it.
pub fn mean_curvature_relations<T: Real>(
    spec: &CompositionSpec<T>,
    inv: &BlaschkeInvariants<T>,
    tol: f64,
) -> Result<CheckReport> {
    let ix = spec.index();
    if ix.s() == 0 {
        return Err(Error::NotApplicable("mean curvature relations need a hypersphere factor".into()));
    }
    let n = ix.n();
    let base: Vec<usize> = (1..ix.k()).map(|l| ix.t_pos(l)).collect();
    let h: Vec<Vec<T>> = (1..=ix.s())
        .map(|alpha| {
            let idx: Vec<usize> = ix.factor_range(alpha).collect();
            let ga_inv = linalg::inverse(&restrict(&inv.g, &idx)).ok_or(Error::SingularMetric { ratio: 0.0 })?;
            let na = T::from_int(idx.len() as i64);
            Ok(base
                .iter()
                .map(|&lam| {
                    let mut s = T::zero();
                    for (a, &i) in idx.iter().enumerate() {
                        for (b, &j) in idx.iter().enumerate() {
                            s += ga_inv[(a, b)] * inv.a_up.get(&[lam, i, j]);
                        }
                    }
                    s / na
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let g0 = restrict(&inv.g, &base);
    let mut worst = T::zero();
    for alpha in 0..ix.s() {
        for beta in 0..ix.s() {
            let mut v = T::zero();
            for (a, _) in base.iter().enumerate() {
                for (b, _) in base.iter().enumerate() {
                    v += g0[(a, b)] * h[alpha][a] * h[beta][b];
                }
            }
            let want = if alpha == beta {
                let na = ix.dims()[alpha] as i64;
                T::ratio(n as i64 - na, na + 1) * -inv.l1
            } else {
                inv.l1
            };
            worst = worst.max((v - want).abs());
        }
    }
    Ok(CheckReport::new("mean_curvature", worst.to_f64_lossy(), tol))
}

/// The two rescaled specs with the same `C`: all constants equal, and all
/// but the last equal to one.
pub fn equivalent_constants<T: Real>(spec: &CompositionSpec<T>) -> Result<(CompositionSpec<T>, CompositionSpec<T>)> {
    let ix = spec.index();
    let k = ix.k();
    let log_w: f64 = (1..=k).map(|a| (ix.slot_dim(a) as f64 + 1.0) * spec.constants[a - 1].ln()).sum();
    let uniform = (log_w / (ix.n() as f64 + 1.0)).exp();
    let last = (log_w / (ix.slot_dim(k) as f64 + 1.0)).exp();
    let mut tail = vec![1.0; k];
    tail[k - 1] = last;
    Ok((
        CompositionSpec::new(spec.r, spec.factors.clone(), vec![uniform; k])?,
        CompositionSpec::new(spec.r, spec.factors.clone(), tail)?,
    ))
}
