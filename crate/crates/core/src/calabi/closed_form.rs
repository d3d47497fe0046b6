use super::compose::CompositionSpec;
use crate::blaschke::blaschke_at;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::numtensor::Tensor;
use crate::scalar::Real;

/// Metric and cubic form of a composition predicted from its factors.
#[derive(Clone, Debug)]
pub struct ClosedFormInvariants<T> {
    pub c: T,
    pub l1: T,
    pub g: Matrix<T>,
    pub a: Tensor<T>,
    /// Per factor, the conformal factor `(n_α + 1)(-L1_α) C` relating its block of `g` to its own metric.
    pub conformal: Vec<T>,
}

/// Closed-form `g`, `A`, `C` and `L1` at `point` (composition coordinates).
///
/// With `N_λ = n_{λ+1} + 1`, the nonzero components are, up to symmetry,
///
/// ```text
/// g_λλ     = C f_{λ+1} / (f_λ N_λ)
/// g_ĩj̃     = (n_α+1)(-L1_α) C g̊_ij
/// A_λλλ    = g_λλ (1/f_λ - 1/N_λ)
/// A_λλμ    = g_λλ / f_μ                      λ < μ
/// A_ĩj̃,α̃-1 = -g_ĩj̃ / (n_α+1)
/// A_ĩj̃β̃    = g_ĩj̃ / f_β̃                      β ≥ α
/// A_ĩj̃k̃    = (n_α+1)(-L1_α) C Å_ijk
/// ```
///
/// where `g̊`, `Å` are the factor's invariants at its coordinates in `point`.
pub fn closed_form<T: Real>(spec: &CompositionSpec<T>, point: &[T]) -> Result<ClosedFormInvariants<T>> {
    let ix = spec.index();
    let n = ix.n();
    let k = ix.k();
    if point.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: point.len() });
    }
    let c = T::from_f64_lossy(spec.big_c());
    let l1 = -T::one() / (T::from_int(n as i64 + 1) * c);
    let ri = |v: usize| T::from_int(v as i64);
    let mut g = Matrix::zeros(n, n);
    let mut a = Tensor::zeros(n, 3);
    let set_sym = |a: &mut Tensor<T>, i: usize, j: usize, l: usize, v: T| {
        for p in [[i, j, l], [i, l, j], [j, i, l], [j, l, i], [l, i, j], [l, j, i]] {
            a.set(&p, v);
        }
    };

    for lambda in 1..k {
        let p = ix.t_pos(lambda);
        let big_n = ri(ix.slot_dim(lambda + 1) + 1);
        let gll = c * ri(ix.f(lambda + 1)) / (ri(ix.f(lambda)) * big_n);
        g[(p, p)] = gll;
        set_sym(&mut a, p, p, p, gll * (T::one() / ri(ix.f(lambda)) - T::one() / big_n));
        for mu in lambda + 1..k {
            set_sym(&mut a, p, p, ix.t_pos(mu), gll / ri(ix.f(mu)));
        }
    }

    let mut conformal = Vec::with_capacity(ix.s());
    for (alpha0, factor) in spec.factors.iter().enumerate() {
        let alpha = alpha0 + 1;
        let range = ix.factor_range(alpha);
        let na = factor.dim();
        let local = blaschke_at(&factor.chart, &point[range.clone()])?;
        let conf = ri(na + 1) * (-T::from_f64_lossy(factor.l1)) * c;
        conformal.push(conf);
        let slot = ix.factor_slot(alpha);
        for i in 0..na {
            for j in 0..na {
                let (pi, pj) = (range.start + i, range.start + j);
                let gij = conf * local.g[(i, j)];
                g[(pi, pj)] = gij;
                if i > j {
                    continue;
                }
                if slot >= 2 {
                    set_sym(&mut a, pi, pj, ix.t_pos(slot - 1), -gij / ri(na + 1));
                }
                for beta_slot in slot..k {
                    set_sym(&mut a, pi, pj, ix.t_pos(beta_slot), gij / ri(ix.f(beta_slot)));
                }
                for l in j..na {
                    set_sym(&mut a, pi, pj, range.start + l, conf * local.a.get(&[i, j, l]));
                }
            }
        }
    }
    Ok(ClosedFormInvariants { c, l1, g, a, conformal })
}
