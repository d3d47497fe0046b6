//! Pointwise correspondence between hyperbolic-type hypersphere data
//! `(g, A, L1)` and Lagrangian data `(g̃, σ̃, c)` with `g̃ = g`, `σ̃ = A`,
//! `c = -L1` and curvature `R̃ = -R`.

use crate::blaschke::{trace_residual, BlaschkeInvariants};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::numtensor::{for_each4, Tensor};
use crate::report::CheckReport;
use crate::scalar::Real;

/// Relative defect above which a cubic form is rejected as asymmetric.
const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianPointData<T> {
    pub g: Matrix<T>,
    pub g_inv: Matrix<T>,
    /// Second fundamental form as a symmetric 3-tensor.
    pub sigma: Tensor<T>,
    /// A quarter of the holomorphic sectional curvature of the ambient space.
    pub c: T,
}

impl<T: Real> LagrangianPointData<T> {
    pub fn dim(&self) -> usize {
        self.g.rows()
    }
}

pub fn dualize<T: Real>(g: &Matrix<T>, a: &Tensor<T>, l1: T) -> Result<LagrangianPointData<T>> {
    let g_inv = linalg::inverse(g).ok_or(Error::SingularMetric { ratio: 0.0 })?;
    dualize_with_inverse(g, &g_inv, a, l1)
}

fn dualize_with_inverse<T: Real>(g: &Matrix<T>, g_inv: &Matrix<T>, a: &Tensor<T>, l1: T) -> Result<LagrangianPointData<T>> {
    if g.rows() != a.dim() {
        return Err(Error::DimensionMismatch { expected: g.rows(), found: a.dim() });
    }
    let defect = a.sym3_defect().to_f64_lossy();
    let scale = a.max_abs().to_f64_lossy().max(1.0);
    if defect > SYMMETRY_TOL * scale || defect.is_nan() {
        return Err(Error::Asymmetric { residual: defect });
    }
    Ok(LagrangianPointData { g: g.clone(), g_inv: g_inv.clone(), sigma: a.clone(), c: -l1 })
}

/// Dual data of pipeline invariants, sharing their inverse metric.
pub fn dualize_invariants<T: Real>(inv: &BlaschkeInvariants<T>) -> Result<LagrangianPointData<T>> {
    dualize_with_inverse(&inv.g, &inv.g_inv, &inv.a, inv.l1)
}

/// Inverse of [`dualize`]: `(g, A, L1)`.
pub fn undualize<T: Real>(data: &LagrangianPointData<T>) -> (Matrix<T>, Tensor<T>, T) {
    (data.g.clone(), data.sigma.clone(), -data.c)
}

fn raise_first<T: Real>(g_inv: &Matrix<T>, a: &Tensor<T>) -> Tensor<T> {
    let n = a.dim();
    Tensor::from_fn(n, 3, |ix| (0..n).fold(T::zero(), |s, p| s + g_inv[(ix[0], p)] * a.get(&[p, ix[1], ix[2]])))
}

/// `k (g_il g_jk - g_ik g_jl) + ε Σ_m (T^m_ik T_jlm - T^m_il T_jkm)`.
fn space_form_plus_commutator<T: Real>(g: &Matrix<T>, g_inv: &Matrix<T>, t: &Tensor<T>, k: T, eps: T) -> Tensor<T> {
    let n = t.dim();
    let up = raise_first(g_inv, t);
    Tensor::from_fn(n, 4, |ix| {
        let (i, j, a, b) = (ix[0], ix[1], ix[2], ix[3]);
        let comm = (0..n).fold(T::zero(), |s, m| s + up.get(&[m, i, a]) * t.get(&[j, b, m]) - up.get(&[m, i, b]) * t.get(&[j, a, m]));
        k * (g[(i, b)] * g[(j, a)] - g[(i, a)] * g[(j, b)]) + eps * comm
    })
}

/// Curvature of a hypersphere structure: `L1(g∧g) + Σ(A A - A A)`.
pub fn hypersphere_curvature<T: Real>(g: &Matrix<T>, a: &Tensor<T>, l1: T) -> Result<Tensor<T>> {
    let g_inv = linalg::inverse(g).ok_or(Error::SingularMetric { ratio: 0.0 })?;
    Ok(space_form_plus_commutator(g, &g_inv, a, l1, T::one()))
}

/// Gauss equation of the dual data: `c(g̃∧g̃) - Σ(σ̃ σ̃ - σ̃ σ̃)`.
pub fn lagrangian_curvature<T: Real>(data: &LagrangianPointData<T>) -> Tensor<T> {
    space_form_plus_commutator(&data.g, &data.g_inv, &data.sigma, data.c, -T::one())
}

fn max_diff<T: Real>(a: &Tensor<T>, b: &Tensor<T>) -> f64 {
    let d = a.max_abs_diff(b);
    if a.data().iter().chain(b.data()).any(|v| v.is_nan()) {
        f64::NAN
    } else {
        d.to_f64_lossy()
    }
}

/// Builds `R` from the hypersphere Gauss equation, flips its sign and
/// compares with the Gauss equation of the dual data.
pub fn check_gauss_swap<T: Real>(g: &Matrix<T>, a: &Tensor<T>, l1: T, tol: f64) -> Result<CheckReport> {
    let r = hypersphere_curvature(g, a, l1)?;
    let data = dualize(g, a, l1)?;
    let neg = Tensor::from_vec(r.dim(), 4, r.data().iter().map(|&v| -v).collect());
    Ok(CheckReport::new("gauss_swap", max_diff(&neg, &lagrangian_curvature(&data)), tol))
}

/// `max |σ̃(Qx, Qy, Qz) - σ̃(x, y, z)|` over the supplied matrices.
fn isotropy_residual<T: Real>(sigma: &Tensor<T>, qs: &[Matrix<T>]) -> T {
    let n = sigma.dim();
    let mut worst = T::zero();
    for q in qs {
        let moved = Tensor::from_fn(n, 3, |ix| {
            let mut s = T::zero();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        s += q[(a, ix[0])] * q[(b, ix[1])] * q[(c, ix[2])] * sigma.get(&[a, b, c]);
                    }
                }
            }
            s
        });
        worst = worst.max(moved.max_abs_diff(sigma));
    }
    worst
}

/// Membership conditions for the dual data: symmetry of `σ̃`, the Gauss
/// identity against `r_tilde`, minimality, and invariance under `isotropy`.
pub fn membership_s<T: Real>(
    data: &LagrangianPointData<T>,
    r_tilde: Option<&Tensor<T>>,
    isotropy: &[Matrix<T>],
    tol: f64,
) -> Result<Vec<CheckReport>> {
    let r_tilde = r_tilde.ok_or_else(|| Error::NotApplicable("membership needs a curvature tensor".into()))?;
    if r_tilde.dim() != data.dim() || r_tilde.rank() != 4 {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: r_tilde.dim() });
    }
    let mut out = vec![
        CheckReport::new("dual_symmetry", data.sigma.sym3_defect().to_f64_lossy(), tol),
        CheckReport::new("dual_gauss", max_diff(r_tilde, &lagrangian_curvature(data)), tol),
        CheckReport::new("dual_minimal", trace_residual(&data.g_inv, &data.sigma).to_f64_lossy(), tol),
    ];
    if !isotropy.is_empty() {
        out.push(CheckReport::new("dual_isotropy", isotropy_residual(&data.sigma, isotropy).to_f64_lossy(), tol));
    }
    Ok(out)
}

/// `-R` of a curvature tensor.
pub fn negate_curvature<T: Real>(r: &Tensor<T>) -> Tensor<T> {
    Tensor::from_vec(r.dim(), 4, r.data().iter().map(|&v| -v).collect())
}

/// Largest deviation of `r` from constant curvature `k` for metric `g`.
pub fn space_form_defect<T: Real>(r: &Tensor<T>, g: &Matrix<T>, k: T) -> T {
    let mut worst = T::zero();
    for_each4(r.dim(), |i, j, a, b| {
        let want = k * (g[(i, b)] * g[(j, a)] - g[(i, a)] * g[(j, b)]);
        worst = worst.max((r.get(&[i, j, a, b]) - want).abs());
    });
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::{blaschke_at, check_apolarity};
    use crate::chart::parse_chart;
    use crate::numtensor::{riemann, Jet, JetMatrix, JetSpace, MetricField};
    use proptest::prelude::*;

    fn flat() -> BlaschkeInvariants<f64> {
        let c = parse_chart("dim 2; x1 = exp(u1); x2 = exp(u2); x3 = exp(-u1-u2);").unwrap();
        blaschke_at(&c, &[0.1, -0.2]).unwrap()
    }

    #[test]
    fn totally_geodesic_datum() {
        let g = Matrix::<f64>::identity(3);
        let a = Tensor::zeros(3, 3);
        let d = dualize(&g, &a, -1.0).unwrap();
        assert_eq!(d.c, 1.0);
        assert_eq!(d.sigma.max_abs(), 0.0);
        let rep = check_gauss_swap(&g, &a, -1.0, 0.0).unwrap();
        assert_eq!(rep.residual, 0.0);
        let r = lagrangian_curvature(&d);
        assert!(membership_s(&d, Some(&r), &[], 0.0).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn flat_hypersphere_dual() {
        let inv = flat();
        let d = dualize_invariants(&inv).unwrap();
        assert!((d.c - 3.0_f64.powf(-0.75)).abs() < 1e-12);
        assert_eq!(check_apolarity(&inv, 1.0).residual, trace_residual(&d.g_inv, &d.sigma).to_f64_lossy());
        assert!(check_gauss_swap(&inv.g, &inv.a, inv.l1, 1e-12).unwrap().passed);
        let r_tilde = negate_curvature(&inv.curvature.riemann);
        for rep in membership_s(&d, Some(&r_tilde), &[], 1e-9).unwrap() {
            assert!(rep.passed, "{rep}");
        }
    }

    #[test]
    fn injected_trace_is_detected() {
        let inv = flat();
        let mut d = dualize_invariants(&inv).unwrap();
        // σ̃ += ε (g ⊙ w): trace picks up ε (n+2)/3 per unit of w for n = 2
        let eps = 0.05;
        let n = 2;
        let w = [1.0, 0.0];
        let g = &inv.g;
        let bump = Tensor::from_fn(n, 3, |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            eps * (g[(i, j)] * w[k] + g[(i, k)] * w[j] + g[(j, k)] * w[i]) / 3.0
        });
        d.sigma = Tensor::from_vec(n, 3, d.sigma.data().iter().zip(bump.data()).map(|(a, b)| a + b).collect());
        let injected = trace_residual(&d.g_inv, &bump);
        let r = membership_s(&d, Some(&lagrangian_curvature(&d)), &[], 1e-9).unwrap();
        let minimal = r.iter().find(|c| c.name == "dual_minimal").unwrap();
        assert!(!minimal.passed);
        assert!((minimal.residual - injected).abs() < 1e-12);
        assert!((injected - eps * 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let mut a = Tensor::zeros(2, 3);
        a.set(&[0, 0, 1], 1.0);
        assert!(matches!(dualize(&Matrix::<f64>::identity(2), &a, -1.0), Err(Error::Asymmetric { .. })));
    }

    #[test]
    fn dual_of_round_sphere_is_hyperbolic() {
        let c = parse_chart::<f64>("dim 2; x1 = u1; x2 = u2; x3 = (1 - u1^2 - u2^2)^(1/2);").unwrap();
        let inv = blaschke_at(&c, &[0.0, 0.0]).unwrap();
        let d = dualize_invariants(&inv).unwrap();
        assert!((d.c + 1.0).abs() < 1e-10);
        // δ / (1 - |z|²/4)² has g(0) = δ and curvature -1
        let space = JetSpace::new(2, 2);
        let z: Vec<Jet<f64>> = (0..2).map(|i| Jet::variable(&space, i, 0.0)).collect();
        let conf = (&z[0] * &z[0] + &z[1] * &z[1]).scale(-0.25).add_scalar(1.0).powi(2).recip().unwrap();
        let zero = Jet::zero(&space);
        let hyp = MetricField::new(JetMatrix::from_fn(2, 2, |i, j| if i == j { conf.clone() } else { zero.clone() })).unwrap();
        let r_dual = riemann(&hyp).unwrap().riemann;
        assert!(inv.g.max_abs_diff(&hyp.value()) < 1e-10);
        for rep in membership_s(&d, Some(&r_dual), &[], 1e-9).unwrap() {
            assert!(rep.passed, "{rep}");
        }
        assert!(max_diff(&r_dual, &negate_curvature(&inv.curvature.riemann)) < 1e-9);
    }

    fn random_instance(n: usize, seed: &[f64]) -> (Matrix<f64>, Tensor<f64>, f64) {
        let m = Matrix::from_fn(n, n, |i, j| seed[(i * n + j) % seed.len()]);
        let g = (&m * &m.transpose()).add(&Matrix::identity(n));
        let raw = Tensor::from_fn(n, 3, |ix| seed[(ix[0] * 7 + ix[1] * 3 + ix[2] * 5) % seed.len()]);
        let a = Tensor::from_fn(n, 3, |ix| {
            let (i, j, k) = (ix[0], ix[1], ix[2]);
            [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]].iter().map(|p| raw.get(p)).sum::<f64>() / 6.0
        });
        (g, a, seed[0])
    }

    proptest! {
        #[test]
        fn swap_holds_on_random_data(n in 1usize..5, seed in prop::collection::vec(-1.0f64..1.0, 12)) {
            let (g, a, l1) = random_instance(n, &seed);
            prop_assert!(check_gauss_swap(&g, &a, l1, 1e-12).unwrap().passed);
            let d = dualize(&g, &a, l1).unwrap();
            let (g2, a2, l2) = undualize(&d);
            prop_assert_eq!(dualize(&g2, &a2, l2).unwrap(), d);
            prop_assert_eq!((g2, a2, l2), (g, a, l1));
        }
    }
}
