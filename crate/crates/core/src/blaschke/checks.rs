use super::BlaschkeInvariants;
use crate::numtensor::for_each4;
use crate::report::CheckReport;
use crate::scalar::Real;

/// Default pass thresholds for the structural checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub apolarity: f64,
    pub gauss: f64,
    pub ricci: f64,
    pub codazzi: f64,
    pub trace: f64,
    pub alt_gauss: f64,
    pub hypersphere: f64,
    pub consistency: f64,
    pub normalization: f64,
    pub cubic_form: f64,
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            apolarity: 1e-8,
            gauss: 1e-6,
            ricci: 1e-6,
            codazzi: 1e-6,
            trace: 1e-6,
            alt_gauss: 1e-6,
            hypersphere: 1e-8,
            consistency: 1e-9,
            normalization: 1e-9,
            cubic_form: 1e-8,
            symmetry: 1e-10,
        }
    }
}

impl Tolerances {
    /// Overrides one threshold by its check name.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "apolarity" => &mut self.apolarity,
            "gauss" => &mut self.gauss,
            "ricci" => &mut self.ricci,
            "codazzi" => &mut self.codazzi,
            "trace" => &mut self.trace,
            "alt_gauss" => &mut self.alt_gauss,
            "hypersphere" | "umbilic" | "center" => &mut self.hypersphere,
            "consistency" => &mut self.consistency,
            "normalization" => &mut self.normalization,
            "cubic_form" => &mut self.cubic_form,
            "symmetry" => &mut self.symmetry,
            _ => return false,
        };
        *slot = value;
        true
    }
}

fn f<T: Real>(v: T) -> f64 {
    v.to_f64_lossy()
}

fn worst<T: Real>(acc: &mut T, v: T) {
    if v.abs() > *acc || v.is_nan() {
        *acc = if v.is_nan() { v } else { v.abs() };
    }
}

/// `max_k |g^{ij} T_ijk|` for a 3-tensor `T`.
pub fn trace_residual<T: Real>(g_inv: &crate::linalg::Matrix<T>, t: &crate::numtensor::Tensor<T>) -> T {
    let n = t.dim();
    let mut r = T::zero();
    for k in 0..n {
        let mut s = T::zero();
        for i in 0..n {
            for j in 0..n {
                s += g_inv[(i, j)] * t.get(&[i, j, k]);
            }
        }
        worst(&mut r, s);
    }
    r
}

/// Max over `k` of `|g^{ij} A_ijk|`.
pub fn check_apolarity<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    CheckReport::new("apolarity", f(trace_residual(&inv.g_inv, &inv.a)), tol)
}

fn cubic_commutator<T: Real>(inv: &BlaschkeInvariants<T>, i: usize, j: usize, k: usize, l: usize) -> T {
    (0..inv.dim()).fold(T::zero(), |s, m| {
        s + inv.a_up.get(&[m, i, k]) * inv.a.get(&[j, l, m]) - inv.a_up.get(&[m, i, l]) * inv.a.get(&[j, k, m])
    })
}

fn g_wedge_b<T: Real>(inv: &BlaschkeInvariants<T>, i: usize, j: usize, k: usize, l: usize) -> T {
    let (g, b) = (&inv.g, &inv.b);
    T::ratio(1, 2) * (g[(i, l)] * b[(j, k)] + g[(j, k)] * b[(i, l)] - g[(i, k)] * b[(j, l)] - g[(j, l)] * b[(i, k)])
}

/// Intrinsic curvature against the cubic-form and shape-operator expression.
pub fn check_gauss<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let mut r = T::zero();
    for_each4(inv.dim(), |i, j, k, l| {
        let rhs = cubic_commutator(inv, i, j, k, l) + g_wedge_b(inv, i, j, k, l);
        worst(&mut r, inv.curvature.riemann.get(&[i, j, k, l]) - rhs);
    });
    CheckReport::new("gauss", f(r), tol)
}

/// `R_ij = A^k_il A^l_jk + (n/2) L1 g_ij + ((n-2)/2) B_ij`.
pub fn check_ricci<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let n = inv.dim();
    let nn = T::from_int(n as i64);
    let half = T::ratio(1, 2);
    let mut r = T::zero();
    for i in 0..n {
        for j in 0..n {
            let mut rhs = half * nn * inv.l1 * inv.g[(i, j)] + half * (nn - T::from_int(2)) * inv.b[(i, j)];
            for k in 0..n {
                for l in 0..n {
                    rhs += inv.a_up.get(&[k, i, l]) * inv.a_up.get(&[l, j, k]);
                }
            }
            worst(&mut r, inv.curvature.ricci[(i, j)] - rhs);
        }
    }
    CheckReport::new("ricci", f(r), tol)
}

/// `A_ijk,l - A_ijl,k = ½(g_ik B_jl - g_il B_jk - g_jl B_ik + g_jk B_il)`.
pub fn check_codazzi<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let (g, b, d) = (&inv.g, &inv.b, &inv.nabla_a);
    let mut r = T::zero();
    for_each4(inv.dim(), |i, j, k, l| {
        let lhs = d.get(&[i, j, k, l]) - d.get(&[i, j, l, k]);
        let rhs = T::ratio(1, 2)
            * (g[(i, k)] * b[(j, l)] - g[(i, l)] * b[(j, k)] - g[(j, l)] * b[(i, k)] + g[(j, k)] * b[(i, l)]);
        worst(&mut r, lhs - rhs);
    });
    CheckReport::new("codazzi", f(r), tol)
}

/// Divergence `g^{lm} A_ijm,l` contracted on the derivative slot.
fn divergence<T: Real>(inv: &BlaschkeInvariants<T>, i: usize, j: usize) -> T {
    let n = inv.dim();
    let mut s = T::zero();
    for l in 0..n {
        for m in 0..n {
            s += inv.g_inv[(l, m)] * inv.nabla_a.get(&[i, j, m, l]);
        }
    }
    s
}

/// `Σ_l A^l_ij,l = (n/2)(L1 g_ij - B_ij)`.
pub fn check_trace<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let n = inv.dim();
    let half_n = T::ratio(n as i64, 2);
    let mut r = T::zero();
    for i in 0..n {
        for j in 0..n {
            worst(&mut r, divergence(inv, i, j) - half_n * (inv.l1 * inv.g[(i, j)] - inv.b[(i, j)]));
        }
    }
    CheckReport::new("trace", f(r), tol)
}

/// Gauss equation rewritten with `χ - J` and `∇A`; an identity on hyperspheres.
pub fn check_alt_gauss<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let n = inv.dim();
    let (g, d) = (&inv.g, &inv.nabla_a);
    let two_n = T::ratio(2, n as i64);
    let mut r = T::zero();
    for_each4(n, |i, j, k, l| {
        let rhs = (d.get(&[i, j, k, l]) - d.get(&[i, j, l, k]))
            + (inv.chi - inv.pick) * (g[(i, l)] * g[(j, k)] - g[(i, k)] * g[(j, l)])
            + two_n * (g[(i, k)] * divergence(inv, j, l) - g[(i, l)] * divergence(inv, j, k))
            + cubic_commutator(inv, i, j, k, l);
        worst(&mut r, inv.curvature.riemann.get(&[i, j, k, l]) - rhs);
    });
    CheckReport::new("alt_gauss", f(r), tol)
}

/// Umbilicity `B = L1 g` and, for proper spheres, centering `ξ = -L1 x`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersphereReport {
    pub umbilic: CheckReport,
    pub center: Option<CheckReport>,
}

impl HypersphereReport {
    pub fn passed(&self) -> bool {
        self.umbilic.passed && self.center.as_ref().is_none_or(|c| c.passed)
    }

    pub fn reports(&self) -> Vec<CheckReport> {
        std::iter::once(self.umbilic.clone()).chain(self.center.clone()).collect()
    }
}

/// Threshold on `|L1|` below which the centering test is skipped.
const IMPROPER_L1: f64 = 1e-10;

pub fn check_hypersphere<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> HypersphereReport {
    let n = inv.dim();
    let mut r = T::zero();
    for i in 0..n {
        for j in 0..n {
            worst(&mut r, inv.b[(i, j)] - inv.l1 * inv.g[(i, j)]);
        }
    }
    let center = (f(inv.l1).abs() > IMPROPER_L1).then(|| {
        let mut c = T::zero();
        for (xi, x) in inv.xi.iter().zip(&inv.position) {
            worst(&mut c, *xi + inv.l1 * *x);
        }
        CheckReport::new("center", f(c), tol)
    });
    HypersphereReport { umbilic: CheckReport::new("umbilic", f(r), tol), center }
}

/// `max |τ_i|`: the normal is equiaffine.
pub fn check_normalization<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let r = inv.tau.iter().fold(T::zero(), |m, t| m.max(t.abs()));
    CheckReport::new("normalization", f(r), tol)
}

/// `∇g = -2A` for the induced connection.
pub fn check_cubic_form<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let n = inv.dim();
    let (g, c) = (&inv.g, &inv.connection);
    let mut r = T::zero();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut ng = inv.dg.get(&[i, j, k]);
                for l in 0..n {
                    ng -= c.get(&[l, k, i]) * g[(l, j)] + c.get(&[l, k, j]) * g[(i, l)];
                }
                worst(&mut r, ng + T::from_int(2) * inv.a.get(&[i, j, k]));
            }
        }
    }
    CheckReport::new("cubic_form", f(r), tol)
}

/// Symmetry of `A`, `B` and the curvature tensor.
pub fn check_symmetry<T: Real>(inv: &BlaschkeInvariants<T>, tol: f64) -> CheckReport {
    let r = inv
        .a
        .sym3_defect()
        .max(inv.b.asymmetry())
        .max(inv.curvature.symmetry_residual())
        .max(inv.curvature.bianchi_residual());
    CheckReport::new("symmetry", f(r), tol)
}

/// `|∇A|_g`, zero exactly when the cubic form is parallel.
pub fn nabla_a_norm<T: Real>(inv: &BlaschkeInvariants<T>) -> T {
    let n = inv.dim();
    let gi = &inv.g_inv;
    let d = &inv.nabla_a;
    let mut raised = d.clone();
    for slot in 0..4 {
        raised = crate::numtensor::Tensor::from_fn(n, 4, |ix| {
            let mut s = T::zero();
            for p in 0..n {
                let mut jx = [ix[0], ix[1], ix[2], ix[3]];
                jx[slot] = p;
                s += gi[(ix[slot], p)] * raised.get(&jx);
            }
            s
        });
    }
    d.data().iter().zip(raised.data()).fold(T::zero(), |s, (&a, &b)| s + a * b).max(T::zero()).sqrt()
}

/// Every pointwise identity; the alternative Gauss form only on umbilic points.
pub fn structural_checks<T: Real>(inv: &BlaschkeInvariants<T>, tol: &Tolerances) -> Vec<CheckReport> {
    let scale = T::one().max(inv.g.max_abs());
    let mut out = vec![
        CheckReport::new("consistency", f(inv.h_residual / scale), tol.consistency),
        check_normalization(inv, tol.normalization),
        check_symmetry(inv, tol.symmetry),
        check_apolarity(inv, tol.apolarity),
        check_cubic_form(inv, tol.cubic_form),
        check_gauss(inv, tol.gauss),
        check_ricci(inv, tol.ricci),
        check_codazzi(inv, tol.codazzi),
        check_trace(inv, tol.trace),
    ];
    let sphere = check_hypersphere(inv, tol.hypersphere);
    if sphere.umbilic.passed {
        out.push(check_alt_gauss(inv, tol.alt_gauss));
    }
    out
}
