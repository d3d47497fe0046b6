//! Numerical suite for the octonion, Jordan and embedding relations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::albert::{bracket_operator, mult_operator, random_anti_hermitian, JordanMatrix, LinOp27, ALBERT_DIM};
use super::embedding::{E6Embedding, N};
use super::octonion::Octonion;
use crate::error::Result;
use crate::linalg::{sym_eigenvalues, Matrix};
use crate::report::CheckReport;

type O = Octonion<f64>;
type J = JordanMatrix<f64>;

const EXACT: f64 = 1e-12;
const PAIRS: usize = 50;

fn max_over(count: usize, mut f: impl FnMut() -> f64) -> f64 {
    (0..count).map(|_| f()).fold(0.0, f64::max)
}

/// `residual = 0` when `value > 0`, otherwise how far it falls short.
fn positive(name: &str, value: f64) -> CheckReport {
    CheckReport::new(name, if value > 0.0 { 0.0 } else { 1.0 - value }, 0.0)
}

/// `ξ1ξ2ξ3 + 2 Re(x1 x2 x3) − Σ ξ_i |x_i|²`.
fn det_expansion(x: &J) -> f64 {
    let [a, b, c] = x.xi;
    let [x1, x2, x3] = x.x;
    a * b * c + 2.0 * (x1 * x2 * x3).re() - a * x1.norm_sqr() - b * x2.norm_sqr() - c * x3.norm_sqr()
}

/// Eigenvalues of a map that is self-adjoint for the trace form.
fn trace_form_spectrum(op: &LinOp27<f64>) -> Vec<f64> {
    let w: Vec<f64> = (0..ALBERT_DIM).map(|k| J::basis(k).inner(&J::basis(k)).sqrt()).collect();
    let m = op.matrix();
    sym_eigenvalues(&Matrix::from_fn(ALBERT_DIM, ALBERT_DIM, |i, j| w[i] * m[(i, j)] / w[j]))
}

/// Hermiticity defect, derivation defect and trace of bracket operators.
fn bracket_defects(rng: &mut ChaCha8Rng, traceless: bool) -> [f64; 3] {
    let (mut herm, mut deriv, mut trace) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10 {
        let a = random_anti_hermitian::<f64, _>(rng, traceless);
        let (op, defect) = bracket_operator(&a);
        herm = herm.max(defect);
        trace = trace.max(op.trace().abs());
        for _ in 0..5 {
            let (x, y) = (J::random(rng), J::random(rng));
            let lhs = op.apply(&x.jordan(&y));
            let rhs = op.apply(&x).jordan(&y) + x.jordan(&op.apply(&y));
            deriv = deriv.max(lhs.max_abs_diff(&rhs));
        }
    }
    [herm, deriv, trace]
}

/// Runs every relation with seeded random samples; `l1 < 0` selects the
/// hypersphere.
pub fn selftest(seed: u64, l1: f64) -> Result<Vec<CheckReport>> {
    let emb = E6Embedding::new(l1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    let mut out = Vec::new();

    // octonions
    let units = (1..8).map(|k| (O::unit(k) * O::unit(k)).max_abs_diff(&O::real(-1.0))).fold(0.0, f64::max);
    out.push(CheckReport::new("octonion_imaginary_squares", units, 0.0));
    out.push(CheckReport::new(
        "octonion_norm_multiplicative",
        max_over(1000, || {
            let (x, y) = (O::random(rng), O::random(rng));
            ((x * y).norm() - x.norm() * y.norm()).abs()
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "octonion_alternative",
        max_over(1000, || {
            let (x, y) = (O::random(rng), O::random(rng));
            (x * (x * y)).max_abs_diff(&((x * x) * y)).max(((y * x) * x).max_abs_diff(&(y * (x * x))))
        }),
        EXACT,
    ));
    let (e1, e2, e4) = (O::unit(1), O::unit(2), O::unit(4));
    out.push(positive("octonion_nonassociative", ((e1 * e2) * e4).max_abs_diff(&(e1 * (e2 * e4)))));

    // basis relations
    let mut idem = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { J::e(i) } else { J::zero() };
            idem = idem.max(J::e(i).jordan(&J::e(j)).max_abs_diff(&want));
        }
    }
    out.push(CheckReport::new("diagonal_idempotents", idem, EXACT));
    out.push(CheckReport::new(
        "diagonal_on_offdiagonal",
        max_over(PAIRS, || {
            let x = O::random(rng);
            let mut r = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { J::zero() } else { J::f(j, x).scale(0.5) };
                    r = r.max(J::e(i).jordan(&J::f(j, x)).max_abs_diff(&want));
                }
            }
            r
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "offdiagonal_square",
        max_over(PAIRS, || {
            let (x, y) = (O::random(rng), O::random(rng));
            (0..3)
                .map(|i| {
                    let want = (J::e((i + 1) % 3) + J::e((i + 2) % 3)).scale(x.inner(&y));
                    J::f(i, x).jordan(&J::f(i, y)).max_abs_diff(&want)
                })
                .fold(0.0, f64::max)
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "offdiagonal_cyclic",
        max_over(PAIRS, || {
            let (x, y) = (O::random(rng), O::random(rng));
            (0..3)
                .map(|i| {
                    let want = J::f((i + 2) % 3, (x * y).conj()).scale(0.5);
                    J::f(i, x).jordan(&J::f((i + 1) % 3, y)).max_abs_diff(&want)
                })
                .fold(0.0, f64::max)
        }),
        EXACT,
    ));

    // determinant and product
    let id = J::identity();
    out.push(CheckReport::new("det_identity", (id.det() - 1.0).abs(), 0.0));
    out.push(CheckReport::new("inner_identity", (id.inner(&id) - 3.0).abs(), 0.0));
    out.push(CheckReport::new("det_rank_deficient", (J::e(0) + J::e(1)).det().abs(), 0.0));
    out.push(CheckReport::new(
        "det_expansion",
        max_over(PAIRS, || {
            let x = J::random(rng);
            (x.det() - det_expansion(&x)).abs()
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "jordan_commutative",
        max_over(PAIRS, || {
            let (x, y) = (J::random(rng), J::random(rng));
            x.jordan(&y).max_abs_diff(&y.jordan(&x))
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "jordan_identity",
        max_over(PAIRS, || {
            let (x, y) = (J::random(rng), J::random(rng));
            let x2 = x.jordan(&x);
            x2.jordan(&x.jordan(&y)).max_abs_diff(&x.jordan(&x2.jordan(&y)))
        }),
        EXACT,
    ));

    // multiplication operators
    let ident = mult_operator(&id).matrix().max_abs_diff(&Matrix::identity(ALBERT_DIM));
    out.push(CheckReport::new("identity_operator", ident, 0.0));
    let mut spectrum = trace_form_spectrum(&mult_operator(&J::e(0)));
    spectrum.sort_by(f64::total_cmp);
    let expected: Vec<f64> = [(0.0, 10), (0.5, 16), (1.0, 1)]
        .iter()
        .flat_map(|&(v, m)| std::iter::repeat(v).take(m))
        .collect();
    let spec_res = spectrum.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    out.push(CheckReport::new("idempotent_spectrum", spec_res, EXACT));
    out.push(CheckReport::new(
        "traceless_generator_trace",
        max_over(30, || mult_operator(&J::random_traceless(rng)).trace().abs()),
        EXACT,
    ));
    out.push(CheckReport::new(
        "generator_preserves_det",
        max_over(5, || {
            let flow = mult_operator(&J::random_traceless(rng).scale(0.3)).exp();
            let x = J::random(rng);
            (flow.apply(&x).det() - x.det()).abs()
        }),
        1e-10,
    ));
    let [herm, deriv, trace] = bracket_defects(rng, true);
    out.push(CheckReport::new("bracket_traceless_hermitian", herm, EXACT));
    out.push(CheckReport::new("bracket_traceless_derivation", deriv, EXACT));
    out.push(CheckReport::new("bracket_traceless_trace", trace, EXACT));
    // with an imaginary diagonal of nonzero sum the bracket still maps into
    // the Hermitian matrices and is traceless, but it is not a derivation
    let [herm, deriv, trace] = bracket_defects(rng, false);
    out.push(CheckReport::new("bracket_general_hermitian", herm, EXACT));
    out.push(CheckReport::new("bracket_general_trace", trace, EXACT));
    out.push(positive("bracket_general_not_derivation", deriv));

    // hypersphere at the base point
    out.push(CheckReport::new(
        "transversality",
        max_over(30, || J::random_traceless(rng).inner(&id).abs()),
        EXACT,
    ));
    out.push(CheckReport::new(
        "gauss_split",
        max_over(PAIRS, || {
            let (x, y) = (J::random_traceless(rng), J::random_traceless(rng));
            let (tangent, normal) = emb.gauss_split(&x, &y);
            let full = x.jordan(&y).scale(emb.c);
            full.max_abs_diff(&(tangent + normal)).max(tangent.trace().abs())
        }),
        EXACT,
    ));
    out.push(CheckReport::new(
        "hypersphere_trace",
        emb.traced_normal().max_abs_diff(&emb.affine_normal()),
        1e-10,
    ));
    let min_eig = sym_eigenvalues(&emb.metric_gram()).into_iter().fold(f64::INFINITY, f64::min);
    out.push(positive("metric_positive", min_eig));
    let basis = emb.metric_basis();
    let apolar = basis
        .iter()
        .map(|z| basis.iter().map(|e| emb.a_o(e, e, z)).sum::<f64>().abs())
        .fold(0.0, f64::max);
    out.push(CheckReport::new("cubic_apolar", apolar, 1e-10));
    out.push(CheckReport::new(
        "cubic_symmetric",
        max_over(PAIRS, || {
            let [x, y, z] = [0; 3].map(|_| J::random_traceless(rng));
            let v = emb.a_o(&x, &y, &z);
            [emb.a_o(&y, &x, &z), emb.a_o(&x, &z, &y), emb.a_o(&z, &y, &x)]
                .iter()
                .map(|w| (w - v).abs())
                .fold(0.0, f64::max)
        }),
        1e-10,
    ));
    out.push(CheckReport::new(
        "gauss_base_point",
        max_over(PAIRS, || {
            let [x, y, z] = [0; 3].map(|_| J::random_traceless(rng));
            let k = |a: &J, b: &J| emb.difference_tensor(a, b);
            let curvature = -(x.jordan(&y.jordan(&z)) - y.jordan(&x.jordan(&z)));
            let sphere = (x.scale(emb.g_o(&y, &z)) - y.scale(emb.g_o(&x, &z))).scale(emb.l1);
            let commutator = k(&x, &k(&y, &z)) - k(&y, &k(&x, &z));
            curvature.max_abs_diff(&(sphere - commutator))
        }),
        EXACT,
    ));
    let gram = emb.metric_gram();
    let norm = emb.determinant_metric().max_abs_diff(&gram) / gram.max_abs();
    out.push(CheckReport::new("blaschke_normalization", norm, 1e-10));
    debug_assert_eq!(basis.len(), N);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_relations_hold() {
        for l1 in [-1.0 / 3.0, -1.5] {
            let reports = selftest(7, l1).unwrap();
            for r in &reports {
                println!("{r}");
            }
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed).collect();
            assert!(failed.is_empty(), "{failed:?}");
        }
    }
}
