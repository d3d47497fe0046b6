use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equiaffine::blaschke::blaschke_at;
use equiaffine::catalog::{get_chart, traceless_symmetric_basis, traceless_symmetric_coords};
use equiaffine::linalg::{det, expm, sym_eigenvalues, Matrix};
use equiaffine::ChartDef;

fn sorted_eigs(m: &Matrix<f64>) -> Vec<f64> {
    let mut v = sym_eigenvalues(m);
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Invariants survive `x ↦ Ax + b` with `det A = 1`.
    #[test]
    fn unimodular_maps_preserve_scalars(
        entries in prop::collection::vec(-0.5f64..0.5, 9),
        shift in prop::collection::vec(-2.0f64..2.0, 3),
        u in prop::collection::vec(-0.3f64..0.3, 2),
    ) {
        let raw = Matrix::from_fn(3, 3, |i, j| entries[3 * i + j] + if i == j { 1.0 } else { 0.0 });
        let d: f64 = det(&raw);
        prop_assume!(d > 0.1);
        let a = raw.scale(d.powf(-1.0 / 3.0));
        let chart: ChartDef<f64> = get_chart("graph(x3 = exp(u1) + u2^2 + 0.25*u1^2*u2^2)").unwrap();
        let p = blaschke_at(&chart, &u).unwrap();
        let q = blaschke_at(&chart.affine_image(&a, &shift).unwrap(), &u).unwrap();
        prop_assert!((p.l1 - q.l1).abs() < 1e-8);
        prop_assert!((p.pick - q.pick).abs() < 1e-8);
        prop_assert!((p.chi - q.chi).abs() < 1e-7);
        prop_assert!(p.g.max_abs_diff(&q.g) < 1e-8);
        prop_assert!(p.a.max_abs_diff(&q.a) < 1e-8);
    }
}

#[test]
fn homothety_rescales_mean_curvature() {
    // x ↦ λx multiplies g by λ^{2(n+1)/(n+2)} and L1 by its inverse
    let chart: ChartDef<f64> = get_chart("unit_sphere(2)").unwrap();
    let lambda = 2.0f64;
    let big = chart.affine_image(&Matrix::identity(3).scale(lambda), &[0.0; 3]).unwrap();
    let (p, q) = (blaschke_at(&chart, &[0.1, 0.2]).unwrap(), blaschke_at(&big, &[0.1, 0.2]).unwrap());
    let factor = lambda.powf(1.5);
    assert!((q.l1 * factor - p.l1).abs() < 1e-10);
    assert!(q.g.max_abs_diff(&p.g.scale(factor)) < 1e-10);
}

#[test]
fn sl_so_rotations_are_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for m in [3, 4] {
        let chart: ChartDef<f64> = get_chart(&format!("sl_so({m})")).unwrap();
        let basis = traceless_symmetric_basis(m);
        for _ in 0..2 {
            let u: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-0.4..0.4)).collect();
            let raw = Matrix::from_fn(m, m, |_, _| rng.gen_range(-1.0..1.0));
            let q = expm(&raw.sub(&raw.transpose()));
            let s = basis.iter().zip(&u).fold(Matrix::zeros(m, m), |acc, (b, &c)| acc.add(&b.scale(c)));
            let v = traceless_symmetric_coords(&(&(&q * &s) * &q.transpose()));
            let (a, b) = (blaschke_at(&chart, &u).unwrap(), blaschke_at(&chart, &v).unwrap());
            assert!((a.l1 - b.l1).abs() < 1e-9);
            assert!((a.pick - b.pick).abs() < 1e-9);
            let (ea, eb) = (sorted_eigs(&a.g), sorted_eigs(&b.g));
            assert!(ea.iter().zip(&eb).all(|(x, y)| (x - y).abs() < 1e-9), "{ea:?} {eb:?}");
        }
    }
}

#[test]
fn sl_so_mean_curvature_is_constant() {
    let chart: ChartDef<f64> = get_chart("sl_so(3)").unwrap();
    let base = blaschke_at(&chart, &[0.0; 5]).unwrap();
    for u in [[0.3, -0.2, 0.1, 0.0, 0.25], [-0.4, 0.4, -0.1, 0.2, 0.0]] {
        let inv = blaschke_at(&chart, &u).unwrap();
        assert!((inv.l1 - base.l1).abs() < 1e-9);
        assert!((inv.pick - base.pick).abs() < 1e-9);
    }
}
