use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::blaschke::{blaschke_at, check_hypersphere, nabla_a_norm, pick_invariant};
use crate::chart::ChartDef;

fn flat_l1(n0: usize, c0: f64) -> f64 {
    let n = n0 as f64;
    -(n + 1.0).powf(-(n + 1.0) / (n + 2.0)) * c0.powf(-2.0 / (n + 2.0))
}

fn flat_factor(n0: usize) -> Factor<f64> {
    let chart = compose_chart(&CompositionSpec::<f64>::points(vec![1.0; n0 + 1]).unwrap()).unwrap();
    Factor::new(chart, flat_l1(n0, 1.0), vec![0.0; n0]).unwrap()
}

fn spec(r: usize, factor_dims: &[usize]) -> CompositionSpec<f64> {
    let factors: Vec<_> = factor_dims.iter().map(|&d| flat_factor(d)).collect();
    let k = r + factors.len();
    CompositionSpec::new(r, factors, vec![1.0; k]).unwrap()
}

fn at(chart: &ChartDef<f64>, p: &[f64]) -> crate::blaschke::BlaschkeInvariants<f64> {
    blaschke_at(chart, p).unwrap()
}

#[test]
fn three_points_match_flat_example() {
    let s = CompositionSpec::<f64>::points(vec![1.0, 1.0, 1.0]).unwrap();
    let cf = closed_form(&s, &[0.0, 0.0]).unwrap();
    let c = (1.0_f64 / 3.0).powf(0.25);
    assert!((cf.c - c).abs() < 1e-15);
    assert!((cf.l1 + 3.0_f64.powf(-0.75)).abs() < 1e-15);
    assert!((cf.g[(0, 0)] - 2.0 * c).abs() < 1e-15);
    assert!((cf.g[(1, 1)] - 1.5 * c).abs() < 1e-15);
    assert_eq!(cf.a.get(&[0, 0, 0]), 0.0);
    assert!((cf.a.get(&[0, 0, 1]) - c).abs() < 1e-15);
    assert!((cf.a.get(&[1, 1, 1]) + 0.75 * c).abs() < 1e-15);
    let inv = at(&compose_chart(&s).unwrap(), &[0.0, 0.0]);
    assert!(inv.g.max_abs_diff(&cf.g) < 1e-12);
    assert!(inv.a.max_abs_diff(&cf.a) < 1e-12);
    assert_eq!(inv.position, vec![1.0, 1.0, 1.0]);
}

#[test]
fn pure_point_mean_curvature_and_pick() {
    for n0 in 1..=3 {
        for c0 in [0.5, 1.0, 2.0] {
            let mut consts = vec![1.0; n0 + 1];
            consts[n0] = c0;
            let s = CompositionSpec::<f64>::points(consts).unwrap();
            assert!((s.l1() - flat_l1(n0, c0)).abs() < 1e-14);
            let p = vec![0.1; n0];
            let inv = at(&compose_chart(&s).unwrap(), &p);
            assert!((inv.l1 - s.l1()).abs() < 1e-9);
            if n0 >= 2 {
                let cf = closed_form(&s, &p).unwrap();
                let j = pick_invariant(&cf.a, &crate::linalg::inverse(&cf.g).unwrap());
                assert!((j + s.l1()).abs() < 1e-12, "n0={n0} J={j}");
            }
        }
    }
}

#[test]
fn dimension_bookkeeping() {
    let c = compose_chart(&spec(1, &[2])).unwrap();
    assert_eq!((c.dim(), c.ambient_dim()), (3, 4));
    let c = compose_chart(&spec(0, &[2, 2])).unwrap();
    assert_eq!((c.dim(), c.ambient_dim()), (5, 6));
    assert!(CompositionSpec::<f64>::points(vec![1.0]).is_err());
    assert!(CompositionSpec::<f64>::points(vec![1.0, -1.0]).is_err());
}

#[test]
fn pipeline_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (r, dims) in [(1, vec![2]), (0, vec![2, 2]), (2, vec![1]), (0, vec![1, 2]), (1, vec![1, 2, 1])] {
        let s = spec(r, &dims);
        let pts = sample_points(&s, 3, &mut rng);
        for rep in verify_composition(&s, &pts, 1e-8).unwrap() {
            assert!(rep.passed, "r={r} dims={dims:?}: {rep}");
        }
        let chart = compose_chart(&s).unwrap();
        let inv = at(&chart, &pts[0]);
        assert!(block_sparsity(&s, &inv, 1e-10).passed);
        assert!(check_hypersphere(&inv, 1e-8).passed());
        assert!(nabla_a_norm(&inv) < 1e-7);
    }
}

#[test]
fn nonunit_constants_scale_consistently() {
    let mut s = spec(1, &[2]);
    s.constants = vec![0.7, 1.9];
    let rep = verify_composition(&s, &[vec![0.1, -0.2, 0.05]], 1e-8).unwrap();
    assert!(rep[0].passed, "{}", rep[0]);
}

#[test]
fn mean_curvature_vectors() {
    for (r, dims) in [(1, vec![2]), (0, vec![2, 2]), (0, vec![1, 2, 2])] {
        let s = spec(r, &dims);
        let inv = at(&compose_chart(&s).unwrap(), &s.base_point());
        let rep = mean_curvature_relations(&s, &inv, 1e-8).unwrap();
        assert!(rep.passed, "{rep}");
    }
    let pts = CompositionSpec::<f64>::points(vec![1.0, 1.0]).unwrap();
    let inv = at(&compose_chart(&pts).unwrap(), &[0.0]);
    assert!(mean_curvature_relations(&pts, &inv, 1e-8).is_err());
}

#[test]
fn rescaled_constants_are_equivalent() {
    let mut s = spec(1, &[2]);
    s.constants = vec![0.6, 1.7];
    let (bar, tilde) = equivalent_constants(&s).unwrap();
    assert!((bar.big_c() - s.big_c()).abs() < 1e-13 && (tilde.big_c() - s.big_c()).abs() < 1e-13);
    let p = [0.2, -0.1, 0.3];
    let i0 = at(&compose_chart(&s).unwrap(), &p);
    for other in [bar, tilde] {
        let i1 = at(&compose_chart(&other).unwrap(), &p);
        assert!(i0.g.max_abs_diff(&i1.g) < 1e-9);
        assert!(i0.a.max_abs_diff(&i1.a) < 1e-9);
        assert!((i0.l1 - i1.l1).abs() < 1e-9);
    }
}

#[test]
fn factors_validate_as_hyperspheres() {
    let s = spec(0, &[2, 1]);
    assert!(s.validate_factors(1e-8).unwrap().iter().all(|r| r.passed));
    let measured = Factor::measured(flat_factor(2).chart).unwrap();
    assert!((measured.l1 - flat_l1(2, 1.0)).abs() < 1e-10);
}
