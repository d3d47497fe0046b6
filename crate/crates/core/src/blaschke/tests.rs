use super::*;
use crate::chart::parse_chart;

const FLAT: &str = "dim 2; param C0 = 1; x1 = exp(u1); x2 = exp(u2); x3 = C0*exp(-u1-u2);";
const SPHERE: &str = "dim 2; x1 = u1; x2 = u2; x3 = (1 - u1^2 - u2^2)^(1/2);";
const PARABOLOID: &str = "dim 2; x1 = u1; x2 = u2; x3 = (u1^2 + u2^2)/2;";
const QUARTIC: &str = "dim 2; x1 = u1; x2 = u2; x3 = u1^4 + u2^2;";

fn inv(src: &str, p: &[f64]) -> BlaschkeInvariants<f64> {
    blaschke_at(&parse_chart(src).unwrap(), p).unwrap()
}

#[test]
fn flat_hypersphere_scalars() {
    let l1 = -(3.0_f64).powf(-0.75);
    for p in [[0.0, 0.0], [0.3, -0.2], [-0.4, 0.1]] {
        let b = inv(FLAT, &p);
        assert!((b.l1 - l1).abs() < 1e-12, "{}", b.l1);
        assert!((b.pick + l1).abs() < 1e-12);
        assert!(b.chi.abs() < 1e-10);
        let s = check_hypersphere(&b, 1e-8);
        assert!(s.passed(), "{s:?}");
        assert!(nabla_a_norm(&b) < 1e-7);
    }
}

#[test]
fn unit_sphere_is_centered_elliptic_sphere() {
    let b = inv(SPHERE, &[0.2, -0.3]);
    assert!(b.a.max_abs() < 1e-9);
    assert!((b.l1 - 1.0).abs() < 1e-10);
    for (xi, x) in b.xi.iter().zip(&b.position) {
        assert!((xi + x).abs() < 1e-10);
    }
    let g = check_gauss(&b, 1e-8);
    assert!(g.passed, "{g}");
}

#[test]
fn paraboloid_is_improper_sphere() {
    let b = inv(PARABOLOID, &[0.7, -1.1]);
    assert!(b.a.max_abs() < 1e-12);
    assert!(b.b.max_abs() < 1e-12);
    assert!(b.l1.abs() < 1e-12 && b.pick.abs() < 1e-12);
    let s = check_hypersphere(&b, 1e-8);
    assert!(s.center.is_none() && s.passed());
}

#[test]
fn quartic_graph_is_neither_sphere_nor_parallel() {
    let b = inv(QUARTIC, &[1.0, 1.0]);
    assert!(check_hypersphere(&b, 1e-8).umbilic.residual > 0.01);
    assert!(nabla_a_norm(&b) > 1e-3);
    for r in structural_checks(&b, &Tolerances::default()) {
        assert!(r.passed, "{r}");
    }
}

#[test]
fn perturbed_cubic_form_breaks_apolarity() {
    let mut b = inv(FLAT, &[0.1, 0.2]);
    let v = b.a.get(&[0, 0, 0]);
    b.a.set(&[0, 0, 0], v + 0.1);
    let r = check_apolarity(&b, 1e-8);
    assert!(r.residual >= 0.1 * b.g_inv[(0, 0)] - 1e-12);
    assert!(!r.passed);
}

#[test]
fn saddle_is_rejected() {
    let c = parse_chart::<f64>("dim 2; x1 = u1; x2 = u2; x3 = u1*u2;").unwrap();
    assert_eq!(blaschke_at(&c, &[0.0, 0.0]).unwrap_err(), Error::NonConvex);
}

#[test]
fn concave_orientation_is_flipped() {
    let c = parse_chart::<f64>("dim 2; x1 = u1; x2 = u2; x3 = -(u1^2 + u2^2)/2;").unwrap();
    let b = blaschke_at(&c, &[0.3, 0.1]).unwrap();
    assert!(b.flipped);
    assert!(linalg::sym_eigenvalues(&b.g).iter().all(|&v| v > 0.0));
}

#[test]
fn structural_identities_on_generic_surface() {
    let src = "dim 3; x1 = u1; x2 = u2; x3 = u3; x4 = exp(u1) + u2^2 + u3^2 + u1*u2*u3/4 + u1^4;";
    let b = inv(src, &[0.1, 0.2, -0.1]);
    for r in structural_checks(&b, &Tolerances::default()) {
        assert!(r.passed, "{r}");
    }
}
