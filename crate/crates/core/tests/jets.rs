mod common;

use common::{fd_gradient, fd_hessian, fd_jacobian};
use mobinv_core::field::{standard_catalog, AnalyticField};
use mobinv_core::invariant::{diff_inv_3d, integrand_2d, Family};
use mobinv_core::jet::{jet_of_transform, pullback, transport, Jet};
use mobinv_core::xform::{ElementaryTransform, Matrix, MobiusMap, Vector};
use nalgebra::{vector, Vector3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check_field<const D: usize>(f: &AnalyticField<D>, x: &Vector<D>) -> Result<(), TestCaseError> {
    let j = f.jet(x);
    prop_assert_eq!(j.value, f.value(x));
    let grad = fd_gradient(|p| f.value(p), x, 1e-6);
    prop_assert!((j.grad - grad).norm() <= 1e-5 * j.grad.norm().max(1.0), "{} vs {grad}", j.grad);
    let hess = fd_jacobian(|p| f.jet(p).grad, x, 1e-6);
    prop_assert!((j.hess - hess).norm() <= 1e-4 * j.hess.norm().max(1.0), "{} vs {hess}", j.hess);
    prop_assert!((j.hess - j.hess.transpose()).amax() <= 1e-12);
    Ok(())
}

proptest! {
    #[test]
    fn catalog_derivatives_are_consistent_2d(x in prop::array::uniform2(-2.0..2.0f64)) {
        for (_, f) in standard_catalog::<2>() {
            check_field(&f, &Vector::<2>::from(x))?;
        }
    }

    #[test]
    fn catalog_derivatives_are_consistent_3d(x in prop::array::uniform3(-2.0..2.0f64)) {
        for (_, f) in standard_catalog::<3>() {
            check_field(&f, &Vector::<3>::from(x))?;
        }
    }

    #[test]
    fn families_satisfy_ratio_identity(
        g in prop::array::uniform2(-3.0..3.0f64),
        h in prop::array::uniform3(-3.0..3.0f64),
    ) {
        let j = Jet::new(0.0, Vector::<2>::from(g), nalgebra::matrix![h[0], h[1]; h[1], h[2]]).unwrap();
        let eps = 1e-12;
        let get = |n, fam| integrand_2d(&j, n, fam, eps).get();
        if let (Some(a1), Some(a0), Some(b0)) = (get(1, Family::A), get(0, Family::A), get(0, Family::B)) {
            prop_assert!((a1 * b0 - a0 * a0).abs() <= 1e-12 * (a0 * a0).max(f64::MIN_POSITIVE));
        }
    }
}

#[test]
fn inversion_component_hessian_matches_finite_differences() {
    let map = MobiusMap::from(ElementaryTransform::inversion(vector![0.0, 0.0], 1.0).unwrap());
    let u = vector![1.0, 0.0];
    let fd = fd_hessian(|p| map.apply(p).unwrap()[0], &u, 1e-4);
    let tj = jet_of_transform(&map, &u).unwrap();
    assert!((fd[(0, 0)] - 2.0).abs() < 1e-4);
    assert!((tj.hessians[0] - fd).amax() < 1e-4, "{} vs {fd}", tj.hessians[0]);

    // a generic 3-D inversion, every component
    let map = MobiusMap::from(ElementaryTransform::inversion(vector![0.3, -0.2, 0.5], 1.7).unwrap());
    let u = vector![1.1, 0.4, -0.9];
    let tj = jet_of_transform(&map, &u).unwrap();
    for k in 0..3 {
        let fd = fd_hessian(|p| map.apply(p).unwrap()[k], &u, 1e-4);
        assert!((tj.hessians[k] - fd).amax() < 1e-4, "component {k}");
    }
}

#[test]
fn pullback_of_coordinate_through_inversion() {
    // f = x, T = Inversion(0, 1): g(u, v) = u / (u² + v²)
    let map = MobiusMap::from(ElementaryTransform::inversion(vector![0.0, 0.0], 1.0).unwrap());
    let u = vector![1.0, 1.0];
    let x = map.inverse().apply(&u).unwrap();
    let f = Jet::new(x[0], vector![1.0, 0.0], Matrix::<2>::zeros()).unwrap();
    let g = pullback(&f, &jet_of_transform(&map.inverse(), &u).unwrap());
    let g_fn = |p: &Vector<2>| p[0] / p.norm_squared();
    assert!((g.value - 0.5).abs() < 1e-15);
    assert!((g.grad - fd_gradient(g_fn, &u, 1e-6)).amax() < 1e-4);
    assert!((g.hess - fd_hessian(g_fn, &u, 1e-4)).amax() < 1e-4);
    // closed form: g_u = (v² - u²)/ρ⁴ = 0 and g_v = -2uv/ρ⁴ = -1/2 at (1, 1)
    assert!(g.grad[0].abs() < 1e-15 && (g.grad[1] + 0.5).abs() < 1e-15);
}

#[test]
fn three_dimensional_invariant_spot_check() {
    let map = MobiusMap::from(ElementaryTransform::inversion(vector![0.0, 0.0, 10.0], 3.0).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let paraboloid = &standard_catalog::<3>()[1].1;
    for _ in 0..20 {
        let x = Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let f = paraboloid.jet(&x);
        let (_, g) = transport(&f, &map, &x).unwrap();
        let a = diff_inv_3d(&f, 1e-12).get().unwrap();
        let b = diff_inv_3d(&g, 1e-12).get().unwrap();
        // f = |x|²: the invariant is 2/|x|²
        assert!((a - 2.0 / x.norm_squared()).abs() <= 1e-12 * a);
        assert!((a - b).abs() <= 1e-9 * a, "{a} vs {b}");
    }
}
