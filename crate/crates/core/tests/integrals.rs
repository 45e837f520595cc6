use mobinv_core::field::{standard_catalog, AnalyticField};
use mobinv_core::invariant::{integrand_2d, integrand_3d, Family};
use mobinv_core::quadrature::Refinement;
use mobinv_core::verify::{inversion_integrals, IntegralPair};
use mobinv_core::xform::{Matrix, Vector};

const EPS: f64 = 1e-12;

/// `|x|² + 4x`: positive Laplacian, and the gradient `2x + (4, 0, ..)` has
/// no zero inside `|x| < 2`.
fn shifted_paraboloid<const D: usize>() -> AnalyticField<D> {
    let mut linear = Vector::<D>::zeros();
    linear[0] = 4.0;
    AnalyticField::Quadratic {
        matrix: Matrix::<D>::identity(),
        linear,
        constant: 0.0,
    }
}

fn assert_agree(label: &str, r: IntegralPair, tol: f64) {
    if r.magnitude == 0.0 {
        // identically zero integrand: the image side is rounding residue
        assert!(r.original.value == 0.0 && r.transformed.value.abs() < 1e-12, "{label}: {}", r.transformed.value);
        return;
    }
    assert!(r.converged(), "{label}: quadrature did not converge");
    assert!(r.deviation() <= tol, "{label}: {} vs {} (dev {:e})", r.original.value, r.transformed.value, r.deviation());
}

#[test]
fn zeroth_families_over_inverted_annulus() {
    for (name, f) in standard_catalog::<2>() {
        for fam in [Family::A, Family::B] {
            let r = inversion_integrals(&f, |j| integrand_2d(j, 0, fam, EPS).get(), 0.5, 1.5, Refinement::default());
            assert_agree(&format!("{name} {fam:?}"), r, 1e-9);
        }
    }
}

#[test]
fn first_families_over_inverted_annulus() {
    let f = shifted_paraboloid::<2>();
    for fam in [Family::A, Family::B] {
        let r = inversion_integrals(&f, |j| integrand_2d(j, 1, fam, EPS).get(), 0.5, 1.5, Refinement::default());
        assert!(r.original.value.abs() > 1.0);
        assert_agree(&format!("{fam:?}"), r, 1e-9);
    }
}

#[test]
fn families_over_inverted_shell() {
    let opts = Refinement {
        max_levels: 6,
        rel_tol: 1e-11,
        ..Default::default()
    };
    let f = shifted_paraboloid::<3>();
    for n in [0, 1] {
        for fam in [Family::A, Family::B] {
            let r = inversion_integrals(&f, |j| integrand_3d(j, n, fam, EPS).get(), 0.5, 1.5, opts);
            assert!(r.original.value.abs() > 1.0);
            assert_agree(&format!("n={n} {fam:?}"), r, 1e-9);
        }
    }
}

#[test]
fn integrand_without_weight_is_not_invariant() {
    // |∇f|⁴ carries one factor of the area change too many
    let f = shifted_paraboloid::<2>();
    let r = inversion_integrals(
        &f,
        |j| Some(j.grad.norm_squared().powi(2)),
        0.5,
        1.5,
        Refinement::default(),
    );
    assert!((r.original.value / r.transformed.value - 1.0).abs() > 0.1);
}
