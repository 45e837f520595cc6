//! Integral invariance under inversion: a region integral of an integrand
//! of `f` against the integral of the same integrand of `f ∘ T⁻¹` over the
//! image region.

use crate::field::AnalyticField;
use crate::jet::{jet_of_transform, pullback, Jet};
use crate::quadrature::{integrate_annulus, integrate_shell, Quadrature, Refinement};
use crate::xform::{ElementaryTransform, MobiusMap, Vector};

#[derive(Debug, Clone)]
pub struct IntegralPair {
    pub original: Quadrature,
    pub transformed: Quadrature,
    /// `∫ |integrand|` over the original region.
    pub magnitude: f64,
}

impl IntegralPair {
    /// `|a - b| / max(|a|, |b|, ∫|integrand|)`.
    pub fn deviation(&self) -> f64 {
        super::relative_deviation(self.original.value, self.transformed.value, self.magnitude)
    }

    pub fn converged(&self) -> bool {
        self.original.converged && self.transformed.converged
    }
}

/// Integrates `integrand(f)` over `{r_in ≤ |x| ≤ r_out}` (an annulus or a
/// shell) and `integrand(f ∘ T⁻¹)` over its image under `T = Inversion(0, 1)`,
/// which is `{1/r_out ≤ |u| ≤ 1/r_in}`. Points where the integrand is
/// undefined contribute NaN, so the quadrature then fails to converge.
pub fn inversion_integrals<const D: usize>(
    field: &AnalyticField<D>,
    integrand: impl Fn(&Jet<D>) -> Option<f64>,
    r_in: f64,
    r_out: f64,
    opts: Refinement,
) -> IntegralPair {
    assert!(0.0 < r_in && r_in < r_out, "need 0 < r_in < r_out");
    let inv = MobiusMap::from(ElementaryTransform::inversion(Vector::<D>::zeros(), 1.0).expect("unit sphere"));
    let source = |x: &Vector<D>| integrand(&field.jet(x)).unwrap_or(f64::NAN);
    let image = |u: &Vector<D>| match (inv.apply(u), jet_of_transform(&inv, u)) {
        (Ok(x), Ok(t)) => integrand(&pullback(&field.jet(&x), &t)).unwrap_or(f64::NAN),
        _ => f64::NAN,
    };
    let region = |f: &dyn Fn(&Vector<D>) -> f64, a: f64, b: f64| -> Quadrature {
        let lift = |p: &[f64]| Vector::<D>::from_fn(|i, _| p[i]);
        match D {
            2 => integrate_annulus(Vector::<2>::zeros(), a, b, |p| f(&lift(p.as_slice())), opts),
            3 => integrate_shell(Vector::<3>::zeros(), a, b, |p| f(&lift(p.as_slice())), opts),
            _ => panic!("regions are annuli or shells"),
        }
    };
    IntegralPair {
        original: region(&source, r_in, r_out),
        transformed: region(&image, 1.0 / r_out, 1.0 / r_in),
        magnitude: region(&|x: &Vector<D>| source(x).abs(), r_in, r_out).value,
    }
}
