//! Differential invariants of scalar fields under Möbius maps, their
//! rigid-motion building blocks, the relative weights picked up by numerators
//! and denominators, and the integrands of the integral-invariant families.
//!
//! In 2-D the absolute invariant is `Δf / |∇f|²`. In 3-D it is
//! `(f_A + f_B) / |∇f|⁴` with `f_A = Δf |∇f|²` and `f_B = ∇fᵀ ∇²f ∇f`.

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::xform::{determinant, ElementaryTransform, MobiusMap, Vector};

/// Default absolute guard on denominators.
pub const DEFAULT_EPS_DEN: f64 = 1e-12;

/// An invariant evaluation. `degenerate` is set when a denominator guard
/// fired or a fractional power of a negative base was required; the value is
/// then meaningless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantValue {
    pub value: f64,
    pub degenerate: bool,
}

impl InvariantValue {
    fn ok(value: f64) -> Self {
        Self {
            value,
            degenerate: false,
        }
    }

    fn degenerate() -> Self {
        Self {
            value: f64::NAN,
            degenerate: true,
        }
    }

    /// The value if it is usable.
    pub fn get(&self) -> Option<f64> {
        (!self.degenerate && self.value.is_finite()).then_some(self.value)
    }
}

/// Which transformation law an expression obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// The absolute invariants themselves: weight 1 under every generator.
    Absolute2D,
    /// Numerator or denominator of the 2-D invariant: `‖J‖⁻¹`.
    NumDen2D,
    /// Numerator or denominator of the 3-D invariant: `‖J‖^(-4/3)`.
    NumDen3D,
}

impl WeightKind {
    /// Power of `‖J‖` applied under stretching and inversion.
    pub fn exponent(self) -> f64 {
        match self {
            WeightKind::Absolute2D => 0.0,
            WeightKind::NumDen2D => -1.0,
            WeightKind::NumDen3D => -4.0 / 3.0,
        }
    }

    fn required_dim(self) -> Option<usize> {
        match self {
            WeightKind::Absolute2D => None,
            WeightKind::NumDen2D => Some(2),
            WeightKind::NumDen3D => Some(3),
        }
    }
}

/// Integrand family: `A` puts the second-order term on top, `B` the gradient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
}

pub fn grad_norm_sq<const D: usize>(j: &Jet<D>) -> f64 {
    j.grad.norm_squared()
}

pub fn laplacian<const D: usize>(j: &Jet<D>) -> f64 {
    j.hess.trace()
}

/// `f_x² f_xx + f_y² f_yy + f_z² f_zz + 2 f_x f_xy f_y + 2 f_x f_xz f_z + 2 f_y f_yz f_z`,
/// which is the quadratic form `∇fᵀ ∇²f ∇f`.
pub fn f_b(j: &Jet<3>) -> f64 {
    j.grad.dot(&(j.hess * j.grad))
}

/// `(f_xx + f_yy + f_zz)(f_x² + f_y² + f_z²)`
pub fn f_a(j: &Jet<3>) -> f64 {
    laplacian(j) * grad_norm_sq(j)
}

/// Numerator of the 3-D invariant, `f_A + f_B`.
pub fn conformal_numerator(j: &Jet<3>) -> f64 {
    f_a(j) + f_b(j)
}

/// `Δf / |∇f|²`
pub fn diff_inv_2d(j: &Jet<2>, eps_den: f64) -> InvariantValue {
    let den = grad_norm_sq(j);
    if den < eps_den {
        return InvariantValue::degenerate();
    }
    InvariantValue::ok(laplacian(j) / den)
}

/// `(f_A + f_B) / |∇f|⁴`
pub fn diff_inv_3d(j: &Jet<3>, eps_den: f64) -> InvariantValue {
    let g2 = grad_norm_sq(j);
    if g2 < eps_den {
        return InvariantValue::degenerate();
    }
    InvariantValue::ok(conformal_numerator(j) / (g2 * g2))
}

/// Weight `W_T` of one generator at the source point `x`: the factor by
/// which an expression of the given kind is multiplied when `f` is replaced
/// by `f ∘ T⁻¹` and evaluated at `T(x)`.
pub fn table1_weight<const D: usize>(
    kind: WeightKind,
    step: &ElementaryTransform<D>,
    x: &Vector<D>,
) -> Result<f64> {
    if let Some(expected) = kind.required_dim() {
        if expected != D {
            return Err(Error::DimensionMismatch { expected, found: D });
        }
    }
    let jac = step.jacobian(x)?;
    if !step.is_scaling() || kind == WeightKind::Absolute2D {
        return Ok(1.0);
    }
    Ok(determinant(&jac).abs().powf(kind.exponent()))
}

/// Weight of a composed map: the product of per-step weights along the
/// trajectory of `x`.
pub fn map_weight<const D: usize>(kind: WeightKind, map: &MobiusMap<D>, x: &Vector<D>) -> Result<f64> {
    let path = map.trajectory(x)?;
    map.steps()
        .iter()
        .zip(&path)
        .try_fold(1.0, |w, (step, p)| Ok(w * table1_weight(kind, step, p)?))
}

fn ratio_power(top: f64, top_exp: f64, bottom: f64, bottom_exp: f64, eps_den: f64) -> InvariantValue {
    let needs_bottom = bottom_exp != 0.0;
    if needs_bottom && bottom.abs() < eps_den {
        return InvariantValue::degenerate();
    }
    let pow = |base: f64, e: f64| -> Option<f64> {
        if e == 0.0 {
            Some(1.0)
        } else if e.fract() == 0.0 {
            Some(base.powi(e as i32))
        } else if base < 0.0 {
            None
        } else {
            Some(base.powf(e))
        }
    };
    match (pow(top, top_exp), pow(bottom, bottom_exp)) {
        (Some(t), Some(b)) => InvariantValue::ok(t / b),
        _ => InvariantValue::degenerate(),
    }
}

/// Integrands of the 2-D families:
/// `A → (Δf)^(n+1) / (|∇f|²)^n` and `B → (|∇f|²)^(n+1) / (Δf)^n`.
pub fn integrand_2d(j: &Jet<2>, n: u32, family: Family, eps_den: f64) -> InvariantValue {
    let lap = laplacian(j);
    let g2 = grad_norm_sq(j);
    let (top, bottom) = match family {
        Family::A => (lap, g2),
        Family::B => (g2, lap),
    };
    ratio_power(top, (n + 1) as f64, bottom, n as f64, eps_den)
}

/// Integrands of the 3-D families:
/// `A → (f_A+f_B)^(3(n+1)/4) / (|∇f|²)^(3n/2)` and
/// `B → (|∇f|²)^(3(n+1)/2) / (f_A+f_B)^(3n/4)`.
pub fn integrand_3d(j: &Jet<3>, n: u32, family: Family, eps_den: f64) -> InvariantValue {
    let num = conformal_numerator(j);
    let g2 = grad_norm_sq(j);
    let n = n as f64;
    match family {
        Family::A => ratio_power(num, 0.75 * (n + 1.0), g2, 1.5 * n, eps_den),
        Family::B => ratio_power(g2, 1.5 * (n + 1.0), num, 0.75 * n, eps_den),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xform::Matrix;
    use nalgebra::{matrix, vector, Matrix3};

    fn jet2(grad: Vector<2>, hess: Matrix<2>) -> Jet<2> {
        Jet {
            value: 0.0,
            grad,
            hess,
        }
    }

    fn jet3(grad: Vector<3>, hess: Matrix<3>) -> Jet<3> {
        Jet {
            value: 0.0,
            grad,
            hess,
        }
    }

    #[test]
    fn building_blocks() {
        assert_eq!(grad_norm_sq(&jet2(vector![0.0, 0.0], Matrix::zeros())), 0.0);
        assert_eq!(grad_norm_sq(&jet2(vector![3.0, 4.0], Matrix::zeros())), 25.0);
        assert_eq!(grad_norm_sq(&jet3(vector![1.0, 2.0, 2.0], Matrix::zeros())), 9.0);

        assert_eq!(laplacian(&jet2(vector![1.0, 1.0], Matrix::zeros())), 0.0);
        assert_eq!(laplacian(&jet2(vector![1.0, 1.0], Matrix::identity() * 2.0)), 4.0);
        assert_eq!(laplacian(&jet2(vector![1.0, 1.0], matrix![2.0, 0.0; 0.0, -2.0])), 0.0);
    }

    #[test]
    fn f_a_f_b_examples() {
        let sphere = jet3(vector![2.0, 0.0, 0.0], Matrix3::identity() * 2.0);
        assert_eq!(f_b(&sphere), 8.0);
        assert_eq!(f_a(&sphere), 24.0);
        assert_eq!(diff_inv_3d(&sphere, DEFAULT_EPS_DEN).get(), Some(2.0));

        let flat = jet3(Vector::zeros(), Matrix3::identity());
        assert_eq!(f_b(&flat), 0.0);
        assert_eq!(f_a(&flat), 0.0);

        let linear = jet3(vector![1.0, 0.0, 0.0], Matrix3::zeros());
        assert_eq!(f_a(&linear), 0.0);
        assert_eq!(diff_inv_3d(&linear, DEFAULT_EPS_DEN).get(), Some(0.0));

        // f = xyz at (1, 1, 1), expanded term by term
        let xyz = jet3(vector![1.0, 1.0, 1.0], matrix![0.0, 1.0, 1.0; 1.0, 0.0, 1.0; 1.0, 1.0, 0.0]);
        let (fx, fy, fz) = (1.0, 1.0, 1.0);
        let (fxx, fyy, fzz, fxy, fxz, fyz) = (0.0, 0.0, 0.0, 1.0, 1.0, 1.0);
        let expanded = fx * fx * fxx
            + fy * fy * fyy
            + fz * fz * fzz
            + 2.0 * fx * fxy * fy
            + 2.0 * fx * fxz * fz
            + 2.0 * fy * fyz * fz;
        assert_eq!(expanded, 6.0);
        assert_eq!(f_b(&xyz), expanded);
    }

    #[test]
    fn diff_inv_2d_examples() {
        // f = x² + y²
        let at = |x: f64, y: f64| jet2(vector![2.0 * x, 2.0 * y], Matrix::identity() * 2.0);
        assert_eq!(diff_inv_2d(&at(1.0, 0.0), DEFAULT_EPS_DEN).get(), Some(1.0));
        assert_eq!(diff_inv_2d(&at(2.0, 0.0), DEFAULT_EPS_DEN).get(), Some(0.25));
        assert!(diff_inv_2d(&at(0.0, 0.0), DEFAULT_EPS_DEN).degenerate);
        // f = x
        let x = jet2(vector![1.0, 0.0], Matrix::zeros());
        assert_eq!(diff_inv_2d(&x, DEFAULT_EPS_DEN).get(), Some(0.0));
    }

    #[test]
    fn weights() {
        let x2 = vector![0.4, -1.0];
        let s2 = ElementaryTransform::<2>::stretching(2.0).unwrap();
        assert_eq!(table1_weight(WeightKind::NumDen2D, &s2, &x2).unwrap(), 0.25);
        assert_eq!(table1_weight(WeightKind::Absolute2D, &s2, &x2).unwrap(), 1.0);

        let x3 = vector![0.4, -1.0, 2.0];
        let s3 = ElementaryTransform::<3>::stretching(2.0).unwrap();
        let w = table1_weight(WeightKind::NumDen3D, &s3, &x3).unwrap();
        assert!((w - 0.0625).abs() < 1e-15);
        let rot = ElementaryTransform::<3>::rotation(
            *nalgebra::Rotation3::from_euler_angles(0.3, -0.2, 1.1).matrix(),
        )
        .unwrap();
        assert_eq!(table1_weight(WeightKind::NumDen3D, &rot, &x3).unwrap(), 1.0);
        assert!(matches!(
            table1_weight(WeightKind::NumDen2D, &s3, &x3),
            Err(Error::DimensionMismatch { .. })
        ));

        let inv = ElementaryTransform::<2>::inversion(vector![0.0, 0.0], 1.0).unwrap();
        // ‖J‖ = 1/16 at (2, 0)
        assert!((table1_weight(WeightKind::NumDen2D, &inv, &vector![2.0, 0.0]).unwrap() - 16.0).abs() < 1e-12);
        assert!(table1_weight(WeightKind::NumDen2D, &inv, &vector![0.0, 0.0]).is_err());

        let map = MobiusMap::new(vec![s2.clone(), s2]);
        assert_eq!(map_weight(WeightKind::NumDen2D, &map, &x2).unwrap(), 1.0 / 16.0);
    }

    #[test]
    fn integrand_2d_examples() {
        let para = jet2(vector![2.0, 0.0], Matrix::identity() * 2.0);
        assert_eq!(integrand_2d(&para, 0, Family::A, DEFAULT_EPS_DEN).get(), Some(4.0));
        assert_eq!(integrand_2d(&para, 1, Family::A, DEFAULT_EPS_DEN).get(), Some(4.0));
        let a0 = integrand_2d(&para, 0, Family::A, DEFAULT_EPS_DEN).value;
        let b0 = integrand_2d(&para, 0, Family::B, DEFAULT_EPS_DEN).value;
        assert_eq!(a0 * a0 / b0, 4.0);

        let g = jet2(vector![3.0, 4.0], Matrix::zeros());
        assert_eq!(integrand_2d(&g, 0, Family::B, DEFAULT_EPS_DEN).get(), Some(25.0));
        assert!(integrand_2d(&g, 1, Family::B, DEFAULT_EPS_DEN).degenerate);
        assert_eq!(integrand_2d(&g, 1, Family::A, DEFAULT_EPS_DEN).get(), Some(0.0));
    }

    #[test]
    fn integrand_3d_examples() {
        let x = jet3(vector![1.0, 0.0, 0.0], Matrix3::zeros());
        assert_eq!(integrand_3d(&x, 0, Family::B, DEFAULT_EPS_DEN).get(), Some(1.0));

        let sphere = jet3(vector![2.0, 0.0, 0.0], Matrix3::identity() * 2.0);
        let v = integrand_3d(&sphere, 0, Family::A, DEFAULT_EPS_DEN).get().unwrap();
        // 32^(3/4) = 2^(15/4)
        assert!((v - 2f64.powf(3.75)).abs() < 1e-12);
        assert!((v - 13.454342644059432).abs() < 1e-12);

        let zero = jet3(Vector::zeros(), Matrix3::zeros());
        assert_eq!(integrand_3d(&zero, 0, Family::A, DEFAULT_EPS_DEN).get(), Some(0.0));
        assert!(integrand_3d(&zero, 1, Family::A, DEFAULT_EPS_DEN).degenerate);

        let negative = jet3(vector![1.0, 0.0, 0.0], Matrix3::identity() * -1.0);
        assert!(conformal_numerator(&negative) < 0.0);
        assert!(integrand_3d(&negative, 0, Family::A, DEFAULT_EPS_DEN).degenerate);
        assert!(integrand_3d(&negative, 1, Family::B, DEFAULT_EPS_DEN).degenerate);
        assert!(!integrand_3d(&negative, 0, Family::B, DEFAULT_EPS_DEN).degenerate);
    }
}
