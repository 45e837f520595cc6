//! Second-order jets of scalar functions and of Möbius maps, and the
//! chain-rule pullback that carries a function jet through a map.

use crate::error::{Error, Result};
use crate::xform::{MobiusMap, Matrix, Vector};

/// Value, gradient and Hessian of a scalar function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<const D: usize> {
    pub value: f64,
    pub grad: Vector<D>,
    pub hess: Matrix<D>,
}

impl<const D: usize> Jet<D> {
    pub fn new(value: f64, grad: Vector<D>, hess: Matrix<D>) -> Result<Self> {
        let jet = Self { value, grad, hess };
        if !jet.is_finite() {
            return Err(Error::InvalidField("jet has non-finite entries".into()));
        }
        if (hess - hess.transpose()).amax() > 1e-12 {
            return Err(Error::InvalidField("Hessian is not symmetric".into()));
        }
        Ok(jet)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
    }
}

/// Second-order data of every component of a map at a point: the image,
/// the Jacobian (row `k` is the gradient of component `k`) and one Hessian
/// per component.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformJet<const D: usize> {
    pub value: Vector<D>,
    pub jacobian: Matrix<D>,
    pub hessians: [Matrix<D>; D],
}

impl<const D: usize> TransformJet<D> {
    pub fn identity(at: Vector<D>) -> Self {
        Self {
            value: at,
            jacobian: Matrix::<D>::identity(),
            hessians: [Matrix::<D>::zeros(); D],
        }
    }

    /// Jet of `outer ∘ self`, where `outer` is the jet of the second map at
    /// `self.value`.
    fn then(&self, outer: &TransformJet<D>) -> TransformJet<D> {
        let inner_t = self.jacobian.transpose();
        let mut hessians = [Matrix::<D>::zeros(); D];
        for (k, h) in hessians.iter_mut().enumerate() {
            let mut acc = inner_t * outer.hessians[k] * self.jacobian;
            for m in 0..D {
                acc += self.hessians[m] * outer.jacobian[(k, m)];
            }
            *h = acc;
        }
        TransformJet {
            value: outer.value,
            jacobian: outer.jacobian * self.jacobian,
            hessians,
        }
    }
}

/// Second-order jet of `map` at `u`, composed step by step.
pub fn jet_of_transform<const D: usize>(map: &MobiusMap<D>, u: &Vector<D>) -> Result<TransformJet<D>> {
    let mut acc = TransformJet::identity(*u);
    for (i, step) in map.steps().iter().enumerate() {
        let at = acc.value;
        let local = TransformJet {
            value: step.apply_indexed(&at, i)?,
            jacobian: step.jacobian_indexed(&at, i)?,
            hessians: step.component_hessians_indexed(&at, i)?,
        };
        acc = acc.then(&local);
    }
    Ok(acc)
}

/// Jet of `g = f ∘ ψ` at `u`, given the jet of `f` at `ψ(u)` and the jet of
/// `ψ` at `u`. With `ψ = T⁻¹` this is the transformed function `g = f ∘ T⁻¹`.
///
/// `∇g = Jᵀ ∇f` and `∇²g = Jᵀ ∇²f J + Σ_k f_k ∇²ψ_k`.
pub fn pullback<const D: usize>(fjet: &Jet<D>, tjet: &TransformJet<D>) -> Jet<D> {
    let jac = &tjet.jacobian;
    let grad = jac.transpose() * fjet.grad;
    let mut hess = jac.transpose() * fjet.hess * jac;
    for k in 0..D {
        hess += tjet.hessians[k] * fjet.grad[k];
    }
    let hess = (hess + hess.transpose()) * 0.5;
    Jet {
        value: fjet.value,
        grad,
        hess,
    }
}

/// Transports the jet of `f` at `x` to the jet of `g = f ∘ T⁻¹` at `T(x)`.
///
/// Returns the image point together with the transported jet.
pub fn transport<const D: usize>(
    fjet: &Jet<D>,
    map: &MobiusMap<D>,
    x: &Vector<D>,
) -> Result<(Vector<D>, Jet<D>)> {
    let u = map.apply(x)?;
    let tjet = jet_of_transform(&map.inverse(), &u)?;
    Ok((u, pullback(fjet, &tjet)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xform::ElementaryTransform;
    use nalgebra::{matrix, vector};

    #[test]
    fn rotation_has_zero_second_order() {
        let map = MobiusMap::from(ElementaryTransform::rotation_degrees(37.0).unwrap());
        let tj = jet_of_transform(&map, &vector![0.3, -1.2]).unwrap();
        assert!(tj.hessians.iter().all(|h| h.amax() == 0.0));
    }

    #[test]
    fn two_translations_have_zero_second_order() {
        let map = MobiusMap::new(vec![
            ElementaryTransform::translation(vector![1.0, 2.0]).unwrap(),
            ElementaryTransform::translation(vector![-3.0, 0.5]).unwrap(),
        ]);
        let tj = jet_of_transform(&map, &vector![0.3, -1.2]).unwrap();
        assert_eq!(tj.value, vector![-1.7, 1.3]);
        assert_eq!(tj.jacobian, Matrix::<2>::identity());
        assert!(tj.hessians.iter().all(|h| h.amax() == 0.0));
    }

    #[test]
    fn inversion_component_second_derivative() {
        // x(u, v) = u / (u² + v²): x_uu = 2u(u² - 3v²)/(u² + v²)³ = 2 at (1, 0)
        let map = MobiusMap::from(ElementaryTransform::inversion(vector![0.0, 0.0], 1.0).unwrap());
        let tj = jet_of_transform(&map, &vector![1.0, 0.0]).unwrap();
        assert!((tj.hessians[0][(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn identity_pullback_is_noop() {
        let f = Jet {
            value: 1.5,
            grad: vector![0.2, -0.7],
            hess: matrix![1.0, 0.3; 0.3, -2.0],
        };
        let g = pullback(&f, &TransformJet::identity(vector![4.0, 4.0]));
        assert_eq!(f, g);
    }

    #[test]
    fn stretched_paraboloid() {
        // f = x² + y² and T = Stretching(2): g(u, v) = (u² + v²)/4
        let map = MobiusMap::from(ElementaryTransform::stretching(2.0).unwrap());
        let u = vector![2.0, 0.0];
        let x = map.inverse().apply(&u).unwrap();
        let f = Jet {
            value: x.norm_squared(),
            grad: x * 2.0,
            hess: Matrix::<2>::identity() * 2.0,
        };
        let g = pullback(&f, &jet_of_transform(&map.inverse(), &u).unwrap());
        assert_eq!(g.value, 1.0);
        assert_eq!(g.grad, vector![1.0, 0.0]);
        assert_eq!(g.hess, Matrix::<2>::identity() * 0.5);

        let (image, g2) = transport(&f, &map, &x).unwrap();
        assert_eq!(image, u);
        assert_eq!(g, g2);
    }

    #[test]
    fn jet_validation() {
        assert!(Jet::new(0.0, vector![0.0, 0.0], matrix![0.0, 1.0; 0.0, 0.0]).is_err());
        assert!(Jet::new(f64::NAN, vector![0.0, 0.0], Matrix::<2>::zeros()).is_err());
        assert!(Jet::new(1.0, vector![0.0, 0.0], Matrix::<2>::zeros()).is_ok());
    }
}
