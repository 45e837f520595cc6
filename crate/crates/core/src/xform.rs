//! Möbius transformations of n-dimensional space built from the five
//! elementary generators: translation, stretching, rotation, reflection in a
//! hyperplane and inversion in a sphere.
//!
//! Maps are stored as ordered step lists. A map is applied left to right, so
//! `compose(m1, m2)` first applies `m1` and then `m2`. Only finite points are
//! modelled; points that land on an inversion center are rejected instead of
//! being sent to infinity.

use nalgebra::{Complex, SMatrix, SVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vector<const D: usize> = SVector<f64, D>;
pub type Matrix<const D: usize> = SMatrix<f64, D, D>;

/// Tolerance used to validate orthogonality, determinants and unit normals.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Relative radius around an inversion center inside which points are
/// rejected as singular.
pub const SINGULAR_GUARD: f64 = 1e-12;

pub(crate) fn check_dim<const D: usize>() -> Result<()> {
    if D == 2 || D == 3 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: 3,
            found: D,
        })
    }
}

/// Determinant for the two supported dimensions.
pub fn determinant<const D: usize>(m: &Matrix<D>) -> f64 {
    match D {
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
        }
        _ => unreachable!("only 2-D and 3-D maps are supported"),
    }
}

fn orthogonality_defect<const D: usize>(m: &Matrix<D>) -> f64 {
    (m.transpose() * m - Matrix::<D>::identity()).amax()
}

/// The generator behind an [`ElementaryTransform`].
#[derive(Debug, Clone, PartialEq)]
pub enum StepKind<const D: usize> {
    /// `x + offset`
    Translation(Vector<D>),
    /// `s x` with `s > 0`
    Stretching(f64),
    /// `R x` with `R` a proper rotation
    Rotation(Matrix<D>),
    /// `x - 2 (n·x - t) n` with `|n| = 1`
    Reflection { normal: Vector<D>, distance: f64 },
    /// `a + r² (x - a) / |x - a|²`
    Inversion { center: Vector<D>, radius: f64 },
}

/// One validated elementary transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryTransform<const D: usize> {
    kind: StepKind<D>,
}

impl<const D: usize> ElementaryTransform<D> {
    /// Validates `kind` against the generator's invariants.
    pub fn new(kind: StepKind<D>) -> Result<Self> {
        check_dim::<D>()?;
        let invalid = |msg: String| Err(Error::InvalidTransform(msg));
        match &kind {
            StepKind::Translation(a) => {
                if !a.iter().all(|v| v.is_finite()) {
                    return invalid("translation offset must be finite".into());
                }
            }
            StepKind::Stretching(s) => {
                if !(s.is_finite() && *s > 0.0) {
                    return invalid(format!("stretching factor must be positive, got {s}"));
                }
            }
            StepKind::Rotation(r) => {
                if !r.iter().all(|v| v.is_finite()) {
                    return invalid("rotation matrix must be finite".into());
                }
                let defect = orthogonality_defect(r);
                if defect > STRUCTURE_TOL {
                    return invalid(format!("rotation matrix is not orthogonal (defect {defect:e})"));
                }
                let det = determinant(r);
                if (det - 1.0).abs() > STRUCTURE_TOL {
                    return invalid(format!("rotation matrix has determinant {det}, expected +1"));
                }
            }
            StepKind::Reflection { normal, distance } => {
                if !distance.is_finite() || !normal.iter().all(|v| v.is_finite()) {
                    return invalid("reflection parameters must be finite".into());
                }
                if (normal.norm() - 1.0).abs() > STRUCTURE_TOL {
                    return invalid(format!(
                        "reflection normal must have unit length, got {}",
                        normal.norm()
                    ));
                }
            }
            StepKind::Inversion { center, radius } => {
                if !center.iter().all(|v| v.is_finite()) {
                    return invalid("inversion center must be finite".into());
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return invalid(format!("inversion radius must be positive, got {radius}"));
                }
            }
        }
        Ok(Self { kind })
    }

    pub fn translation(offset: Vector<D>) -> Result<Self> {
        Self::new(StepKind::Translation(offset))
    }

    pub fn stretching(factor: f64) -> Result<Self> {
        Self::new(StepKind::Stretching(factor))
    }

    pub fn rotation(matrix: Matrix<D>) -> Result<Self> {
        Self::new(StepKind::Rotation(matrix))
    }

    pub fn reflection(normal: Vector<D>, distance: f64) -> Result<Self> {
        Self::new(StepKind::Reflection { normal, distance })
    }

    pub fn inversion(center: Vector<D>, radius: f64) -> Result<Self> {
        Self::new(StepKind::Inversion { center, radius })
    }

    pub fn kind(&self) -> &StepKind<D> {
        &self.kind
    }

    /// True for the generators that scale lengths: stretching and inversion.
    pub fn is_scaling(&self) -> bool {
        matches!(
            self.kind,
            StepKind::Stretching(_) | StepKind::Inversion { .. }
        )
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            StepKind::Translation(a) => StepKind::Translation(-a),
            StepKind::Stretching(s) => StepKind::Stretching(1.0 / s),
            StepKind::Rotation(r) => StepKind::Rotation(r.transpose()),
            other => other.clone(),
        };
        Self { kind }
    }

    fn inversion_offset(center: &Vector<D>, radius: f64, x: &Vector<D>, step: usize) -> Result<Vector<D>> {
        let y = x - center;
        if y.norm() < SINGULAR_GUARD * radius {
            return Err(Error::SingularPoint { step });
        }
        Ok(y)
    }

    /// Applies the step; `step` is only used to label a [`Error::SingularPoint`].
    pub(crate) fn apply_indexed(&self, x: &Vector<D>, step: usize) -> Result<Vector<D>> {
        Ok(match &self.kind {
            StepKind::Translation(a) => x + a,
            StepKind::Stretching(s) => x * *s,
            StepKind::Rotation(r) => r * x,
            StepKind::Reflection { normal, distance } => {
                x - normal * (2.0 * (normal.dot(x) - distance))
            }
            StepKind::Inversion { center, radius } => {
                let y = Self::inversion_offset(center, *radius, x, step)?;
                center + y * (radius * radius / y.norm_squared())
            }
        })
    }

    pub fn apply(&self, x: &Vector<D>) -> Result<Vector<D>> {
        self.apply_indexed(x, 0)
    }

    pub(crate) fn jacobian_indexed(&self, x: &Vector<D>, step: usize) -> Result<Matrix<D>> {
        let id = Matrix::<D>::identity();
        Ok(match &self.kind {
            StepKind::Translation(_) => id,
            StepKind::Stretching(s) => id * *s,
            StepKind::Rotation(r) => *r,
            StepKind::Reflection { normal, .. } => id - normal * normal.transpose() * 2.0,
            StepKind::Inversion { center, radius } => {
                let y = Self::inversion_offset(center, *radius, x, step)?;
                let rho2 = y.norm_squared();
                (id - y * y.transpose() * (2.0 / rho2)) * (radius * radius / rho2)
            }
        })
    }

    pub fn jacobian(&self, x: &Vector<D>) -> Result<Matrix<D>> {
        self.jacobian_indexed(x, 0)
    }

    /// Hessians of each output component, `result[k][(i, j)] = ∂²φ_k / ∂x_i ∂x_j`.
    ///
    /// Only inversion has nonzero second derivatives. With `y = x - a` and
    /// `ρ = |y|`:
    ///
    /// `∂²φ_k/∂x_i∂x_j = r² (8 y_k y_i y_j / ρ⁶ - 2 (δ_ki y_j + δ_kj y_i + δ_ij y_k) / ρ⁴)`
    pub(crate) fn component_hessians_indexed(
        &self,
        x: &Vector<D>,
        step: usize,
    ) -> Result<[Matrix<D>; D]> {
        let mut out = [Matrix::<D>::zeros(); D];
        if let StepKind::Inversion { center, radius } = &self.kind {
            let y = Self::inversion_offset(center, *radius, x, step)?;
            let rho2 = y.norm_squared();
            let r2 = radius * radius;
            let c4 = 2.0 * r2 / (rho2 * rho2);
            let c6 = 8.0 * r2 / (rho2 * rho2 * rho2);
            for (k, h) in out.iter_mut().enumerate() {
                for i in 0..D {
                    for j in 0..D {
                        let mut v = c6 * y[k] * y[i] * y[j];
                        if k == i {
                            v -= c4 * y[j];
                        }
                        if k == j {
                            v -= c4 * y[i];
                        }
                        if i == j {
                            v -= c4 * y[k];
                        }
                        h[(i, j)] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn component_hessians(&self, x: &Vector<D>) -> Result<[Matrix<D>; D]> {
        self.component_hessians_indexed(x, 0)
    }
}

impl ElementaryTransform<2> {
    /// Counterclockwise rotation by `degrees`. Multiples of 90° are built
    /// from exact integer entries.
    pub fn rotation_degrees(degrees: f64) -> Result<Self> {
        let quarter = degrees / 90.0;
        let (c, s) = if quarter.fract() == 0.0 {
            match (quarter as i64).rem_euclid(4) {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            }
        } else {
            let t = degrees.to_radians();
            (t.cos(), t.sin())
        };
        Self::rotation(Matrix::<2>::new(c, -s, s, c))
    }
}

/// An ordered composition of elementary transformations in dimension `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap<const D: usize> {
    steps: Vec<ElementaryTransform<D>>,
}

impl<const D: usize> Default for MobiusMap<D> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<const D: usize> From<ElementaryTransform<D>> for MobiusMap<D> {
    fn from(step: ElementaryTransform<D>) -> Self {
        Self { steps: vec![step] }
    }
}

impl<const D: usize> FromIterator<ElementaryTransform<D>> for MobiusMap<D> {
    fn from_iter<I: IntoIterator<Item = ElementaryTransform<D>>>(iter: I) -> Self {
        Self {
            steps: iter.into_iter().collect(),
        }
    }
}

impl<const D: usize> MobiusMap<D> {
    pub fn identity() -> Self {
        Self { steps: Vec::new() }
    }

    pub fn new(steps: Vec<ElementaryTransform<D>>) -> Self {
        Self { steps }
    }

    pub fn dim(&self) -> usize {
        D
    }

    pub fn steps(&self) -> &[ElementaryTransform<D>] {
        &self.steps
    }

    /// Appends `step` so that it runs after the existing steps.
    pub fn then(mut self, step: ElementaryTransform<D>) -> Self {
        self.steps.push(step);
        self
    }

    pub fn apply(&self, x: &Vector<D>) -> Result<Vector<D>> {
        self.steps
            .iter()
            .enumerate()
            .try_fold(*x, |p, (i, s)| s.apply_indexed(&p, i))
    }

    pub fn inverse(&self) -> Self {
        Self {
            steps: self.steps.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    /// The map that applies `self` first and `next` second.
    pub fn compose(&self, next: &Self) -> Self {
        Self {
            steps: self.steps.iter().chain(next.steps.iter()).cloned().collect(),
        }
    }

    pub fn jacobian(&self, x: &Vector<D>) -> Result<Matrix<D>> {
        let mut p = *x;
        let mut jac = Matrix::<D>::identity();
        for (i, s) in self.steps.iter().enumerate() {
            jac = s.jacobian_indexed(&p, i)? * jac;
            p = s.apply_indexed(&p, i)?;
        }
        Ok(jac)
    }

    /// Points visited by `x` before each step, followed by the final image.
    pub fn trajectory(&self, x: &Vector<D>) -> Result<Vec<Vector<D>>> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(*x);
        let mut p = *x;
        for (i, s) in self.steps.iter().enumerate() {
            p = s.apply_indexed(&p, i)?;
            out.push(p);
        }
        Ok(out)
    }
}

/// `z ↦ (a z + b) / (c z + d)` on the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMobius {
    a: Complex<f64>,
    b: Complex<f64>,
    c: Complex<f64>,
    d: Complex<f64>,
}

impl ComplexMobius {
    pub fn new(a: Complex<f64>, b: Complex<f64>, c: Complex<f64>, d: Complex<f64>) -> Result<Self> {
        let ad = (a * d).norm();
        let bc = (b * c).norm();
        if (a * d - b * c).norm() < 1e-12 * ad.max(bc).max(1.0) {
            return Err(Error::DegenerateCoefficients);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn eval(&self, z: Complex<f64>) -> Result<Complex<f64>> {
        let den = self.c * z + self.d;
        if den.norm() < 1e-12 {
            return Err(Error::PoleAtInput);
        }
        Ok((self.a * z + self.b) / den)
    }
}

/// Exponent of `|x - a|` in the closed general form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralExponent {
    /// No inversion: a similarity.
    Zero,
    /// Contains an inversion.
    Two,
}

impl TryFrom<u32> for GeneralExponent {
    type Error = Error;

    fn try_from(eps: u32) -> Result<Self> {
        match eps {
            0 => Ok(Self::Zero),
            2 => Ok(Self::Two),
            other => Err(Error::InvalidTransform(format!(
                "general-form exponent must be 0 or 2, got {other}"
            ))),
        }
    }
}

/// Evaluates `b + γ A (x - a) / |x - a|^ε`. `A` must be orthogonal (either
/// orientation).
pub fn eval_general_form<const D: usize>(
    b: &Vector<D>,
    gamma: f64,
    a_mat: &Matrix<D>,
    a: &Vector<D>,
    eps: GeneralExponent,
    x: &Vector<D>,
) -> Result<Vector<D>> {
    check_dim::<D>()?;
    let defect = orthogonality_defect(a_mat);
    if defect > STRUCTURE_TOL {
        return Err(Error::InvalidTransform(format!(
            "general-form matrix is not orthogonal (defect {defect:e})"
        )));
    }
    let y = x - a;
    let scale = match eps {
        GeneralExponent::Zero => 1.0,
        GeneralExponent::Two => {
            let rho2 = y.norm_squared();
            if rho2.sqrt() < SINGULAR_GUARD {
                return Err(Error::SingularPoint { step: 0 });
            }
            1.0 / rho2
        }
    };
    Ok(b + a_mat * y * (gamma * scale))
}

// ---------------------------------------------------------------------------
// JSON representation

/// Serialized form of one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StepSpec {
    Translation {
        offset: Vec<f64>,
    },
    Stretching {
        factor: f64,
    },
    Rotation {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
        /// Counterclockwise angle, 2-D only.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<f64>,
    },
    Reflection {
        normal: Vec<f64>,
        #[serde(default)]
        distance: f64,
    },
    Inversion {
        center: Vec<f64>,
        radius: f64,
    },
}

/// Serialized form of a map: `{"dim": 2, "steps": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub dim: usize,
    pub steps: Vec<StepSpec>,
}

fn vector_from<const D: usize>(v: &[f64], what: &str) -> Result<Vector<D>> {
    if v.len() != D {
        return Err(Error::InvalidTransform(format!(
            "{what} has {} components, map dimension is {D}",
            v.len()
        )));
    }
    Ok(Vector::<D>::from_column_slice(v))
}

fn matrix_from<const D: usize>(rows: &[Vec<f64>]) -> Result<Matrix<D>> {
    if rows.len() != D || rows.iter().any(|r| r.len() != D) {
        return Err(Error::InvalidTransform(format!(
            "rotation matrix must be {D}x{D}"
        )));
    }
    Ok(Matrix::<D>::from_fn(|i, j| rows[i][j]))
}

impl StepSpec {
    fn build<const D: usize>(&self) -> Result<ElementaryTransform<D>> {
        match self {
            StepSpec::Translation { offset } => {
                ElementaryTransform::translation(vector_from(offset, "translation offset")?)
            }
            StepSpec::Stretching { factor } => ElementaryTransform::stretching(*factor),
            StepSpec::Rotation { matrix, degrees } => match (matrix, degrees) {
                (Some(m), None) => ElementaryTransform::rotation(matrix_from(m)?),
                (None, Some(deg)) if D == 2 => {
                    let r = ElementaryTransform::<2>::rotation_degrees(*deg)?;
                    let StepKind::Rotation(m) = r.kind() else {
                        unreachable!()
                    };
                    ElementaryTransform::rotation(Matrix::<D>::from_fn(|i, j| m[(i, j)]))
                }
                (None, Some(_)) => Err(Error::InvalidTransform(
                    "rotation by angle is only available in 2-D; give a matrix".into(),
                )),
                _ => Err(Error::InvalidTransform(
                    "rotation needs exactly one of `matrix` or `degrees`".into(),
                )),
            },
            StepSpec::Reflection { normal, distance } => {
                ElementaryTransform::reflection(vector_from(normal, "reflection normal")?, *distance)
            }
            StepSpec::Inversion { center, radius } => {
                ElementaryTransform::inversion(vector_from(center, "inversion center")?, *radius)
            }
        }
    }

    fn from_step<const D: usize>(step: &ElementaryTransform<D>) -> Self {
        match step.kind() {
            StepKind::Translation(a) => StepSpec::Translation {
                offset: a.iter().copied().collect(),
            },
            StepKind::Stretching(s) => StepSpec::Stretching { factor: *s },
            StepKind::Rotation(r) => StepSpec::Rotation {
                matrix: Some((0..D).map(|i| (0..D).map(|j| r[(i, j)]).collect()).collect()),
                degrees: None,
            },
            StepKind::Reflection { normal, distance } => StepSpec::Reflection {
                normal: normal.iter().copied().collect(),
                distance: *distance,
            },
            StepKind::Inversion { center, radius } => StepSpec::Inversion {
                center: center.iter().copied().collect(),
                radius: *radius,
            },
        }
    }
}

impl MapSpec {
    pub fn build<const D: usize>(&self) -> Result<MobiusMap<D>> {
        if self.dim != D {
            return Err(Error::DimensionMismatch {
                expected: D,
                found: self.dim,
            });
        }
        self.steps.iter().map(|s| s.build::<D>()).collect::<Result<Vec<_>>>().map(MobiusMap::new)
    }
}

impl<const D: usize> From<&MobiusMap<D>> for MapSpec {
    fn from(map: &MobiusMap<D>) -> Self {
        MapSpec {
            dim: D,
            steps: map.steps().iter().map(StepSpec::from_step).collect(),
        }
    }
}

/// A map whose dimension is only known at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMobiusMap {
    D2(MobiusMap<2>),
    D3(MobiusMap<3>),
}

impl AnyMobiusMap {
    pub fn from_spec(spec: &MapSpec) -> Result<Self> {
        match spec.dim {
            2 => spec.build::<2>().map(Self::D2),
            3 => spec.build::<3>().map(Self::D3),
            found => Err(Error::DimensionMismatch { expected: 2, found }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::D2(_) => 2,
            Self::D3(_) => 3,
        }
    }

    pub fn into_2d(self) -> Result<MobiusMap<2>> {
        match self {
            Self::D2(m) => Ok(m),
            Self::D3(_) => Err(Error::DimensionMismatch {
                expected: 2,
                found: 3,
            }),
        }
    }

    pub fn to_spec(&self) -> MapSpec {
        match self {
            Self::D2(m) => m.into(),
            Self::D3(m) => m.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{vector, Matrix2};

    fn v2(x: f64, y: f64) -> Vector<2> {
        vector![x, y]
    }

    #[test]
    fn inversion_examples() {
        let inv = ElementaryTransform::inversion(v2(0.0, 0.0), 1.0).unwrap();
        assert_eq!(inv.apply(&v2(2.0, 0.0)).unwrap(), v2(0.5, 0.0));
        assert_eq!(inv.apply(&v2(1.0, 0.0)).unwrap(), v2(1.0, 0.0));
        assert!(matches!(
            inv.apply(&v2(0.0, 0.0)),
            Err(Error::SingularPoint { step: 0 })
        ));
    }

    #[test]
    fn reflection_about_y_axis() {
        let r = ElementaryTransform::reflection(v2(1.0, 0.0), 0.0).unwrap();
        assert_eq!(r.apply(&v2(3.0, 4.0)).unwrap(), v2(-3.0, 4.0));
        assert!((determinant(&r.jacobian(&v2(1.0, 2.0)).unwrap()) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(ElementaryTransform::<2>::stretching(0.0).is_err());
        assert!(ElementaryTransform::<2>::stretching(-1.0).is_err());
        assert!(ElementaryTransform::inversion(v2(0.0, 0.0), 0.0).is_err());
        assert!(ElementaryTransform::reflection(v2(1.0, 1.0), 0.0).is_err());
        // shear
        assert!(ElementaryTransform::rotation(Matrix2::new(1.0, 0.5, 0.0, 1.0)).is_err());
        // improper
        assert!(ElementaryTransform::rotation(Matrix2::new(-1.0, 0.0, 0.0, 1.0)).is_err());
        assert!(ElementaryTransform::<4>::stretching(2.0).is_err());
    }

    #[test]
    fn inverse_examples() {
        let t = ElementaryTransform::translation(v2(1.5, -2.0)).unwrap();
        assert_eq!(
            t.inverse().kind(),
            &StepKind::Translation(v2(-1.5, 2.0))
        );

        let inv = ElementaryTransform::inversion(v2(0.0, 0.0), 2.0).unwrap();
        assert_eq!(inv.inverse(), inv);
        let m = MobiusMap::from(inv.clone()).then(inv);
        let p = m.apply(&v2(5.0, 5.0)).unwrap();
        assert!((p - v2(5.0, 5.0)).norm() < 1e-12);

        let m = MobiusMap::new(vec![
            ElementaryTransform::stretching(2.0).unwrap(),
            ElementaryTransform::translation(v2(1.0, 0.0)).unwrap(),
        ]);
        let x = v2(3.0, 7.0);
        let back = m.inverse().apply(&m.apply(&x).unwrap()).unwrap();
        assert!((back - x).norm() < 1e-12);
    }

    #[test]
    fn compose_examples() {
        let rot = MobiusMap::from(ElementaryTransform::rotation_degrees(90.0).unwrap());
        let twice = rot.compose(&rot);
        assert_eq!(twice.apply(&v2(1.0, 0.0)).unwrap(), v2(-1.0, 0.0));

        let inv = MobiusMap::from(ElementaryTransform::inversion(v2(0.0, 0.0), 1.0).unwrap());
        let p = inv.compose(&inv).apply(&v2(0.3, 0.4)).unwrap();
        assert!((p - v2(0.3, 0.4)).norm() < 1e-15);

        let id = MobiusMap::<2>::identity();
        let m = MobiusMap::from(ElementaryTransform::stretching(3.0).unwrap());
        assert_eq!(id.compose(&m).apply(&v2(1.0, 2.0)).unwrap(), v2(3.0, 6.0));
    }

    #[test]
    fn order_of_composition() {
        let s = MobiusMap::from(ElementaryTransform::stretching(2.0).unwrap());
        let t = MobiusMap::from(ElementaryTransform::translation(v2(1.0, 0.0)).unwrap());
        // stretch, then translate
        assert_eq!(s.compose(&t).apply(&v2(1.0, 1.0)).unwrap(), v2(3.0, 2.0));
        // translate, then stretch
        assert_eq!(t.compose(&s).apply(&v2(1.0, 1.0)).unwrap(), v2(4.0, 2.0));
    }

    #[test]
    fn stretching_jacobian_determinant() {
        let s = ElementaryTransform::<2>::stretching(2.0).unwrap();
        assert_eq!(determinant(&s.jacobian(&v2(-4.0, 9.0)).unwrap()), 4.0);
    }

    #[test]
    fn singular_step_is_labelled() {
        let m = MobiusMap::new(vec![
            ElementaryTransform::translation(v2(1.0, 0.0)).unwrap(),
            ElementaryTransform::inversion(v2(1.0, 0.0), 1.0).unwrap(),
        ]);
        assert!(matches!(
            m.apply(&v2(0.0, 0.0)),
            Err(Error::SingularPoint { step: 1 })
        ));
        assert!(matches!(
            m.jacobian(&v2(0.0, 0.0)),
            Err(Error::SingularPoint { step: 1 })
        ));
    }

    #[test]
    fn complex_examples() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let id = ComplexMobius::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(id.eval(c(3.0, 4.0)).unwrap(), c(3.0, 4.0));
        let recip = ComplexMobius::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(recip.eval(c(2.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert!(matches!(recip.eval(c(0.0, 0.0)), Err(Error::PoleAtInput)));
        let shift = ComplexMobius::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(shift.eval(c(0.0, 1.0)).unwrap(), c(1.0, 1.0));
        assert!(ComplexMobius::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).is_err());
    }

    #[test]
    fn general_form_examples() {
        use nalgebra::{Matrix3, Vector3};
        let id = Matrix3::identity();
        let zero = Vector3::zeros();
        let x = Vector3::new(1.0, 2.0, 3.0);
        assert_eq!(
            eval_general_form(&zero, 1.0, &id, &zero, GeneralExponent::Zero, &x).unwrap(),
            x
        );
        assert_eq!(
            eval_general_form(
                &Vector3::new(1.0, 0.0, 0.0),
                2.0,
                &id,
                &zero,
                GeneralExponent::Zero,
                &Vector3::new(1.0, 1.0, 1.0)
            )
            .unwrap(),
            Vector3::new(3.0, 2.0, 2.0)
        );
        assert!(GeneralExponent::try_from(1).is_err());
        assert!(eval_general_form(&zero, 1.0, &id, &zero, GeneralExponent::Two, &zero).is_err());
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"dim": 2, "steps": [
            {"type": "reflection", "normal": [1, 0], "distance": 0},
            {"type": "stretching", "factor": 2},
            {"type": "rotation", "degrees": 90},
            {"type": "inversion", "center": [0, 1000], "radius": 500},
            {"type": "translation", "offset": [1, 2]}
        ]}"#;
        let map = AnyMobiusMap::from_json(json).unwrap();
        assert_eq!(map.dim(), 2);
        let spec = map.to_spec();
        let again = AnyMobiusMap::from_spec(&serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap()).unwrap();
        assert_eq!(map, again);

        assert!(AnyMobiusMap::from_json(r#"{"dim": 2, "steps": [{"type": "translation", "offset": [1, 2, 3]}]}"#).is_err());
        assert!(AnyMobiusMap::from_json(r#"{"dim": 4, "steps": []}"#).is_err());
        assert!(AnyMobiusMap::from_json(r#"{"dim": 3, "steps": [{"type": "rotation", "degrees": 30}]}"#).is_err());
        assert!(AnyMobiusMap::from_json(r#"{"dim": 2, "steps": [{"type": "shear"}]}"#).is_err());
    }
}
