//! Seeded random Möbius maps and regular sample points.

use nalgebra::{Rotation2, Rotation3, Vector3};
use rand::Rng;

use crate::xform::{ElementaryTransform, Matrix, MobiusMap, StepKind, Vector};

/// Generator type, used to restrict random maps to a subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepType {
    Translation,
    Stretching,
    Rotation,
    Reflection,
    Inversion,
}

impl StepType {
    pub const ALL: [StepType; 5] = [
        StepType::Translation,
        StepType::Stretching,
        StepType::Rotation,
        StepType::Reflection,
        StepType::Inversion,
    ];
    pub const RIGID: [StepType; 3] = [StepType::Translation, StepType::Rotation, StepType::Reflection];

    pub fn name(self) -> &'static str {
        match self {
            StepType::Translation => "translation",
            StepType::Stretching => "stretching",
            StepType::Rotation => "rotation",
            StepType::Reflection => "reflection",
            StepType::Inversion => "inversion",
        }
    }
}

/// Half-width of the box points and centers are drawn from.
pub const BOX: f64 = 2.0;

/// Minimum distance to an inversion center, as a fraction of its radius.
pub const MIN_CENTER_DISTANCE: f64 = 0.05;

pub fn random_vector<const D: usize, R: Rng>(rng: &mut R, half_width: f64) -> Vector<D> {
    Vector::<D>::from_fn(|_, _| rng.random_range(-half_width..=half_width))
}

pub fn random_unit<const D: usize, R: Rng>(rng: &mut R) -> Vector<D> {
    loop {
        let v = random_vector::<D, _>(rng, 1.0);
        let n = v.norm();
        if (0.1..=1.0).contains(&n) {
            return v / n;
        }
    }
}

pub fn random_rotation<const D: usize, R: Rng>(rng: &mut R) -> Matrix<D> {
    match D {
        2 => {
            let r = Rotation2::new(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
            Matrix::<D>::from_fn(|i, j| r.matrix()[(i, j)])
        }
        3 => {
            let axis = random_unit::<3, _>(rng);
            let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            let r = Rotation3::from_scaled_axis(Vector3::from(axis) * angle);
            Matrix::<D>::from_fn(|i, j| r.matrix()[(i, j)])
        }
        _ => panic!("rotations are sampled in 2-D and 3-D only"),
    }
}

pub fn random_step<const D: usize, R: Rng>(rng: &mut R, ty: StepType) -> ElementaryTransform<D> {
    let kind = match ty {
        StepType::Translation => StepKind::Translation(random_vector(rng, BOX)),
        StepType::Stretching => StepKind::Stretching(rng.random_range(-1.0f64..1.0).exp()),
        StepType::Rotation => StepKind::Rotation(random_rotation(rng)),
        StepType::Reflection => StepKind::Reflection {
            normal: random_unit(rng),
            distance: rng.random_range(-1.0..1.0),
        },
        StepType::Inversion => StepKind::Inversion {
            center: random_vector(rng, BOX),
            radius: rng.random_range(0.5..2.0),
        },
    };
    ElementaryTransform::new(kind).expect("sampled parameters are valid")
}

/// Map of 1 to `max_steps` generators drawn uniformly from `types`.
pub fn random_map<const D: usize, R: Rng>(rng: &mut R, max_steps: usize, types: &[StepType]) -> MobiusMap<D> {
    let n = rng.random_range(1..=max_steps.max(1));
    (0..n)
        .map(|_| {
            let ty = types[rng.random_range(0..types.len())];
            random_step(rng, ty)
        })
        .collect()
}

/// Whether every point of the trajectory keeps clear of the inversion
/// centers it meets.
pub fn is_regular<const D: usize>(map: &MobiusMap<D>, x: &Vector<D>) -> bool {
    let Ok(path) = map.trajectory(x) else {
        return false;
    };
    map.steps().iter().zip(&path).all(|(s, p)| match s.kind() {
        StepKind::Inversion { center, radius } => (p - center).norm() >= MIN_CENTER_DISTANCE * radius,
        _ => true,
    }) && path.iter().all(|p| p.iter().all(|c| c.is_finite()))
}

/// A point in the sampling box that is regular for `map`.
pub fn regular_point<const D: usize, R: Rng>(rng: &mut R, map: &MobiusMap<D>) -> Option<Vector<D>> {
    (0..100)
        .map(|_| random_vector::<D, _>(rng, BOX))
        .find(|x| is_regular(map, x))
}
