//! Differential and integral invariants of scalar fields under Möbius
//! transformations, with the discrete height-field pipeline used to measure
//! them on triangle meshes.

pub mod error;
pub mod experiment;
pub mod field;
pub mod invariant;
pub mod jet;
pub mod mesh;
pub mod quadrature;
pub mod verify;
pub mod xform;

pub use error::{Error, Result};
pub use field::{AnalyticField, FieldSpec};
pub use invariant::{Family, InvariantValue, WeightKind, DEFAULT_EPS_DEN};
pub use jet::{jet_of_transform, pullback, transport, Jet, TransformJet};
pub use mesh::{TriMesh, VertexEstimate};
pub use xform::{AnyMobiusMap, ComplexMobius, ElementaryTransform, MapSpec, MobiusMap, StepKind};
