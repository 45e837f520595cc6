use nalgebra::{Matrix2, SMatrix, SVector, Vector2};

use super::{mixed_voronoi_area, AreaMode, TriMesh};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// The quadratic model has five unknowns.
pub const DEFAULT_MIN_NEIGHBORS: usize = 5;

/// Largest accepted condition number of the normal matrix.
pub const CONDITION_LIMIT: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub min_neighbors: usize,
    pub area_mode: AreaMode,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            min_neighbors: DEFAULT_MIN_NEIGHBORS,
            area_mode: AreaMode::Planar,
        }
    }
}

/// Per-vertex jet estimate of the height field together with its area weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexEstimate {
    pub vertex: usize,
    /// Estimated derivatives at the vertex; `value` is the vertex height.
    pub jet: Jet<2>,
    /// Mixed Voronoi area.
    pub area: f64,
    pub interior: bool,
    /// The least-squares system was well conditioned.
    pub valid: bool,
}

impl VertexEstimate {
    fn unusable(vertex: usize, value: f64, interior: bool) -> Self {
        Self {
            vertex,
            jet: Jet {
                value,
                grad: Vector2::zeros(),
                hess: Matrix2::zeros(),
            },
            area: 0.0,
            interior,
            valid: false,
        }
    }

    /// Interior, well fitted and with positive area.
    pub fn usable(&self) -> bool {
        self.interior && self.valid && self.area > 0.0
    }
}

/// Fits `z_i - z_v ≈ f_x dx + f_y dy + ½ f_xx dx² + f_xy dx dy + ½ f_yy dy²`
/// over the 1-ring of `v` and computes the vertex's mixed Voronoi area.
///
/// Offsets are divided by their mean length before the normal equations are
/// formed, and the solution is scaled back afterwards.
pub fn ls_jet_fit(mesh: &TriMesh, v: usize, opts: &FitOptions) -> Result<VertexEstimate> {
    let ring = mesh.one_ring(v)?;
    if !ring.interior {
        return Err(Error::BoundaryVertex(v));
    }
    if ring.neighbors.len() < opts.min_neighbors {
        return Err(Error::TooFewNeighbors {
            vertex: v,
            found: ring.neighbors.len(),
            required: opts.min_neighbors,
        });
    }
    let center = mesh.planar(v);
    let z_v = mesh.vertices()[v].z;
    let offsets: Vec<Vector2<f64>> = ring.neighbors.iter().map(|&n| mesh.planar(n) - center).collect();
    let scale = offsets.iter().map(|d| d.norm()).sum::<f64>() / offsets.len() as f64;
    if !(scale > 0.0) {
        return Ok(VertexEstimate::unusable(v, z_v, true));
    }

    let mut normal = SMatrix::<f64, 5, 5>::zeros();
    let mut rhs = SVector::<f64, 5>::zeros();
    for (d, &n) in offsets.iter().zip(&ring.neighbors) {
        let (x, y) = (d.x / scale, d.y / scale);
        let row = SVector::<f64, 5>::new(x, y, 0.5 * x * x, x * y, 0.5 * y * y);
        normal += row * row.transpose();
        rhs += row * (mesh.vertices()[n].z - z_v);
    }

    let eig = normal.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if !(lo > 0.0) || hi / lo > CONDITION_LIMIT {
        return Ok(VertexEstimate::unusable(v, z_v, true));
    }
    let Some(chol) = normal.cholesky() else {
        return Ok(VertexEstimate::unusable(v, z_v, true));
    };
    let c = chol.solve(&rhs);
    let s2 = scale * scale;
    let jet = Jet {
        value: z_v,
        grad: Vector2::new(c[0] / scale, c[1] / scale),
        hess: Matrix2::new(c[2] / s2, c[3] / s2, c[3] / s2, c[4] / s2),
    };
    let area = mixed_voronoi_area(mesh, v, opts.area_mode)?;
    Ok(VertexEstimate {
        vertex: v,
        jet,
        area,
        interior: true,
        valid: jet.is_finite() && area > 0.0,
    })
}

/// Like [`ls_jet_fit`], but boundary vertices, short rings and degenerate
/// triangles yield an unusable estimate instead of an error. Topological
/// defects are still reported.
pub fn estimate_vertex(mesh: &TriMesh, v: usize, opts: &FitOptions) -> Result<VertexEstimate> {
    match ls_jet_fit(mesh, v, opts) {
        Ok(e) => Ok(e),
        Err(Error::BoundaryVertex(_)) => Ok(VertexEstimate::unusable(v, mesh.vertices()[v].z, false)),
        Err(Error::TooFewNeighbors { .. }) | Err(Error::DegenerateTriangle(_)) => {
            Ok(VertexEstimate::unusable(v, mesh.vertices()[v].z, true))
        }
        Err(e) => Err(e),
    }
}
