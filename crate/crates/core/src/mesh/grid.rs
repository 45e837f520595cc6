use nalgebra::{Point3, Vector2};
use serde::{Deserialize, Serialize};

use super::TriMesh;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Regular `k × k` vertex grid over `[x0, x1] × [y0, y1]`, each cell split
/// along its `(i, j)–(i+1, j+1)` diagonal, heights sampled from `field`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub field: FieldSpec,
    /// Vertices per side.
    #[serde(rename = "grid")]
    pub resolution: usize,
    /// `[x0, x1, y0, y1]`
    pub extent: [f64; 4],
}

impl GridSpec {
    pub fn build(&self) -> Result<TriMesh> {
        let k = self.resolution;
        if k < 2 {
            return Err(Error::Config(format!("grid resolution must be at least 2, got {k}")));
        }
        let [x0, x1, y0, y1] = self.extent;
        if !(x1 > x0 && y1 > y0) {
            return Err(Error::Config(format!("empty grid extent {:?}", self.extent)));
        }
        let field = self.field.build::<2>()?;
        let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (k - 1) as f64;
        let mut vertices = Vec::with_capacity(k * k);
        for j in 0..k {
            for i in 0..k {
                let p = Vector2::new(step(x0, x1, i), step(y0, y1, j));
                vertices.push(Point3::new(p.x, p.y, field.value(&p)));
            }
        }
        let idx = |i: usize, j: usize| j * k + i;
        let mut faces = Vec::with_capacity(2 * (k - 1) * (k - 1));
        for j in 0..k - 1 {
            for i in 0..k - 1 {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                faces.push([a, b, c]);
                faces.push([a, c, d]);
            }
        }
        TriMesh::new(vertices, faces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{mixed_voronoi_area, AreaMode};

    fn spec(k: usize) -> GridSpec {
        GridSpec {
            field: FieldSpec::preset("gaussian").unwrap(),
            resolution: k,
            extent: [-50.0, 50.0, -50.0, 50.0],
        }
    }

    #[test]
    fn grid_topology() {
        let m = spec(5).build().unwrap();
        assert_eq!(m.num_vertices(), 25);
        assert_eq!(m.faces().len(), 32);
        for v in 0..25 {
            let (i, j) = (v % 5, v / 5);
            let ring = m.one_ring(v).unwrap();
            let inner = (1..4).contains(&i) && (1..4).contains(&j);
            assert_eq!(ring.interior, inner, "vertex {v}");
            if inner {
                assert_eq!(ring.neighbors.len(), 6);
            }
        }
    }

    #[test]
    fn interior_areas_partition_the_inner_region() {
        let k = 50;
        let m = spec(k).build().unwrap();
        let h = 100.0 / (k - 1) as f64;
        let total: f64 = (0..m.num_vertices())
            .filter(|&v| m.one_ring(v).unwrap().interior)
            .map(|v| mixed_voronoi_area(&m, v, AreaMode::Planar).unwrap())
            .sum();
        // interior vertices own the square cells centred on them
        let dual = ((k - 2) as f64 * h).powi(2);
        assert!((total - dual).abs() / dual < 1e-12, "{total} vs {dual}");
        // and lie between the fully interior triangles and the whole mesh
        let inner = ((k - 3) as f64 * h).powi(2);
        let whole = ((k - 1) as f64 * h).powi(2);
        assert!(inner < total && total < whole);
        let per_vertex = mixed_voronoi_area(&m, k + 1, AreaMode::Planar).unwrap();
        assert!((per_vertex - h * h).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec(1);
        assert!(s.build().is_err());
        s.resolution = 3;
        s.extent = [1.0, 0.0, 0.0, 1.0];
        assert!(s.build().is_err());
    }
}
