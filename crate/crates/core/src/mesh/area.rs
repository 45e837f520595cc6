use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::TriMesh;
use crate::error::{Error, Result};

/// Geometry used for triangle areas and angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaMode {
    /// The `(x, y)` parameter domain of the height field.
    #[default]
    Planar,
    /// The embedded surface in 3-D.
    Embedded,
}

fn position(mesh: &TriMesh, v: usize, mode: AreaMode) -> Vector3<f64> {
    let p = mesh.vertices()[v];
    match mode {
        AreaMode::Planar => Vector3::new(p.x, p.y, 0.0),
        AreaMode::Embedded => p.coords,
    }
}

/// Mixed Voronoi area of an interior vertex.
///
/// For each incident triangle: the Voronoi sector `(|PR|² cot Q + |PQ|² cot R) / 8`
/// when the triangle is not obtuse, half its area when the angle at the
/// vertex is obtuse, and a quarter of its area when another angle is obtuse.
pub fn mixed_voronoi_area(mesh: &TriMesh, v: usize, mode: AreaMode) -> Result<f64> {
    if !mesh.one_ring(v)?.interior {
        return Err(Error::BoundaryVertex(v));
    }
    let mut total = 0.0;
    for &fi in mesh.incident_faces(v)? {
        let f = mesh.faces()[fi];
        let k = f.iter().position(|&x| x == v).expect("incident face contains vertex");
        let p = position(mesh, v, mode);
        let q = position(mesh, f[(k + 1) % 3], mode);
        let r = position(mesh, f[(k + 2) % 3], mode);

        let (pq, pr, qr) = (q - p, r - p, r - q);
        let double_area = pq.cross(&pr).norm();
        if !(double_area > 0.0) {
            return Err(Error::DegenerateTriangle(fi));
        }
        let area = 0.5 * double_area;
        let dot_p = pq.dot(&pr);
        let dot_q = (-pq).dot(&qr);
        let dot_r = pr.dot(&qr);
        total += if dot_p < 0.0 {
            area / 2.0
        } else if dot_q < 0.0 || dot_r < 0.0 {
            area / 4.0
        } else {
            let cot_q = dot_q / double_area;
            let cot_r = dot_r / double_area;
            (pr.norm_squared() * cot_q + pq.norm_squared() * cot_r) / 8.0
        };
    }
    Ok(total)
}
