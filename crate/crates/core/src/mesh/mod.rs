//! Triangle meshes read as height fields `z = f(x, y)`.

mod area;
mod fit;
mod grid;
mod io;

pub use area::{mixed_voronoi_area, AreaMode};
pub use fit::{estimate_vertex, ls_jet_fit, FitOptions, VertexEstimate, CONDITION_LIMIT, DEFAULT_MIN_NEIGHBORS};
pub use grid::GridSpec;
pub use io::{load_mesh, save_mesh, MeshFormat};

use nalgebra::{Point3, Vector2};

use crate::error::{Error, Result};
use crate::xform::MobiusMap;

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point3<f64>>,
    faces: Vec<[usize; 3]>,
    /// incident faces per vertex
    vertex_faces: Vec<Vec<usize>>,
}

/// Neighbors of a vertex in fan order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneRing {
    pub neighbors: Vec<usize>,
    /// The incident fan closes around the vertex.
    pub interior: bool,
}

impl TriMesh {
    /// Builds a mesh, checking face indices and rejecting repeated indices
    /// within a face.
    pub fn new(vertices: Vec<Point3<f64>>, faces: Vec<[usize; 3]>) -> Result<Self> {
        if let Some(i) = vertices.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidMesh(format!("vertex {i} has non-finite coordinates")));
        }
        let mut vertex_faces = vec![Vec::new(); vertices.len()];
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&bad) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "face {fi} references vertex {bad}, mesh has {} vertices",
                    vertices.len()
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidMesh(format!("face {fi} repeats a vertex")));
            }
            for &v in f {
                vertex_faces[v].push(fi);
            }
        }
        Ok(Self {
            vertices,
            faces,
            vertex_faces,
        })
    }

    pub fn vertices(&self) -> &[Point3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Planar `(x, y)` position of a vertex.
    pub fn planar(&self, v: usize) -> Vector2<f64> {
        let p = &self.vertices[v];
        Vector2::new(p.x, p.y)
    }

    pub fn incident_faces(&self, v: usize) -> Result<&[usize]> {
        self.vertex_faces
            .get(v)
            .map(Vec::as_slice)
            .ok_or(Error::VertexOutOfRange(v))
    }

    /// Neighbors of `v` ordered around the fan.
    ///
    /// The link of `v` (one edge per incident face, joining the two other
    /// corners) must be a single path or a single cycle; a cycle means `v`
    /// is interior. Faces must be consistently oriented around `v`.
    pub fn one_ring(&self, v: usize) -> Result<OneRing> {
        let incident = self.incident_faces(v)?;
        if incident.is_empty() {
            return Ok(OneRing {
                neighbors: Vec::new(),
                interior: false,
            });
        }
        // link edges (a, b) with a → b following the face orientation
        let links: Vec<(usize, usize)> = incident
            .iter()
            .map(|&fi| {
                let f = self.faces[fi];
                let k = f.iter().position(|&x| x == v).expect("incident face contains vertex");
                (f[(k + 1) % 3], f[(k + 2) % 3])
            })
            .collect();

        let mut out_deg: std::collections::HashMap<usize, (usize, usize)> = Default::default();
        for &(a, b) in &links {
            out_deg.entry(a).or_default().0 += 1;
            out_deg.entry(b).or_default().1 += 1;
        }
        for &(outs, ins) in out_deg.values() {
            if outs + ins > 2 {
                return Err(Error::NonManifoldVertex(v));
            }
            if outs > 1 || ins > 1 {
                return Err(Error::NonOrientableFan(v));
            }
        }
        let starts: Vec<usize> = out_deg
            .iter()
            .filter(|(_, &(outs, ins))| outs == 1 && ins == 0)
            .map(|(&n, _)| n)
            .collect();
        let interior = starts.is_empty();
        let start = match starts.as_slice() {
            [] => links.iter().map(|&(a, _)| a).min().expect("nonempty"),
            [s] => *s,
            _ => return Err(Error::NonManifoldVertex(v)),
        };

        let next: std::collections::HashMap<usize, usize> = links.iter().copied().collect();
        let mut neighbors = vec![start];
        let mut cur = start;
        while let Some(&n) = next.get(&cur) {
            if n == start {
                break;
            }
            neighbors.push(n);
            cur = n;
            if neighbors.len() > links.len() + 1 {
                return Err(Error::NonManifoldVertex(v));
            }
        }
        let expected = if interior { links.len() } else { links.len() + 1 };
        if neighbors.len() != expected {
            // several disjoint fans
            return Err(Error::NonManifoldVertex(v));
        }
        Ok(OneRing {
            neighbors,
            interior,
        })
    }

    /// Moves every vertex `(x, y, z)` to `(T(x, y), z)`.
    pub fn deform_domain(&self, map: &MobiusMap<2>) -> Result<TriMesh> {
        let vertices = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let q = map
                    .apply(&Vector2::new(p.x, p.y))
                    .map_err(|e| match e {
                        Error::SingularPoint { step } => Error::SingularVertex { vertex: i, step },
                        other => other,
                    })?;
                Ok(Point3::new(q.x, q.y, p.z))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TriMesh {
            vertices,
            faces: self.faces.clone(),
            vertex_faces: self.vertex_faces.clone(),
        })
    }
}
