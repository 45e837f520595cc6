use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::invariant::{diff_inv_2d, integrand_2d, laplacian, Family, DEFAULT_EPS_DEN};
use crate::mesh::{estimate_vertex, AreaMode, FitOptions, TriMesh, VertexEstimate, DEFAULT_MIN_NEIGHBORS};

pub const DESCRIPTOR_LEN: usize = 5;

/// Column names of the descriptor, in order.
pub const DESCRIPTOR_NAMES: [&str; DESCRIPTOR_LEN] = [
    "inv",
    "int_lap",
    "int_grad",
    "int_lap2_over_grad",
    "int_grad2_over_lap",
];

/// `[Δf/|∇f|², A₀·area, B₀·area, A₁·area, B₁·area]` where `A_n`, `B_n` are
/// the 2-D integrand families and `area` the vertex's mixed Voronoi area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Descriptor(pub [f64; DESCRIPTOR_LEN]);

/// Descriptor plus the Laplacian, kept as a non-invariant baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexRecord {
    pub descriptor: Descriptor,
    pub laplacian: f64,
}

impl VertexRecord {
    /// Baseline followed by the descriptor, matching the table rows.
    pub fn row_values(&self) -> [f64; DESCRIPTOR_LEN + 1] {
        let d = self.descriptor.0;
        [self.laplacian, d[0], d[1], d[2], d[3], d[4]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorOptions {
    pub eps_den: f64,
    pub min_neighbors: usize,
    pub area_mode: AreaMode,
}

impl Default for DescriptorOptions {
    fn default() -> Self {
        Self {
            eps_den: DEFAULT_EPS_DEN,
            min_neighbors: DEFAULT_MIN_NEIGHBORS,
            area_mode: AreaMode::Planar,
        }
    }
}

/// Descriptors of every usable vertex of a mesh.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DescriptorSet {
    pub records: BTreeMap<usize, VertexRecord>,
    /// Vertices that were boundary, badly fitted or degenerate.
    pub excluded: usize,
}

impl DescriptorSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<&VertexRecord> {
        self.records.get(&v)
    }

    /// Only the vertices listed in `keep`.
    pub fn restricted_to(&self, keep: impl IntoIterator<Item = usize>) -> DescriptorSet {
        let records: BTreeMap<_, _> = keep
            .into_iter()
            .filter_map(|v| self.records.get(&v).map(|r| (v, *r)))
            .collect();
        DescriptorSet {
            excluded: self.excluded + self.records.len() - records.len(),
            records,
        }
    }
}

/// Descriptor of one vertex estimate, or `None` if any component is
/// degenerate.
pub fn descriptor_from_estimate(est: &VertexEstimate, eps_den: f64) -> Option<VertexRecord> {
    if !est.usable() {
        return None;
    }
    let j = &est.jet;
    let local = |n, fam| integrand_2d(j, n, fam, eps_den).get().map(|v| v * est.area);
    let descriptor = Descriptor([
        diff_inv_2d(j, eps_den).get()?,
        local(0, Family::A)?,
        local(0, Family::B)?,
        local(1, Family::A)?,
        local(1, Family::B)?,
    ]);
    let laplacian = laplacian(j);
    (descriptor.0.iter().all(|v| v.is_finite()) && laplacian.is_finite()).then_some(VertexRecord {
        descriptor,
        laplacian,
    })
}

/// Fits every vertex and keeps those whose descriptor is fully defined.
pub fn build_descriptors(mesh: &TriMesh, opts: &DescriptorOptions) -> Result<DescriptorSet> {
    let fit = FitOptions {
        min_neighbors: opts.min_neighbors,
        area_mode: opts.area_mode,
    };
    let records: Vec<Option<VertexRecord>> = (0..mesh.num_vertices())
        .into_par_iter()
        .map(|v| {
            let est = estimate_vertex(mesh, v, &fit)?;
            Ok(descriptor_from_estimate(&est, opts.eps_den))
        })
        .collect::<Result<_>>()?;
    let mut set = DescriptorSet::default();
    for (v, r) in records.into_iter().enumerate() {
        match r {
            Some(r) => {
                set.records.insert(v, r);
            }
            None => set.excluded += 1,
        }
    }
    Ok(set)
}
