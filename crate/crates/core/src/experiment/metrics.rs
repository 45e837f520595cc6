use rayon::prelude::*;

use super::descriptor::{DescriptorSet, DESCRIPTOR_LEN, DESCRIPTOR_NAMES};
use crate::error::{Error, Result};

/// Row labels of the error table: the Laplacian baseline, then the
/// descriptor components.
pub const ROW_NAMES: [&str; DESCRIPTOR_LEN + 1] = [
    "lap",
    DESCRIPTOR_NAMES[0],
    DESCRIPTOR_NAMES[1],
    DESCRIPTOR_NAMES[2],
    DESCRIPTOR_NAMES[3],
    DESCRIPTOR_NAMES[4],
];

/// Spread below which a descriptor dimension is ignored by the matcher.
pub const MIN_SPREAD: f64 = 1e-12;

/// Mean of `|t - o| / (|t| + |o|)` in percent, skipping pairs whose
/// magnitude sum is below `eps`. Returns the error and the number of pairs
/// used; the error is `None` when no pair qualifies.
pub fn mean_relative_error(pairs: impl IntoIterator<Item = (f64, f64)>, eps: f64) -> (Option<f64>, usize) {
    let mut sum = 0.0;
    let mut n = 0usize;
    for (o, t) in pairs {
        let mag = o.abs() + t.abs();
        if mag < eps {
            continue;
        }
        sum += (t - o).abs() / mag;
        n += 1;
    }
    ((n > 0).then(|| 100.0 * sum / n as f64), n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub name: &'static str,
    /// Average error in percent.
    pub error_percent: Option<f64>,
    pub included: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    /// Laplacian baseline first, then one row per descriptor component.
    pub rows: Vec<RowError>,
    /// Vertex pairs compared.
    pub pairs: usize,
    /// Correspondence entries whose vertices were missing from either set.
    pub dropped: usize,
}

impl ErrorReport {
    pub fn row(&self, name: &str) -> Option<&RowError> {
        self.rows.iter().find(|r| r.name == name)
    }
}

/// Vertices present in both sets, paired with themselves.
pub fn identity_correspondence(orig: &DescriptorSet, deformed: &DescriptorSet) -> Vec<(usize, usize)> {
    orig.records
        .keys()
        .filter(|v| deformed.records.contains_key(v))
        .map(|&v| (v, v))
        .collect()
}

/// Per-row average error between corresponding vertices.
pub fn average_error(
    orig: &DescriptorSet,
    deformed: &DescriptorSet,
    correspondence: &[(usize, usize)],
    eps_den: f64,
) -> Result<ErrorReport> {
    let pairs: Vec<_> = correspondence
        .iter()
        .filter_map(|&(o, t)| Some((orig.get(o)?.row_values(), deformed.get(t)?.row_values())))
        .collect();
    if pairs.is_empty() {
        return Err(Error::EmptyCorrespondence);
    }
    let rows = ROW_NAMES
        .iter()
        .enumerate()
        .map(|(k, &name)| {
            let (error_percent, included) =
                mean_relative_error(pairs.iter().map(|(o, t)| (o[k], t[k])), eps_den);
            RowError {
                name,
                error_percent,
                included,
            }
        })
        .collect();
    Ok(ErrorReport {
        rows,
        pairs: pairs.len(),
        dropped: correspondence.len() - pairs.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub vertex: usize,
    pub predicted: usize,
    /// Another candidate was exactly as close as the prediction.
    pub tied: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    /// `(original vertex, predicted deformed vertex)`, ascending by vertex.
    pub predictions: Vec<(usize, usize)>,
    pub error_rate_percent: f64,
    pub mismatches: Vec<Mismatch>,
    /// Descriptor dimensions ignored because they do not vary.
    pub dropped_dimensions: Vec<usize>,
}

/// Standard deviation (population) of each dimension over `set`.
fn spreads(set: &DescriptorSet) -> [f64; DESCRIPTOR_LEN] {
    let n = set.len() as f64;
    let mut mean = [0.0; DESCRIPTOR_LEN];
    for r in set.records.values() {
        for (m, v) in mean.iter_mut().zip(r.descriptor.0) {
            *m += v / n;
        }
    }
    let mut var = [0.0; DESCRIPTOR_LEN];
    for r in set.records.values() {
        for d in 0..DESCRIPTOR_LEN {
            var[d] += (r.descriptor.0[d] - mean[d]).powi(2) / n;
        }
    }
    var.map(f64::sqrt)
}

struct Candidate {
    vertex: usize,
    z: Vec<f64>,
}

/// Nearest-neighbor matching in standardized descriptor space.
///
/// Every original vertex is assigned the deformed vertex minimizing
/// `Σ_d ((a_d - b_d) / σ_d)²`, with `σ_d` taken over the original set only.
/// Ties go to the lower vertex index. Ground truth is index identity.
pub fn match_vertices(orig: &DescriptorSet, deformed: &DescriptorSet) -> Result<MatchReport> {
    if orig.is_empty() || deformed.is_empty() {
        return Err(Error::EmptyDescriptors);
    }
    let sigma = spreads(orig);
    let kept: Vec<usize> = (0..DESCRIPTOR_LEN).filter(|&d| sigma[d] >= MIN_SPREAD).collect();
    if kept.is_empty() {
        return Err(Error::AllDimensionsDegenerate);
    }
    let dropped_dimensions = (0..DESCRIPTOR_LEN).filter(|d| !kept.contains(d)).collect();
    let standardize = |r: &super::descriptor::VertexRecord| -> Vec<f64> {
        kept.iter().map(|&d| r.descriptor.0[d] / sigma[d]).collect()
    };

    // candidates sorted along the first kept dimension; the search walks
    // outwards from the query's position and stops once that coordinate
    // alone exceeds the best distance
    let mut cands: Vec<Candidate> = deformed
        .records
        .iter()
        .map(|(&vertex, r)| Candidate {
            vertex,
            z: standardize(r),
        })
        .collect();
    cands.sort_by(|a, b| a.z[0].total_cmp(&b.z[0]).then(a.vertex.cmp(&b.vertex)));

    let queries: Vec<(usize, Vec<f64>)> = orig.records.iter().map(|(&v, r)| (v, standardize(r))).collect();
    let results: Vec<(usize, usize, bool)> = queries
        .par_iter()
        .map(|(v, q)| {
            let (best, tied) = nearest(&cands, q);
            (*v, best, tied)
        })
        .collect();

    let mut predictions = Vec::with_capacity(results.len());
    let mut mismatches = Vec::new();
    for (vertex, predicted, tied) in results {
        predictions.push((vertex, predicted));
        if predicted != vertex {
            mismatches.push(Mismatch {
                vertex,
                predicted,
                tied,
            });
        }
    }
    let error_rate_percent = 100.0 * mismatches.len() as f64 / predictions.len() as f64;
    Ok(MatchReport {
        predictions,
        error_rate_percent,
        mismatches,
        dropped_dimensions,
    })
}

struct Best {
    dist: f64,
    vertex: usize,
    tied: bool,
}

impl Best {
    fn consider(&mut self, d: f64, vertex: usize) {
        if d < self.dist {
            *self = Best {
                dist: d,
                vertex,
                tied: false,
            };
        } else if d == self.dist {
            self.tied = true;
            self.vertex = self.vertex.min(vertex);
        }
    }
}

fn nearest(cands: &[Candidate], q: &[f64]) -> (usize, bool) {
    let dist = |c: &Candidate| -> f64 { c.z.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum() };
    let start = cands.partition_point(|c| c.z[0] < q[0]);
    let mut best = Best {
        dist: f64::INFINITY,
        vertex: usize::MAX,
        tied: false,
    };
    let (mut lo, mut hi) = (start, start);
    let (mut lo_open, mut hi_open) = (true, true);
    while lo_open || hi_open {
        if hi_open {
            match cands.get(hi) {
                Some(c) if (c.z[0] - q[0]).powi(2) <= best.dist => {
                    best.consider(dist(c), c.vertex);
                    hi += 1;
                }
                _ => hi_open = false,
            }
        }
        if lo_open {
            match lo.checked_sub(1).map(|i| &cands[i]) {
                Some(c) if (c.z[0] - q[0]).powi(2) <= best.dist => {
                    best.consider(dist(c), c.vertex);
                    lo -= 1;
                }
                _ => lo_open = false,
            }
        }
    }
    (best.vertex, best.tied)
}
