//! Descriptor stability and vertex matching under deformations of a height
//! field's domain.
//!
//! For each deformation the mesh's planar coordinates are mapped, the
//! descriptors are rebuilt from scratch on the deformed mesh, and the two
//! descriptor sets are compared vertex by vertex (vertex indices are the
//! ground-truth correspondence).

mod descriptor;
mod metrics;

pub use descriptor::{
    build_descriptors, descriptor_from_estimate, Descriptor, DescriptorOptions, DescriptorSet, VertexRecord,
    DESCRIPTOR_LEN, DESCRIPTOR_NAMES,
};
pub use metrics::{
    average_error, identity_correspondence, match_vertices, mean_relative_error, ErrorReport, MatchReport,
    Mismatch, RowError, MIN_SPREAD, ROW_NAMES,
};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::invariant::DEFAULT_EPS_DEN;
use crate::mesh::{load_mesh, AreaMode, GridSpec, TriMesh, DEFAULT_MIN_NEIGHBORS};
use crate::xform::{MapSpec, MobiusMap, StepSpec};

/// Where the experiment mesh comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshSource {
    File(PathBuf),
    Synthetic(GridSpec),
}

impl Default for MeshSource {
    fn default() -> Self {
        MeshSource::Synthetic(GridSpec {
            field: FieldSpec::preset("gaussian").expect("preset exists"),
            resolution: 100,
            extent: [-50.0, 50.0, -50.0, 50.0],
        })
    }
}

impl MeshSource {
    pub fn load(&self) -> Result<TriMesh> {
        match self {
            MeshSource::File(p) => load_mesh(p, None),
            MeshSource::Synthetic(g) => g.build(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Deformation {
    pub name: String,
    pub map: MapSpec,
}

impl Deformation {
    pub fn build(&self) -> Result<MobiusMap<2>> {
        self.map.build::<2>()
    }

    /// Reflection about the y axis, stretching by 2, a quarter turn and the
    /// inversion in the circle of radius 500 about `(0, 1000)`.
    pub fn standard_set() -> Vec<Deformation> {
        let one = |name: &str, step: StepSpec| Deformation {
            name: name.into(),
            map: MapSpec {
                dim: 2,
                steps: vec![step],
            },
        };
        vec![
            one(
                "reflection",
                StepSpec::Reflection {
                    normal: vec![1.0, 0.0],
                    distance: 0.0,
                },
            ),
            one("stretching", StepSpec::Stretching { factor: 2.0 }),
            one(
                "rotation",
                StepSpec::Rotation {
                    matrix: None,
                    degrees: Some(90.0),
                },
            ),
            one(
                "inversion",
                StepSpec::Inversion {
                    center: vec![0.0, 1000.0],
                    radius: 500.0,
                },
            ),
        ]
    }
}

fn default_eps() -> f64 {
    DEFAULT_EPS_DEN
}

fn default_min_neighbors() -> usize {
    DEFAULT_MIN_NEIGHBORS
}

/// Experiment configuration; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mesh: MeshSource,
    #[serde(default = "Deformation::standard_set")]
    pub deformations: Vec<Deformation>,
    #[serde(default = "default_eps")]
    pub eps_den: f64,
    #[serde(default = "default_min_neighbors")]
    pub min_neighbors: usize,
    #[serde(default)]
    pub area_mode: AreaMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mesh: MeshSource::default(),
            deformations: Deformation::standard_set(),
            eps_den: DEFAULT_EPS_DEN,
            min_neighbors: DEFAULT_MIN_NEIGHBORS,
            area_mode: AreaMode::Planar,
        }
    }
}

impl ExperimentConfig {
    /// Reads a JSON config. A relative mesh path is resolved against the
    /// config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        if let MeshSource::File(p) = &mut cfg.mesh {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_den >= 0.0) {
            return Err(Error::Config(format!("eps_den must be nonnegative, got {}", self.eps_den)));
        }
        if self.deformations.is_empty() {
            return Err(Error::Config("no deformations listed".into()));
        }
        for d in &self.deformations {
            d.build()?;
        }
        Ok(())
    }

    pub fn descriptor_options(&self) -> DescriptorOptions {
        DescriptorOptions {
            eps_den: self.eps_den,
            min_neighbors: self.min_neighbors,
            area_mode: self.area_mode,
        }
    }
}

/// Results for one deformation.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnReport {
    pub name: String,
    pub errors: ErrorReport,
    pub matching: MatchReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub original: DescriptorSet,
    pub columns: Vec<ColumnReport>,
}

/// Compares descriptors of `mesh` with those of one deformed copy.
pub fn compare_deformation(
    mesh: &TriMesh,
    original: &DescriptorSet,
    map: &MobiusMap<2>,
    opts: &DescriptorOptions,
) -> Result<(ErrorReport, MatchReport)> {
    let deformed_mesh = mesh.deform_domain(map)?;
    let deformed = build_descriptors(&deformed_mesh, opts)?;
    let corr = identity_correspondence(original, &deformed);
    let errors = average_error(original, &deformed, &corr, opts.eps_den)?;
    let common = || corr.iter().map(|&(v, _)| v);
    let matching = match_vertices(&original.restricted_to(common()), &deformed.restricted_to(common()))?;
    Ok((errors, matching))
}

/// Runs every configured deformation against `mesh`.
pub fn run_paper_experiment(mesh: &TriMesh, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let opts = config.descriptor_options();
    let original = build_descriptors(mesh, &opts)?;
    let columns = config
        .deformations
        .iter()
        .map(|d| {
            let (errors, matching) = compare_deformation(mesh, &original, &d.build()?, &opts)?;
            Ok(ColumnReport {
                name: d.name.clone(),
                errors,
                matching,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport { original, columns })
}

/// Full-precision scientific notation (17 significant digits).
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.16e}")
    }
}

/// `vertex,<descriptor names>` followed by one line per vertex.
pub fn descriptors_csv(set: &DescriptorSet) -> String {
    let mut out = String::from("vertex");
    for name in DESCRIPTOR_NAMES {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (v, r) in &set.records {
        let _ = write!(out, "{v}");
        for x in r.descriptor.0 {
            let _ = write!(out, ",{}", format_value(x));
        }
        out.push('\n');
    }
    out
}

impl ExperimentReport {
    /// Average error in percent; rows are expressions, columns deformations.
    pub fn table2_csv(&self) -> String {
        let mut out = String::from("expression");
        for c in &self.columns {
            let _ = write!(out, ",{}", c.name);
        }
        out.push('\n');
        for (k, name) in ROW_NAMES.iter().enumerate() {
            out.push_str(name);
            for c in &self.columns {
                let v = c.errors.rows[k].error_percent.unwrap_or(f64::NAN);
                let _ = write!(out, ",{}", format_value(v));
            }
            out.push('\n');
        }
        out
    }

    /// Matching error rate in percent per deformation.
    pub fn table3_csv(&self) -> String {
        let mut out = String::from("metric");
        for c in &self.columns {
            let _ = write!(out, ",{}", c.name);
        }
        out.push_str("\nerror_rate");
        for c in &self.columns {
            let _ = write!(out, ",{}", format_value(c.matching.error_rate_percent));
        }
        out.push('\n');
        out
    }

    /// Writes `table2.csv`, `table3.csv` and `descriptors.csv` into `dir`.
    pub fn write_csvs(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in [
            ("table2.csv", self.table2_csv()),
            ("table3.csv", self.table3_csv()),
            ("descriptors.csv", descriptors_csv(&self.original)),
        ] {
            let p = dir.join(name);
            std::fs::write(&p, body).map_err(|e| Error::io(&p, e))?;
        }
        Ok(())
    }
}
