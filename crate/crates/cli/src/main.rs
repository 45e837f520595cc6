use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mobinv_core::experiment::{build_descriptors, descriptors_csv, run_paper_experiment, DescriptorOptions, ExperimentConfig};
use mobinv_core::mesh::{load_mesh, save_mesh, AreaMode, GridSpec, DEFAULT_MIN_NEIGHBORS};
use mobinv_core::verify::{run_verification, VerifyOptions, DEFAULT_SEED, DEFAULT_TRIALS};
use mobinv_core::{AnyMobiusMap, FieldSpec, DEFAULT_EPS_DEN};

#[derive(Debug, Parser)]
#[command(name = "mobinv", version, about = "Mobius-invariant descriptors of height fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a Mobius map to the (x, y) domain of a mesh.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        /// Map as JSON: {"dim": 2, "steps": [...]}
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample a height field on a regular grid.
    GenMesh {
        /// Preset name, inline JSON, or a JSON file.
        #[arg(long)]
        field: String,
        /// Vertices per side.
        #[arg(long)]
        grid: usize,
        #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true)]
        extent: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-vertex descriptors of a mesh as CSV.
    Descriptors {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPS_DEN)]
        eps_den: f64,
        #[arg(long, default_value_t = DEFAULT_MIN_NEIGHBORS)]
        min_neighbors: usize,
        #[arg(long, value_enum, default_value_t = AreaArg::Planar)]
        area_mode: AreaArg,
    },
    /// Randomized checks of the analytic invariance properties.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Expect this power of |det J| instead of the correct one.
        #[arg(long, hide = true, allow_negative_numbers = true)]
        corrupt_weight_exponent: Option<f64>,
    },
    /// Deform a mesh, compare descriptors and match vertices; writes
    /// table2.csv, table3.csv and descriptors.csv.
    Experiment {
        /// JSON config; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        outdir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AreaArg {
    Planar,
    Embedded,
}

impl From<AreaArg> for AreaMode {
    fn from(a: AreaArg) -> Self {
        match a {
            AreaArg::Planar => AreaMode::Planar,
            AreaArg::Embedded => AreaMode::Embedded,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_field(arg: &str) -> Result<FieldSpec> {
    if let Some(spec) = FieldSpec::preset(arg) {
        return Ok(spec);
    }
    if arg.trim_start().starts_with('{') {
        return serde_json::from_str(arg).context("invalid inline field JSON");
    }
    let path = Path::new(arg);
    if !path.exists() {
        bail!(
            "field `{arg}` is neither a preset ({}), inline JSON, nor an existing file",
            FieldSpec::PRESETS.join(", ")
        );
    }
    serde_json::from_str(&read(path)?).with_context(|| format!("invalid field JSON in {}", path.display()))
}

fn transform(input: &Path, map: &Path, out: &Path) -> Result<()> {
    let mesh = load_mesh(input, None)?;
    let map = AnyMobiusMap::from_json(&read(map)?)
        .and_then(AnyMobiusMap::into_2d)
        .with_context(|| format!("invalid map in {}", map.display()))?;
    let deformed = mesh.deform_domain(&map)?;
    save_mesh(&deformed, out, None)?;
    Ok(())
}

fn gen_mesh(field: &str, grid: usize, extent: &[f64], out: &Path) -> Result<()> {
    let spec = GridSpec {
        field: parse_field(field)?,
        resolution: grid,
        extent: extent.try_into().context("extent needs four values")?,
    };
    save_mesh(&spec.build()?, out, None)?;
    Ok(())
}

fn descriptors(input: &Path, out: &Path, opts: DescriptorOptions) -> Result<()> {
    let mesh = load_mesh(input, None)?;
    let set = build_descriptors(&mesh, &opts)?;
    std::fs::write(out, descriptors_csv(&set)).with_context(|| format!("cannot write {}", out.display()))?;
    eprintln!("{} vertices described, {} excluded", set.len(), set.excluded);
    Ok(())
}

fn verify(opts: VerifyOptions) -> Result<()> {
    let report = run_verification(&opts)?;
    print!("{report}");
    if !report.checks.is_empty() {
        println!(
            "{} checks, max deviation {:.3e}",
            report.checks.len(),
            report.max_deviation()
        );
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        bail!("{} check(s) failed: {}", failed.len(), failed.join(", "));
    }
    Ok(())
}

fn experiment(config: Option<&Path>, outdir: &Path) -> Result<()> {
    let config = match config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let mesh = config.mesh.load()?;
    let report = run_paper_experiment(&mesh, &config)?;
    report.write_csvs(outdir)?;
    println!("{} vertices compared", report.original.len());
    for c in &report.columns {
        println!(
            "{:<12} matching error {:.4}%  ({} pairs)",
            c.name, c.matching.error_rate_percent, c.errors.pairs
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Transform { input, map, out } => transform(&input, &map, &out),
        Command::GenMesh {
            field,
            grid,
            extent,
            out,
        } => gen_mesh(&field, grid, &extent, &out),
        Command::Descriptors {
            input,
            out,
            eps_den,
            min_neighbors,
            area_mode,
        } => descriptors(
            &input,
            &out,
            DescriptorOptions {
                eps_den,
                min_neighbors,
                area_mode: area_mode.into(),
            },
        ),
        Command::Verify {
            dim,
            trials,
            seed,
            corrupt_weight_exponent,
        } => verify(VerifyOptions {
            dim: dim.into(),
            trials,
            seed,
            weight_exponent: corrupt_weight_exponent,
            ..Default::default()
        }),
        Command::Experiment { config, outdir } => experiment(config.as_deref(), &outdir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
