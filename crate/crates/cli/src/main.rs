use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use maxsurf::families::{build_family, FamilySpec};
use maxsurf::integrator::period_lattice;
use maxsurf::io::SurfaceDescription;
use maxsurf::lorentz::{classify_isometry, Isometry};
use maxsurf::mesh::{check_mesh, export_mesh, mesh_surface, MeshFormat, MeshOptions};
use maxsurf::singularity::BranchingConvention;
use maxsurf::validate::{validate_description, ValidateOptions, VerificationReport};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

/// Periodic maximal surfaces from Weierstrass data.
#[derive(Parser)]
#[command(name = "maxsurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct Common {
    /// Integration tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Sample points for the symmetry checks.
    #[arg(long, default_value_t = 24)]
    samples: usize,
    /// Branching-number convention.
    #[arg(long, value_enum, default_value_t = Convention::Shifted)]
    convention: Convention,
}

impl Common {
    fn options(&self) -> ValidateOptions {
        ValidateOptions {
            tol: self.tol,
            samples: self.samples,
            convention: match self.convention {
                Convention::Shifted => BranchingConvention::Shifted,
                Convention::AsPrinted => BranchingConvention::AsPrinted,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Shifted,
    AsPrinted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Ply,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Toml,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a surface description and print the full report.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Period lattice and boundary periods.
    Periods {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Singular curves, spacelike singular points and ends.
    Census {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// The topological formula and its Riemann–Hurwitz decomposition.
    CheckTopology {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Classify an isometry given as 9 row-major matrix entries and a translation.
    #[command(allow_negative_numbers = true)]
    ClassifyIsometry {
        #[arg(num_args = 12, required = true)]
        entries: Vec<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Triangulate the fundamental piece and its translates.
    Mesh {
        file: PathBuf,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        #[arg(long, value_enum, default_value_t = Format::Obj)]
        format: Format,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Validate a member of a bundled family, or print its description.
    Example {
        #[arg(value_parser = ["scherk", "riemann", "doubly"])]
        family: String,
        /// Comma-separated `name=value` pairs, e.g. `a=0.5,b=-0.5`.
        #[arg(long, allow_hyphen_values = true)]
        params: Option<String>,
        /// Print the surface description instead of validating it.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        #[command(flatten)]
        common: Common,
    },
}

fn load(file: &PathBuf) -> Result<SurfaceDescription> {
    SurfaceDescription::load(file).with_context(|| format!("loading {}", file.display()))
}

fn parse_params(s: &str) -> Result<Vec<(String, f64)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').with_context(|| format!("parameter {p:?} is not name=value"))?;
            let v: f64 = v.trim().parse().with_context(|| format!("parameter {k} has a non-numeric value"))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Keeps the named sections of a report and the checks that belong to them.
fn subset(report: &VerificationReport, sections: &[&str], checks: &[&str]) -> (Value, bool) {
    let full = serde_json::to_value(report).expect("reports serialize");
    let picked: Vec<&maxsurf::validate::Check> = report
        .validation
        .checks
        .iter()
        .filter(|c| c.name == "description" || checks.iter().any(|k| c.name.starts_with(k)))
        .collect();
    let pass = picked.iter().all(|c| c.pass);
    let mut out = json!({
        "input": full["input"],
        "validation": { "pass": pass, "checks": picked },
    });
    for s in sections {
        out[*s] = full[*s].clone();
    }
    (out, pass)
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Validate { file, common } => {
            let report = validate_description(&load(&file)?, &common.options());
            println!("{}", report.to_json());
            Ok(report.pass())
        }
        Command::Periods { file, common } => {
            let report = validate_description(&load(&file)?, &common.options());
            let (v, pass) = subset(&report, &["periods"], &["lattice_rank", "boundary_periods", "expected_translation"]);
            print(&v);
            Ok(pass)
        }
        Command::Census { file, common } => {
            let report = validate_description(&load(&file)?, &common.options());
            let (v, pass) = subset(
                &report,
                &["singularities", "ends"],
                &["no_boundary_zeros", "residue_balance", "end_orders", "holomorphic_interior"],
            );
            print(&v);
            Ok(pass)
        }
        Command::CheckTopology { file, common } => {
            let report = validate_description(&load(&file)?, &common.options());
            let (v, pass) = subset(&report, &["topology"], &["topology_formula", "riemann_hurwitz", "double_genus"]);
            print(&v);
            Ok(pass)
        }
        Command::ClassifyIsometry { entries, tol } => {
            let arr: [f64; 12] = entries.try_into().map_err(|_| anyhow::anyhow!("expected 12 numbers"))?;
            let iso = Isometry::from_row_major(&arr);
            let defect = iso.lorentz_defect();
            let class = classify_isometry(&iso, tol).context("classifying the isometry")?;
            print(&json!({ "input": arr, "lorentz_defect": defect, "class": class }));
            Ok(true)
        }
        Command::Mesh { file, resolution, copies, format, out, tol } => {
            let desc = load(&file)?;
            let data = desc.to_data()?;
            let lattice = period_lattice(&data, tol)?;
            let mesh = mesh_surface(&data, &lattice, &MeshOptions { resolution, copies, tol })?;
            let checks = check_mesh(&mesh, &lattice, tol);
            let fmt = match format {
                Format::Obj => MeshFormat::Obj,
                Format::Ply => MeshFormat::Ply,
            };
            export_mesh(&mesh, fmt, &out).with_context(|| format!("writing {}", out.display()))?;
            let pass = checks.periodicity_ok && checks.spacelike_ok && checks.injective_ok && checks.ring_ok;
            print(&json!({
                "input": { "file": file, "resolution": resolution, "copies": copies, "tol": tol },
                "output": out,
                "vertices": mesh.vertices.len(),
                "faces": mesh.faces.len(),
                "stats": mesh.stats,
                "checks": checks,
                "pass": pass,
            }));
            Ok(pass)
        }
        Command::Example { family, params, emit, common } => {
            let params = params.as_deref().map(parse_params).transpose()?.unwrap_or_default();
            let spec = FamilySpec::with_params(&family, &params)?;
            let built = build_family(spec)?;
            let desc = SurfaceDescription::from_family(&built);
            match emit {
                Some(Emit::Toml) => print!("{}", desc.to_toml()),
                Some(Emit::Json) => println!("{}", desc.to_json()),
                None => {
                    let report = validate_description(&desc, &common.options());
                    println!("{}", report.to_json());
                    return Ok(report.pass());
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse() {
        assert_eq!(parse_params("a=0.5, b=-0.5").unwrap(), vec![("a".into(), 0.5), ("b".into(), -0.5)]);
        assert!(parse_params("a").is_err());
        assert!(parse_params("a=x").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
