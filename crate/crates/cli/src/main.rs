use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bfm_core::error::Error;
use bfm_core::lattice::LatticeSolver;
use bfm_core::sweeps::config::parse_value;
use bfm_core::sweeps::output::write_two_column;
use bfm_core::sweeps::{
    check_params, lattice_sites, parse_config_text, run_grid_with, run_point, run_sweep, Execution, Format,
    GridResult, Mode, ParamSet, SweepConfig,
};

/// Zero-temperature phase diagrams of one-dimensional Bose-Fermi mixtures.
#[derive(Parser)]
#[command(name = "bfm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single parameter point and print one row.
    Point(PointArgs),
    /// Evaluate a grid from a preset and/or a config file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Parameter override, `name=value` (repeatable). Values accept `pi` multiples.
    #[arg(long = "param", short = 'p', value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Output format; defaults to csv, or json for a `.json` output path.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Exit with status 2 if any point failed numerically.
    #[arg(long)]
    strict: bool,
    /// Evaluate points one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    mode: String,
    #[command(flatten)]
    common: Common,
    /// Write the boson and fermion bands as two-column CSV into this directory.
    #[arg(long, value_name = "DIR")]
    dump_band: Option<PathBuf>,
    /// Write the boson and fermion Wannier functions as two-column CSV into this directory.
    #[arg(long, value_name = "DIR")]
    dump_wannier: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, required_unless_present = "config")]
    preset: Option<String>,
    /// Flat `key = value` config file; command-line flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
    /// `name:min:max:count`
    #[arg(long)]
    axis1: Option<String>,
    /// `name:min:max:count`, or `none` for a 1D scan.
    #[arg(long)]
    axis2: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// Also write `<out stem>.curves.csv` with the exponent curves.
    #[arg(long)]
    emit_curves: bool,
}

enum Failure {
    Config(Error),
    Numerical,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

fn split_param(raw: &str) -> Result<(String, String), Error> {
    match raw.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::Config(format!("`--param {raw}` must look like name=value"))),
    }
}

fn format_for(explicit: Option<&str>, out: Option<&Path>) -> Result<Format, Error> {
    match (explicit, out) {
        (Some(f), _) => f.parse(),
        (None, Some(p)) if p.extension().is_some_and(|e| e == "json") => Ok(Format::Json),
        _ => Ok(Format::Csv),
    }
}

fn execution(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn dump_sites(args: &PointArgs, params: &ParamSet) -> Result<(), Error> {
    if args.dump_band.is_none() && args.dump_wannier.is_none() {
        return Ok(());
    }
    let (boson, fermion) = lattice_sites(params, &LatticeSolver::default())?;
    for (dir, wannier) in [(&args.dump_band, false), (&args.dump_wannier, true)] {
        let Some(dir) = dir else { continue };
        std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
        for (species, site) in [("boson", &boson), ("fermion", &fermion)] {
            if wannier {
                let w = &site.wannier;
                let path = dir.join(format!("wannier_{species}.csv"));
                write_two_column(&path, ["x", "w"], &w.x_grid, &w.amplitudes)?;
            } else {
                let b = &site.band;
                let path = dir.join(format!("band_{species}.csv"));
                write_two_column(&path, ["k", "energy"], &b.k_grid, &b.energies)?;
            }
        }
    }
    Ok(())
}

fn point(args: PointArgs) -> Result<(), Failure> {
    let mode: Mode = args.mode.parse()?;
    let mut params = ParamSet::new();
    for raw in &args.common.params {
        let (k, v) = split_param(raw)?;
        params.insert(k, parse_value(&v)?);
    }
    check_params(mode, &params)?;
    if mode == Mode::Microscopic {
        dump_sites(&args, &params)?;
    } else if args.dump_band.is_some() || args.dump_wannier.is_some() {
        return Err(Error::Config("band and Wannier dumps need microscopic mode".into()).into());
    }
    let row = run_point(mode, &params);
    let result = GridResult::single(mode, params, row);
    let format = format_for(args.common.format.as_deref(), None)?;
    print!("{}", result.render(format));
    finish(&result, args.common.strict)
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, Error> {
    let mut pairs = Vec::new();
    if let Some(name) = &args.preset {
        pairs.push(("preset".to_string(), name.clone()));
    }
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
        pairs.extend(parse_config_text(&text)?);
    }
    for raw in &args.common.params {
        pairs.push(split_param(raw)?);
    }
    for (key, value) in [("axis1", &args.axis1), ("axis2", &args.axis2)] {
        if let Some(v) = value {
            pairs.push((key.to_string(), v.clone()));
        }
    }
    if let Some(out) = &args.out {
        pairs.push(("out".into(), out.display().to_string()));
        let format = format_for(args.common.format.as_deref(), Some(out))?;
        pairs.push(("format".into(), if format == Format::Json { "json" } else { "csv" }.into()));
    }
    if args.emit_curves {
        pairs.push(("emit_curves".into(), "true".into()));
    }
    SweepConfig::from_pairs(&pairs)
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let config = sweep_config(&args)?;
    let exec = execution(&args.common);
    let result = if config.output.is_some() {
        run_sweep(&config, exec)?
    } else {
        let result = run_grid_with(&config, exec)?;
        print!("{}", result.render(format_for(args.common.format.as_deref(), None)?));
        result
    };
    finish(&result, args.common.strict)
}

fn finish(result: &GridResult, strict: bool) -> Result<(), Failure> {
    let failed = result.rows.iter().filter(|r| r.is_error()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} points failed", result.rows.len());
        if strict {
            return Err(Failure::Numerical);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Point(args) => point(args),
        Command::Sweep(args) => sweep(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical) => ExitCode::from(2),
    }
}
