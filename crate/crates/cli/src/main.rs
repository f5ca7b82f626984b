#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use zmw_cli::run::{self, SweepAxis};
use zmw_cli::{CliError, RunConfig};
use zmw_core::analysis::{feasibility, FeasibilityInput, FitOptions, CLASSICAL_FRACTION};
use zmw_core::numerics::{mode_root, ModeFamily};
use zmw_core::transmission::LineshapeConvention;
use zmw_core::units::{omega_from_wavelength, wavenumber};
use zmw_core::waveguide::{mode_at_wavenumber, te11_root};
use zmw_core::Execution;

/// Single-atom transmission through a zero-mode waveguide.
#[derive(Debug, Parser)]
#[command(name = "zmw", version)]
struct Cli {
    /// Evaluate grid points and sweep values on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    /// Size of the worker pool (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Axis {
    Radius,
    Depth,
    AtomZ,
    AtomX,
    Xibar,
}

impl From<Axis> for SweepAxis {
    fn from(a: Axis) -> Self {
        match a {
            Axis::Radius => SweepAxis::Radius,
            Axis::Depth => SweepAxis::Depth,
            Axis::AtomZ => SweepAxis::AtomZ,
            Axis::AtomX => SweepAxis::AtomX,
            Axis::Xibar => SweepAxis::Xibar,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    Physical,
    AsPrinted,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the configured transmission spectrum and write it as CSV.
    Spectrum { config: PathBuf },
    /// Repeat the spectrum run over values of one parameter.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated values, in nm (or dimensionless for xibar).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
    },
    /// Fit a single Fano resonance to a spectrum CSV.
    Fit {
        csv: PathBuf,
        /// Free-space resonance wavelength (nm) used to convert the coupling to ξ̄.
        #[arg(long, requires = "radius")]
        lambda0: Option<f64>,
        /// Hole radius (nm) used to convert the coupling to ξ̄.
        #[arg(long, requires = "lambda0")]
        radius: Option<f64>,
        #[arg(long, value_enum, default_value = "physical")]
        convention: Convention,
    },
    /// List the lowest TE/TM modes of the hole and their decay lengths.
    Modes {
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Dwell-time and de Broglie estimates for an atom crossing the film.
    Feasibility {
        /// Film thickness (nm).
        #[arg(long)]
        depth: f64,
        /// Atom speed (m/s).
        #[arg(long)]
        speed: f64,
        /// Excited-state lifetime (s).
        #[arg(long)]
        lifetime: f64,
        /// Atomic mass (kg).
        #[arg(long)]
        mass: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execution(cli: &Cli) -> Result<Execution, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        #[cfg(feature = "parallel")]
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))?;
        #[cfg(not(feature = "parallel"))]
        log::warn!("built without the parallel feature; --threads {n} has no effect");
    }
    Ok(if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    })
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let exec = execution(&cli)?;
    match cli.command {
        Command::Spectrum { config } => {
            let config = RunConfig::load(&config)?;
            let r = run::run_spectrum(&config, exec)?;
            println!("output = {}", config.output.display());
            println!("points = {}", r.spectrum.len());
            for line in &r.diagnostics {
                println!("{line}");
            }
            print!("{}", run::format_metrics(&r.metrics));
        }
        Command::Sweep { config, axis, values } => {
            let config = RunConfig::load(&config)?;
            let outcome = run::run_sweep(&config, axis.into(), &values, exec)?;
            for row in &outcome.rows {
                match &row.outcome {
                    Ok(p) => println!(
                        "{} = {}: peak {:.8e}, {}",
                        SweepAxis::from(axis).name(),
                        row.value,
                        p.metrics.peak,
                        p.path.display()
                    ),
                    Err(e) => eprintln!("{} = {}: {e}", SweepAxis::from(axis).name(), row.value),
                }
            }
            println!("summary = {}", outcome.summary_path.display());
            if outcome.failures() > 0 {
                return Ok(ExitCode::from(zmw_cli::EXIT_NUMERICAL as u8));
            }
        }
        Command::Fit {
            csv,
            lambda0,
            radius,
            convention,
        } => {
            let options = FitOptions {
                convention: match convention {
                    Convention::Physical => LineshapeConvention::Physical,
                    Convention::AsPrinted => LineshapeConvention::AsPrinted,
                },
                execution: exec,
                ..FitOptions::default()
            };
            let geometry = lambda0.zip(radius);
            let r = run::run_fit(&csv, geometry, &options)?;
            print!("{}", run::format_fit(&r));
            if !r.fit.converged {
                return Ok(ExitCode::from(zmw_cli::EXIT_NUMERICAL as u8));
            }
        }
        Command::Modes { radius, lambda } => modes(radius, lambda)?,
        Command::Feasibility {
            depth,
            speed,
            lifetime,
            mass,
        } => {
            let input = FeasibilityInput::new(depth, speed, lifetime, mass).map_err(CliError::Invalid)?;
            let r = feasibility(&input);
            println!("dwell_time_s = {:.8e}", r.dwell_time);
            println!("dwell_exceeds_lifetime = {}", r.dwell_ok);
            println!("de_broglie_nm = {:.8e}", r.de_broglie);
            println!(
                "classical_motion = {} (threshold {CLASSICAL_FRACTION} H)",
                r.classical_ok
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn modes(radius: f64, lambda: f64) -> Result<(), CliError> {
    if !(radius > 0.0) || !(lambda > 0.0) {
        return Err(CliError::Usage("--radius and --lambda must be positive".into()));
    }
    let k0 = wavenumber(omega_from_wavelength(lambda));
    let mut roots = Vec::new();
    for family in [ModeFamily::TE, ModeFamily::TM] {
        for m in 0..=3 {
            for n in 1..=2 {
                roots.push(mode_root(family, m, n).map_err(CliError::Numerical)?);
            }
        }
    }
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    println!("mode,root,cutoff_wavelength_nm,kappa_per_nm,decay_length_nm,status");
    for root in roots {
        let mode = mode_at_wavenumber(radius, k0, root);
        println!(
            "{}{}{},{:.10},{:.8e},{:.8e},{:.8e},{}",
            root.family,
            root.azimuthal_index,
            root.radial_index,
            root.value,
            2.0 * std::f64::consts::PI * radius / root.value,
            mode.kappa,
            mode.decay_length,
            if mode.propagating { "propagating" } else { "evanescent" }
        );
    }
    let te11 = mode_at_wavenumber(radius, k0, te11_root());
    println!("zero_mode = {}", !te11.propagating);
    Ok(())
}
