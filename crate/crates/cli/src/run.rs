//! The work behind each subcommand. Every run computes first and writes
//! afterwards, so a failed run leaves no partial output behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use num_complex::Complex64;
use zmw_core::analysis::{
    extract_xibar, fit_fano_with, spectrum_metrics_with_baseline, FanoFitResult, FitOptions, SpectrumMetrics,
};
use zmw_core::materials::{DispersionTable, MaterialModel};
use zmw_core::polarizability::{
    meta_atom_lorentzian_params, purcell_modify, GreenComponent, MetaAtom, PurcellResult, TwoLevelAtom,
};
use zmw_core::spectrum::wavelength_grid;
use zmw_core::transmission::{
    fano_transmission_at_wavelength, off_axis_shift, pec_coupling, pec_deep_transmission_at_wavelength, FanoModel,
    LineshapeConvention, WallOrientation,
};
use zmw_core::units::{wavelength_from_omega, wavenumber};
use zmw_core::waveguide::{mode_propagation, te11_root, AtomPosition, ZmwGeometry};
use zmw_core::{Execution, Spectrum};

use crate::config::{AtomKind, MaterialKind, ModelKind};
use crate::{CliError, RunConfig};

pub const SUMMARY_HEADER: &str = "axis_value,peak,peak_wavelength,minimum,blocking_orders,status";

enum Forward {
    Fano(FanoModel),
    PecDeep {
        radius: f64,
        purcell: PurcellResult,
        convention: LineshapeConvention,
    },
}

impl Forward {
    /// Transmission without the atom.
    fn baseline(&self) -> f64 {
        match self {
            Forward::Fano(m) => m.baseline,
            Forward::PecDeep { .. } => 1.0,
        }
    }

    fn at(&self, wavelength: f64) -> zmw_core::Result<f64> {
        match self {
            Forward::Fano(m) => Ok(fano_transmission_at_wavelength(wavelength, m)),
            Forward::PecDeep {
                radius,
                purcell,
                convention,
            } => pec_deep_transmission_at_wavelength(wavelength, *radius, purcell, *convention),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumRun {
    pub spectrum: Spectrum,
    pub metrics: SpectrumMetrics,
    /// Human-readable `name = value` lines describing the model.
    pub diagnostics: Vec<String>,
}

fn material_model(kind: &MaterialKind) -> Result<MaterialModel, CliError> {
    Ok(match kind {
        MaterialKind::Pec => MaterialModel::PerfectConductor,
        MaterialKind::Drude { plasma_frequency } => {
            MaterialModel::drude(*plasma_frequency).map_err(CliError::Invalid)?
        }
        MaterialKind::Tabulated { table } => {
            let text = fs::read_to_string(table).map_err(|e| CliError::io(table, &e))?;
            let table_data = DispersionTable::parse(&text).map_err(|e| match e {
                zmw_core::Error::Parse { line, message } => CliError::Data {
                    path: table.display().to_string(),
                    line,
                    message,
                },
                other => CliError::Invalid(other),
            })?;
            MaterialModel::Tabulated(table_data)
        }
    })
}

/// Resolve the config into a forward model plus diagnostics.
fn build(config: &RunConfig) -> Result<(Forward, Vec<String>), CliError> {
    let wall = material_model(&config.material)?;
    let geom = ZmwGeometry::new(config.radius_nm, config.depth_nm, wall.clone()).map_err(CliError::Invalid)?;
    let position = AtomPosition::new(config.x_nm, config.y_nm, config.atom_z(), &geom).map_err(CliError::Invalid)?;
    let lambda0 = config.resonance_wavelength_nm;
    let mut diag = Vec::new();

    let atom = match config.atom {
        AtomKind::TwoLevel { linewidth_rel } => {
            TwoLevelAtom::from_wavelength(lambda0, linewidth_rel).map_err(CliError::Invalid)?
        }
        AtomKind::MetaAtom { radius_nm } => {
            let ma = MetaAtom::resonant_at(radius_nm, lambda0).map_err(CliError::Invalid)?;
            let w0 = ma.resonance_frequency();
            let (omega0, gamma) = meta_atom_lorentzian_params(&ma, w0);
            diag.push(format!("meta_atom_size_parameter = {:.8e}", ma.size_parameter(w0)));
            TwoLevelAtom::new(omega0, gamma, [1.0, 0.0, 0.0]).map_err(CliError::Invalid)?
        }
    };
    let k0 = wavenumber(atom.omega0);
    let g = GreenComponent::new(Complex64::new(config.green_re, config.green_im)).map_err(CliError::Invalid)?;
    let purcell = purcell_modify(&atom, k0, g);
    if purcell.clamped {
        return Err(CliError::Usage(
            "the reflected Green component drives the linewidth negative".into(),
        ));
    }
    diag.push(format!(
        "resonance_wavelength_nm = {:.8e}",
        wavelength_from_omega(purcell.omega_tilde)
    ));
    diag.push(format!(
        "linewidth_rel = {:.8e}",
        purcell.gamma_tilde / purcell.omega_tilde
    ));

    let mode = mode_propagation(&geom, lambda0, te11_root());
    diag.push(format!("te11_decay_length_nm = {:.8e}", mode.decay_length));
    diag.push(format!("zero_mode = {}", !mode.propagating));
    if mode.propagating {
        warn!("k0 R exceeds the TE11 cutoff at {lambda0} nm: the hole is not a zero-mode waveguide");
    }

    if !position.on_axis() {
        let eps = wall.permittivity(lambda0).map_err(CliError::Invalid)?;
        for (name, orientation) in [
            ("perpendicular", WallOrientation::PerpendicularToWall),
            ("parallel", WallOrientation::ParallelToWall),
        ] {
            let shift =
                off_axis_shift(position.rho(), config.radius_nm, eps, orientation).map_err(CliError::Invalid)?;
            diag.push(format!("off_axis_shift_{name} = {:.8e}", shift.relative_shift));
        }
    }

    let forward = match config.model {
        ModelKind::FanoEq9 => {
            let m = FanoModel::from_xibar(&purcell, config.xibar, lambda0, config.radius_nm)
                .map_err(CliError::Invalid)?
                .with_convention(config.convention);
            diag.push(format!("coupling = {:.8e}", m.coupling.re));
            Forward::Fano(m)
        }
        ModelKind::PecDeepEq10 => {
            if wall != MaterialModel::PerfectConductor {
                warn!(
                    "pec_deep_eq10 assumes perfectly conducting walls; the configured material only enters diagnostics"
                );
            }
            let b = pec_coupling(k0, config.radius_nm).map_err(CliError::Numerical)?;
            diag.push(format!("coupling = {b:.8e}"));
            Forward::PecDeep {
                radius: config.radius_nm,
                purcell,
                convention: config.convention,
            }
        }
    };
    Ok((forward, diag))
}

/// Evaluate the configured spectrum without writing anything.
pub fn compute_spectrum(config: &RunConfig, exec: Execution) -> Result<SpectrumRun, CliError> {
    config.validate()?;
    let (forward, diagnostics) = build(config)?;
    let grid = wavelength_grid(config.lambda_min_nm, config.lambda_max_nm, config.points).map_err(CliError::Invalid)?;
    let spectrum = Spectrum::evaluate(&grid, exec, |w| forward.at(w)).map_err(CliError::Numerical)?;
    let metrics = spectrum_metrics_with_baseline(&spectrum, forward.baseline()).map_err(CliError::Numerical)?;
    Ok(SpectrumRun {
        spectrum,
        metrics,
        diagnostics,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, &e))
}

/// `spectrum` subcommand: compute, then write the CSV to `output.path`.
pub fn run_spectrum(config: &RunConfig, exec: Execution) -> Result<SpectrumRun, CliError> {
    let run = compute_spectrum(config, exec)?;
    write(&config.output, &run.spectrum.to_csv())?;
    Ok(run)
}

pub fn format_metrics(m: &SpectrumMetrics) -> String {
    format!(
        "peak = {:.8e}\npeak_wavelength_nm = {:.8e}\nminimum = {:.8e}\nmin_wavelength_nm = {:.8e}\nbaseline = {:.8e}\nblocking_orders = {:.8e}\n",
        m.peak, m.peak_wavelength, m.minimum, m.min_wavelength, m.baseline, m.blocking_orders
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Radius,
    Depth,
    AtomZ,
    AtomX,
    Xibar,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Radius => "radius",
            SweepAxis::Depth => "depth",
            SweepAxis::AtomZ => "atom_z",
            SweepAxis::AtomX => "atom_x",
            SweepAxis::Xibar => "xibar",
        }
    }

    fn apply(self, config: &mut RunConfig, value: f64) {
        match self {
            SweepAxis::Radius => config.radius_nm = value,
            SweepAxis::Depth => config.depth_nm = value,
            SweepAxis::AtomZ => config.z_nm = Some(value),
            SweepAxis::AtomX => config.x_nm = value,
            SweepAxis::Xibar => config.xibar = value,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<SweepPoint, String>,
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub metrics: SpectrumMetrics,
    pub path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub summary_path: PathBuf,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

/// `out.csv` → `out_<axis>_<value>.csv`.
pub fn suffixed_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map_or_else(|| "spectrum".into(), |s| s.to_string_lossy().into_owned());
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    base.with_file_name(name)
}

/// `sweep` subcommand. Values are evaluated under `exec`; files are written
/// afterwards in input order. A failing value is recorded in its summary
/// row and does not stop the others.
pub fn run_sweep(
    config: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    exec: Execution,
) -> Result<SweepOutcome, CliError> {
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let runs = exec.map(values, |&v| {
        let mut c = config.clone();
        axis.apply(&mut c, v);
        compute_spectrum(&c, exec)
    });

    let mut rows = Vec::with_capacity(values.len());
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for (&value, run) in values.iter().zip(runs) {
        let outcome = run.and_then(|r| {
            let path = suffixed_path(&config.output, &format!("{}_{value}", axis.name()));
            write(&path, &r.spectrum.to_csv())?;
            Ok(SweepPoint {
                metrics: r.metrics,
                path,
            })
        });
        match &outcome {
            Ok(p) => {
                let m = &p.metrics;
                let _ = writeln!(
                    summary,
                    "{value:.8e},{:.8e},{:.8e},{:.8e},{:.8e},ok",
                    m.peak, m.peak_wavelength, m.minimum, m.blocking_orders
                );
            }
            Err(e) => {
                let msg = e.to_string().replace([',', '\n', '\r'], ";");
                let _ = writeln!(summary, "{value:.8e},,,,,error: {msg}");
            }
        }
        rows.push(SweepRow {
            value,
            outcome: outcome.map_err(|e| e.to_string()),
        });
    }
    let summary_path = suffixed_path(&config.output, &format!("{}_summary", axis.name()));
    write(&summary_path, &summary)?;
    Ok(SweepOutcome { rows, summary_path })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRun {
    pub fit: FanoFitResult,
    pub xibar: Option<Complex64>,
}

/// `fit` subcommand: read a spectrum CSV and fit a single Fano resonance.
/// With `geometry = Some((λ₀, R))` the coupling is also converted to ξ̄.
pub fn run_fit(path: &Path, geometry: Option<(f64, f64)>, options: &FitOptions) -> Result<FitRun, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, &e))?;
    let spectrum = Spectrum::from_csv(&text).map_err(|e| match e {
        zmw_core::Error::Parse { line, message } => CliError::Data {
            path: path.display().to_string(),
            line,
            message,
        },
        other => CliError::Usage(format!("{}: {other}", path.display())),
    })?;
    let fit = fit_fano_with(&spectrum, options).map_err(CliError::Numerical)?;
    let xibar = match geometry {
        Some((lambda0, radius)) => Some(extract_xibar(&fit, lambda0, radius).map_err(CliError::Numerical)?),
        None => None,
    };
    Ok(FitRun { fit, xibar })
}

pub fn format_fit(run: &FitRun) -> String {
    let f = &run.fit;
    let mut out = format!(
        "resonance_wavelength_nm = {:.8e}\ngamma_tilde_rad_per_s = {:.8e}\nlinewidth_rel = {:.8e}\ncoupling_abs = {:.8e}\ncoupling_arg_rad = {:.8e}\nbaseline = {:.8e}\nresidual = {:.8e}\nconverged = {}\n",
        f.wavelength(),
        f.gamma_tilde,
        f.gamma_tilde / f.omega_tilde,
        f.coupling.norm(),
        f.coupling.arg(),
        f.baseline,
        f.residual,
        f.converged
    );
    if let Some(xi) = run.xibar {
        let _ = writeln!(out, "xibar = {:.8e}\nxibar_im = {:.8e}", xi.re, xi.im);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes() {
        assert_eq!(
            suffixed_path(Path::new("out/a.csv"), "radius_40"),
            PathBuf::from("out/a_radius_40.csv")
        );
        assert_eq!(suffixed_path(Path::new("a"), "xibar_0.5"), PathBuf::from("a_xibar_0.5"));
    }
}
