//! Least-squares fit of a single Fano resonance to a transmission spectrum.
//!
//! The fit runs in scaled frequency coordinates `x = (ω − ω_ref)/w` with
//! parameters `[x̃₀, ln(Γ̃/w), Re A, Im A, baseline]`, so that narrow lines at
//! optical frequencies stay well conditioned.
//!
//! The model `b·|1 + A·L|²` is invariant under `Im A → 2 − Im A` (physical
//! convention), so the coupling is only determined up to that reflection.
//! Results are reported on the branch `Im A ≤ 1`, which contains every real
//! coupling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::numerics::{FitProblem, FitReport, LevenbergMarquardt};
use crate::transmission::{coupling_scale, LineshapeConvention};
use crate::units::{omega_from_wavelength, SPEED_OF_LIGHT};
use crate::{Error, Execution, Result, Spectrum};

const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Convention in which the returned coupling is expressed.
    pub convention: LineshapeConvention,
    pub solver: LevenbergMarquardt,
    /// Relative residual decrease regarded as stationary.
    pub tolerance: f64,
    /// Scheduling of the independent start candidates.
    pub execution: Execution,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            convention: LineshapeConvention::Physical,
            solver: LevenbergMarquardt::default(),
            tolerance: 1e-10,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoFitResult {
    pub omega_tilde: f64,
    pub gamma_tilde: f64,
    pub coupling: Complex64,
    pub baseline: f64,
    /// Sum of squared residuals.
    pub residual: f64,
    pub converged: bool,
    pub convention: LineshapeConvention,
}

impl FanoFitResult {
    /// Resonance wavelength (nm) of the fitted line.
    pub fn wavelength(&self) -> f64 {
        crate::units::wavelength_from_omega(self.omega_tilde)
    }
}

pub fn fit_fano(spectrum: &Spectrum) -> Result<FanoFitResult> {
    fit_fano_with(spectrum, &FitOptions::default())
}

pub fn fit_fano_with(spectrum: &Spectrum, options: &FitOptions) -> Result<FanoFitResult> {
    let pts = spectrum.points();
    if pts.len() < MIN_POINTS {
        return Err(Error::domain(format!(
            "a Fano fit needs at least {MIN_POINTS} points, got {}",
            pts.len()
        )));
    }
    let frame = Frame::new(pts);
    let data = &frame.data;

    let (ymin, ymax) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, y)| {
            (lo.min(y), hi.max(y))
        });
    if ymax - ymin <= 1e-12 * ymax.abs().max(f64::MIN_POSITIVE) {
        let mean = data.iter().map(|p| p.1).sum::<f64>() / data.len() as f64;
        let residual = data.iter().map(|p| (p.1 - mean).powi(2)).sum();
        return Ok(FanoFitResult {
            omega_tilde: frame.omega_ref,
            gamma_tilde: frame.scale,
            coupling: Complex64::new(0.0, 0.0),
            baseline: mean,
            residual,
            converged: true,
            convention: options.convention,
        });
    }

    let starts = start_candidates(data);
    let reports: Vec<Result<FitReport>> = options.execution.map(&starts, |start| {
        let problem = FitProblem::new(scaled_model, data.clone(), start.to_vec(), options.tolerance)?;
        options.solver.minimize(&problem)
    });

    let mut best: Option<FitReport> = None;
    let mut first_err = None;
    for r in reports {
        match r {
            Ok(rep) if rep.residual.is_finite() => {
                if best.as_ref().is_none_or(|b| rep.residual < b.residual) {
                    best = Some(rep);
                }
            }
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let best = match (best, first_err) {
        (Some(b), _) => b,
        (None, Some(e)) => return Err(e),
        (None, None) => return Err(Error::Convergence("no usable start candidate".into())),
    };

    let p = &best.parameters;
    let imag = if p[3] > 1.0 { 2.0 - p[3] } else { p[3] };
    let physical = Complex64::new(p[2], imag);
    let coupling = match options.convention {
        LineshapeConvention::Physical => physical,
        LineshapeConvention::AsPrinted => -physical,
    };
    Ok(FanoFitResult {
        omega_tilde: frame.omega_ref + frame.scale * p[0],
        gamma_tilde: frame.scale * p[1].exp(),
        coupling,
        baseline: p[4],
        residual: best.residual,
        converged: best.converged && p[4] > 0.0,
        convention: options.convention,
    })
}

/// `ξ̄ = A / ((3/16π³)(λ₀/R)³)`; requires a converged fit.
pub fn extract_xibar(fit: &FanoFitResult, lambda0: f64, radius: f64) -> Result<Complex64> {
    if !fit.converged {
        return Err(Error::Convergence("ξ̄ extraction needs a converged fit".into()));
    }
    if !(radius > 0.0) || !(lambda0 > 0.0) {
        return Err(Error::domain("wavelength and radius must be positive"));
    }
    Ok(fit.coupling / coupling_scale(lambda0, radius))
}

/// Physical-convention Fano line in scaled coordinates.
fn scaled_model(x: f64, p: &[f64]) -> f64 {
    let half = 0.5 * p[1].exp();
    let l = half / Complex64::new(p[0] - x, -half);
    p[4] * (1.0 + Complex64::new(p[2], p[3]) * l).norm_sqr()
}

/// Scaled frequency axis built from the wavelength samples.
struct Frame {
    omega_ref: f64,
    scale: f64,
    /// `(x, value)` sorted by increasing frequency.
    data: Vec<(f64, f64)>,
}

impl Frame {
    fn new(pts: &[(f64, f64)]) -> Self {
        let lambda_ref = pts[pts.len() / 2].0;
        let omega_ref = omega_from_wavelength(lambda_ref);
        let two_pi_c = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT;
        // ω − ω_ref from the wavelength difference, which is exact for nearby samples.
        let raw: Vec<(f64, f64)> = pts
            .iter()
            .rev()
            .map(|&(lambda, v)| (two_pi_c * (lambda_ref - lambda) / (lambda * lambda_ref), v))
            .collect();
        let scale = 0.5 * (raw[raw.len() - 1].0 - raw[0].0);
        let data = raw.into_iter().map(|(x, v)| (x / scale, v)).collect();
        Frame { omega_ref, scale, data }
    }
}

/// Deterministically ordered starting points: the algebraic estimate (when
/// admissible), then centres at the grid argmax, argmin and their midpoint.
fn start_candidates(data: &[(f64, f64)]) -> Vec<[f64; 5]> {
    let mut starts = Vec::with_capacity(4);
    if let Some(s) = algebraic_start(data) {
        starts.push(s);
    }

    let (mut imax, mut imin) = (0, 0);
    for (i, p) in data.iter().enumerate() {
        if p.1 > data[imax].1 {
            imax = i;
        }
        if p.1 < data[imin].1 {
            imin = i;
        }
    }
    let (xmax, ymax) = data[imax];
    let (xmin, ymin) = data[imin];
    let (first, last) = (data[0].1, data[data.len() - 1].1);
    let interior = |i: usize| i > 0 && i + 1 < data.len();
    let baseline = if ymin > 0.0 && interior(imax) && interior(imin) {
        (ymax * ymin).sqrt()
    } else if first > 0.0 && last > 0.0 {
        (first * last).sqrt()
    } else {
        0.5 * (first + last).max(f64::MIN_POSITIVE)
    };
    // For a real coupling A = 2 sinh t the peak is b·e^{2t} and the
    // extrema sit (Γ/2)·2cosh t apart.
    let t = (0.5 * (ymax / baseline).ln()).max(0.05);
    let magnitude = 2.0 * t.sinh();
    let sep = (xmin - xmax).abs();
    let width = if sep > 0.0 { sep / t.cosh() } else { 0.1 };
    let sign = if xmax <= xmin { 1.0 } else { -1.0 };
    for centre in [xmax, xmin, 0.5 * (xmax + xmin)] {
        starts.push([centre, width.ln(), sign * magnitude, 0.0, baseline]);
    }
    starts
}

/// Linear least-squares fit of `y·(x² + px + q) = αx² + βx + γ`, the
/// rational form of the Fano line, converted back to model parameters.
fn algebraic_start(data: &[(f64, f64)]) -> Option<[f64; 5]> {
    let m = data.len();
    let mut a = DMatrix::<f64>::zeros(m, 5);
    let mut b = DVector::<f64>::zeros(m);
    for (i, &(x, y)) in data.iter().enumerate() {
        a[(i, 0)] = x * x;
        a[(i, 1)] = x;
        a[(i, 2)] = 1.0;
        a[(i, 3)] = -y * x;
        a[(i, 4)] = -y;
        b[i] = y * x * x;
    }
    let theta = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let (alpha, beta, gamma, p, q) = (theta[0], theta[1], theta[2], theta[3], theta[4]);
    let centre = -0.5 * p;
    let g2 = q - centre * centre;
    if !(g2 > 0.0) || !(alpha > 0.0) {
        return None;
    }
    let g = g2.sqrt();
    let shifted = -beta / (2.0 * alpha);
    let re = (shifted - centre) / g;
    let disc = (gamma / alpha - shifted * shifted).max(0.0);
    let im = 1.0 - disc.sqrt() / g;
    let start = [centre, (2.0 * g).ln(), re, im, alpha];
    start.iter().all(|v| v.is_finite()).then_some(start)
}
