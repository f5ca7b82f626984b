//! Forward models of the detected power ratio `P_det/P₀`.
//!
//! All lineshapes share one kernel, `|1 + A·L(ω)|²` with the complex
//! Lorentzian `L = (Γ̃/2)/((ω̃₀ − ω) − iΓ̃/2)`. In the default
//! [`LineshapeConvention::Physical`] convention transmission is blocked on
//! the short-wavelength side of the resonance and enhanced on the long side.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::numerics::bessel_j;
use crate::polarizability::PurcellResult;
use crate::units::{wavelength_from_omega, wavenumber, SPEED_OF_LIGHT};
use crate::waveguide::te11_root;
use crate::{Error, Result};

/// Sign of the Lorentzian denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LineshapeConvention {
    /// `(ω̃₀ − ω) − iΓ̃/2`, consistent with `e^{−iωt}` and `Im α > 0`.
    #[default]
    Physical,
    /// `(ω − ω̃₀) + iΓ̃/2`; mirrors the asymmetry of the lineshape.
    AsPrinted,
}

impl LineshapeConvention {
    /// `L(ω) = (Γ/2)/denominator`.
    pub fn lorentzian(self, omega: f64, omega_tilde: f64, gamma_tilde: f64) -> Complex64 {
        self.lorentzian_at_detuning(omega - omega_tilde, gamma_tilde)
    }

    /// `L` as a function of the detuning `δ = ω − ω̃₀`.
    pub fn lorentzian_at_detuning(self, delta: f64, gamma_tilde: f64) -> Complex64 {
        let half = 0.5 * gamma_tilde;
        let denom = match self {
            LineshapeConvention::Physical => Complex64::new(-delta, -half),
            LineshapeConvention::AsPrinted => Complex64::new(delta, half),
        };
        half / denom
    }
}

/// Single-resonance Fano model of the transmission ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanoModel {
    pub omega_tilde: f64,
    pub gamma_tilde: f64,
    /// Dimensionless coupling A.
    pub coupling: Complex64,
    /// Geometric constant behind `coupling`, when known.
    pub xibar: Option<f64>,
    pub baseline: f64,
    pub convention: LineshapeConvention,
}

impl FanoModel {
    pub fn new(omega_tilde: f64, gamma_tilde: f64, coupling: Complex64) -> Result<Self> {
        let m = FanoModel {
            omega_tilde,
            gamma_tilde,
            coupling,
            xibar: None,
            baseline: 1.0,
            convention: LineshapeConvention::Physical,
        };
        m.validate()?;
        Ok(m)
    }

    /// Coupling `A = ξ̄·(3/16π³)·(λ₀/R)³` for a hole of radius `radius`.
    pub fn from_xibar(purcell: &PurcellResult, xibar: f64, lambda0: f64, radius: f64) -> Result<Self> {
        let a = fano_coupling_from_xibar(xibar, lambda0, radius)?;
        let mut m = FanoModel::new(purcell.omega_tilde, purcell.gamma_tilde, Complex64::new(a, 0.0))?;
        m.xibar = Some(xibar);
        Ok(m)
    }

    pub fn with_baseline(mut self, baseline: f64) -> Result<Self> {
        self.baseline = baseline;
        self.validate()?;
        Ok(self)
    }

    pub fn with_convention(mut self, convention: LineshapeConvention) -> Self {
        self.convention = convention;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma_tilde > 0.0) || !self.gamma_tilde.is_finite() {
            return Err(Error::domain(format!(
                "linewidth must be positive, got {}",
                self.gamma_tilde
            )));
        }
        if !(self.baseline > 0.0) || !self.baseline.is_finite() {
            return Err(Error::domain(format!(
                "baseline must be positive, got {}",
                self.baseline
            )));
        }
        if !self.omega_tilde.is_finite() || !self.coupling.re.is_finite() || !self.coupling.im.is_finite() {
            return Err(Error::domain("Fano parameters must be finite"));
        }
        Ok(())
    }

    /// Normalised detuning `s = (ω − ω̃₀)/(Γ̃/2)`.
    pub fn detuning(&self, omega: f64) -> f64 {
        (omega - self.omega_tilde) / (0.5 * self.gamma_tilde)
    }

    /// Closed-form extrema `(s_max, s_min)` for a real coupling, in units of
    /// the normalised detuning. `None` for a complex coupling.
    pub fn extremum_detunings(&self) -> Option<(f64, f64)> {
        if self.coupling.im != 0.0 {
            return None;
        }
        let a = self.coupling.re;
        let root = (a * a + 4.0).sqrt();
        // Printed form |1 + A/(s+i)|²: max at (−A+√)/2, min at (−A−√)/2
        // for A ≥ 0, roles swapped for A < 0. The physical form is its
        // mirror image s → −s.
        let root = root.copysign(a);
        let (smax, smin) = ((-a + root) / 2.0, (-a - root) / 2.0);
        Some(match self.convention {
            LineshapeConvention::AsPrinted => (smax, smin),
            LineshapeConvention::Physical => (-smax, -smin),
        })
    }
}

/// `|1 + ξα|²`.
pub fn detector_power_ratio(alpha: Complex64, xi: Complex64) -> f64 {
    (1.0 + xi * alpha).norm_sqr()
}

/// `baseline·|1 + A·L(ω)|²`.
pub fn fano_transmission(omega: f64, model: &FanoModel) -> f64 {
    fano_at_detuning(omega - model.omega_tilde, model)
}

/// [`fano_transmission`] at a vacuum wavelength. The detuning is formed as
/// `2πc(λ̃ − λ)/(λλ̃)`, which keeps full precision for linewidths far below
/// the resolution of `ω` itself.
pub fn fano_transmission_at_wavelength(wavelength: f64, model: &FanoModel) -> f64 {
    fano_at_detuning(detuning_from_wavelength(wavelength, model.omega_tilde), model)
}

/// `ω(λ) − ω̃` computed from wavelength differences.
pub fn detuning_from_wavelength(wavelength: f64, omega_tilde: f64) -> f64 {
    let lt = wavelength_from_omega(omega_tilde);
    2.0 * PI * SPEED_OF_LIGHT * (lt - wavelength) / (wavelength * lt)
}

fn fano_at_detuning(delta: f64, model: &FanoModel) -> f64 {
    let l = model.convention.lorentzian_at_detuning(delta, model.gamma_tilde);
    model.baseline * (1.0 + model.coupling * l).norm_sqr()
}

/// `A = ξ̄·(3/16π³)·(λ₀/R)³`.
pub fn fano_coupling_from_xibar(xibar: f64, lambda0: f64, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    Ok(xibar * coupling_scale(lambda0, radius))
}

/// `(3/16π³)·(λ₀/R)³`, the coupling per unit ξ̄.
pub fn coupling_scale(lambda0: f64, radius: f64) -> f64 {
    3.0 / (16.0 * PI.powi(3)) * (lambda0 / radius).powi(3)
}

/// Power of `J₁(z*)` in the TE₁₁ normalisation of the deep-waveguide coupling.
/// The printed form `J_1^2(z^*)^2` is read as a single square.
pub const TE11_NORMALISATION_POWER: i32 = 2;

/// Deep perfectly-conducting waveguide coupling
/// `B = 3z*²/(2k₀R(z*² − 1)·J₁(z*)²·√(z*² − k₀²R²))`.
pub fn pec_coupling(k0: f64, radius: f64) -> Result<f64> {
    let z = te11_root().value;
    let kr = k0 * radius;
    if !(kr > 0.0) {
        return Err(Error::domain(format!("k₀R must be positive, got {kr}")));
    }
    if kr >= z {
        return Err(Error::Regime(format!(
            "k₀R = {kr:.6} >= z* = {z:.6}: the TE11 mode propagates, no zero-mode regime"
        )));
    }
    let j1 = bessel_j(1, z)?;
    let z2 = z * z;
    Ok(3.0 * z2 / (2.0 * kr * (z2 - 1.0) * j1.powi(TE11_NORMALISATION_POWER) * (z2 - kr * kr).sqrt()))
}

/// Exact single-mode transmission of a deep ZMW with perfectly conducting
/// walls, physical sign convention.
pub fn pec_deep_transmission(omega: f64, radius: f64, purcell: &PurcellResult) -> Result<f64> {
    pec_deep_transmission_with(omega, radius, purcell, LineshapeConvention::Physical)
}

pub fn pec_deep_transmission_with(
    omega: f64,
    radius: f64,
    purcell: &PurcellResult,
    convention: LineshapeConvention,
) -> Result<f64> {
    if (omega - purcell.omega_tilde).abs() > 1e6 * purcell.gamma_tilde {
        return Err(Error::domain(format!(
            "detuning {:e} rad/s exceeds 1e6 linewidths",
            omega - purcell.omega_tilde
        )));
    }
    let b = pec_coupling(wavenumber(omega), radius)?;
    let model =
        FanoModel::new(purcell.omega_tilde, purcell.gamma_tilde, Complex64::new(b, 0.0))?.with_convention(convention);
    Ok(fano_transmission(omega, &model))
}

/// [`pec_deep_transmission_with`] at a vacuum wavelength, with the detuning
/// formed from wavelength differences.
pub fn pec_deep_transmission_at_wavelength(
    wavelength: f64,
    radius: f64,
    purcell: &PurcellResult,
    convention: LineshapeConvention,
) -> Result<f64> {
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(Error::domain(format!("wavelength must be positive, got {wavelength}")));
    }
    let delta = detuning_from_wavelength(wavelength, purcell.omega_tilde);
    if delta.abs() > 1e6 * purcell.gamma_tilde {
        return Err(Error::domain(format!(
            "detuning {delta:e} rad/s exceeds 1e6 linewidths"
        )));
    }
    let b = pec_coupling(2.0 * PI / wavelength, radius)?;
    let model =
        FanoModel::new(purcell.omega_tilde, purcell.gamma_tilde, Complex64::new(b, 0.0))?.with_convention(convention);
    Ok(fano_at_detuning(delta, &model))
}

/// Dipole orientation relative to the nearest wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WallOrientation {
    PerpendicularToWall,
    ParallelToWall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftWarning {
    /// `R − ρ < R/4`: the estimate diverges near the wall.
    NearWall,
    /// `ρ < R/4`: the estimate is meant for atoms far from the axis.
    NearAxis,
    /// `|Δλ/λ₀| > 1`: far outside the perturbative regime.
    NonPerturbative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftEstimate {
    /// Relative resonance shift `Δλ/λ₀`.
    pub relative_shift: f64,
    pub warnings: Vec<ShiftWarning>,
}

/// Qualitative off-axis splitting
/// `Δλ/λ₀ ≈ (3/4)·Re((ε−1)/(ε+1))·R³/(R−ρ)³` for a dipole perpendicular to
/// the wall, half that for a parallel one. An infinite `eps_wall` (perfect
/// conductor) gives `Re(...) = 1`.
pub fn off_axis_shift(
    rho: f64,
    radius: f64,
    eps_wall: Complex64,
    orientation: WallOrientation,
) -> Result<ShiftEstimate> {
    if !(rho > 0.0 && rho < radius) {
        return Err(Error::domain(format!(
            "off-axis distance {rho} must lie in (0, {radius})"
        )));
    }
    let contrast = if eps_wall.re.is_finite() && eps_wall.im.is_finite() {
        ((eps_wall - 1.0) / (eps_wall + 1.0)).re
    } else {
        1.0
    };
    let prefactor = match orientation {
        WallOrientation::PerpendicularToWall => 0.75,
        WallOrientation::ParallelToWall => 0.375,
    };
    let gap = radius - rho;
    let mut warnings = Vec::new();
    if gap < radius / 4.0 {
        warnings.push(ShiftWarning::NearWall);
    }
    if rho < radius / 4.0 {
        warnings.push(ShiftWarning::NearAxis);
    }
    let relative_shift = prefactor * contrast * (radius / gap).powi(3);
    if relative_shift.abs() > 1.0 {
        warnings.push(ShiftWarning::NonPerturbative);
    }
    if !warnings.is_empty() {
        warn!("off-axis shift at ρ = {rho}, R = {radius} is outside its qualitative range: {warnings:?}");
    }
    Ok(ShiftEstimate {
        relative_shift,
        warnings,
    })
}
