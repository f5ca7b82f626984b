//! Physical constants and unit conversions (nm, rad/s, SI where noted).

use std::f64::consts::PI;

/// Speed of light in nm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e17;

/// Planck constant in J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Angular frequency (rad/s) of vacuum light with the given wavelength (nm).
pub fn omega_from_wavelength(wavelength_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength_nm
}

/// Vacuum wavelength (nm) of light with angular frequency `omega` (rad/s).
pub fn wavelength_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega
}

/// Vacuum wavenumber k₀ = ω/c in nm⁻¹.
pub fn wavenumber(omega: f64) -> f64 {
    omega / SPEED_OF_LIGHT
}
