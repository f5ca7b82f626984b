//! Evanescent modes of a cylindrical hole with perfectly conducting walls.
//!
//! Only the least-attenuated TE₁₁ mode carries the transmission models; the
//! other roots are available for diagnostics.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::materials::MaterialModel;
use crate::numerics::{mode_root, BesselRoot, ModeFamily};
use crate::units::omega_from_wavelength;
use crate::units::wavenumber;
use crate::{Error, Result};

/// First zero of `J_1'`, the TE₁₁ cutoff `z*`.
pub fn te11_root() -> BesselRoot {
    static ROOT: OnceLock<BesselRoot> = OnceLock::new();
    *ROOT.get_or_init(|| mode_root(ModeFamily::TE, 1, 1).expect("TE11 root is bracketed in (1, 3)"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZmwGeometry {
    /// Hole radius R (nm).
    pub radius: f64,
    /// Film thickness H (nm).
    pub depth: f64,
    pub wall_material: MaterialModel,
}

impl ZmwGeometry {
    pub fn new(radius: f64, depth: f64, wall_material: MaterialModel) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain(format!(
                "waveguide radius must be positive, got {radius}"
            )));
        }
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(Error::domain(format!("waveguide depth must be positive, got {depth}")));
        }
        Ok(ZmwGeometry {
            radius,
            depth,
            wall_material,
        })
    }

    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }
}

/// Scatterer location; `z` is measured from the illuminated entrance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AtomPosition {
    pub fn new(x: f64, y: f64, z: f64, geom: &ZmwGeometry) -> Result<Self> {
        let rho2 = x * x + y * y;
        if !(rho2 < geom.radius * geom.radius) {
            return Err(Error::domain(format!(
                "atom at ρ = {} lies outside the hole of radius {}",
                rho2.sqrt(),
                geom.radius
            )));
        }
        if !(0.0..=geom.depth).contains(&z) {
            return Err(Error::domain(format!("atom depth z = {z} outside [0, {}]", geom.depth)));
        }
        Ok(AtomPosition { x, y, z })
    }

    /// Distance from the waveguide axis.
    pub fn rho(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn on_axis(&self) -> bool {
        self.rho() == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideMode {
    pub root: BesselRoot,
    /// Evanescent decay constant κ (nm⁻¹); zero when propagating.
    pub kappa: f64,
    /// L = 1/κ (nm); infinite when propagating.
    pub decay_length: f64,
    pub propagating: bool,
}

/// `κ = √((z/R)² − k₀²)` below cutoff; the cutoff itself counts as propagating.
pub fn mode_propagation(geom: &ZmwGeometry, wavelength: f64, root: BesselRoot) -> WaveguideMode {
    mode_at_wavenumber(geom.radius, wavenumber(omega_from_wavelength(wavelength)), root)
}

/// [`mode_propagation`] with the vacuum wavenumber `k0` (nm⁻¹) given directly.
pub fn mode_at_wavenumber(radius: f64, k0: f64, root: BesselRoot) -> WaveguideMode {
    let kc = root.value / radius;
    let propagating = k0 * radius >= root.value;
    if propagating {
        WaveguideMode {
            root,
            kappa: 0.0,
            decay_length: f64::INFINITY,
            propagating,
        }
    } else {
        let kappa = ((kc - k0) * (kc + k0)).sqrt();
        WaveguideMode {
            root,
            kappa,
            decay_length: 1.0 / kappa,
            propagating,
        }
    }
}

/// Exciting-field amplitude at depth `z`: `E₀·e^{−z/L}`.
pub fn field_decay(e0: f64, z: f64, decay_length: f64) -> f64 {
    e0 * (-z / decay_length).exp()
}

/// Field scattered into the TE₁₁ mode by a dipole at `z_a`, evaluated at the
/// exit `z = H`: `C₁₁·α·E₀·e^{−z_a/L}·e^{−(H−z_a)/L}`.
///
/// `c11` is the (opaque) TE₁₁ coefficient of the mode expansion of the
/// Green function. Requires `0 <= z_a <= h`.
pub fn scattered_field_at_exit(
    alpha: Complex64,
    c11: Complex64,
    e0: f64,
    z_a: f64,
    h: f64,
    decay_length: f64,
) -> Complex64 {
    debug_assert!((0.0..=h).contains(&z_a), "z_a = {z_a} outside [0, {h}]");
    let arrive = (-z_a / decay_length).exp();
    let leave = (-(h - z_a) / decay_length).exp();
    c11 * alpha * (e0 * arrive * leave)
}

/// True iff every mode is evanescent, `k₀R < z*(TE₁₁)`.
pub fn is_zero_mode(geom: &ZmwGeometry, wavelength: f64) -> bool {
    !mode_propagation(geom, wavelength, te11_root()).propagating
}
