//! Resonant scatterers inside the waveguide: polarizabilities of a two-level
//! atom and of a Drude meta-atom, the free-space Green tensor, and the
//! environment-induced shift and broadening of the resonance.
//!
//! Sign convention: with `e^{-iωt}` time dependence every Lorentzian
//! denominator is written `ω₀ − ω − iΓ/2`, so `Im α > 0` on resonance.
//! This is the sign obtained by expanding the Drude sphere polarizability
//! near its Fröhlich frequency.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::materials::drude_permittivity;
use crate::units::{omega_from_wavelength, wavenumber};
use crate::{Error, Result};

/// Size parameter `k·R_A` above which the quasistatic sphere model is flagged.
pub const QUASISTATIC_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    /// Transition angular frequency ω₀ (rad/s).
    pub omega0: f64,
    /// Free-space linewidth Γ₀ (rad/s).
    pub gamma0: f64,
    /// Unit vector along the transition dipole.
    pub orientation: [f64; 3],
}

impl TwoLevelAtom {
    pub fn new(omega0: f64, gamma0: f64, orientation: [f64; 3]) -> Result<Self> {
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::domain(format!("omega0 must be positive, got {omega0}")));
        }
        if !(gamma0 > 0.0) || !gamma0.is_finite() {
            return Err(Error::domain(format!("gamma0 must be positive, got {gamma0}")));
        }
        let norm = orientation.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "orientation must be a unit vector, |m| = {norm}"
            )));
        }
        if gamma0 > 0.01 * omega0 {
            warn!(
                "linewidth Γ₀/ω₀ = {:.3e} is not small; Lorentzian model is questionable",
                gamma0 / omega0
            );
        }
        Ok(TwoLevelAtom {
            omega0,
            gamma0,
            orientation,
        })
    }

    /// Atom resonant at `wavelength_nm` with `Γ₀ = linewidth_rel·ω₀`, dipole along x.
    pub fn from_wavelength(wavelength_nm: f64, linewidth_rel: f64) -> Result<Self> {
        let omega0 = omega_from_wavelength(wavelength_nm);
        TwoLevelAtom::new(omega0, linewidth_rel * omega0, [1.0, 0.0, 0.0])
    }
}

/// Small Drude sphere standing in for an atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetaAtom {
    /// Sphere radius R_A (nm).
    pub radius: f64,
    /// Drude plasma frequency ω_pl (rad/s).
    pub plasma_frequency: f64,
}

impl MetaAtom {
    pub fn new(radius: f64, plasma_frequency: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::domain(format!(
                "meta-atom radius must be positive, got {radius}"
            )));
        }
        if !(plasma_frequency > 0.0) || !plasma_frequency.is_finite() {
            return Err(Error::domain(format!(
                "plasma frequency must be positive, got {plasma_frequency}"
            )));
        }
        let ma = MetaAtom {
            radius,
            plasma_frequency,
        };
        let kr = ma.size_parameter(ma.resonance_frequency());
        if kr > QUASISTATIC_LIMIT {
            warn!("meta-atom size parameter kR = {kr:.3} at resonance exceeds {QUASISTATIC_LIMIT}");
        }
        Ok(ma)
    }

    /// Meta-atom of the given radius whose Fröhlich resonance sits at `wavelength_nm`.
    pub fn resonant_at(radius: f64, wavelength_nm: f64) -> Result<Self> {
        MetaAtom::new(radius, 3f64.sqrt() * omega_from_wavelength(wavelength_nm))
    }

    /// ω_pl/√3, where `ε = −2`.
    pub fn resonance_frequency(&self) -> f64 {
        self.plasma_frequency / 3f64.sqrt()
    }

    /// `k·R_A` at angular frequency `omega`.
    pub fn size_parameter(&self, omega: f64) -> f64 {
        wavenumber(omega) * self.radius
    }

    pub fn is_quasistatic(&self, omega: f64) -> bool {
        self.size_parameter(omega) <= QUASISTATIC_LIMIT
    }
}

/// Resonance parameters after coupling to the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurcellResult {
    pub omega_tilde: f64,
    pub gamma_tilde: f64,
    /// True when the raw linewidth came out negative and was clamped to 0.
    pub clamped: bool,
}

impl PurcellResult {
    /// No environment: the bare resonance.
    pub fn free(atom: &TwoLevelAtom) -> Self {
        PurcellResult {
            omega_tilde: atom.omega0,
            gamma_tilde: atom.gamma0,
            clamped: false,
        }
    }
}

/// A projected Green-tensor component such as `m·G^R·m` or `G_⊥` (nm⁻³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenComponent(Complex64);

impl GreenComponent {
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::domain(format!("Green component must be finite, got {value}")));
        }
        Ok(GreenComponent(value))
    }

    pub fn zero() -> Self {
        GreenComponent(Complex64::new(0.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Lorentzian polarizability `(3/4k₀³)·Γ₀/(ω₀ − ω − iΓ₀/2)` in nm³, `k₀ = ω/c`.
pub fn atom_polarizability(omega: f64, atom: &TwoLevelAtom) -> Complex64 {
    lorentzian_polarizability(omega, atom.omega0, atom.gamma0)
}

pub(crate) fn lorentzian_polarizability(omega: f64, omega0: f64, gamma: f64) -> Complex64 {
    let k = wavenumber(omega);
    let prefactor = 3.0 / (4.0 * k * k * k);
    prefactor * gamma / Complex64::new(omega0 - omega, -0.5 * gamma)
}

/// Resonant scattering cross-section `(3/2π)·λ₀²` (nm²).
pub fn resonant_cross_section(lambda0: f64) -> f64 {
    3.0 / (2.0 * PI) * lambda0 * lambda0
}

/// Quasistatic sphere polarizability with radiative correction,
/// `R_A³(ε − 1)/(ε + 2 + 2i(kR_A)³)`, ε from the lossless Drude law.
pub fn meta_atom_polarizability(omega: f64, ma: &MetaAtom) -> Complex64 {
    let kr = ma.size_parameter(omega);
    if kr > QUASISTATIC_LIMIT {
        warn!("meta-atom size parameter kR = {kr:.3} exceeds {QUASISTATIC_LIMIT}");
    }
    let eps = match drude_permittivity(omega, ma.plasma_frequency) {
        Ok(e) => e,
        Err(_) => return Complex64::new(f64::NAN, f64::NAN),
    };
    let r3 = ma.radius.powi(3);
    r3 * (eps - 1.0) / (eps + 2.0 + Complex64::new(0.0, 2.0 * kr.powi(3)))
}

/// Equivalent Lorentzian `(ω₀, Γ)` of a meta-atom: `ω₀ = ω_pl/√3`,
/// `Γ = ω_pl·2(kR_A)³/(3√3)` with `k = ω/c`.
pub fn meta_atom_lorentzian_params(ma: &MetaAtom, omega: f64) -> (f64, f64) {
    let kr = ma.size_parameter(omega);
    let sqrt3 = 3f64.sqrt();
    (
        ma.plasma_frequency / sqrt3,
        ma.plasma_frequency * 2.0 * kr.powi(3) / (3.0 * sqrt3),
    )
}

/// Shift and broadening from the reflected Green component `g = m·G^R·m`:
/// `ω̃₀ = ω₀ − (3Γ₀/4k₀³)·Re g`, `Γ̃ = Γ₀(1 + (3/2k₀³)·Im g)`.
/// A negative `Γ̃` (unphysical `g`) is clamped to zero with a warning.
pub fn purcell_modify(atom: &TwoLevelAtom, k0: f64, g: GreenComponent) -> PurcellResult {
    let k3 = k0 * k0 * k0;
    let g = g.value();
    let omega_tilde = atom.omega0 - 3.0 * atom.gamma0 / (4.0 * k3) * g.re;
    let raw = atom.gamma0 * (1.0 + 3.0 / (2.0 * k3) * g.im);
    let clamped = raw < 0.0;
    if clamped {
        warn!(
            "Purcell-modified linewidth {raw:e} is negative; clamping to 0 (Im g = {:e})",
            g.im
        );
    }
    PurcellResult {
        omega_tilde,
        gamma_tilde: raw.max(0.0),
        clamped,
    }
}

pub type Tensor3 = [[Complex64; 3]; 3];

/// Free-space Green tensor
/// `G_ij = [k₀²(δ_ij − n_i n_j)/r + (3n_i n_j − δ_ij)(1 − ik₀r)/r³]·e^{ik₀r}`.
pub fn free_space_green(r: [f64; 3], k0: f64) -> Result<Tensor3> {
    let (far, near) = free_space_green_parts(r, k0)?;
    let mut g = far;
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] += near[i][j];
        }
    }
    Ok(g)
}

/// The transverse `1/r` (radiation) part and the remaining `1/r³` part of
/// [`free_space_green`].
pub fn free_space_green_parts(r: [f64; 3], k0: f64) -> Result<(Tensor3, Tensor3)> {
    let dist = r.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(dist > 0.0) {
        return Err(Error::Singularity("free-space Green tensor at r = 0".into()));
    }
    let n = [r[0] / dist, r[1] / dist, r[2] / dist];
    let phase = Complex64::new(0.0, k0 * dist).exp();
    let far_scale = phase * (k0 * k0 / dist);
    let near_scale = phase * Complex64::new(1.0, -k0 * dist) / dist.powi(3);
    let zero = Complex64::new(0.0, 0.0);
    let mut far = [[zero; 3]; 3];
    let mut near = [[zero; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            let nn = n[i] * n[j];
            far[i][j] = far_scale * (delta - nn);
            near[i][j] = near_scale * (3.0 * nn - delta);
        }
    }
    Ok((far, near))
}

/// Dressed polarizability `1/(1/α₀ − g)`.
pub fn effective_polarizability(alpha0: Complex64, g: GreenComponent) -> Result<Complex64> {
    if alpha0.norm() == 0.0 {
        return Err(Error::domain("bare polarizability must be nonzero"));
    }
    let denom = alpha0.inv() - g.value();
    if denom.norm() < f64::MIN_POSITIVE {
        return Err(Error::Singularity("effective polarizability pole".into()));
    }
    Ok(denom.inv())
}
