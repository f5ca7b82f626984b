use crate::units::PLANCK;
use crate::{Error, Result};

/// The de Broglie wavelength must stay below this fraction of the film
/// thickness for the atom's motion to count as classical.
pub const CLASSICAL_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityInput {
    /// Film thickness H (nm).
    pub depth: f64,
    /// Atom speed (m/s).
    pub speed: f64,
    /// Excited-state lifetime τ₀ (s).
    pub lifetime: f64,
    /// Atomic mass (kg).
    pub mass: f64,
}

impl FeasibilityInput {
    pub fn new(depth: f64, speed: f64, lifetime: f64, mass: f64) -> Result<Self> {
        for (name, v) in [
            ("depth", depth),
            ("speed", speed),
            ("lifetime", lifetime),
            ("mass", mass),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(FeasibilityInput {
            depth,
            speed,
            lifetime,
            mass,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// Transit time H/V (s).
    pub dwell_time: f64,
    /// Transit time exceeds the radiative lifetime.
    pub dwell_ok: bool,
    /// h/(mV) in nm.
    pub de_broglie: f64,
    /// de Broglie wavelength below `CLASSICAL_FRACTION · H`.
    pub classical_ok: bool,
}

pub fn feasibility(input: &FeasibilityInput) -> FeasibilityReport {
    let dwell_time = input.depth / (input.speed * 1e9);
    let de_broglie = PLANCK / (input.mass * input.speed) * 1e9;
    FeasibilityReport {
        dwell_time,
        dwell_ok: dwell_time > input.lifetime,
        de_broglie,
        classical_ok: de_broglie < CLASSICAL_FRACTION * input.depth,
    }
}
