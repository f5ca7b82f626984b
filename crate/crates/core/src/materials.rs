//! Permittivity models for the meta-atom and the waveguide walls.

use std::path::Path;

use num_complex::Complex64;

use crate::units::omega_from_wavelength;
use crate::{Error, Result};

/// Complex permittivity as a function of vacuum wavelength.
#[derive(Debug, Clone, PartialEq)]
pub enum MaterialModel {
    /// `ε → −∞`; reported as `(−∞, 0)`.
    PerfectConductor,
    /// Lossless Drude metal, `ε = 1 − ω_pl²/ω²`.
    Drude {
        plasma_frequency: f64,
    },
    Tabulated(DispersionTable),
}

impl MaterialModel {
    pub fn drude(plasma_frequency: f64) -> Result<Self> {
        if !(plasma_frequency > 0.0) || !plasma_frequency.is_finite() {
            return Err(Error::domain(format!(
                "plasma frequency must be positive, got {plasma_frequency}"
            )));
        }
        Ok(MaterialModel::Drude { plasma_frequency })
    }

    pub fn permittivity(&self, wavelength_nm: f64) -> Result<Complex64> {
        match self {
            MaterialModel::PerfectConductor => Ok(Complex64::new(f64::NEG_INFINITY, 0.0)),
            MaterialModel::Drude { plasma_frequency } => {
                if !(wavelength_nm > 0.0) {
                    return Err(Error::domain(format!(
                        "wavelength must be positive, got {wavelength_nm}"
                    )));
                }
                drude_permittivity(omega_from_wavelength(wavelength_nm), *plasma_frequency)
            }
            MaterialModel::Tabulated(table) => table.interpolate(wavelength_nm),
        }
    }
}

/// Lossless Drude permittivity `1 − ω_pl²/ω²` (purely real).
pub fn drude_permittivity(omega: f64, omega_pl: f64) -> Result<Complex64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!(
            "angular frequency must be positive, got {omega}"
        )));
    }
    let r = omega_pl / omega;
    Ok(Complex64::new(1.0 - r * r, 0.0))
}

/// Interpolate a tabulated model; other kinds are rejected.
pub fn tabulated_permittivity(model: &MaterialModel, wavelength_nm: f64) -> Result<Complex64> {
    match model {
        MaterialModel::Tabulated(table) => table.interpolate(wavelength_nm),
        other => Err(Error::domain(format!("{other:?} is not a tabulated material"))),
    }
}

/// Rows of `(wavelength nm, ε)` sorted by strictly increasing wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    rows: Vec<(f64, Complex64)>,
}

impl DispersionTable {
    pub fn new(rows: Vec<(f64, Complex64)>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::domain("a dispersion table needs at least 2 rows"));
        }
        if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::domain("table wavelengths must be strictly increasing"));
        }
        if rows
            .iter()
            .any(|(w, e)| !w.is_finite() || !e.re.is_finite() || !e.im.is_finite())
        {
            return Err(Error::domain("table entries must be finite"));
        }
        Ok(DispersionTable { rows })
    }

    /// Parse the comma-separated format: `wavelength_nm, eps_real, eps_imag`
    /// per line, `#` comment lines and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut last: Option<(usize, f64)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 comma-separated columns, found {}", fields.len()),
                });
            }
            let mut nums = [0.0; 3];
            for (slot, field) in nums.iter_mut().zip(&fields) {
                *slot = field.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("'{field}' is not a number"),
                })?;
                if !slot.is_finite() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("'{field}' is not finite"),
                    });
                }
            }
            if let Some((prev_line, prev)) = last {
                if !(nums[0] > prev) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "wavelength {} is not greater than {} on line {}",
                            nums[0], prev, prev_line
                        ),
                    });
                }
            }
            last = Some((line_no, nums[0]));
            rows.push((nums[0], Complex64::new(nums[1], nums[2])));
        }
        DispersionTable::new(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        DispersionTable::parse(&text)
    }

    pub fn rows(&self) -> &[(f64, Complex64)] {
        &self.rows
    }

    pub fn range(&self) -> (f64, f64) {
        (self.rows[0].0, self.rows[self.rows.len() - 1].0)
    }

    /// Linear interpolation in wavelength, real and imaginary parts independently.
    pub fn interpolate(&self, wavelength_nm: f64) -> Result<Complex64> {
        let (min, max) = self.range();
        if !(min..=max).contains(&wavelength_nm) {
            return Err(Error::Range {
                what: "wavelength_nm",
                value: wavelength_nm,
                min,
                max,
            });
        }
        let i = self.rows.partition_point(|(w, _)| *w <= wavelength_nm);
        if i == self.rows.len() {
            return Ok(self.rows[i - 1].1);
        }
        let (w0, e0) = self.rows[i - 1];
        let (w1, e1) = self.rows[i];
        if wavelength_nm == w0 {
            return Ok(e0);
        }
        let t = (wavelength_nm - w0) / (w1 - w0);
        Ok(e0 + (e1 - e0) * t)
    }
}
