//! Sampled transmission spectra and their CSV form.
//!
//! CSV layout: header `wavelength_nm,transmission`, one row per sample,
//! numbers with 17 significant digits, `\n` line endings.

use std::fmt::Write as _;

use crate::{Error, Execution, Result};

pub const CSV_HEADER: &str = "wavelength_nm,transmission";

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    points: Vec<(f64, f64)>,
}

impl Spectrum {
    /// Wavelengths must be strictly increasing; values finite and non-negative.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::domain("spectrum wavelengths must be strictly increasing"));
        }
        if let Some((w, v)) = points
            .iter()
            .find(|(w, v)| !w.is_finite() || !v.is_finite() || *v < 0.0)
        {
            return Err(Error::domain(format!("invalid spectrum sample ({w}, {v})")));
        }
        Ok(Spectrum { points })
    }

    /// Evaluate `f` on every wavelength of `grid`, in grid order.
    pub fn evaluate<F>(grid: &[f64], exec: Execution, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync + Send,
    {
        let values = exec.try_map(grid, |&w| f(w))?;
        Spectrum::new(grid.iter().copied().zip(values).collect())
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn wavelengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * (self.points.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (w, v) in &self.points {
            let _ = writeln!(out, "{w:.16e},{v:.16e}");
        }
        out
    }

    /// Parse CSV written by [`Spectrum::to_csv`]. A header line is optional;
    /// blank lines and `#` comments are skipped.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if points.is_empty() && line.replace(' ', "") == CSV_HEADER {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let parse = |f: Option<&str>| -> Result<f64> {
                let f = f.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "expected 2 columns".into(),
                })?;
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("'{f}' is not a number"),
                })
            };
            let w = parse(fields.next())?;
            let v = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected 2 columns".into(),
                });
            }
            if !w.is_finite() || !v.is_finite() || v < 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("invalid sample ({w}, {v})"),
                });
            }
            if let Some(&(prev, _)) = points.last() {
                if !(w > prev) {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("wavelength {w} does not increase"),
                    });
                }
            }
            points.push((w, v));
        }
        Spectrum::new(points)
    }
}

/// `points` evenly spaced wavelengths from `min` to `max` inclusive.
pub fn wavelength_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0) || !(max > min) || !max.is_finite() {
        return Err(Error::domain(format!("invalid wavelength range [{min}, {max}]")));
    }
    if points < 2 {
        return Err(Error::domain("a wavelength grid needs at least 2 points"));
    }
    let step = (max - min) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| min + step * i as f64).collect();
    grid[points - 1] = max;
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("wavelength grid spacing below floating-point resolution"));
    }
    Ok(grid)
}
