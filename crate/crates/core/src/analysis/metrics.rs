use std::f64::consts::PI;

use crate::{Error, Result, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumMetrics {
    pub peak: f64,
    pub peak_wavelength: f64,
    pub minimum: f64,
    pub min_wavelength: f64,
    /// `−log₁₀(minimum/baseline)`.
    pub blocking_orders: f64,
    /// No-atom transmission level the blocking is measured against.
    pub baseline: f64,
}

/// Grid extrema refined by a three-point parabola when interior. The
/// no-atom level is estimated as the geometric mean of the two end samples.
pub fn spectrum_metrics(spectrum: &Spectrum) -> Result<SpectrumMetrics> {
    let pts = spectrum.points();
    if pts.is_empty() {
        return Err(Error::domain("spectrum is empty"));
    }
    let (first, last) = (pts[0].1, pts[pts.len() - 1].1);
    let baseline = if first > 0.0 && last > 0.0 {
        (first * last).sqrt()
    } else {
        0.5 * (first + last)
    };
    spectrum_metrics_with_baseline(spectrum, baseline)
}

/// [`spectrum_metrics`] with a known no-atom level.
pub fn spectrum_metrics_with_baseline(spectrum: &Spectrum, baseline: f64) -> Result<SpectrumMetrics> {
    let pts = spectrum.points();
    if pts.is_empty() {
        return Err(Error::domain("spectrum is empty"));
    }
    if !(baseline >= 0.0) || !baseline.is_finite() {
        return Err(Error::domain(format!(
            "baseline must be finite and non-negative, got {baseline}"
        )));
    }
    let imax = argbest(pts, |a, b| a > b);
    let imin = argbest(pts, |a, b| a < b);
    let (peak_wavelength, peak) = refine(pts, imax, true);
    let (min_wavelength, minimum) = refine(pts, imin, false);
    let blocking_orders = if minimum == baseline {
        0.0
    } else if minimum > 0.0 && baseline > 0.0 {
        -(minimum / baseline).log10()
    } else {
        f64::INFINITY
    };
    Ok(SpectrumMetrics {
        peak,
        peak_wavelength,
        minimum,
        min_wavelength,
        blocking_orders,
        baseline,
    })
}

fn argbest(pts: &[(f64, f64)], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, p) in pts.iter().enumerate().skip(1) {
        if better(p.1, pts[best].1) {
            best = i;
        }
    }
    best
}

fn refine(pts: &[(f64, f64)], i: usize, is_max: bool) -> (f64, f64) {
    let grid = pts[i];
    if i == 0 || i + 1 == pts.len() {
        return grid;
    }
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    let (x2, y2) = pts[i + 1];
    let d10 = x1 - x0;
    let d12 = x1 - x2;
    let denom = d10 * (y1 - y2) - d12 * (y1 - y0);
    if denom == 0.0 {
        return grid;
    }
    let xv = x1 - 0.5 * (d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0)) / denom;
    if !(x0..=x2).contains(&xv) {
        return grid;
    }
    // Lagrange form of the interpolating parabola at the vertex.
    let yv = y0 * (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    let improves = if is_max { yv >= y1 } else { yv <= y1 };
    if improves && yv.is_finite() && yv >= 0.0 {
        (xv, yv)
    } else {
        grid
    }
}

/// Collection area `peak_ratio·πR²` (nm²) implied by a transmission ratio.
pub fn effective_cross_section(peak_ratio: f64, radius: f64) -> Result<f64> {
    if !(peak_ratio >= 0.0) {
        return Err(Error::domain(format!(
            "peak ratio must be non-negative, got {peak_ratio}"
        )));
    }
    Ok(peak_ratio * PI * radius * radius)
}
