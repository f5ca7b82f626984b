//! Cutoff roots of a circular waveguide with perfectly conducting walls:
//! zeros of `J_m'` (TE modes) and of `J_m` (TM modes).

use std::fmt;

use super::bessel::{jn, jn_prime, jn_second};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeFamily {
    /// Transverse electric: cutoff at zeros of `J_m'`.
    TE,
    /// Transverse magnetic: cutoff at zeros of `J_m`.
    TM,
}

impl fmt::Display for ModeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeFamily::TE => f.write_str("TE"),
            ModeFamily::TM => f.write_str("TM"),
        }
    }
}

/// The `n`-th positive root of the cutoff function of mode family `(family, m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselRoot {
    pub family: ModeFamily,
    pub azimuthal_index: u32,
    pub radial_index: u32,
    pub value: f64,
}

impl fmt::Display for BesselRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{} = {:.10}",
            self.family, self.azimuthal_index, self.radial_index, self.value
        )
    }
}

const MAX_INDEX: u32 = 5;
const SEARCH_MAX: f64 = 30.0;
const SCAN_STEP: f64 = 0.05;
const BRACKET_WIDTH: f64 = 1e-13;
const RESIDUAL_TOL: f64 = 1e-12;

fn cutoff_fn(family: ModeFamily, m: u32, x: f64) -> f64 {
    match family {
        ModeFamily::TE => jn_prime(m, x),
        ModeFamily::TM => jn(m, x),
    }
}

fn cutoff_slope(family: ModeFamily, m: u32, x: f64) -> f64 {
    match family {
        ModeFamily::TE => jn_second(m, x),
        ModeFamily::TM => jn_prime(m, x),
    }
}

/// Locate the `n`-th cutoff root in `(0, 30]` by scanning for a sign change,
/// bisecting to width 1e-13 and applying one Newton polish.
pub fn mode_root(family: ModeFamily, m: u32, n: u32) -> Result<BesselRoot> {
    if m > MAX_INDEX || n == 0 || n > MAX_INDEX {
        return Err(Error::domain(format!(
            "mode indices (m={m}, n={n}) outside m <= {MAX_INDEX}, 1 <= n <= {MAX_INDEX}"
        )));
    }
    let (lo, hi) = bracket(family, m, n)
        .ok_or_else(|| Error::Convergence(format!("no bracket for root {n} of {family}{m} in (0, {SEARCH_MAX}]")))?;
    let value = refine(family, m, lo, hi);
    let residual = cutoff_fn(family, m, value);
    if residual.abs() > RESIDUAL_TOL {
        return Err(Error::Convergence(format!(
            "{family}{m}{n}: residual {residual:e} at {value}"
        )));
    }
    Ok(BesselRoot {
        family,
        azimuthal_index: m,
        radial_index: n,
        value,
    })
}

fn bracket(family: ModeFamily, m: u32, n: u32) -> Option<(f64, f64)> {
    // Start just off the origin: J_m (m >= 1) and J_0' vanish there.
    let mut a = SCAN_STEP * 0.2;
    let mut fa = cutoff_fn(family, m, a);
    let mut found = 0;
    while a < SEARCH_MAX {
        let b = (a + SCAN_STEP).min(SEARCH_MAX);
        let fb = cutoff_fn(family, m, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == n {
                return Some((a, b));
            }
        }
        a = b;
        fa = fb;
    }
    None
}

fn refine(family: ModeFamily, m: u32, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = cutoff_fn(family, m, lo);
    if flo == 0.0 {
        return lo;
    }
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = cutoff_fn(family, m, mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let slope = cutoff_slope(family, m, x);
    if slope != 0.0 {
        let polished = x - cutoff_fn(family, m, x) / slope;
        if (lo - BRACKET_WIDTH..=hi + BRACKET_WIDTH).contains(&polished)
            && cutoff_fn(family, m, polished).abs() <= cutoff_fn(family, m, x).abs()
        {
            return polished;
        }
    }
    x
}
