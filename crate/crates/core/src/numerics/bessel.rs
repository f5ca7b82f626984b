//! Cylindrical Bessel functions of the first kind, integer order.
//!
//! Three regimes:
//! * `x <= 5`: the defining power series (cancellation grows quickly beyond).
//! * `5 < x <= 25`: Miller's backward recurrence normalised by
//!   `J0 + 2 Σ J_2k = 1`.
//! * `x > 25`: Hankel asymptotic expansion for `J0`, `J1`, then upward
//!   recurrence (stable while the order stays below `x`).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::{Error, Result};

/// Highest order accepted by [`bessel_j`].
pub const MAX_ORDER: u32 = 10;
/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARGUMENT: f64 = 1e4;

const SERIES_LIMIT: f64 = 5.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J_order(x)` for `0 <= order <= 10`, `0 <= x <= 1e4`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!(
            "Bessel order {order} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    check_argument(x)?;
    Ok(jn(order, x))
}

/// `J_1'(x) = J_0(x) − J_1(x)/x`, with the limit 1/2 at the origin.
pub fn bessel_j1_prime(x: f64) -> Result<f64> {
    check_argument(x)?;
    Ok(j1_prime(x))
}

/// `J_m'(x)` for `m <= 10`.
pub fn bessel_j_prime(order: u32, x: f64) -> Result<f64> {
    if order > MAX_ORDER {
        return Err(Error::domain(format!(
            "Bessel order {order} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    check_argument(x)?;
    Ok(jn_prime(order, x))
}

fn check_argument(x: f64) -> Result<()> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::domain(format!(
            "Bessel argument {x} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(())
}

pub(crate) fn j1_prime(x: f64) -> f64 {
    if x == 0.0 {
        0.5
    } else {
        jn(0, x) - jn(1, x) / x
    }
}

/// Derivative via `J_m' = (J_{m-1} − J_{m+1})/2`; order may reach `MAX_ORDER`.
pub(crate) fn jn_prime(m: u32, x: f64) -> f64 {
    match m {
        0 => -jn(1, x),
        1 => j1_prime(x),
        _ => 0.5 * (jn(m - 1, x) - jn(m + 1, x)),
    }
}

/// Second derivative from Bessel's equation, `x > 0`.
pub(crate) fn jn_second(m: u32, x: f64) -> f64 {
    let mf = f64::from(m);
    -jn_prime(m, x) / x - (1.0 - mf * mf / (x * x)) * jn(m, x)
}

/// Unchecked evaluation; callers guarantee `x >= 0`.
pub(crate) fn jn(n: u32, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series(n, x)
    } else if x <= ASYMPTOTIC_LIMIT {
        miller(n, x)
    } else {
        upward_from_asymptotic(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let q = -half * half;
    let mut sum = term;
    let nf = f64::from(n);
    let mut k = 0.0_f64;
    loop {
        k += 1.0;
        term *= q / (k * (k + nf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > half {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (x as u32).max(n);
    let mut start = top + 20 + (40.0 * f64::from(top)).sqrt() as u32;
    start += start % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    let mut k = start;
    while k > 0 {
        let prev = 2.0 * f64::from(k) / x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if k.is_multiple_of(2) && k > 0 {
            norm += 2.0 * cur;
        }
        if k == n {
            wanted = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

fn upward_from_asymptotic(n: u32, x: f64) -> f64 {
    let j0 = hankel(0, x);
    if n == 0 {
        return j0;
    }
    let mut j1 = hankel(1, x);
    let mut jm1 = j0;
    for k in 1..n {
        let next = 2.0 * f64::from(k) / x * j1 - jm1;
        jm1 = j1;
        j1 = next;
    }
    j1
}

/// Hankel expansion `J_ν(x) = √(2/πx) (P cos χ − Q sin χ)`, `χ = x − (ν/2 + 1/4)π`.
fn hankel(nu: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(nu * nu);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev_abs = f64::INFINITY;
    let eight_x = 8.0 * x;
    for k in 1..200 {
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (f64::from(k) * eight_x);
        let a = term.abs();
        if a > prev_abs {
            break;
        }
        prev_abs = a;
        // k odd feeds Q, k even feeds P, with alternating signs in each.
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if a < 1e-17 * p.abs() {
            break;
        }
    }
    // cos(x − φ), sin(x − φ) expanded to avoid cancellation in x − φ.
    let (s, c) = x.sin_cos();
    let (cos_chi, sin_chi) = if nu == 0 {
        // φ = π/4
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        // φ = 3π/4
        ((s - c) * FRAC_1_SQRT_2, (-s - c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
