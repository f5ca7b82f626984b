//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! (with the individual checks underneath) and exits non-zero if any fails.
//!
//! Run with `cargo test -p zmw-cli --test acceptance`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use tempfile::TempDir;
use zmw_core::analysis::{
    effective_cross_section, extract_xibar, feasibility, fit_fano, spectrum_metrics_with_baseline, FanoFitResult,
    FeasibilityInput,
};
use zmw_core::materials::MaterialModel;
use zmw_core::numerics::{bessel_j, bessel_j1_prime, mode_root, ModeFamily};
use zmw_core::polarizability::{
    atom_polarizability, meta_atom_lorentzian_params, meta_atom_polarizability, resonant_cross_section, MetaAtom,
    PurcellResult, TwoLevelAtom,
};
use zmw_core::spectrum::wavelength_grid;
use zmw_core::transmission::{
    fano_coupling_from_xibar, fano_transmission, fano_transmission_at_wavelength, off_axis_shift, pec_coupling,
    pec_deep_transmission_at_wavelength, FanoModel, LineshapeConvention, WallOrientation,
};
use zmw_core::units::{omega_from_wavelength, wavelength_from_omega};
use zmw_core::waveguide::{field_decay, mode_propagation, scattered_field_at_exit, te11_root, ZmwGeometry};
use zmw_core::{Execution, Spectrum};

const C_NM_PER_S: f64 = 2.997_924_58e17;
/// 86.909180527 u.
const RB87_MASS_KG: f64 = 86.909_180_527 * 1.660_539_066_60e-27;

type Criterion = fn(&mut Checks);

struct Check {
    what: String,
    pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn within(&mut self, what: &str, observed: f64, expected: f64, tol: f64) {
        let pass = (observed - expected).abs() <= tol;
        self.0.push(Check {
            what: format!("{what}: {} (expected {expected} ± {tol:e})", show(observed)),
            pass,
        });
    }

    fn relative(&mut self, what: &str, observed: f64, expected: f64, tol: f64) {
        let err = (observed / expected - 1.0).abs();
        self.0.push(Check {
            what: format!("{what}: {observed:.10e} vs {expected:.10e} (rel {err:.2e} <= {tol:e})"),
            pass: err <= tol,
        });
    }

    fn holds(&mut self, what: impl Into<String>, pass: bool) {
        self.0.push(Check {
            what: what.into(),
            pass,
        });
    }
}

fn show(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.3e}")
    } else {
        format!("{x:.10}")
    }
}

/// `|1 + A/(s+i)|² = ((s+A)²+1)/(s²+1)` scanned on `n` points of `[−span, span]`.
fn dense_scan(a: f64, n: usize, span: f64) -> (f64, f64) {
    let (mut max, mut min) = (f64::MIN, f64::MAX);
    for i in 0..n {
        let s = -span + 2.0 * span * i as f64 / (n - 1) as f64;
        let v = ((s + a).powi(2) + 1.0) / (s * s + 1.0);
        max = max.max(v);
        min = min.min(v);
    }
    (max, min)
}

fn free(lambda0: f64, rel: f64) -> PurcellResult {
    let w = omega_from_wavelength(lambda0);
    PurcellResult {
        omega_tilde: w,
        gamma_tilde: rel * w,
        clamped: false,
    }
}

fn window(p: &PurcellResult, half_span_gammas: f64, points: usize) -> Vec<f64> {
    let lo = wavelength_from_omega(p.omega_tilde + half_span_gammas * p.gamma_tilde);
    let hi = wavelength_from_omega(p.omega_tilde - half_span_gammas * p.gamma_tilde);
    wavelength_grid(lo, hi, points).unwrap()
}

fn fano_spectrum(m: &FanoModel, half_span_gammas: f64, points: usize) -> Spectrum {
    let p = free(wavelength_from_omega(m.omega_tilde), m.gamma_tilde / m.omega_tilde);
    Spectrum::evaluate(&window(&p, half_span_gammas, points), Execution::default(), |w| {
        Ok(fano_transmission_at_wavelength(w, m))
    })
    .unwrap()
}

fn xibar_model(xibar: f64) -> FanoModel {
    FanoModel::from_xibar(&free(532.0, 1e-7), xibar, 532.0, 50.0).unwrap()
}

fn criterion_1(c: &mut Checks) {
    let start = Instant::now();
    let m = xibar_model(1.0);
    let a = m.coupling.re;
    c.within(
        "T at exact resonance",
        fano_transmission(m.omega_tilde, &m),
        54.06,
        0.05,
    );
    let metrics = spectrum_metrics_with_baseline(&fano_spectrum(&m, 20.0, 4001), 1.0).unwrap();
    let (scan_max, _) = dense_scan(a, 1_000_000, 60.0);
    c.within("peak over detuning", metrics.peak, 55.04, 0.05);
    c.within("dense-scan oracle peak", scan_max, 55.04, 0.05);
    c.within("peak vs oracle", metrics.peak, scan_max, 0.01);
    c.holds(
        format!("peak/50 = {:.3} within a factor 1.2", metrics.peak / 50.0),
        (1.0 / 1.2..=1.2).contains(&(metrics.peak / 50.0)),
    );
    let elapsed = start.elapsed();
    c.holds(format!("runtime {elapsed:?} < 1 s"), elapsed < Duration::from_secs(1));
}

fn zmw(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_zmw"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("zmw binary runs")
}

const CONFIG: &str = "\
geometry.radius_nm = 50
geometry.depth_nm = 100
atom.resonance_wavelength_nm = 532
atom.linewidth_rel = 1e-7
model.xibar = 1
scan.lambda_min_nm = 531.999
scan.lambda_max_nm = 532.001
scan.points = 501
output.path = out.csv
";

fn criterion_2(c: &mut Checks) {
    let k0 = 2.0 * PI / 532.0;
    let z: f64 = 1.841_183_781_3;
    let j1: f64 = 0.581_865;
    let kr = k0 * 50.0;
    let oracle = 3.0 * z * z / (2.0 * kr * (z * z - 1.0) * j1 * j1 * (z * z - kr * kr).sqrt());
    let b = pec_coupling(k0, 50.0).unwrap();
    c.within("B(R = 50 nm)", b, 6.103, 0.005);
    c.within("B vs direct evaluation", b, oracle, 1e-5);
    let p = free(532.0, 1e-7);
    let s = Spectrum::evaluate(&window(&p, 20.0, 4001), Execution::default(), |w| {
        pec_deep_transmission_at_wavelength(w, 50.0, &p, LineshapeConvention::Physical)
    })
    .unwrap();
    let peak = spectrum_metrics_with_baseline(&s, 1.0).unwrap().peak;
    c.within("peak transmission", peak, 39.2, 0.1);

    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("run.cfg"),
        format!("{CONFIG}model.kind = pec_deep_eq10\n"),
    )
    .unwrap();
    let o = zmw(
        dir.path(),
        &["sweep", "run.cfg", "--axis", "depth", "--values", "50,100,400,1000"],
    );
    let rows: Vec<String> = fs::read_to_string(dir.path().join("out_depth_summary.csv"))
        .unwrap_or_default()
        .lines()
        .skip(1)
        .map(|l| l.split_once(',').map_or(String::new(), |(_, rest)| rest.to_string()))
        .collect();
    c.holds(
        "depth sweep 50..1000 nm gives identical summary rows",
        o.status.success() && rows.len() == 4 && rows.windows(2).all(|w| w[0] == w[1]),
    );
}

fn criterion_3(c: &mut Checks) {
    let m = xibar_model(1.0);
    let metrics = spectrum_metrics_with_baseline(&fano_spectrum(&m, 20.0, 4001), 1.0).unwrap();
    c.within("minimum, ξ̄ = 1", metrics.minimum, 0.0182, 0.0005);
    c.holds(
        format!(
            "blocking {:.3} >= 1.7 orders against the no-atom level",
            metrics.blocking_orders
        ),
        metrics.blocking_orders >= 1.7,
    );
    let (_, scan_min) = dense_scan(xibar_model(2.0).coupling.re, 1_000_000, 60.0);
    c.holds(
        format!("minimum, ξ̄ = 2 (dense scan): {scan_min:.6} <= 0.005"),
        scan_min <= 0.005,
    );
}

fn criterion_4(c: &mut Checks) {
    for a in [0.5, 2.0, 7.284, 14.57, 50.0] {
        let m = FanoModel::new(
            omega_from_wavelength(532.0),
            1e-6 * omega_from_wavelength(532.0),
            Complex64::new(a, 0.0),
        )
        .unwrap();
        let (smax, smin) = m.extremum_detunings().unwrap();
        let at = |s: f64| fano_transmission(m.omega_tilde + s * 0.5 * m.gamma_tilde, &m);
        let (scan_max, scan_min) = dense_scan(a, 1_000_000, 4.0 * (a + 2.0));
        c.within(&format!("max·min, A = {a}"), at(smax) * at(smin), 1.0, 1e-9);
        c.holds(
            format!("A = {a}: closed-form extrema bound the dense scan"),
            at(smax) >= scan_max * (1.0 - 1e-9) && at(smin) <= scan_min * (1.0 + 1e-9),
        );
    }
}

/// Power series `J_n(x)`, adequate for x <= 10 in double precision.
fn series_j(n: i32, x: f64) -> f64 {
    if n < 0 {
        return -series_j(-n, x);
    }
    let half = 0.5 * x;
    let mut term = half.powi(n) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= -half * half / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_5(c: &mut Checks) {
    let j1_prime = |x: f64| 0.5 * (series_j(0, x) - series_j(2, x));
    let te11_oracle = bisect(j1_prime, 1.0, 2.5);
    let tm11_oracle = bisect(|x| series_j(1, x), 3.0, 4.5);
    let te11 = te11_root().value;
    let tm11 = mode_root(ModeFamily::TM, 1, 1).unwrap().value;
    c.within("z*(TE11)", te11, 1.841_183_781_3, 1e-9);
    c.within("z*(TE11) vs bisection oracle", te11, te11_oracle, 1e-9);
    c.within("z*(TM11)", tm11, 3.831_705_970_2, 1e-8);
    c.within("z*(TM11) vs bisection oracle", tm11, tm11_oracle, 1e-8);
    let mut worst: f64 = 0.0;
    for i in 0..=990 {
        let x = 0.1 + 0.01 * f64::from(i);
        let lhs = bessel_j1_prime(x).unwrap();
        let rhs = bessel_j(0, x).unwrap() - bessel_j(1, x).unwrap() / x;
        worst = worst.max((lhs - rhs).abs()).max((lhs - j1_prime(x)).abs());
    }
    c.within("max |J1' − (J0 − J1/x)| on [0.1, 10], also vs series", worst, 0.0, 1e-8);
}

fn criterion_6(c: &mut Checks) {
    for (radius, expected) in [(50.0, 28.67), (40.0, 22.48)] {
        let geom = ZmwGeometry::new(radius, 100.0, MaterialModel::PerfectConductor).unwrap();
        let l = mode_propagation(&geom, 532.0, te11_root()).decay_length;
        let k0 = 2.0 * PI / 532.0;
        let closed = 1.0 / ((1.841_183_781_340_659_3 / radius).powi(2) - k0 * k0).sqrt();
        c.within(&format!("L(R = {radius} nm)"), l, expected, 0.01);
        c.within(&format!("L(R = {radius} nm) vs closed-form κ"), l, closed, 1e-9);
    }
}

fn criterion_7(c: &mut Checks) {
    let (mut worst_mag, mut worst_phase, mut worst_res): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for lambda in [400.0, 532.0, 780.0] {
        for kr in [0.001, 0.01, 0.03, 0.05] {
            let ma = MetaAtom::resonant_at(kr * lambda / (2.0 * PI), lambda).unwrap();
            let w0 = ma.resonance_frequency();
            let (_, g0) = meta_atom_lorentzian_params(&ma, w0);
            for i in -40..=40 {
                let w = w0 + 0.25 * f64::from(i) * g0;
                let (om, g) = meta_atom_lorentzian_params(&ma, w);
                let lorentz = atom_polarizability(w, &TwoLevelAtom::new(om, g, [1.0, 0.0, 0.0]).unwrap());
                let exact = meta_atom_polarizability(w, &ma);
                worst_mag = worst_mag.max((exact.norm() / lorentz.norm() - 1.0).abs());
                worst_phase = worst_phase.max((exact / lorentz).arg().abs());
            }
            let k = w0 / C_NM_PER_S;
            worst_res = worst_res.max((meta_atom_polarizability(w0, &ma).norm() * 2.0 * k.powi(3) / 3.0 - 1.0).abs());
        }
    }
    c.within("worst relative magnitude difference", worst_mag, 0.0, 0.01);
    c.within("worst phase difference (rad)", worst_phase, 0.0, 0.02);
    c.within("resonant |α| vs 3/(2k³), relative", worst_res, 0.0, 0.005);
}

fn criterion_8(c: &mut Checks) {
    for lambda in [400.0, 532.0, 780.0, 1550.0] {
        let atom = TwoLevelAtom::from_wavelength(lambda, 1e-7).unwrap();
        let k = 2.0 * PI / lambda;
        let sigma = 8.0 * PI / 3.0 * k.powi(4) * atom_polarizability(atom.omega0, &atom).norm_sqr();
        c.relative(
            &format!("(8π/3)k⁴|α|² vs (3/2π)λ², λ = {lambda}"),
            sigma,
            3.0 * lambda * lambda / (2.0 * PI),
            1e-6,
        );
    }
    let sigma = resonant_cross_section(532.0);
    c.within("σ_res(532 nm) in nm²", sigma, 135_133.0, 1.0);
    let peak = spectrum_metrics_with_baseline(&fano_spectrum(&xibar_model(1.0), 20.0, 4001), 1.0)
        .unwrap()
        .peak;
    let eff = effective_cross_section(peak, 50.0).unwrap();
    let ratio = eff / sigma;
    c.holds(
        format!("effective/σ_res = {ratio:.3} within one order of magnitude"),
        (0.1..=10.0).contains(&ratio),
    );
}

fn criterion_9(c: &mut Checks) {
    let alpha = Complex64::new(1.3e5, 8.8e5);
    let c11 = Complex64::new(2.0e-6, -0.7e-6);
    let geom = ZmwGeometry::new(50.0, 100.0, MaterialModel::PerfectConductor).unwrap();
    let l = mode_propagation(&geom, 532.0, te11_root()).decay_length;
    let reference = c11 * alpha;
    let mut worst: f64 = 0.0;
    for h in [50.0, 100.0, 400.0] {
        for za in [0.0, h / 4.0, h / 2.0, h] {
            let ratio = scattered_field_at_exit(alpha, c11, 1.0, za, h, l) / field_decay(1.0, h, l);
            worst = worst.max((ratio - reference).norm() / reference.norm());
        }
    }
    c.within("worst relative spread of exit ratio", worst, 0.0, 1e-12);
}

fn criterion_10(c: &mut Checks) {
    let mut exact = true;
    for (rho, eps) in [
        (5.0, Complex64::new(-3.0, 0.2)),
        (25.0, Complex64::new(-50.0, 9.0)),
        (37.5, Complex64::new(-10.0, 1.0)),
        (48.0, Complex64::new(2.0, 0.0)),
    ] {
        let perp = off_axis_shift(rho, 50.0, eps, WallOrientation::PerpendicularToWall).unwrap();
        let par = off_axis_shift(rho, 50.0, eps, WallOrientation::ParallelToWall).unwrap();
        exact &= perp.relative_shift / par.relative_shift == 2.0;
    }
    c.holds("perpendicular/parallel == 2 exactly", exact);
    let pec = Complex64::new(f64::NEG_INFINITY, 0.0);
    let s = off_axis_shift(25.0, 50.0, pec, WallOrientation::PerpendicularToWall).unwrap();
    c.within("PEC shift at ρ = R/2", s.relative_shift, 6.0, 1e-9);
    c.holds("qualitative-regime warning raised at ρ = R/2", !s.warnings.is_empty());
}

fn criterion_11(c: &mut Checks) {
    let w0 = omega_from_wavelength(532.0);
    let mut worst: f64 = 0.0;
    let mut all_converged = true;
    for a in [0.5, 2.0, 7.284, 20.0, 50.0] {
        for width in [1e-8, 1e-6, 1e-4] {
            for points in [200, 1000] {
                let m = FanoModel::new(w0, width * w0, Complex64::new(a, 0.0)).unwrap();
                let f = fit_fano(&fano_spectrum(&m, 20.0, points)).unwrap();
                all_converged &= f.converged;
                worst = worst
                    .max((f.omega_tilde / w0 - 1.0).abs())
                    .max((f.gamma_tilde / m.gamma_tilde - 1.0).abs())
                    .max((f.coupling - m.coupling).norm() / a)
                    .max((f.baseline - 1.0).abs());
            }
        }
    }
    c.holds("every fit in the parameter box converged", all_converged);
    c.within("worst relative parameter error over the box", worst, 0.0, 1e-6);

    let mut worst_xi: f64 = 0.0;
    for (xi, lambda, r) in [(1.0, 532.0, 50.0), (2.0, 532.0, 40.0), (0.37, 780.0, 65.0)] {
        let fit = FanoFitResult {
            omega_tilde: omega_from_wavelength(lambda),
            gamma_tilde: 1.0,
            coupling: Complex64::new(fano_coupling_from_xibar(xi, lambda, r).unwrap(), 0.0),
            baseline: 1.0,
            residual: 0.0,
            converged: true,
            convention: LineshapeConvention::Physical,
        };
        worst_xi = worst_xi.max((extract_xibar(&fit, lambda, r).unwrap() - xi).norm() / xi);
    }
    c.within("extract_xibar ∘ coupling, relative", worst_xi, 0.0, 1e-12);

    let m = FanoModel::from_xibar(&free(532.0, 3e-5), 2.0, 532.0, 50.0).unwrap();
    let f = fit_fano(&fano_spectrum(&m, 20.0, 501)).unwrap();
    let xi = extract_xibar(&f, 532.0, 50.0).unwrap();
    c.within("fitted ξ̄ from a ξ̄ = 2 spectrum", xi.re, 2.0, 0.01);
}

fn criterion_12(c: &mut Checks) {
    let r = feasibility(&FeasibilityInput::new(100.0, 1.0, 26.2e-9, RB87_MASS_KG).unwrap());
    c.within("de Broglie wavelength, Rb-87 at 1 m/s (nm)", r.de_broglie, 4.59, 0.01);
    c.holds(
        format!("dwell time {:e} s == 100 ns exactly", r.dwell_time),
        r.dwell_time == 100e-9,
    );
}

fn criterion_13(c: &mut Checks) {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("run.cfg"), CONFIG).unwrap();
    let start = Instant::now();
    let first = zmw(dir.path(), &["spectrum", "run.cfg"]);
    let elapsed = start.elapsed();
    let a = fs::read(dir.path().join("out.csv")).unwrap_or_default();
    c.holds(
        format!("501-point spectrum in {elapsed:?} < 1 s"),
        first.status.success() && elapsed < Duration::from_secs(1),
    );
    c.holds(
        "CSV has 501 rows plus header",
        a.iter().filter(|&&b| b == b'\n').count() == 502,
    );
    let second = zmw(dir.path(), &["spectrum", "run.cfg"]);
    let b = fs::read(dir.path().join("out.csv")).unwrap_or_default();
    let third = zmw(dir.path(), &["--sequential", "spectrum", "run.cfg"]);
    let d = fs::read(dir.path().join("out.csv")).unwrap_or_default();
    c.holds(
        "repeated and sequential runs are byte-identical",
        second.status.success() && third.status.success() && !a.is_empty() && a == b && a == d,
    );
    let start = Instant::now();
    let sweep = zmw(
        dir.path(),
        &["sweep", "run.cfg", "--axis", "radius", "--values", "40,45,50"],
    );
    let elapsed = start.elapsed();
    c.holds(
        format!("3-value radius sweep in {elapsed:?} < 5 s"),
        sweep.status.success() && elapsed < Duration::from_secs(5),
    );
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 13] = [
        ("Fano order-of-magnitude anchor", criterion_1),
        ("Deep PEC coupling anchor", criterion_2),
        ("Blocking anchor", criterion_3),
        ("Fano product identity", criterion_4),
        ("Bessel functions and mode roots", criterion_5),
        ("Mode attenuation", criterion_6),
        ("Meta-atom equivalence", criterion_7),
        ("Cross-section consistency", criterion_8),
        ("Depth independence", criterion_9),
        ("Off-axis splitting", criterion_10),
        ("Fit closure", criterion_11),
        ("Feasibility", criterion_12),
        ("CLI determinism and speed", criterion_13),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut checks = Checks::default();
        run(&mut checks);
        let pass = checks.0.iter().all(|c| c.pass);
        println!("{} criterion {:>2}: {name}", if pass { "PASS" } else { "FAIL" }, i + 1);
        for check in &checks.0 {
            println!("       [{}] {}", if check.pass { "ok" } else { "FAILED" }, check.what);
        }
        if !pass {
            failed.push(i + 1);
        }
    }
    println!();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!(
            "acceptance: {} of {} criteria fail: {failed:?}",
            failed.len(),
            criteria.len()
        );
        ExitCode::FAILURE
    }
}
