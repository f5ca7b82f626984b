//! Special functions and cutoff roots against independent references: a
//! double-double evaluation of the defining power series and bisection on it.

use zmw_core::numerics::{bessel_j, bessel_j1_prime, mode_root, ModeFamily};

/// Unevaluated sum `hi + lo` with ~32 significant digits.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        Dd::two_sum(s.hi, lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        let lo = err + self.hi * o.lo + self.lo * o.hi;
        Dd::two_sum(p, lo)
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let r = self.add(Dd::new(-q1).mul(Dd::new(d)));
        let q2 = r.hi / d;
        Dd::two_sum(q1, q2)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `Σ (−1)^k (x/2)^{2k+n} / (k!(k+n)!)` in double-double arithmetic.
fn series_j(n: u32, x: f64) -> f64 {
    let half = Dd::new(x / 2.0);
    let mut term = Dd::new(1.0);
    for k in 1..=n {
        term = term.mul(half).div_f64(f64::from(k));
    }
    let q = half.mul(half);
    let q = Dd { hi: -q.hi, lo: -q.lo };
    let mut sum = term;
    for k in 1..400u32 {
        term = term.mul(q).div_f64(f64::from(k) * f64::from(k + n));
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) && f64::from(k) > x {
            break;
        }
    }
    sum.to_f64()
}

fn series_j_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -series_j(1, x)
    } else {
        0.5 * (series_j(m - 1, x) - series_j(m + 1, x))
    }
}

fn bisect_root(f: impl Fn(f64) -> f64, n: u32) -> f64 {
    let step = 0.01;
    let mut a = 0.005;
    let mut count = 0;
    loop {
        let b = a + step;
        if f(a).signum() != f(b).signum() {
            count += 1;
            if count == n {
                let (mut lo, mut hi) = (a, b);
                while hi - lo > 1e-14 {
                    let mid = 0.5 * (lo + hi);
                    if f(mid).signum() == f(lo).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        a = b;
        assert!(a < 30.0, "no root");
    }
}

#[test]
fn bessel_matches_series_up_to_twenty() {
    let mut worst = 0.0f64;
    for n in 0..=10 {
        let mut x = 0.0;
        while x <= 20.0 {
            let want = series_j(n, x);
            let got = bessel_j(n, x).unwrap();
            // Relative error, except inside the tiny neighbourhoods of zeros
            // where the absolute error floor dominates.
            let err = (got - want).abs() / want.abs().max(1e-3);
            worst = worst.max(err);
            assert!(err <= 1e-10, "J_{n}({x}): {got} vs {want}");
            x += 0.0731;
        }
    }
    assert!(worst < 1e-10);
}

#[test]
fn bessel_example_values() {
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
    let want = series_j(1, 1.841_183_8);
    assert!((want - 0.581_865).abs() < 1e-6);
    assert!((bessel_j(1, 1.841_183_8).unwrap() - want).abs() < 1e-14);
}

#[test]
fn j1_prime_identity_and_examples() {
    assert_eq!(bessel_j1_prime(0.0).unwrap(), 0.5);
    assert!(bessel_j1_prime(1.841_183_781_3).unwrap().abs() < 1e-9);
    let h = 1e-6;
    let fd = (bessel_j(1, 3.0 + h).unwrap() - bessel_j(1, 3.0 - h).unwrap()) / (2.0 * h);
    assert!((fd + 0.373_071_6).abs() < 1e-6);
    assert!((bessel_j1_prime(3.0).unwrap() + 0.373_071_6).abs() < 1e-6);
    let mut x = 0.1;
    while x <= 10.0 {
        let identity = series_j(0, x) - series_j(1, x) / x;
        assert!((bessel_j1_prime(x).unwrap() - identity).abs() < 1e-8, "x = {x}");
        x += 0.05;
    }
}

#[test]
fn derivative_of_x_j1_is_x_j0() {
    let h = 1e-5;
    let f = |x: f64| x * bessel_j(1, x).unwrap();
    let mut x = h;
    while x <= 10.0 - h {
        let fd = (f(x + h) - f(x - h)) / (2.0 * h);
        assert!((fd - x * bessel_j(0, x).unwrap()).abs() < 1e-8, "x = {x}");
        x += 0.01;
    }
}

#[test]
fn mode_roots_match_bisection_oracle() {
    for m in 0..=2 {
        for n in 1..=3 {
            let te = bisect_root(|x| series_j_prime(m, x), n);
            let tm = bisect_root(|x| series_j(m, x), n);
            let got_te = mode_root(ModeFamily::TE, m, n).unwrap();
            let got_tm = mode_root(ModeFamily::TM, m, n).unwrap();
            assert!((got_te.value - te).abs() < 1e-9, "TE{m}{n}: {} vs {te}", got_te.value);
            assert!((got_tm.value - tm).abs() < 1e-9, "TM{m}{n}: {} vs {tm}", got_tm.value);
        }
    }
}

#[test]
fn named_roots() {
    let cases = [
        (ModeFamily::TE, 1, 1, 1.841_183_781_3, 1e-9),
        (ModeFamily::TE, 1, 2, 5.331_442_773_5, 1e-8),
        (ModeFamily::TM, 1, 1, 3.831_705_970_2, 1e-8),
    ];
    for (family, m, n, want, tol) in cases {
        let oracle = match family {
            ModeFamily::TE => bisect_root(|x| series_j_prime(m, x), n),
            ModeFamily::TM => bisect_root(|x| series_j(m, x), n),
        };
        assert!((oracle - want).abs() < tol);
        let r = mode_root(family, m, n).unwrap();
        assert!((r.value - want).abs() < tol);
        let residual = match family {
            ModeFamily::TE => series_j_prime(m, r.value),
            ModeFamily::TM => series_j(m, r.value),
        };
        assert!(residual.abs() <= 1e-12);
    }
}
