//! Student's t distribution: CDF through the regularized incomplete beta
//! function, and its inverse by bracketed bisection.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_CF_ITERATIONS: usize = 20_000;
const MAX_BISECTIONS: usize = 400;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma<F: Scalar>(x: F) -> F {
    let half = F::lit(0.5);
    if x < half {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = F::lit(std::f64::consts::PI);
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(F::one() - x);
    }
    let x = x - F::one();
    let mut acc = F::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + F::lit(c) / (x + F::from_count(i));
    }
    let t = x + F::lit(LANCZOS_G) + half;
    F::lit(0.5 * (2.0 * std::f64::consts::PI).ln()) + (x + half) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction<F: Scalar>(a: F, b: F, x: F) -> F {
    let one = F::one();
    let tiny = F::min_positive_value() / F::epsilon();
    let eps = F::epsilon();
    let clamp = |v: F| if v.abs() < tiny { tiny } else { v };

    let qab = a + b;
    let qap = a + one;
    let qam = a - one;
    let mut c = one;
    let mut d = one / clamp(one - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_CF_ITERATIONS {
        let m = F::from_count(m);
        let m2 = m + m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = one / clamp(one + aa * d);
        c = clamp(one + aa / c);
        h = h * d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = one / clamp(one + aa * d);
        c = clamp(one + aa / c);
        let delta = d * c;
        h = h * delta;
        if (delta - one).abs() <= eps {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta<F: Scalar>(a: F, b: F, x: F) -> F {
    let one = F::one();
    if x <= F::zero() {
        return F::zero();
    }
    if x >= one {
        return one;
    }
    let log_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (one - x).ln();
    let front = log_front.exp();
    if x < (a + one) / (a + b + F::lit(2.0)) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        one - front * beta_continued_fraction(b, a, one - x) / b
    }
}

/// `P(T > x)` for `x >= 0`.
fn upper_tail<F: Scalar>(x: F, df: F) -> F {
    let half = F::lit(0.5);
    half * regularized_incomplete_beta(df * half, half, df / (df + x * x))
}

/// Cumulative distribution function of Student's t with `df` degrees of freedom.
pub fn t_cdf<F: Scalar>(x: F, df: F) -> F {
    if x.is_nan() {
        return x;
    }
    let tail = upper_tail(x.abs(), df);
    if x >= F::zero() {
        F::one() - tail
    } else {
        tail
    }
}

/// Percent point function (inverse CDF) of Student's t.
///
/// Solves on the upper tail so small and large `p` are treated
/// symmetrically. The root is bracketed starting at `[0, 50]` (widened by
/// doubling for heavy tails) and bisected until the bracket stops
/// shrinking.
pub fn t_ppf<F: Scalar>(p: F, df: usize) -> Result<F> {
    if !(p > F::zero() && p < F::one()) {
        return Err(Error::Domain(format!("probability {p} outside (0, 1)")));
    }
    if df < 1 {
        return Err(Error::Domain("degrees of freedom must be >= 1".into()));
    }
    let half = F::lit(0.5);
    if p == half {
        return Ok(F::zero());
    }
    let dff = F::from_count(df);
    let (q, sign) = if p > half {
        (F::one() - p, F::one())
    } else {
        (p, -F::one())
    };

    let mut lo = F::zero();
    let mut hi = F::lit(50.0);
    while upper_tail(hi, dff) > q {
        lo = hi;
        hi = hi + hi;
        if !hi.is_finite() {
            return Err(Error::Domain(format!("quantile for p = {p} overflows")));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        if upper_tail(mid, dff) > q {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= F::epsilon() * hi.max(F::one()) {
            break;
        }
    }
    Ok(sign * (lo + (hi - lo) * half))
}
