//! Scalar special functions: log-gamma, the modified Bessel functions
//! I₀, I₁, K₀, and the normalization series of the Barut-Girardello states.
//!
//! Everything here is self-contained double-precision work; no attempt is
//! made at general (ν ≠ 0) Bessel orders or arbitrary precision.

use std::f64::consts::PI;
use thiserror::Error;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const MAX_TERMS: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument must be positive, got {0}")]
    Domain(f64),
    #[error("series did not converge within {0} terms")]
    Unconverged(usize),
}

// Lanczos approximation, g = 7, n = 9 (Godfrey coefficients).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(x: f64) -> f64 {
    // Valid for x >= 0.5.
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain(x));
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        Ok((PI / (PI * x).sin()).ln() - ln_gamma_lanczos(1.0 - x))
    } else {
        Ok(ln_gamma_lanczos(x))
    }
}

/// Modified Bessel function I₀(x) by its ascending series.
///
/// Intended for |x| ≲ 60; the series is exact there to round-off.
pub fn bessel_i0(x: f64) -> f64 {
    let z = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=MAX_TERMS {
        term *= z / ((k * k) as f64);
        sum += term;
        if term <= f64::EPSILON * sum {
            break;
        }
    }
    sum
}

/// Modified Bessel function I₁(x) by its ascending series.
pub fn bessel_i1(x: f64) -> f64 {
    let z = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=MAX_TERMS {
        term *= z / ((k * (k + 1)) as f64);
        sum += term;
        if term <= f64::EPSILON * sum {
            break;
        }
    }
    0.5 * x * sum
}

/// K₀ by the ascending series
/// K₀(x) = −(ln(x/2) + γ)·I₀(x) + Σ_{k≥1} (x/2)^{2k}/(k!)² · H_k.
pub(crate) fn k0_ascending(x: f64) -> Result<f64, SpecialError> {
    let z = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for k in 1..=MAX_TERMS {
        term *= z / ((k * k) as f64);
        harmonic += 1.0 / k as f64;
        i0 += term;
        sum += term * harmonic;
        if term * harmonic <= f64::EPSILON * (sum + 1.0) {
            return Ok(-((0.5 * x).ln() + EULER_GAMMA) * i0 + sum);
        }
    }
    Err(SpecialError::Unconverged(MAX_TERMS))
}

/// K₀ by Steed's continued fraction for the confluent ratio
/// U(1.5, 1, 2x)/U(0.5, 1, 2x); see Thompson and Barnett,
/// J. Comput. Phys. 64, 490 (1986). Accurate to round-off for x > 1.
pub(crate) fn k0_continued_fraction(x: f64) -> Result<f64, SpecialError> {
    let mut a = -0.25;
    let mut b = 2.0 * (x + 1.0);
    let mut d = 1.0 / b;
    let mut delta = d;
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut q = 0.25;
    let mut c = 0.25;
    let mut s = 1.0 + q * delta;
    for k in 2..=MAX_TERMS {
        let kf = k as f64;
        a -= 2.0 * (kf - 1.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        delta *= b * d - 1.0;
        let t = (prev - (b - 2.0) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;
        if (q * delta).abs() < s.abs() * (0.5 * f64::EPSILON) {
            return Ok((PI / (2.0 * x)).sqrt() * (-x).exp() / s);
        }
    }
    Err(SpecialError::Unconverged(MAX_TERMS))
}

/// Modified Bessel function of the second kind, K₀(x), for x > 0.
///
/// Ascending series for x ≤ 2, Steed continued fraction beyond; the two
/// branches agree to better than 1e-12 relative at the crossover. Underflows
/// to zero for x ≳ 700.
pub fn bessel_k0(x: f64) -> Result<f64, SpecialError> {
    if !(x > 0.0) {
        return Err(SpecialError::Domain(x));
    }
    if x <= 2.0 {
        k0_ascending(x)
    } else {
        k0_continued_fraction(x)
    }
}

/// S(x) = Σ_{j≥0} x^j/((j+1)!)² for x ≥ 0, summed until a term falls below
/// 1e-16 of the running sum. The Barut-Girardello normalization of a state
/// with |α|² = x is S(x)^{-1/2}.
///
/// Panics if x is negative or if the sum fails to converge within 500 terms
/// (that needs x ≳ 3·10⁴, far outside any amplitude used here).
pub fn bg_norm_series(x: f64) -> f64 {
    assert!(x >= 0.0, "bg_norm_series needs x >= 0, got {x}");
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=MAX_TERMS {
        let jp1 = (j + 1) as f64;
        term *= x / (jp1 * jp1);
        sum += term;
        if term <= 1e-16 * sum {
            return sum;
        }
    }
    panic!("bg_norm_series did not converge within {MAX_TERMS} terms (x = {x})");
}
