//! Complete elliptic integral of the first kind and Dawson's integral.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// `K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt`, parameter convention.
///
/// Arithmetic–geometric mean of `1` and `sqrt(1 - m)`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::domain(format!("elliptic K parameter {m} outside [0, 1)")));
    }
    Ok(elliptic_k_complement(1.0 - m))
}

/// `K(1 - m1)`, evaluated from the complementary parameter directly so that
/// arguments close to the logarithmic singularity keep full precision.
///
/// `m1` must lie in `(0, 1]`; `m1 = 0` returns infinity.
pub fn elliptic_k_complement(m1: f64) -> f64 {
    if m1 <= 0.0 {
        return f64::INFINITY;
    }
    let (mut a, mut b) = (1.0f64, m1.sqrt());
    for _ in 0..40 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    FRAC_PI_2 / a
}

const SERIES_LIMIT: f64 = 0.5;
const ASYMPTOTIC_LIMIT: f64 = 6.0;

/// Dawson's integral `F(y) = e^{-y^2} int_0^y e^{t^2} dt` for `y >= 0`.
///
/// Power series below `0.5`, the Jacobi continued fraction up to `6`, the
/// asymptotic expansion beyond.
pub fn dawson(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain(format!("Dawson integral argument {y} must be non-negative")));
    }
    Ok(if y < SERIES_LIMIT {
        dawson_power_series(y)
    } else if y <= ASYMPTOTIC_LIMIT {
        dawson_continued_fraction(y)
    } else {
        dawson_asymptotic(y)
    })
}

// F(y) = sum_n (-1)^n 2^n y^{2n+1} / (2n+1)!!
fn dawson_power_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    for n in 1..60 {
        term *= -2.0 * y2 / (2 * n + 1) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

// F(y) = y / (1 + 2y^2 - 4y^2 / (3 + 2y^2 - 8y^2 / (5 + 2y^2 - ...))),
// evaluated bottom-up.
fn dawson_continued_fraction(y: f64) -> f64 {
    let y2 = y * y;
    let depth = 60 + (20.0 * y2) as usize;
    let mut tail = 0.0;
    for k in (1..=depth).rev() {
        tail = 4.0 * k as f64 * y2 / ((2 * k + 1) as f64 + 2.0 * y2 - tail);
    }
    y / (1.0 + 2.0 * y2 - tail)
}

// F(y) ~ 1/(2y) sum_n (2n-1)!! / (2y^2)^n
fn dawson_asymptotic(y: f64) -> f64 {
    let inv = 1.0 / (2.0 * y * y);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..30 {
        let next = term * (2 * n - 1) as f64 * inv;
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * y)
}

/// Partial sum `sum_{l=1}^{terms} (-1)^{l+1} (2y^2)^l / (2l-1)!!`, which
/// converges to `2 y F(y)`.
pub fn dawson_series(y: f64, terms: usize) -> f64 {
    let z = 2.0 * y * y;
    let mut term = 1.0;
    let mut sum = 0.0;
    for l in 1..=terms {
        term *= z / (2 * l - 1) as f64;
        sum += if l % 2 == 1 { term } else { -term };
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::quadrature::{integrate, QuadOptions};

    fn k_by_quadrature(m: f64) -> f64 {
        integrate(
            |t: f64| (1.0 - m * t.sin().powi(2)).sqrt().recip(),
            0.0,
            FRAC_PI_2,
            QuadOptions {
                abs_tol: 1e-15,
                rel_tol: 1e-15,
                max_intervals: 2000,
            },
        )
        .unwrap()
        .value
    }

    fn dawson_by_quadrature(y: f64) -> f64 {
        integrate(
            |t: f64| (t * t - y * y).exp(),
            0.0,
            y,
            QuadOptions {
                abs_tol: 1e-15,
                rel_tol: 1e-14,
                max_intervals: 2000,
            },
        )
        .unwrap()
        .value
    }

    #[test]
    fn elliptic_k_anchors() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((elliptic_k(0.5).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_k_complement(0.0).is_infinite());
    }

    #[test]
    fn elliptic_k_matches_defining_integral() {
        for m in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let k = elliptic_k(m).unwrap();
            assert!(((k - k_by_quadrature(m)) / k).abs() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn elliptic_k_near_one_follows_log_asymptote() {
        // K(1 - e) ~ ln(4 / sqrt(e)) for small e
        let e = 1e-12;
        let k = elliptic_k_complement(e);
        assert!((k - (4.0 / e.sqrt()).ln()).abs() < 1e-9);
    }

    #[test]
    fn elliptic_k_is_increasing() {
        let vals: Vec<f64> = (0..1000).map(|i| elliptic_k(i as f64 / 1000.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn dawson_matches_quadrature_across_branches() {
        assert_eq!(dawson(0.0).unwrap(), 0.0);
        for y in [0.1, 0.3, 0.49, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0, 4.5, 6.0, 6.01, 8.0, 12.0] {
            let f = dawson(y).unwrap();
            let q = dawson_by_quadrature(y);
            assert!((f - q).abs() < 1e-12 * q.max(1e-3) * 10.0, "y = {y}: {f} vs {q}");
        }
        assert!((dawson(1.0).unwrap() - 0.538_079_506_912_768_4).abs() < 1e-13);
        assert!(dawson(-1.0).is_err());
    }

    #[test]
    fn dawson_branches_join_smoothly() {
        for y in [SERIES_LIMIT, ASYMPTOTIC_LIMIT] {
            let lo = if y == SERIES_LIMIT { dawson_power_series(y) } else { dawson_continued_fraction(y) };
            let hi = if y == SERIES_LIMIT { dawson_continued_fraction(y) } else { dawson_asymptotic(y) };
            assert!((lo - hi).abs() < 1e-13, "y = {y}");
        }
    }

    #[test]
    fn dawson_is_unimodal() {
        let vals: Vec<f64> = (0..=2000).map(|i| dawson(i as f64 * 0.005).unwrap()).collect();
        let peak = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        assert!(vals[..=peak].windows(2).all(|w| w[1] > w[0]));
        assert!(vals[peak..].windows(2).all(|w| w[1] < w[0]));
        assert!((peak as f64 * 0.005 - 0.924).abs() < 0.01);
    }

    #[test]
    fn alternating_series_identity() {
        for i in 0..=150 {
            let y = i as f64 * 0.01;
            let lhs = dawson_series(y, 30);
            let rhs = 2.0 * y * dawson(y).unwrap();
            assert!((lhs - rhs).abs() < 1e-10, "y = {y}");
        }
    }
}
