//! Exact rational Padé approximants of series in `t = x^2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper end of the defect scan, in `x`.
pub const DEFECT_SCAN_LIMIT: f64 = 1.0 + 1e-6;

const SCAN_POINTS: usize = 4000;

/// `[n/m]` approximant `A(t) / B(t)` with `B(0) = 1`.
///
/// Degrees are counted in `t`; in `x = sqrt(t)` the same object is the even
/// approximant `[2n/2m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    n: usize,
    m: usize,
    numer: Vec<BigRational>,
    denom: Vec<BigRational>,
    numer_f64: Vec<f64>,
    denom_f64: Vec<f64>,
    defects: Vec<f64>,
}

impl PadeApproximant {
    /// `(n, m)` in powers of `t`.
    pub fn order(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    /// `(2n, 2m)`, the order in powers of `x`.
    pub fn x_order(&self) -> (usize, usize) {
        (2 * self.n, 2 * self.m)
    }

    /// `A_0 ..= A_n`.
    pub fn numer(&self) -> &[BigRational] {
        &self.numer
    }

    /// `B_0 = 1, B_1 ..= B_m`.
    pub fn denom(&self) -> &[BigRational] {
        &self.denom
    }

    pub fn numer_f64(&self) -> &[f64] {
        &self.numer_f64
    }

    pub fn denom_f64(&self) -> &[f64] {
        &self.denom_f64
    }

    /// Positions `x` in `[0, 1 + 1e-6]` where the denominator changes sign.
    pub fn defects(&self) -> &[f64] {
        &self.defects
    }

    pub fn is_defective(&self) -> bool {
        !self.defects.is_empty()
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        horner(&self.numer_f64, t) / horner(&self.denom_f64, t)
    }

    pub fn eval_x(&self, x: f64) -> f64 {
        self.eval_t(x * x)
    }

    pub fn denom_t(&self, t: f64) -> f64 {
        horner(&self.denom_f64, t)
    }

    /// Exact value at `t`.
    pub fn eval_exact(&self, t: &BigRational) -> BigRational {
        horner_exact(&self.numer, t) / horner_exact(&self.denom, t)
    }

    /// Maclaurin coefficients of `A / B` through `t^len-1`.
    pub fn expand(&self, len: usize) -> Vec<BigRational> {
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut c = self.numer.get(k).cloned().unwrap_or_else(BigRational::zero);
            for j in 1..=self.m.min(k) {
                c -= &self.denom[j] * &out[k - j];
            }
            out.push(c);
        }
        out
    }
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn horner_exact(c: &[BigRational], t: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, a| acc * t + a)
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Solves `a x = b` exactly; `None` when singular.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] * &inv;
            for k in col..n {
                let sub = &f * &a[col][k];
                a[row][k] -= sub;
            }
            let sub = &f * &b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row].clone();
        for k in row + 1..n {
            s -= &a[row][k] * &x[k];
        }
        x[row] = s / &a[row][row];
    }
    Some(x)
}

fn scan_defects(denom: &[f64]) -> Vec<f64> {
    let t_max = DEFECT_SCAN_LIMIT * DEFECT_SCAN_LIMIT;
    let mut out = Vec::new();
    let mut prev_t = 0.0;
    let mut prev = horner(denom, 0.0);
    for i in 1..=SCAN_POINTS {
        let t = t_max * i as f64 / SCAN_POINTS as f64;
        let v = horner(denom, t);
        if v == 0.0 || v.signum() != prev.signum() {
            let (mut lo, mut hi, flo) = (prev_t, t, prev);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if horner(denom, mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push((0.5 * (lo + hi)).sqrt());
        }
        prev_t = t;
        prev = v;
    }
    out
}

/// `[n/m]` Padé approximant of `series` (coefficients of `t^0, t^1, ...`).
///
/// The matching system is solved in exact arithmetic. A singular system
/// yields [`Error::DegeneratePade`]; denominator sign changes on
/// `x in [0, 1 + 1e-6]` are recorded as defects, not errors.
pub fn pade(series: &[BigRational], n: usize, m: usize) -> Result<PadeApproximant> {
    if series.len() < n + m + 1 {
        return Err(Error::domain(format!(
            "[{n}/{m}] Padé needs {} coefficients, series has {}",
            n + m + 1,
            series.len()
        )));
    }
    let c = |k: isize| -> BigRational {
        if k < 0 {
            BigRational::zero()
        } else {
            series[k as usize].clone()
        }
    };
    let mut denom = vec![BigRational::one()];
    if m > 0 {
        let rows: Vec<Vec<BigRational>> = (1..=m)
            .map(|i| (1..=m).map(|j| c((n + i) as isize - j as isize)).collect())
            .collect();
        let rhs: Vec<BigRational> = (1..=m).map(|i| -c((n + i) as isize)).collect();
        let b = solve_exact(rows, rhs).ok_or(Error::DegeneratePade { n, m })?;
        denom.extend(b);
    }
    let numer: Vec<BigRational> = (0..=n)
        .map(|k| (0..=m.min(k)).map(|j| &denom[j] * &series[k - j]).sum())
        .collect();

    let numer_f64: Vec<f64> = numer.iter().map(to_f64).collect();
    let denom_f64: Vec<f64> = denom.iter().map(to_f64).collect();
    let defects = scan_defects(&denom_f64);
    let approx = PadeApproximant {
        n,
        m,
        numer,
        denom,
        numer_f64,
        denom_f64,
        defects,
    };
    if approx.expand(n + m + 1)[..] != series[..n + m + 1] {
        return Err(Error::NumericalFailure(format!("[{n}/{m}] Padé fails its re-expansion check")));
    }
    Ok(approx)
}

/// Exact integer-valued rational, for tests and callers building series by hand.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest absolute deviation between two exact series, as a float.
pub fn max_series_deviation(a: &[BigRational], b: &[BigRational]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| to_f64(&(x - y).abs()))
        .fold(0.0, f64::max)
}
