//! Exact binomials, log-factorials and big-ratio conversions shared by the
//! combinatorial and Gram-matrix code.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Rows of Pascal's triangle kept in memory. Covers `sym_dim(n, d)` for
/// `n <= 256`, `d <= 64` and every binomial of the exact Gram path.
const PASCAL_ROWS: usize = 322;

/// Largest argument of the cached log-factorial table.
const LN_FACT_MAX: usize = 1 << 15;

fn pascal() -> &'static Vec<Vec<BigUint>> {
    static TABLE: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(PASCAL_ROWS);
        rows.push(vec![BigUint::one()]);
        for n in 1..PASCAL_ROWS {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        rows
    })
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if (n as usize) < PASCAL_ROWS {
        return pascal()[n as usize][k as usize].clone();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ln_fact_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Kahan-compensated running sum of ln(i).
        let mut out = Vec::with_capacity(LN_FACT_MAX + 1);
        out.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for i in 1..=LN_FACT_MAX {
            let y = (i as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            out.push(sum);
        }
        out
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    let table = ln_fact_table();
    match table.get(n as usize) {
        Some(v) => *v,
        None => {
            // Stirling series; only reached far beyond any supported N.
            let x = n as f64 + 1.0;
            (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
                - 1.0 / (360.0 * x.powi(3))
        }
    }
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Correctly rounded `num / den` for big naturals.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new_raw(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Product of a list of big naturals.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    factors.into_iter().fold(BigUint::one(), |acc, f| acc * f)
}
