//! Numerical cross-check of the leading Maclaurin coefficients.
//!
//! `(N/2) P^SRM_lambda` is evaluated on a grid of `x = 2j/N` for a ladder of
//! string lengths, extrapolated to `N -> inf` by Richardson's method in
//! `1/N`, and fitted by least squares to `sum_r a_r x^(2r)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::StringParams;
use crate::discrimination::srm_block;
use crate::error::{Error, Result};
use crate::gram::build_gram_unknown;

/// Grid, ladder and fit size of the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub xs: Vec<f64>,
    /// String lengths, ascending. Each `x N` must be an integer of the same
    /// parity as `N`.
    pub ns: Vec<u32>,
    /// Number of even powers in the least-squares fit.
    pub fit_terms: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            xs: vec![0.05, 0.10, 0.15, 0.20, 0.25, 0.30],
            ns: vec![200, 400, 800, 1600, 3200],
            fit_terms: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientEstimate {
    pub r: usize,
    pub value: f64,
    /// Largest change under one more fit term or one fewer Richardson level.
    pub error: f64,
}

impl CoefficientEstimate {
    pub fn brackets(&self, target: f64, tol: f64) -> bool {
        (self.value - target).abs() <= tol
    }
}

fn lambda_for(n: u32, x: f64) -> Result<u32> {
    let two_j = (x * n as f64).round();
    if (two_j - x * n as f64).abs() > 1e-9 || two_j < 0.0 || two_j > n as f64 {
        return Err(Error::domain(format!("x = {x} is not a grid point 2j/N for N = {n}")));
    }
    let two_j = two_j as u32;
    if (n - two_j) % 2 != 0 {
        return Err(Error::domain(format!("2j = {two_j} and N = {n} differ in parity")));
    }
    Ok((n - two_j) / 2)
}

/// `(N/2) P^SRM_lambda` with `lambda = N(1 - x)/2`.
pub fn scaled_joint_probability(d: u32, n: u32, x: f64) -> Result<f64> {
    let params = StringParams::new(n, d)?;
    let lambda = lambda_for(n, x)?;
    let g = build_gram_unknown(params, lambda)?;
    Ok(0.5 * n as f64 * srm_block(&g)?)
}

/// Limit `N -> inf` of `values[i]` sampled at `ns[i]`, assuming a polynomial
/// in `1/N` of degree `len - 1`.
pub fn richardson(ns: &[u32], values: &[f64]) -> Result<f64> {
    let l = ns.len();
    let a = DMatrix::from_fn(l, l, |i, p| (ns[i] as f64).powi(-(p as i32)));
    let b = DVector::from_column_slice(values);
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::NumericalFailure("Richardson system is singular".into()))?;
    Ok(sol[0])
}

fn fit_even_powers(xs: &[f64], ys: &[f64], terms: usize) -> Result<Vec<f64>> {
    if terms > xs.len() {
        return Err(Error::domain(format!("{terms} fit terms need at least as many grid points")));
    }
    let v = DMatrix::from_fn(xs.len(), terms, |i, r| (xs[i] * xs[i]).powi(r as i32 + 1));
    let b = DVector::from_column_slice(ys);
    let sol = v
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::NumericalFailure(format!("least-squares fit: {e}")))?;
    Ok(sol.iter().copied().collect())
}

/// Estimates `a_1 ..= a_{r_max}` for local dimension `d`.
pub fn estimate_with(d: u32, r_max: usize, cfg: &EstimatorConfig) -> Result<Vec<CoefficientEstimate>> {
    if r_max == 0 || r_max > 3 {
        return Err(Error::domain(format!("r_max = {r_max} must be 1, 2 or 3")));
    }
    if cfg.ns.len() < 2 || cfg.ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("the N ladder needs at least two ascending values"));
    }
    if cfg.fit_terms < r_max || cfg.fit_terms + 1 > cfg.xs.len() {
        return Err(Error::domain(format!(
            "{} fit terms with {} grid points cannot resolve r_max = {r_max}",
            cfg.fit_terms,
            cfg.xs.len()
        )));
    }
    let jobs: Vec<(usize, usize)> = (0..cfg.xs.len())
        .flat_map(|i| (0..cfg.ns.len()).map(move |j| (i, j)))
        .collect();
    let samples: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, j)| scaled_joint_probability(d, cfg.ns[j], cfg.xs[i]))
        .collect::<Result<_>>()?;
    let per_x = |skip: usize| -> Result<Vec<f64>> {
        (0..cfg.xs.len())
            .map(|i| {
                let row = &samples[i * cfg.ns.len()..(i + 1) * cfg.ns.len()];
                richardson(&cfg.ns[skip..], &row[skip..])
            })
            .collect()
    };
    let full = per_x(0)?;
    let reduced = per_x(1)?;
    let main = fit_even_powers(&cfg.xs, &full, cfg.fit_terms)?;
    let more_terms = fit_even_powers(&cfg.xs, &full, cfg.fit_terms + 1)?;
    let fewer_levels = fit_even_powers(&cfg.xs, &reduced, cfg.fit_terms)?;
    let out: Vec<CoefficientEstimate> = (0..r_max)
        .map(|r| CoefficientEstimate {
            r: r + 1,
            value: main[r],
            error: (main[r] - more_terms[r]).abs().max((main[r] - fewer_levels[r]).abs()),
        })
        .collect();
    if out.iter().any(|c| !c.value.is_finite() || !c.error.is_finite()) {
        return Err(Error::NumericalFailure("coefficient estimate is not finite".into()));
    }
    Ok(out)
}

/// Estimates `a_1 ..= a_{r_max}` (`r_max <= 3`) with the default grid.
pub fn estimate_low_order_coeffs(d: u32, r_max: usize) -> Result<Vec<CoefficientEstimate>> {
    estimate_with(d, r_max, &EstimatorConfig::default())
}
