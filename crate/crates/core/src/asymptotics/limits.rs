//! Asymptotic success probabilities `p0(d) = lim_{N -> inf} P_s`.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::pade::{pade, PadeApproximant};
use super::quadrature::{integrate, QuadOptions};
use super::special::elliptic_k_complement;
use super::table::{coefficient_table, RationalCoefficientTable};
use crate::error::{Error, Result};

/// Absolute tolerance of the Padé integral.
pub const PADE_QUAD_TOL: f64 = 1e-10;

/// Absolute tolerance of the known-states integral.
pub const KNOWN_QUAD_TOL: f64 = 1e-12;

/// Which Padé route produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PadeRoute {
    /// `int_0^1 P_2s(x) dx` over diagonal approximants.
    Integral,
    /// Off-diagonal approximants of the primitive evaluated at `x = 1`.
    Primitive,
}

/// An approximant that was skipped, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedPade {
    /// Order in powers of `x`.
    pub order: (usize, usize),
    pub reason: String,
}

/// One member of a Padé sequence and the estimate it gives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadeMember {
    /// Order in powers of `x`.
    pub order: (usize, usize),
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadeEstimate {
    pub d: u32,
    pub route: PadeRoute,
    /// Estimate from the highest accepted member.
    pub value: f64,
    /// Distance to the next-highest accepted member.
    pub error: f64,
    /// Order in powers of `x` of the member used.
    pub order: (usize, usize),
    /// Accepted members in increasing order.
    pub accepted: Vec<PadeMember>,
    pub rejected: Vec<RejectedPade>,
}

fn sequence_estimate(
    d: u32,
    route: PadeRoute,
    members: Vec<((usize, usize), Result<PadeApproximant>)>,
    value_of: impl Fn(&PadeApproximant) -> Result<f64>,
) -> Result<PadeEstimate> {
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    for (order, approx) in members {
        match approx {
            Err(e) => rejected.push(RejectedPade {
                order,
                reason: e.to_string(),
            }),
            Ok(p) if p.is_defective() => rejected.push(RejectedPade {
                order,
                reason: format!("denominator vanishes at x = {:?}", p.defects()),
            }),
            Ok(p) => match value_of(&p) {
                Ok(value) => accepted.push(PadeMember { order, value }),
                Err(e) => rejected.push(RejectedPade {
                    order,
                    reason: e.to_string(),
                }),
            },
        }
    }
    let Some(high) = accepted.last() else {
        let reasons: Vec<String> = rejected
            .iter()
            .map(|r| format!("[{}/{}]: {}", r.order.0, r.order.1, r.reason))
            .collect();
        return Err(Error::NoAcceptedPade(format!("d = {d}: {}", reasons.join("; "))));
    };
    let error = match accepted.len() {
        1 => f64::NAN,
        n => (high.value - accepted[n - 2].value).abs(),
    };
    Ok(PadeEstimate {
        d,
        route,
        value: high.value,
        error,
        order: high.order,
        accepted: accepted.clone(),
        rejected,
    })
}

/// Diagonal approximants `P_2s`, `s = 1, 2, ...`, of `(N/2) P(x)`.
pub fn diagonal_sequence(table: &RationalCoefficientTable) -> Vec<((usize, usize), Result<PadeApproximant>)> {
    let series = table.series_in_t();
    let top = (series.len() - 1) / 2;
    (1..=top).map(|s| ((2 * s, 2 * s), pade(&series, s, s))).collect()
}

/// The sequence `Q^{2n-1}_{2n}, Q^{2n+1}_{2n}, ...` of approximants of the
/// primitive `Q(x)`, each stored as the approximant of `Q(x)/x` in `t`.
pub fn primitive_sequence(table: &RationalCoefficientTable) -> Vec<((usize, usize), Result<PadeApproximant>)> {
    let series = table.primitive_series_in_t();
    let len = series.len() - 1;
    let mut out = Vec::new();
    for n in 1.. {
        if 2 * n - 1 > len {
            break;
        }
        for num in [n - 1, n] {
            if num + n <= len {
                out.push(((2 * num + 1, 2 * n), pade(&series, num, n)));
            }
        }
    }
    out
}

/// `int_0^1 P(x) dx` for one approximant of `(N/2) P(x)`.
pub fn integrate_pade(p: &PadeApproximant) -> Result<f64> {
    Ok(integrate(|x| p.eval_x(x), 0.0, 1.0, QuadOptions::abs(PADE_QUAD_TOL))?.value)
}

/// `Q(1)` for an approximant of `Q(x)/x`: the ratio of coefficient sums.
pub fn primitive_at_one(p: &PadeApproximant) -> Result<f64> {
    let num: BigRational = p.numer().iter().sum();
    let den: BigRational = p.denom().iter().sum();
    (num / den)
        .to_f64()
        .ok_or_else(|| Error::NumericalFailure("Q(1) is not representable".into()))
}

pub fn p0_via_integral_from(table: &RationalCoefficientTable) -> Result<PadeEstimate> {
    sequence_estimate(table.d(), PadeRoute::Integral, diagonal_sequence(table), integrate_pade)
}

pub fn p0_via_primitive_from(table: &RationalCoefficientTable) -> Result<PadeEstimate> {
    sequence_estimate(table.d(), PadeRoute::Primitive, primitive_sequence(table), primitive_at_one)
}

/// `p0(d)` from the integral of the highest accepted diagonal Padé.
pub fn p0_via_integral(d: u32) -> Result<PadeEstimate> {
    p0_via_integral_from(&coefficient_table(d)?)
}

/// `p0(d) = Q(1)` from the highest accepted Padé of the primitive.
pub fn p0_via_primitive(d: u32) -> Result<PadeEstimate> {
    p0_via_primitive_from(&coefficient_table(d)?)
}

/// Highest accepted diagonal approximant of `(N/2) P(x)`.
pub fn highest_diagonal_pade(d: u32) -> Result<PadeApproximant> {
    let table = coefficient_table(d)?;
    diagonal_sequence(&table)
        .into_iter()
        .rev()
        .find_map(|(_, p)| p.ok().filter(|p| !p.is_defective()))
        .ok_or_else(|| Error::NoAcceptedPade(format!("d = {d}: no diagonal approximant")))
}

fn check_d(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::domain(format!("local dimension d = {d} must be at least 2")));
    }
    Ok(())
}

/// Known-states limit
/// `int_0^1 4(1-t)/pi^2 K(t)^2 (d-1)(1-t)^(d-2) dt`, `K` in the parameter
/// convention.
///
/// Integrated in `s = -ln(1 - t)`, where the integrand becomes
/// `4(d-1)/pi^2 e^{-ds} K(1 - e^{-s})^2` and the endpoint singularity
/// turns into polynomial growth against an exponential.
pub fn p0_known(d: u32) -> Result<f64> {
    check_d(d)?;
    let df = d as f64;
    let pref = 4.0 * (df - 1.0) / (PI * PI);
    let f = |s: f64| {
        let k = elliptic_k_complement((-s).exp());
        pref * (-df * s).exp() * k * k
    };
    // e^{-d s} K^2 < 1e-20 beyond this point
    let s_max = (50.0 + 4.0 * (60.0f64).ln()) / df + 2.0;
    let mut total = 0.0;
    let mut lo = 0.0;
    // unit-ish panels keep the adaptive scheme from undersampling the decay
    let step = (4.0 / df).max(0.25);
    while lo < s_max {
        let hi = (lo + step).min(s_max);
        total += integrate(f, lo, hi, QuadOptions::abs(KNOWN_QUAD_TOL))?.value;
        lo = hi;
    }
    Ok(total)
}

/// `1 - 1/(2d)`, the leading large-`d` behaviour of `p0(d)`.
pub fn large_d_limit(d: u32) -> Result<f64> {
    check_d(d)?;
    Ok(1.0 - 0.5 / d as f64)
}
