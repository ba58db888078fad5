//! Success probabilities per block and in total, for the square-root
//! measurement and the optimal measurement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{irrep_blocks, StringParams};
use crate::error::{BlockTag, Error, Result};
use crate::gram::{gram_from_irrep_block, gram_from_known_block, known_blocks, SemiseparableGram};
use crate::linalg::{
    certificate, psd_spectrum, psd_sqrt, solve_discrimination_sdp, spectral_diagonal, Certificate, SdpOptions,
    SdpSolution, SdpStatus, DEFAULT_RANK_TOL,
};

/// Largest `N` accepted by the optimal (SDP) method unless overridden.
pub const DEFAULT_SDP_MAX_N: u32 = 64;

/// Largest `N` accepted by the square-root measurement unless overridden.
pub const DEFAULT_SRM_MAX_N: u32 = 1000;

/// What is known about the two domain states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Both states unknown and uniformly distributed.
    UnknownUnknown,
    /// Left state known (`|0>`), right state unknown.
    KnownUnknown,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::UnknownUnknown => "unknown-unknown",
            Scenario::KnownUnknown => "known-unknown",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unknown-unknown" | "unknown" | "uu" => Ok(Scenario::UnknownUnknown),
            "known-unknown" | "known" | "ku" => Ok(Scenario::KnownUnknown),
            _ => Err(Error::domain(format!("unknown scenario {s:?}"))),
        }
    }
}

/// Measurement used in every block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Square-root (pretty good) measurement.
    Srm,
    /// Optimal measurement from the block SDP.
    Sdp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Srm => "srm",
            Method::Sdp => "sdp",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "srm" => Ok(Method::Srm),
            "sdp" | "optimal" => Ok(Method::Sdp),
            _ => Err(Error::domain(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub params: StringParams,
    pub method: Method,
}

impl ScenarioSpec {
    pub fn new(scenario: Scenario, n: u32, d: u32, method: Method) -> Result<Self> {
        Ok(Self {
            scenario,
            params: StringParams::new(n, d)?,
            method,
        })
    }
}

/// Solver settings and size limits for [`total_success`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub sdp: SdpOptions,
    pub sdp_max_n: u32,
    pub srm_max_n: u32,
    /// Compute optimality residuals for every SDP block.
    pub certify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            sdp: SdpOptions::default(),
            sdp_max_n: DEFAULT_SDP_MAX_N,
            srm_max_n: DEFAULT_SRM_MAX_N,
            certify: false,
        }
    }
}

impl SolveOptions {
    pub fn with_gap_tol(gap_tol: f64) -> Self {
        Self {
            sdp: SdpOptions::with_gap_tol(gap_tol),
            ..Self::default()
        }
    }
}

/// Result of one block.
#[derive(Debug, Clone)]
pub struct BlockOutcome {
    pub tag: BlockTag,
    /// Joint success probability of the block.
    pub value: f64,
    pub prior_mass: f64,
    /// Present for SDP blocks that went through the solver.
    pub solution: Option<SdpSolution>,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone)]
pub struct DiscriminationResult {
    pub spec: ScenarioSpec,
    pub per_block: BTreeMap<BlockTag, f64>,
    pub total: f64,
    pub blocks: Vec<BlockOutcome>,
}

impl DiscriminationResult {
    /// Largest duality gap over blocks solved by the SDP, zero otherwise.
    pub fn max_gap(&self) -> f64 {
        self.blocks
            .iter()
            .filter_map(|b| b.solution.as_ref().map(|s| s.gap))
            .fold(0.0, f64::max)
    }

    pub fn all_converged(&self) -> bool {
        self.blocks
            .iter()
            .filter_map(|b| b.solution.as_ref())
            .all(|s| s.status == SdpStatus::Converged)
    }

    pub fn certificates(&self) -> impl Iterator<Item = (BlockTag, &Certificate)> {
        self.blocks.iter().filter_map(|b| b.certificate.as_ref().map(|c| (b.tag, c)))
    }
}

/// `sum_k ([sqrt G]_kk)^2`, the square-root-measurement success of a block.
pub fn srm_block(g: &SemiseparableGram) -> Result<f64> {
    if g.len() == 1 {
        return Ok(g.dense().get(0, 0));
    }
    let spec = psd_spectrum(g.dense(), DEFAULT_RANK_TOL)?;
    Ok(spectral_diagonal(&spec.eigen, f64::sqrt).iter().map(|x| x * x).sum())
}

/// Largest prior of a block: the optimum when every posterior state coincides.
fn max_prior(g: &SemiseparableGram) -> f64 {
    g.diagonal().into_iter().fold(0.0, f64::max)
}

/// Optimal success of a block and, when the solver ran, its solution.
///
/// Singleton blocks and blocks whose states all coincide are answered in
/// closed form. Solver errors carry the block tag.
pub fn optimal_block(g: &SemiseparableGram, opts: &SdpOptions) -> Result<(f64, Option<SdpSolution>)> {
    if g.len() == 1 || g.is_rank_one() {
        return Ok((max_prior(g), None));
    }
    let run = || -> Result<(f64, Option<SdpSolution>)> {
        let root = psd_sqrt(g.dense(), opts.rank_tol)?;
        let sol = solve_discrimination_sdp(&root, opts)?;
        Ok((sol.primal_value, Some(sol)))
    };
    run().map_err(|e| e.in_block(g.tag()))
}

fn block_grams(scenario: Scenario, params: StringParams) -> Result<Vec<SemiseparableGram>> {
    Ok(match scenario {
        Scenario::UnknownUnknown => irrep_blocks(params)?.iter().map(gram_from_irrep_block).collect(),
        Scenario::KnownUnknown => known_blocks(params)?.iter().map(gram_from_known_block).collect(),
    })
}

fn evaluate_block(g: &SemiseparableGram, method: Method, opts: &SolveOptions) -> Result<BlockOutcome> {
    let prior_mass = g.diagonal().iter().sum();
    let (value, solution) = match method {
        Method::Srm => (srm_block(g).map_err(|e| e.in_block(g.tag()))?, None),
        Method::Sdp => optimal_block(g, &opts.sdp)?,
    };
    let certificate = match (&solution, opts.certify) {
        (Some(sol), true) => {
            let root = psd_sqrt(g.dense(), opts.sdp.rank_tol).map_err(|e| e.in_block(g.tag()))?;
            Some(certificate(root.as_matrix(), sol).map_err(|e| e.in_block(g.tag()))?)
        }
        _ => None,
    };
    Ok(BlockOutcome {
        tag: g.tag(),
        value,
        prior_mass,
        solution,
        certificate,
    })
}

/// Total success probability: the sum of block values over every block of
/// the scenario. Blocks run in parallel; the sum is taken in block order.
pub fn total_success(spec: ScenarioSpec, opts: &SolveOptions) -> Result<DiscriminationResult> {
    let n = spec.params.n();
    let (limit, what) = match spec.method {
        Method::Sdp => (opts.sdp_max_n, "N (sdp)"),
        Method::Srm => (opts.srm_max_n, "N (srm)"),
    };
    if n > limit {
        return Err(Error::Capacity {
            what,
            value: n as usize,
            limit: limit as usize,
        });
    }
    let grams = block_grams(spec.scenario, spec.params)?;
    let outcomes: Vec<Result<BlockOutcome>> = grams
        .par_iter()
        .map(|g| evaluate_block(g, spec.method, opts))
        .collect();
    let mut blocks = Vec::with_capacity(outcomes.len());
    let mut errors = Vec::new();
    for o in outcomes {
        match o {
            Ok(b) => blocks.push(b),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(Error::Blocks(errors));
    }
    let total = blocks.iter().map(|b| b.value).sum();
    let per_block = blocks.iter().map(|b| (b.tag, b.value)).collect();
    Ok(DiscriminationResult {
        spec,
        per_block,
        total,
        blocks,
    })
}

/// One point of a sweep over `N`.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub n: u32,
    pub result: Result<DiscriminationResult>,
}

/// Total success for each `N` in `n_values`. Failures are recorded per point
/// and the sweep continues.
pub fn success_curve(
    scenario: Scenario,
    d: u32,
    n_values: &[u32],
    method: Method,
    opts: &SolveOptions,
) -> Result<Vec<CurvePoint>> {
    if n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("N values must be strictly increasing"));
    }
    Ok(n_values
        .iter()
        .map(|&n| CurvePoint {
            n,
            result: ScenarioSpec::new(scenario, n, d, method).and_then(|spec| total_success(spec, opts)),
        })
        .collect())
}
