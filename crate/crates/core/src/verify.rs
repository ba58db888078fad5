//! Self-checks against independent constructions: the Schur-basis oracle,
//! dense inversion and SDP optimality certificates.

use std::fmt;
use std::str::FromStr;

use crate::combinatorics::{hypothesis_range, overlap_closed, overlap_oracle, StringParams};
use crate::discrimination::{total_success, Method, Scenario, ScenarioSpec, SolveOptions};
use crate::error::{Error, Result};
use crate::gram::tridiag_check;

pub const ORACLE_TOL: f64 = 1e-12;
pub const TRIDIAG_TOL: f64 = 1e-8;
pub const CERTIFICATE_TOL: f64 = 1e-8;

/// Blocks with a larger condition number are skipped by the tridiagonal suite.
pub const TRIDIAG_MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Tridiag,
    Holevo,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Tridiag => "tridiag",
            Suite::Holevo => "holevo",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Oracle, Suite::Tridiag, Suite::Holevo],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Suite::Oracle),
            "tridiag" => Ok(Suite::Tridiag),
            "holevo" => Ok(Suite::Holevo),
            "all" => Ok(Suite::All),
            _ => Err(Error::domain(format!("unknown suite {s:?}"))),
        }
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            passed: 0,
            failed: 0,
            skipped: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} passed, {} failed, {} skipped",
            self.suite, self.passed, self.failed, self.skipped
        )?;
        if let Some(c) = &self.first_failure {
            write!(f, "\n  first failure: {c}")?;
        }
        Ok(())
    }
}

/// Closed-form overlaps against the Schur-basis recursion, `d = 2`, `N <= max_n`.
pub fn oracle_suite(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Oracle);
    for n in 1..=max_n {
        for lambda in 0..=n / 2 {
            let ks: Vec<u32> = hypothesis_range(n, lambda).collect();
            for (i, &k) in ks.iter().enumerate() {
                for &kp in &ks[i..] {
                    let closed = overlap_closed(n, k, kp, lambda);
                    let oracle = overlap_oracle(n, k, kp, lambda);
                    match (closed, oracle) {
                        (Ok(c), Ok(o)) => rep.record((c - o).abs() <= ORACLE_TOL, || {
                            format!("N={n} d=2 lambda={lambda} k={k} k'={kp}: closed {c:.17e}, oracle {o:.17e}")
                        }),
                        (c, o) => rep.record(false, || {
                            format!("N={n} d=2 lambda={lambda} k={k} k'={kp}: closed {c:?}, oracle {o:?}")
                        }),
                    }
                }
            }
        }
    }
    rep
}

/// Closed-form tridiagonal inverse against dense inversion for every block
/// with `2 <= N <= max_n`, `d in {2, 3, 4}`, `lambda >= 1`.
pub fn tridiag_suite(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Tridiag);
    for n in 2..=max_n {
        for d in [2, 3, 4] {
            let Ok(params) = StringParams::new(n, d) else {
                rep.record(false, || format!("N={n} d={d}: invalid parameters"));
                continue;
            };
            for lambda in 1..=n / 2 {
                match tridiag_check(params, lambda) {
                    Ok(c) if c.condition_number > TRIDIAG_MAX_CONDITION => rep.skipped += 1,
                    Ok(c) => rep.record(c.relative_deviation <= TRIDIAG_TOL, || {
                        format!(
                            "N={n} d={d} lambda={lambda}: relative deviation {:.3e} (condition {:.3e})",
                            c.relative_deviation, c.condition_number
                        )
                    }),
                    Err(e) => rep.record(false, || format!("N={n} d={d} lambda={lambda}: {e}")),
                }
            }
        }
    }
    rep
}

/// Optimality certificates of every solver-backed SDP block, `d = 2`,
/// `2 <= N <= max_n`, both scenarios.
pub fn holevo_suite(max_n: u32) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Holevo);
    let opts = SolveOptions {
        certify: true,
        ..SolveOptions::default()
    };
    for scenario in [Scenario::UnknownUnknown, Scenario::KnownUnknown] {
        for n in 2..=max_n {
            let result = ScenarioSpec::new(scenario, n, 2, Method::Sdp).and_then(|s| total_success(s, &opts));
            match result {
                Ok(r) => {
                    for b in &r.blocks {
                        match &b.certificate {
                            Some(c) => rep.record(c.holds(CERTIFICATE_TOL), || {
                                format!("{scenario} N={n} d=2 {:?}: {c:?}", b.tag)
                            }),
                            None => rep.skipped += 1,
                        }
                    }
                }
                Err(e) => rep.record(false, || format!("{scenario} N={n} d=2: {e}")),
            }
        }
    }
    rep
}

/// Runs a suite (or all of them) at the default sizes.
pub fn run_suite(suite: Suite) -> Vec<SuiteReport> {
    suite
        .parts()
        .into_iter()
        .map(|s| match s {
            Suite::Oracle => oracle_suite(12),
            Suite::Tridiag => tridiag_suite(60),
            Suite::Holevo => holevo_suite(30),
            Suite::All => unreachable!("expanded above"),
        })
        .collect()
}
