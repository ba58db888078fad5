//! Minimum-error discrimination of pure states as a semidefinite program.
//!
//! Primal: maximize `sum_k psi_k^T E_k psi_k` over `E_k >= 0`, `sum_k E_k = I`.
//! Dual: minimize `tr Y` over `Y >= psi_k psi_k^T` for every `k`.
//!
//! The pair is solved by a feasible primal–dual path-following method (HKM
//! direction, Mehrotra predictor–corrector) on the dual variable `Y`, in the
//! span of the states. The orthogonal complement of that span is handed to
//! the hypothesis with the largest prior.

use nalgebra::{DMatrix, DVector};

use super::{eigenvalues_sym, psd_spectrum, SymmetricMatrix, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Absolute duality-gap target.
    pub gap_tol: f64,
    /// Relative eigenvalue threshold for deflating the state span.
    pub rank_tol: f64,
    pub max_iterations: usize,
    /// Return the last iterate instead of an error when the cap is reached.
    pub allow_unconverged: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            rank_tol: DEFAULT_RANK_TOL,
            max_iterations: 200,
            allow_unconverged: false,
        }
    }
}

impl SdpOptions {
    pub fn with_gap_tol(gap_tol: f64) -> Self {
        Self {
            gap_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Converged,
    MaxIterations,
}

/// Optimal measurement, dual certificate and convergence record.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// POVM elements `E_k`, one per input state.
    pub primal: Vec<SymmetricMatrix>,
    /// Dual certificate `Y`.
    pub dual: SymmetricMatrix,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    /// Duality gap after each iteration.
    pub gap_history: Vec<f64>,
    /// Dimension of the span the solver worked in.
    pub rank: usize,
}

/// Optimality residuals of a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certificate {
    pub gap: f64,
    /// `min_k lambda_min(Y - psi_k psi_k^T)`.
    pub min_slack_eigenvalue: f64,
    /// `max_k tr((Y - psi_k psi_k^T) E_k)`.
    pub max_complementarity: f64,
    /// `max |sum_k E_k - I|`.
    pub completeness_residual: f64,
    /// `min_k lambda_min(E_k)`.
    pub min_povm_eigenvalue: f64,
}

impl Certificate {
    /// Every optimality condition within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.gap <= tol
            && self.gap >= -tol
            && self.min_slack_eigenvalue >= -tol
            && self.max_complementarity <= tol
            && self.completeness_residual <= tol
            && self.min_povm_eigenvalue >= -tol
    }
}

/// Solves the discrimination SDP for the states given by the columns of a
/// symmetric square root of the Gram matrix.
pub fn solve_discrimination_sdp(sqrt_gram: &SymmetricMatrix, opts: &SdpOptions) -> Result<SdpSolution> {
    solve_state_discrimination(sqrt_gram.as_matrix(), opts)
}

/// Solves the discrimination SDP for the states given by the columns of `states`.
pub fn solve_state_discrimination(states: &DMatrix<f64>, opts: &SdpOptions) -> Result<SdpSolution> {
    let (p, n) = states.shape();
    if n == 0 {
        return Err(Error::domain("no states to discriminate"));
    }
    if states.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("state matrix has non-finite entries"));
    }
    let gram = SymmetricMatrix::symmetrized(states.transpose() * states);
    let spec = psd_spectrum(&gram, opts.rank_tol)?;
    let r = spec.rank;
    let priors: Vec<f64> = (0..n).map(|k| gram.get(k, k)).collect();
    let favoured = favoured_hypothesis(&priors);

    // Orthonormal basis of the span (columns of u) and the state
    // coordinates in it (columns of psi).
    let first = n - r;
    let v_r = spec.eigen.vectors.columns(first, r).into_owned();
    let w_r: Vec<f64> = spec.eigen.values.iter().skip(first).copied().collect();
    let mut psi = v_r.transpose();
    let mut u = states * &v_r;
    for (i, w) in w_r.iter().enumerate() {
        let s = w.sqrt();
        psi.row_mut(i).scale_mut(s);
        u.column_mut(i).scale_mut(1.0 / s);
    }

    let reduced = match r {
        0 => Reduced::trivial(n, favoured),
        1 => Reduced::one_dimensional(&psi, favoured),
        _ => interior_point(&psi, opts)?,
    };

    let ut = u.transpose();
    let complement = DMatrix::identity(p, p) - &u * &ut;
    let primal = reduced
        .e
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let mut lifted = &u * e * &ut;
            if k == favoured {
                lifted += &complement;
            }
            SymmetricMatrix::symmetrized(lifted)
        })
        .collect();
    let dual = SymmetricMatrix::symmetrized(&u * &reduced.y * &ut);
    let primal_value: f64 = (0..n)
        .map(|k| {
            let c = psi.column(k);
            (c.transpose() * &reduced.e[k] * c)[(0, 0)]
        })
        .sum();
    let dual_value = reduced.y.trace();
    let gap = dual_value - primal_value;

    if reduced.status == SdpStatus::MaxIterations && !opts.allow_unconverged {
        return Err(Error::MaxIterations {
            iterations: reduced.iterations,
            gap,
        });
    }

    Ok(SdpSolution {
        primal,
        dual,
        primal_value,
        dual_value,
        gap,
        iterations: reduced.iterations,
        status: reduced.status,
        gap_history: reduced.gap_history,
        rank: r,
    })
}

/// Largest prior; lowest index among (relative 1e-12) ties.
fn favoured_hypothesis(priors: &[f64]) -> usize {
    let top = priors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    priors
        .iter()
        .position(|&p| p >= top - 1e-12 * top.abs())
        .unwrap_or(0)
}

/// Optimality residuals of `sol` for the states in the columns of `states`.
pub fn certificate(states: &DMatrix<f64>, sol: &SdpSolution) -> Result<Certificate> {
    let (p, n) = states.shape();
    let y = sol.dual.as_matrix();
    let mut min_slack = f64::INFINITY;
    let mut max_comp = f64::NEG_INFINITY;
    let mut min_povm = f64::INFINITY;
    let mut total = DMatrix::zeros(p, p);
    for k in 0..n {
        let c = states.column(k);
        let slack = SymmetricMatrix::symmetrized(y - c * c.transpose());
        min_slack = min_slack.min(eigenvalues_sym(&slack)?.min());
        let e = &sol.primal[k];
        max_comp = max_comp.max(slack.as_matrix().dot(e.as_matrix()));
        min_povm = min_povm.min(eigenvalues_sym(e)?.min());
        total += e.as_matrix();
    }
    let primal: f64 = (0..n)
        .map(|k| {
            let c = states.column(k);
            (c.transpose() * sol.primal[k].as_matrix() * c)[(0, 0)]
        })
        .sum();
    Ok(Certificate {
        gap: y.trace() - primal,
        min_slack_eigenvalue: min_slack,
        max_complementarity: max_comp,
        completeness_residual: (total - DMatrix::identity(p, p)).amax(),
        min_povm_eigenvalue: min_povm,
    })
}

/// Solution in the coordinates of the state span.
struct Reduced {
    e: Vec<DMatrix<f64>>,
    y: DMatrix<f64>,
    iterations: usize,
    status: SdpStatus,
    gap_history: Vec<f64>,
}

impl Reduced {
    fn trivial(n: usize, _favoured: usize) -> Self {
        Self {
            e: vec![DMatrix::zeros(0, 0); n],
            y: DMatrix::zeros(0, 0),
            iterations: 0,
            status: SdpStatus::Converged,
            gap_history: vec![0.0],
        }
    }

    /// All states collinear: guess the one with the largest weight.
    fn one_dimensional(psi: &DMatrix<f64>, favoured: usize) -> Self {
        let n = psi.ncols();
        let weights: Vec<f64> = (0..n).map(|k| psi[(0, k)] * psi[(0, k)]).collect();
        debug_assert_eq!(favoured_hypothesis(&weights), favoured);
        let e = (0..n)
            .map(|k| DMatrix::from_element(1, 1, if k == favoured { 1.0 } else { 0.0 }))
            .collect();
        Self {
            e,
            y: DMatrix::from_element(1, 1, weights[favoured]),
            iterations: 0,
            status: SdpStatus::Converged,
            gap_history: vec![0.0],
        }
    }
}

/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.98;

fn interior_point(psi: &DMatrix<f64>, opts: &SdpOptions) -> Result<Reduced> {
    let (r, n) = psi.shape();
    // Normalize total weight to one; the gap target scales accordingly.
    let scale: f64 = psi.iter().map(|x| x * x).sum();
    let psi = psi / scale.sqrt();
    let target = opts.gap_tol / scale;
    let rho: Vec<DMatrix<f64>> = (0..n)
        .map(|k| {
            let c = psi.column(k);
            c * c.transpose()
        })
        .collect();
    let max_weight = rho.iter().map(|m| m.trace()).fold(0.0, f64::max);

    let ident = DMatrix::<f64>::identity(r, r);
    let mut y = &ident * (1.0 + max_weight);
    let mut e: Vec<DMatrix<f64>> = vec![&ident / n as f64; n];
    let svec = Svec::new(r);
    let mut history = Vec::new();

    for iter in 0..opts.max_iterations {
        let s: Vec<DMatrix<f64>> = rho.iter().map(|rk| &y - rk).collect();
        let w: Vec<DMatrix<f64>> = s
            .iter()
            .map(|sk| {
                sk.clone()
                    .cholesky()
                    .map(|c| c.inverse())
                    .ok_or_else(|| Error::NumericalFailure(format!("dual slack lost definiteness at iteration {iter}")))
            })
            .collect::<Result<_>>()?;

        let primal: f64 = rho.iter().zip(&e).map(|(rk, ek)| rk.dot(ek)).sum();
        let gap = y.trace() - primal;
        let complementarity: f64 = s.iter().zip(&e).map(|(sk, ek)| sk.dot(ek)).sum();
        history.push(gap * scale);
        let infeasibility = (e.iter().fold(DMatrix::zeros(r, r), |acc, ek| acc + ek) - &ident).amax();
        if gap <= target && complementarity <= target && infeasibility <= 1e-10 {
            return Ok(Reduced {
                e,
                y: y * scale,
                iterations: iter,
                status: SdpStatus::Converged,
                gap_history: history,
            });
        }
        let mu = complementarity / (n * r) as f64;

        let schur = schur_complement(&svec, &w, &e)
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure(format!("Schur complement not positive definite at iteration {iter}")))?;
        let sum_w = w.iter().fold(DMatrix::zeros(r, r), |acc, wk| acc + wk);

        // Predictor.
        let dy_aff = svec.smat(&schur.solve(&svec.svec(&(-&ident))));
        let de_aff: Vec<DMatrix<f64>> = e
            .iter()
            .zip(&w)
            .map(|(ek, wk)| -ek - sym(&(ek * &dy_aff * wk)))
            .collect();
        let ap = step_length(&e, &de_aff)?;
        let ad = step_length(&s, std::slice::from_ref(&dy_aff))?;
        let mu_aff: f64 = s
            .iter()
            .zip(&e)
            .zip(&de_aff)
            .map(|((sk, ek), dek)| (sk + &dy_aff * ad).dot(&(ek + dek * ap)))
            .sum::<f64>()
            / (n * r) as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector.
        let second_order: Vec<DMatrix<f64>> = de_aff.iter().zip(&w).map(|(dek, wk)| sym(&(dek * &dy_aff * wk))).collect();
        let mut rhs = &sum_w * (sigma * mu) - &ident;
        for c in &second_order {
            rhs -= c;
        }
        let dy = svec.smat(&schur.solve(&svec.svec(&rhs)));
        let de: Vec<DMatrix<f64>> = e
            .iter()
            .zip(&w)
            .zip(&second_order)
            .map(|((ek, wk), ck)| wk * (sigma * mu) - ek - sym(&(ek * &dy * wk)) - ck)
            .collect();
        let ap = (STEP_FRACTION * step_length(&e, &de)?).min(1.0);
        let ad = (STEP_FRACTION * step_length(&s, std::slice::from_ref(&dy))?).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            return Err(Error::NumericalFailure(format!("step length collapsed at iteration {iter}")));
        }
        for (ek, dek) in e.iter_mut().zip(&de) {
            *ek += dek * ap;
            *ek = sym(ek);
        }
        y += &dy * ad;
        y = sym(&y);
    }

    let primal: f64 = rho.iter().zip(&e).map(|(rk, ek)| rk.dot(ek)).sum();
    history.push((y.trace() - primal) * scale);
    Ok(Reduced {
        e,
        y: y * scale,
        iterations: opts.max_iterations,
        status: SdpStatus::MaxIterations,
        gap_history: history,
    })
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest `alpha` with `x_k + alpha d >= 0` for every `k`, where `d` is either
/// one direction per matrix or a single shared direction.
fn step_length(x: &[DMatrix<f64>], d: &[DMatrix<f64>]) -> Result<f64> {
    let mut alpha = f64::INFINITY;
    for (k, xk) in x.iter().enumerate() {
        let dk = if d.len() == 1 { &d[0] } else { &d[k] };
        let chol = xk
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("iterate left the cone".into()))?;
        let l = chol.l();
        // L^{-1} D L^{-T}
        let a = l
            .solve_lower_triangular(dk)
            .ok_or_else(|| Error::NumericalFailure("singular factor".into()))?;
        let b = l
            .solve_lower_triangular(&a.transpose())
            .ok_or_else(|| Error::NumericalFailure("singular factor".into()))?;
        let low = eigenvalues_sym(&SymmetricMatrix::symmetrized(b))?.min();
        if low < 0.0 {
            alpha = alpha.min(-1.0 / low);
        }
    }
    Ok(alpha)
}

/// Symmetric vectorization with `sqrt 2` on off-diagonal entries.
struct Svec {
    r: usize,
    /// `(i, j)` with `i <= j`, column by column.
    pairs: Vec<(usize, usize)>,
}

impl Svec {
    fn new(r: usize) -> Self {
        let pairs = (0..r).flat_map(|j| (0..=j).map(move |i| (i, j))).collect();
        Self { r, pairs }
    }

    fn svec(&self, m: &DMatrix<f64>) -> DVector<f64> {
        DVector::from_iterator(
            self.pairs.len(),
            self.pairs
                .iter()
                .map(|&(i, j)| if i == j { m[(i, i)] } else { std::f64::consts::SQRT_2 * m[(i, j)] }),
        )
    }

    fn smat(&self, v: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.r, self.r);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            if i == j {
                m[(i, i)] = v[p];
            } else {
                let x = v[p] / std::f64::consts::SQRT_2;
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }
}

/// Matrix of `dY -> sum_k sym(E_k dY W_k)` in the `svec` basis.
fn schur_complement(svec: &Svec, w: &[DMatrix<f64>], e: &[DMatrix<f64>]) -> DMatrix<f64> {
    let r = svec.r;
    let r2 = r * r;
    let n = w.len();
    // t[(x + y r), (z + v r)] = sum_k W_k[x, y] E_k[z, v]
    let wm = DMatrix::from_fn(r2, n, |idx, k| w[k][(idx % r, idx / r)]);
    let em = DMatrix::from_fn(r2, n, |idx, k| e[k][(idx % r, idx / r)]);
    let t = wm * em.transpose();
    let at = |x: usize, y: usize, z: usize, v: usize| t[(x + y * r, z + v * r)];
    let coef = |i: usize, j: usize| if i == j { 0.5 } else { std::f64::consts::FRAC_1_SQRT_2 };

    let m = svec.pairs.len();
    let mut out = DMatrix::zeros(m, m);
    for (q, &(a, b)) in svec.pairs.iter().enumerate() {
        for (p, &(i, j)) in svec.pairs.iter().enumerate().take(q + 1) {
            let v = coef(i, j)
                * coef(a, b)
                * (at(j, a, b, i) + at(j, b, a, i) + at(i, a, b, j) + at(i, b, a, j));
            out[(p, q)] = v;
            out[(q, p)] = v;
        }
    }
    out
}
