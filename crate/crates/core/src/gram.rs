//! Gram matrices of the posterior states, with priors folded in.
//!
//! Both scenarios produce semiseparable matrices: for `k <= k'` the entry is
//! `v_k u_k'`. The unknown–unknown blocks are labelled by the irrep `lambda`,
//! the known–unknown blocks by the number of excitations `e = N - n_tilde0`
//! (particles not in the known state `|0>`).

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_traits::ToPrimitive;

use crate::combinatorics::{hypothesis_range, overlap_unchecked, IrrepBlock, StringParams, EXACT_LIMIT};
use crate::error::{BlockTag, Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::numeric::{binomial, ln_binomial, ratio_f64};

/// One block of the known–unknown scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownBlock {
    params: StringParams,
    excitations: u32,
    k_range: RangeInclusive<u32>,
    priors: Vec<f64>,
}

impl KnownBlock {
    /// Block with `n_tilde0` particles in the known state.
    pub fn new(params: StringParams, n_tilde0: u32) -> Result<Self> {
        if n_tilde0 > params.n() {
            return Err(Error::domain(format!(
                "n_tilde0 = {n_tilde0} exceeds N = {}",
                params.n()
            )));
        }
        let e = params.n() - n_tilde0;
        let k_range = e.max(1)..=params.n();
        let priors = k_range.clone().map(|k| known_prior(params, e, k)).collect();
        Ok(Self {
            params,
            excitations: e,
            k_range,
            priors,
        })
    }

    pub fn params(&self) -> StringParams {
        self.params
    }

    pub fn n_tilde0(&self) -> u32 {
        self.params.n() - self.excitations
    }

    /// `N - n_tilde0`; equal to `n_1` for qubits.
    pub fn excitations(&self) -> u32 {
        self.excitations
    }

    /// Number of excitation patterns aggregated into this block,
    /// `C(e + d - 2, d - 2)`.
    pub fn multiplicity(&self) -> f64 {
        multiplicity(self.params, self.excitations)
    }

    pub fn k_range(&self) -> RangeInclusive<u32> {
        self.k_range.clone()
    }

    /// Aggregated priors `C(e + d - 2, d - 2) / (N d_sym(k))`.
    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn prior_mass(&self) -> f64 {
        self.priors.iter().sum()
    }
}

/// All known–unknown blocks, ordered by increasing number of excitations.
pub fn known_blocks(params: StringParams) -> Result<Vec<KnownBlock>> {
    (0..=params.n())
        .rev()
        .map(|n_tilde0| KnownBlock::new(params, n_tilde0))
        .collect()
}

fn multiplicity(params: StringParams, e: u32) -> f64 {
    let d = u64::from(params.d());
    let e = u64::from(e);
    if params.n() <= EXACT_LIMIT {
        binomial(e + d - 2, d - 2).to_f64().unwrap_or(f64::INFINITY)
    } else {
        ln_binomial(e + d - 2, d - 2).exp()
    }
}

fn ln_sym_dim(k: u32, d: u32) -> f64 {
    ln_binomial(u64::from(d + k - 1), u64::from(d - 1))
}

fn known_prior(params: StringParams, e: u32, k: u32) -> f64 {
    let (n, d) = (u64::from(params.n()), u64::from(params.d()));
    if params.n() <= EXACT_LIMIT {
        let num = binomial(u64::from(e) + d - 2, d - 2);
        let den = num_bigint::BigUint::from(n) * binomial(u64::from(k) + d - 1, d - 1);
        ratio_f64(&num, &den)
    } else {
        (ln_binomial(u64::from(e) + d - 2, d - 2) - (n as f64).ln() - ln_sym_dim(k, params.d())).exp()
    }
}

/// `sqrt(C(lo, e) / C(hi, e))`, the overlap of two known–unknown posteriors.
fn known_overlap(n: u32, lo: u32, hi: u32, e: u32) -> f64 {
    let (lo, hi, e) = (u64::from(lo), u64::from(hi), u64::from(e));
    if n <= EXACT_LIMIT {
        ratio_f64(&binomial(lo, e), &binomial(hi, e)).sqrt()
    } else {
        (0.5 * (ln_binomial(lo, e) - ln_binomial(hi, e))).exp()
    }
}

/// Gram matrix in semiseparable form together with its dense materialization.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiseparableGram {
    tag: BlockTag,
    params: StringParams,
    k_range: RangeInclusive<u32>,
    u: Vec<f64>,
    v: Vec<f64>,
    dense: SymmetricMatrix,
    rescaled: bool,
}

impl SemiseparableGram {
    pub fn tag(&self) -> BlockTag {
        self.tag
    }

    pub fn params(&self) -> StringParams {
        self.params
    }

    /// Hypothesis labels `k` of the rows, ascending.
    pub fn k_range(&self) -> RangeInclusive<u32> {
        self.k_range.clone()
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Generator with `G[k][k'] = v_k u_k'` for `k <= k'`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn dense(&self) -> &SymmetricMatrix {
        &self.dense
    }

    pub fn is_rescaled(&self) -> bool {
        self.rescaled
    }

    /// Diagonal entries, i.e. the priors of the block.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.dense.get(i, i)).collect()
    }

    /// `triu(v u^T) + tril(u v^T)` rebuilt from the generators.
    pub fn from_generators(&self) -> SymmetricMatrix {
        SymmetricMatrix::from_upper(self.len(), |i, j| self.v[i] * self.u[j])
    }

    /// Every pairwise overlap equals one (all posterior states coincide).
    pub fn is_rank_one(&self) -> bool {
        match self.tag {
            BlockTag::Irrep(lambda) => lambda == 0,
            BlockTag::Excitations(e) => e == 0,
        }
    }

    /// Row/column labelled CSV of the dense matrix.
    pub fn to_csv(&self) -> String {
        let ks: Vec<u32> = self.k_range().collect();
        let mut out = String::from("k");
        for k in &ks {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
        for (i, k) in ks.iter().enumerate() {
            let _ = write!(out, "{k}");
            for j in 0..ks.len() {
                let _ = write!(out, ",{:.17e}", self.dense.get(i, j));
            }
            out.push('\n');
        }
        out
    }
}

/// Gram matrix of irrep block `lambda`:
/// `G[k][k'] = sqrt(eta_k eta_k') <Omega_k|Omega_k'>`.
pub fn build_gram_unknown(params: StringParams, lambda: u32) -> Result<SemiseparableGram> {
    let block = IrrepBlock::new(params, lambda)?;
    Ok(gram_from_irrep_block(&block))
}

pub fn gram_from_irrep_block(block: &IrrepBlock) -> SemiseparableGram {
    let params = block.params();
    let n = params.n();
    let lambda = block.lambda();
    let ks: Vec<u32> = block.k_range().collect();
    let eta = block.priors();
    let l = u64::from(lambda);
    // u_k = sqrt(eta_k C(N-k,l)/C(k,l)), v_k = sqrt(eta_k C(k,l)/C(N-k,l))
    let (u, v): (Vec<f64>, Vec<f64>) = ks
        .iter()
        .zip(eta)
        .map(|(&k, &e)| {
            let log_ratio = ln_binomial(u64::from(n - k), l) - ln_binomial(u64::from(k), l);
            let half = 0.5 * log_ratio;
            (e.sqrt() * half.exp(), e.sqrt() * (-half).exp())
        })
        .unzip();
    let dense = SymmetricMatrix::from_upper(ks.len(), |i, j| {
        (eta[i] * eta[j]).sqrt() * overlap_unchecked(n, ks[i], ks[j], lambda)
    });
    SemiseparableGram {
        tag: BlockTag::Irrep(lambda),
        params,
        k_range: block.k_range(),
        u,
        v,
        dense,
        rescaled: false,
    }
}

/// Aggregated Gram matrix of the known–unknown block with `n_tilde0`
/// particles in the known state:
/// `C(e+d-2, d-2) / (N sqrt(d_k d_k')) * sqrt(C(k,e) / C(k',e))` for `k <= k'`.
pub fn build_gram_known(params: StringParams, n_tilde0: u32) -> Result<SemiseparableGram> {
    let block = KnownBlock::new(params, n_tilde0)?;
    Ok(gram_from_known_block(&block))
}

pub fn gram_from_known_block(block: &KnownBlock) -> SemiseparableGram {
    let params = block.params();
    let e = block.excitations();
    let ks: Vec<u32> = block.k_range().collect();
    let eta = block.priors();
    let (u, v): (Vec<f64>, Vec<f64>) = ks
        .iter()
        .zip(eta)
        .map(|(&k, &p)| {
            let half = 0.5 * ln_binomial(u64::from(k), u64::from(e));
            (p.sqrt() * (-half).exp(), p.sqrt() * half.exp())
        })
        .unzip();
    let dense = SymmetricMatrix::from_upper(ks.len(), |i, j| {
        (eta[i] * eta[j]).sqrt() * known_overlap(params.n(), ks[i], ks[j], e)
    });
    SemiseparableGram {
        tag: BlockTag::Excitations(e),
        params,
        k_range: block.k_range(),
        u,
        v,
        dense,
        rescaled: false,
    }
}

/// `(N/2)^2 / ((d - 1)(2j + 1))`.
pub fn rescale_factor(params: StringParams, lambda: u32) -> f64 {
    let half_n = f64::from(params.n()) / 2.0;
    let two_j = f64::from(params.n() - 2 * lambda);
    half_n * half_n / (f64::from(params.d() - 1) * (two_j + 1.0))
}

/// `G~ = (N/2)^2 / ((d - 1)(2j + 1)) G` for an unknown–unknown block.
pub fn rescale_gram(g: &SemiseparableGram) -> Result<SemiseparableGram> {
    let lambda = match g.tag {
        BlockTag::Irrep(l) if !g.rescaled => l,
        BlockTag::Irrep(_) => return Err(Error::domain("Gram matrix is already rescaled")),
        BlockTag::Excitations(_) => return Err(Error::domain("rescaling applies to unknown–unknown blocks only")),
    };
    let c = rescale_factor(g.params, lambda);
    let root = c.sqrt();
    Ok(SemiseparableGram {
        u: g.u.iter().map(|x| x * root).collect(),
        v: g.v.iter().map(|x| x * root).collect(),
        dense: g.dense.scale(c),
        rescaled: true,
        ..g.clone()
    })
}

/// Closed-form diagonal and super-diagonal of the inverse of the rescaled Gram
/// matrix `G~` of the block with spin `j = two_j / 2`.
///
/// Entries are listed in the row order of the Gram matrix (ascending `k`,
/// i.e. descending `m = N/2 - k`); both sequences are symmetric under
/// `m -> -m`, so the order only matters for readability.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalInverse {
    pub diag: Vec<f64>,
    pub superdiag: Vec<f64>,
}

pub fn tridiag_inverse_reference(params: StringParams, two_j: u32) -> Result<TridiagonalInverse> {
    let n = params.n();
    if two_j > n || (n - two_j) % 2 != 0 {
        return Err(Error::domain(format!("2j = {two_j} is not N - 2 lambda for N = {n}")));
    }
    let lambda = (n - two_j) / 2;
    if lambda == 0 {
        return Err(Error::domain("lambda = 0 block is rank one and has no inverse"));
    }
    let d = u64::from(params.d());
    let (nn, l) = (u64::from(n), u64::from(lambda));
    let lf = crate::numeric::ln_factorial;
    let half_n = n as f64 / 2.0;
    let j = f64::from(two_j) / 2.0;

    // ln B as a function of k = N/2 - m.
    let ln_b_const = ((nn - l + 1) as f64).ln() - 2.0 * half_n.ln() + lf(l) + lf(nn - l) - lf(l + d - 2) - lf(nn - l + d - 1);
    let ln_b = |k: u64| ln_b_const + lf(k + d - 1) + lf(nn - k + d - 1) - lf(k) - lf(nn - k);
    // (N/2 - j)(N/2 + j + 1)
    let denom = (l * (nn - l + 1)) as f64;

    let ks: Vec<u64> = (l..=nn - l).collect();
    let diag = ks
        .iter()
        .map(|&k| {
            let m = half_n - k as f64;
            let num = j * (j + 1.0) + half_n * (half_n + 1.0) - 2.0 * m * m;
            n as f64 * ln_b(k).exp() * num / denom
        })
        .collect();
    let superdiag = ks
        .windows(2)
        .map(|w| {
            let k = w[0];
            // m = N/2 - k - 1 couples rows k and k + 1
            let prod = ((k + 1) * (nn - k) * (k + 1 - l) * (nn - l - k)) as f64;
            -(n as f64) * (0.5 * (ln_b(k) + ln_b(k + 1))).exp() * prod.sqrt() / denom
        })
        .collect();
    Ok(TridiagonalInverse { diag, superdiag })
}

/// Comparison of the dense inverse of `G~` with [`tridiag_inverse_reference`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TridiagCheck {
    /// `max |inv(G~) - T| / max |inv(G~)|`.
    pub relative_deviation: f64,
    pub condition_number: f64,
}

/// Inverts the rescaled Gram matrix of block `lambda` densely and measures
/// its distance to the closed-form tridiagonal.
pub fn tridiag_check(params: StringParams, lambda: u32) -> Result<TridiagCheck> {
    let g = rescale_gram(&build_gram_unknown(params, lambda)?)?;
    let condition_number = crate::linalg::condition_number(g.dense())?;
    let inv = crate::linalg::inverse(g.dense())?;
    let t = tridiag_inverse_reference(params, params.n() - 2 * lambda)?;
    let size = g.len();
    let mut err = 0.0f64;
    for i in 0..size {
        for j in 0..size {
            let r = match i.abs_diff(j) {
                0 => t.diag[i],
                1 => t.superdiag[i.min(j)],
                _ => 0.0,
            };
            err = err.max((inv.get(i, j) - r).abs());
        }
    }
    Ok(TridiagCheck {
        relative_deviation: err / inv.max_abs(),
        condition_number,
    })
}

/// Hypothesis range of a block, shared by both scenarios.
pub fn block_k_range(tag: BlockTag, n: u32) -> RangeInclusive<u32> {
    match tag {
        BlockTag::Irrep(lambda) => hypothesis_range(n, lambda),
        BlockTag::Excitations(e) => e.max(1)..=n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{irrep_blocks, overlap_oracle};
    use crate::linalg::{condition_number, eigenvalues_sym, inverse};
    use nalgebra::DMatrix;

    fn p(n: u32, d: u32) -> StringParams {
        StringParams::new(n, d).unwrap()
    }

    #[test]
    fn unknown_example_n2() {
        let g = build_gram_unknown(p(2, 2), 0).unwrap();
        let s3 = 3f64.sqrt() / 4.0;
        let expect = [[3.0 / 8.0, s3], [s3, 0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.dense().get(i, j) - expect[i][j]).abs() < 1e-16);
            }
        }
        assert!(g.is_rank_one());
    }

    #[test]
    fn unknown_entries_match_oracle() {
        for n in 2..=12u32 {
            for d in [2u32, 3, 5] {
                for block in irrep_blocks(p(n, d)).unwrap() {
                    let g = gram_from_irrep_block(&block);
                    let ks: Vec<u32> = block.k_range().collect();
                    let eta = block.priors();
                    for (i, &k) in ks.iter().enumerate() {
                        assert_eq!(g.dense().get(i, i), eta[i]);
                        for (jx, &kp) in ks.iter().enumerate() {
                            let o = overlap_oracle(n, k, kp, block.lambda()).unwrap();
                            let expect = (eta[i] * eta[jx]).sqrt() * o;
                            assert!((g.dense().get(i, jx) - expect).abs() < 1e-14);
                        }
                    }
                }
            }
        }
    }

    fn check_structure(g: &SemiseparableGram) {
        let rebuilt = g.from_generators();
        let scale = g.dense().max_abs();
        assert!((rebuilt.as_matrix() - g.dense().as_matrix()).amax() <= 1e-12 * scale);
        let trace: f64 = g.diagonal().iter().sum();
        assert!((g.dense().trace() - trace).abs() <= 1e-15);
        let w = eigenvalues_sym(g.dense()).unwrap();
        assert!(w.min() >= -1e-10 * w.max(), "{:?}: {}", g.tag(), w.min());
    }

    #[test]
    fn semiseparable_psd_and_trace() {
        for n in [1u32, 2, 7, 30, 101, 200] {
            for d in [2u32, 3, 4, 8] {
                let params = p(n, d);
                for block in irrep_blocks(params).unwrap() {
                    let g = gram_from_irrep_block(&block);
                    check_structure(&g);
                    assert!((g.dense().trace() - block.prior_mass()).abs() < 1e-12);
                }
                let mut mass = 0.0;
                for block in known_blocks(params).unwrap() {
                    let g = gram_from_known_block(&block);
                    check_structure(&g);
                    mass += block.prior_mass();
                }
                assert!((mass - 1.0).abs() < 1e-12, "N={n} d={d}");
            }
        }
    }

    #[test]
    fn unknown_blocks_are_persymmetric() {
        for n in [4u32, 9, 40] {
            for block in irrep_blocks(p(n, 3)).unwrap() {
                let g = gram_from_irrep_block(&block);
                let ks: Vec<u32> = block.k_range().collect();
                let idx = |k: u32| ks.iter().position(|&x| x == k);
                for (i, &k) in ks.iter().enumerate() {
                    for (jx, &kp) in ks.iter().enumerate() {
                        if let (Some(a), Some(b)) = (idx(n - kp), idx(n - k)) {
                            let diff = (g.dense().get(i, jx) - g.dense().get(a, b)).abs();
                            assert!(diff < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn known_examples() {
        let g = build_gram_known(p(4, 2), 3).unwrap();
        assert_eq!(g.k_range(), 1..=4);
        assert!((g.dense().get(0, 0) - 0.125).abs() < 1e-16);
        for (i, k) in g.k_range().enumerate() {
            assert!((g.dense().get(i, i) - 1.0 / (f64::from(k + 1) * 4.0)).abs() < 1e-16);
        }
        assert!(build_gram_known(p(4, 2), 5).is_err());
    }

    #[test]
    fn known_general_d_reduces_to_qubits() {
        for n in 1..=20u32 {
            for n1 in 0..=n {
                let g = build_gram_known(p(n, 2), n - n1).unwrap();
                let ks: Vec<u32> = g.k_range().collect();
                for (i, &k) in ks.iter().enumerate() {
                    for (jx, &kp) in ks.iter().enumerate() {
                        let (lo, hi) = (k.min(kp), k.max(kp));
                        let eta = |k: u32| 1.0 / (f64::from(k + 1) * f64::from(n));
                        let ratio = ratio_f64(&binomial(lo.into(), n1.into()), &binomial(hi.into(), n1.into()));
                        let expect = (eta(k) * eta(kp) * ratio).sqrt();
                        assert!((g.dense().get(i, jx) - expect).abs() < 1e-15);
                    }
                }
            }
        }
    }

    /// Posterior states |w^n_k> as explicit vectors in (C^d)^N.
    fn explicit_known_states(n: u32, d: u32) -> Vec<(Vec<u32>, u32, Vec<f64>)> {
        let dim = (d as usize).pow(n);
        let digits = |mut idx: usize| -> Vec<u32> {
            let mut out = vec![0u32; n as usize];
            for slot in out.iter_mut().rev() {
                *slot = (idx % d as usize) as u32;
                idx /= d as usize;
            }
            out
        };
        let mut states = Vec::new();
        for k in 1..=n {
            // group basis strings with zeros on the first N - k sites by composition
            let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<usize>> = Default::default();
            for idx in 0..dim {
                let s = digits(idx);
                if s[..(n - k) as usize].iter().any(|&x| x != 0) {
                    continue;
                }
                let mut counts = vec![0u32; d as usize];
                for &x in &s[(n - k) as usize..] {
                    counts[x as usize] += 1;
                }
                groups.entry(counts).or_default().push(idx);
            }
            for (counts, members) in groups {
                let mut v = vec![0.0; dim];
                let amp = 1.0 / (members.len() as f64).sqrt();
                for m in members {
                    v[m] = amp;
                }
                states.push((counts, k, v));
            }
        }
        states
    }

    #[test]
    fn known_aggregation_matches_explicit_multi_index_blocks() {
        for (n, d) in [(3u32, 3u32), (5, 3), (6, 3), (4, 4)] {
            let states = explicit_known_states(n, d);
            let params = p(n, d);
            for block in known_blocks(params).unwrap() {
                let e = block.excitations();
                let g = gram_from_known_block(&block);
                let ks: Vec<u32> = block.k_range().collect();
                let mut agg = DMatrix::<f64>::zeros(ks.len(), ks.len());
                // sum over full labels n~ with n~_0 = N - e
                let mut labels: Vec<Vec<u32>> = states
                    .iter()
                    .filter(|(c, k, _)| k - c[0] == e)
                    .map(|(c, _, _)| c[1..].to_vec())
                    .collect();
                labels.sort();
                labels.dedup();
                for tail in &labels {
                    for (i, &k) in ks.iter().enumerate() {
                        for (jx, &kp) in ks.iter().enumerate() {
                            let find = |k: u32| {
                                states.iter().find(|(c, kk, _)| *kk == k && c[1..] == tail[..] && k - c[0] == e)
                            };
                            if let (Some(a), Some(b)) = (find(k), find(kp)) {
                                let ov: f64 = a.2.iter().zip(&b.2).map(|(x, y)| x * y).sum();
                                let eta = |k: u32| 1.0 / (f64::from(n) * ratio_f64(&binomial(u64::from(k + d - 1), u64::from(d - 1)), &1u32.into()));
                                agg[(i, jx)] += (eta(k) * eta(kp)).sqrt() * ov;
                            }
                        }
                    }
                }
                assert_eq!(labels.len() as f64, block.multiplicity());
                assert!((agg - g.dense().as_matrix()).amax() < 1e-14, "N={n} d={d} e={e}");
            }
        }
    }

    #[test]
    fn rescale_factor_examples() {
        let params = p(10, 2);
        for lambda in 0..=5 {
            let expect = 25.0 / f64::from(10 - 2 * lambda + 1);
            assert!((rescale_factor(params, lambda) - expect).abs() < 1e-15);
        }
        let g = build_gram_unknown(p(6, 3), 1).unwrap();
        let r = rescale_gram(&g).unwrap();
        assert!(r.is_rescaled());
        assert!(rescale_gram(&r).is_err());
        assert!(rescale_gram(&build_gram_known(p(4, 2), 2).unwrap()).is_err());
        assert!((r.from_generators().as_matrix() - r.dense().as_matrix()).amax() < 1e-12);
    }

    #[test]
    fn singleton_block_reference() {
        let t = tridiag_inverse_reference(p(4, 2), 0).unwrap();
        assert_eq!(t.diag.len(), 1);
        assert!(t.superdiag.is_empty());
        let g = rescale_gram(&build_gram_unknown(p(4, 2), 2).unwrap()).unwrap();
        assert!((t.diag[0] * g.dense().get(0, 0) - 1.0).abs() < 1e-13);
        assert!(tridiag_inverse_reference(p(4, 2), 4).is_err());
        assert!(tridiag_inverse_reference(p(4, 2), 3).is_err());
    }

    #[test]
    fn dense_inverse_is_the_closed_form_tridiagonal() {
        for n in [2u32, 5, 12, 31, 60] {
            for d in [2u32, 3, 4] {
                for lambda in 1..=n / 2 {
                    let g = rescale_gram(&build_gram_unknown(p(n, d), lambda).unwrap()).unwrap();
                    if condition_number(g.dense()).unwrap() > 1e12 {
                        continue;
                    }
                    let inv = inverse(g.dense()).unwrap();
                    let t = tridiag_inverse_reference(p(n, d), n - 2 * lambda).unwrap();
                    let size = g.len();
                    let reference = DMatrix::from_fn(size, size, |i, j| match i.abs_diff(j) {
                        0 => t.diag[i],
                        1 => t.superdiag[i.min(j)],
                        _ => 0.0,
                    });
                    let scale = inv.max_abs();
                    let err = (inv.as_matrix() - reference).amax();
                    assert!(err <= 1e-8 * scale, "N={n} d={d} l={lambda}: {err:e} vs {scale:e}");
                }
            }
        }
    }

    #[test]
    fn csv_dump_has_labelled_rows() {
        let g = build_gram_unknown(p(4, 2), 1).unwrap();
        let csv = g.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,1,2,3");
        assert!(lines[1].starts_with("1,"));
        assert_eq!(lines.len(), 4);
    }
}
