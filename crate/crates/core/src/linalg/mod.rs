//! Dense symmetric linear algebra on top of `nalgebra`, plus the
//! interior-point solver for minimum-error discrimination.

mod sdp;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub use sdp::{
    certificate, solve_discrimination_sdp, solve_state_discrimination, Certificate, SdpOptions, SdpSolution,
    SdpStatus,
};

/// Default relative threshold under which eigenvalues count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Real symmetric matrix. Symmetry is enforced at construction by averaging
/// the two triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    /// Symmetrizes `m`; rejects non-square or non-finite input.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("matrix has non-finite entries"));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    /// Builds from the upper triangle: `f(i, j)` is called for `i <= j` only.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(&self.0 * c)
    }

    /// `Q M Q^T` for any square `Q` of matching order.
    pub fn conjugate(&self, q: &DMatrix<f64>) -> Self {
        Self::symmetrized(q * &self.0 * q.transpose())
    }
}

/// Eigendecomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl Eigen {
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

const EIG_MAX_ITER: usize = 10_000;

/// Symmetric eigendecomposition, eigenvalues ascending.
pub fn eig_sym(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.order();
    if n == 0 {
        return Ok(Eigen {
            values: DVector::zeros(0),
            vectors: DMatrix::zeros(0, 0),
        });
    }
    let dec = SymmetricEigen::try_new(m.0.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure(format!("symmetric eigensolver did not converge (n = {n})")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| dec.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| dec.eigenvectors[(r, order[c])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_sym(m: &SymmetricMatrix) -> Result<DVector<f64>> {
    let n = m.order();
    if n == 0 {
        return Ok(DVector::zeros(0));
    }
    let mut v = m.0.clone().symmetric_eigenvalues();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
    }
    v.as_mut_slice().sort_by(f64::total_cmp);
    Ok(v)
}

/// Spectral decomposition of a PSD matrix with small eigenvalues set to zero.
#[derive(Debug, Clone)]
pub struct PsdSpectrum {
    pub eigen: Eigen,
    /// Number of eigenvalues above the rank threshold.
    pub rank: usize,
}

/// Eigendecomposition of a PSD matrix; eigenvalues below `rank_tol * lambda_max`
/// are clamped to zero, and values below `-rank_tol * lambda_max` are an error.
pub fn psd_spectrum(m: &SymmetricMatrix, rank_tol: f64) -> Result<PsdSpectrum> {
    let mut eigen = eig_sym(m)?;
    let top = eigen.max_value().max(0.0);
    let cut = rank_tol * top;
    let low = eigen.min_value();
    if low < -cut && low < 0.0 {
        return Err(Error::NotPsd {
            min_eigenvalue: low,
            tolerance: cut,
        });
    }
    let mut rank = 0;
    for v in eigen.values.iter_mut() {
        if *v <= cut {
            *v = 0.0;
        } else {
            rank += 1;
        }
    }
    Ok(PsdSpectrum { eigen, rank })
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(m: &SymmetricMatrix, rank_tol: f64) -> Result<SymmetricMatrix> {
    let spec = psd_spectrum(m, rank_tol)?;
    Ok(spectral_function(&spec.eigen, f64::sqrt))
}

/// `V f(w) V^T`.
pub(crate) fn spectral_function(e: &Eigen, f: impl Fn(f64) -> f64) -> SymmetricMatrix {
    let mut scaled = e.vectors.clone();
    for (c, w) in e.values.iter().enumerate() {
        let fw = f(*w);
        scaled.column_mut(c).scale_mut(fw);
    }
    SymmetricMatrix::symmetrized(scaled * e.vectors.transpose())
}

/// Diagonal of `V f(w) V^T` without forming the full product.
pub(crate) fn spectral_diagonal(e: &Eigen, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let fw: Vec<f64> = e.values.iter().map(|w| f(*w)).collect();
    (0..e.vectors.nrows())
        .map(|r| {
            e.vectors
                .row(r)
                .iter()
                .zip(&fw)
                .map(|(v, f)| v * v * f)
                .sum()
        })
        .collect()
}

/// Inverse through a Cholesky factorization, falling back to LU for
/// indefinite input.
pub fn inverse(m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    if let Some(ch) = m.0.clone().cholesky() {
        return Ok(SymmetricMatrix::symmetrized(ch.inverse()));
    }
    m.0.clone()
        .try_inverse()
        .map(SymmetricMatrix::symmetrized)
        .ok_or_else(|| Error::NumericalFailure("matrix is singular".into()))
}

/// Ratio of extreme absolute eigenvalues; infinite when singular.
pub fn condition_number(m: &SymmetricMatrix) -> Result<f64> {
    let w = eigenvalues_sym(m)?;
    let abs: Vec<f64> = w.iter().map(|x| x.abs()).collect();
    let hi = abs.iter().copied().fold(0.0, f64::max);
    let lo = abs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if lo == 0.0 { f64::INFINITY } else { hi / lo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> SymmetricMatrix {
        SymmetricMatrix::new(DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0))).unwrap()
    }

    fn random_psd(n: usize, rank: usize, rng: &mut impl Rng) -> SymmetricMatrix {
        let a = DMatrix::from_fn(n, rank, |_, _| rng.gen_range(-1.0..1.0));
        SymmetricMatrix::new(&a * a.transpose()).unwrap()
    }

    #[test]
    fn eig_examples() {
        let e = eig_sym(&SymmetricMatrix::identity(4)).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let e = eig_sym(&SymmetricMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values.as_slice(), &[1.0, 2.0, 3.0]);
        for c in 0..3 {
            assert!((e.vectors.column(c).norm() - 1.0).abs() < 1e-15);
        }
        assert!((e.vectors[(1, 0)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eig_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 5, 50] {
            let m = random_symmetric(n, &mut rng);
            let e = eig_sym(&m).unwrap();
            let resid = m.as_matrix() * &e.vectors - &e.vectors * DMatrix::from_diagonal(&e.values);
            assert!(resid.amax() <= 1e-10 * m.max_abs(), "n={n}");
            let orth = e.vectors.transpose() * &e.vectors - DMatrix::identity(n, n);
            assert!(orth.amax() <= 1e-10);
            assert!(e.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn sqrt_of_rank_one_gram() {
        let s3 = 3f64.sqrt() / 4.0;
        let g = SymmetricMatrix::from_upper(2, |i, j| [[3.0 / 8.0, s3], [s3, 0.5]][i][j]);
        let r = psd_sqrt(&g, DEFAULT_RANK_TOL).unwrap();
        let expect = g.scale(1.0 / (7.0f64 / 8.0).sqrt());
        assert!((r.as_matrix() - expect.as_matrix()).amax() < 1e-14);
    }

    #[test]
    fn sqrt_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (n, rank) in [(1usize, 1usize), (6, 6), (30, 12), (100, 100)] {
            let m = random_psd(n, rank, &mut rng);
            let r = psd_sqrt(&m, DEFAULT_RANK_TOL).unwrap();
            let back = r.as_matrix() * r.as_matrix();
            let scale = eig_sym(&m).unwrap().max_value();
            assert!((back - m.as_matrix()).amax() <= 1e-10 * scale, "n={n}");
            // sqrt(X^2) = X for PSD X
            let sq = SymmetricMatrix::new(m.as_matrix() * m.as_matrix()).unwrap();
            let again = psd_sqrt(&sq, DEFAULT_RANK_TOL).unwrap();
            assert!((again.as_matrix() - m.as_matrix()).amax() <= 1e-9 * scale.max(1.0), "n={n}");
        }
        assert_eq!(psd_sqrt(&SymmetricMatrix::identity(3), DEFAULT_RANK_TOL).unwrap(), SymmetricMatrix::identity(3));
    }

    #[test]
    fn negative_eigenvalue_is_rejected() {
        let m = SymmetricMatrix::from_diagonal(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&m, DEFAULT_RANK_TOL), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn spectral_diagonal_matches_full_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_psd(12, 12, &mut rng);
        let e = eig_sym(&m).unwrap();
        let full = spectral_function(&e, f64::sqrt);
        let diag = spectral_diagonal(&e, f64::sqrt);
        for (i, d) in diag.iter().enumerate() {
            assert!((full.get(i, i) - d).abs() < 1e-14);
        }
    }

    #[test]
    fn inverse_of_spd_and_indefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_psd(8, 8, &mut rng);
        let inv = inverse(&m).unwrap();
        assert!((inv.as_matrix() * m.as_matrix() - DMatrix::identity(8, 8)).amax() < 1e-8);
        let m = SymmetricMatrix::from_diagonal(&[2.0, -4.0]);
        assert_eq!(inverse(&m).unwrap(), SymmetricMatrix::from_diagonal(&[0.5, -0.25]));
        assert!(inverse(&SymmetricMatrix::from_diagonal(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn non_square_and_non_finite_rejected() {
        assert!(SymmetricMatrix::new(DMatrix::zeros(2, 3)).is_err());
        assert!(SymmetricMatrix::new(DMatrix::from_element(1, 1, f64::NAN)).is_err());
    }
}
