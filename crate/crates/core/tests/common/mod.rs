//! Full Hilbert-space reference constructions for small qubit strings.
//!
//! Independent of the Schur-basis machinery: states are built as explicit
//! `2^N x 2^N` density matrices from Dicke-state projectors.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Projector onto the symmetric subspace of `k` qubits.
pub fn sym_projector(k: u32) -> DMatrix<f64> {
    let dim = 1usize << k;
    let mut p = DMatrix::zeros(dim, dim);
    for w in 0..=k {
        let support: Vec<usize> = (0..dim).filter(|i| i.count_ones() == w).collect();
        let amp = 1.0 / (support.len() as f64);
        for &i in &support {
            for &j in &support {
                p[(i, j)] += amp;
            }
        }
    }
    p
}

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Haar-averaged states of the unknown–unknown scenario, `k = 1..=N`.
pub fn unknown_unknown_states(n: u32) -> Vec<DMatrix<f64>> {
    (1..=n)
        .map(|k| {
            let left = sym_projector(k) / (k + 1) as f64;
            let right = sym_projector(n - k) / (n - k + 1) as f64;
            kron(&left, &right)
        })
        .collect()
}

/// Known–unknown scenario: `N - k` sites in the reference state, `k` sites
/// in a Haar-random state.
pub fn known_unknown_states(n: u32) -> Vec<DMatrix<f64>> {
    (1..=n)
        .map(|k| {
            let known_dim = 1usize << (n - k);
            let mut reference = DMatrix::zeros(known_dim, known_dim);
            reference[(0, 0)] = 1.0;
            kron(&reference, &(sym_projector(k) / (k + 1) as f64))
        })
        .collect()
}

fn psd_power(m: &DMatrix<f64>, p: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let top = eig.eigenvalues.max();
    let vals = eig.eigenvalues.map(|w| if w > 1e-12 * top { w.powf(p) } else { 0.0 });
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

/// Square-root measurement success for mixed states.
pub fn pgm_success(rhos: &[DMatrix<f64>], etas: &[f64]) -> f64 {
    let dim = rhos[0].nrows();
    let mut avg = DMatrix::zeros(dim, dim);
    for (r, e) in rhos.iter().zip(etas) {
        avg += r * *e;
    }
    let s = psd_power(&avg, -0.5);
    rhos.iter()
        .zip(etas)
        .map(|(r, e)| {
            let povm = &s * (r * *e) * &s;
            e * (r * povm).trace()
        })
        .sum()
}

/// Helstrom bound for two weighted states.
pub fn helstrom(r1: &DMatrix<f64>, r2: &DMatrix<f64>, e1: f64, e2: f64) -> f64 {
    let diff = r1 * e1 - r2 * e2;
    let trace_norm: f64 = SymmetricEigen::new(diff).eigenvalues.iter().map(|v| v.abs()).sum();
    0.5 * (e1 + e2) + 0.5 * trace_norm
}
