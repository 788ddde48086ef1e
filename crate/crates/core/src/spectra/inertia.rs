//! Eigenvalue counting by Sylvester inertia, without a full diagonalization.
//!
//! In the Fock ordering the states with a common `n1` form contiguous
//! blocks, and the Hamiltonian only couples a block to itself and to its
//! neighbours. Block Gaussian elimination of `H - sigma` then gives Schur
//! complements whose negative eigenvalues add up to the number of
//! eigenvalues of `H` below `sigma`.

use faer::Mat;

use super::operator::SparseMatrix;
use crate::error::{Error, Result};
use crate::fock::FockBasis;

fn block_start(m: usize) -> usize {
    m * (m + 1) / 2
}

fn sym_evd(a: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = a
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    let vals = evd.S().column_vector().iter().copied().collect();
    Ok((vals, evd.U().to_owned()))
}

/// Number of eigenvalues of `h` strictly below `sigma`.
pub fn count_below(h: &SparseMatrix, basis: &FockBasis, sigma: f64) -> Result<usize> {
    let n = basis.total_particles();
    if h.dim() != basis.dim() {
        return Err(Error::invalid("matrix and basis dimensions differ"));
    }
    let mut negatives = 0;
    // Previous Schur complement as (eigenvalues, eigenvectors).
    let mut prev: Option<(Vec<f64>, Mat<f64>)> = None;
    for m in 0..=n {
        let start = block_start(m);
        let size = m + 1;
        let prev_start = if m > 0 { block_start(m - 1) } else { 0 };
        let mut a = Mat::<f64>::zeros(size, size);
        let mut b = Mat::<f64>::zeros(size, m);
        for r in 0..size {
            for &(c, v) in h.row(start + r) {
                if (start..start + size).contains(&c) {
                    a[(r, c - start)] = v;
                } else if m > 0 && (prev_start..start).contains(&c) {
                    b[(r, c - prev_start)] = v;
                } else if c >= start + size && c < start + size + size + 1 {
                    // coupling to the next block, handled from its side
                } else {
                    return Err(Error::invalid("matrix is not block tridiagonal in the Fock ordering"));
                }
            }
            a[(r, r)] -= sigma;
        }
        if let Some((vals, vecs)) = &prev {
            // a -= B S^-1 B^T with S = V diag(vals) V^T
            let bv = &b * vecs;
            for (j, &lam) in vals.iter().enumerate() {
                let inv = 1.0 / lam;
                for r in 0..size {
                    let x = bv[(r, j)] * inv;
                    if x == 0.0 {
                        continue;
                    }
                    for c in 0..size {
                        a[(r, c)] -= x * bv[(c, j)];
                    }
                }
            }
        }
        let (vals, vecs) = sym_evd(&a)?;
        if vals.iter().any(|v| *v == 0.0 || !v.is_finite()) {
            return Err(Error::Eigensolver(format!("singular Schur complement at shift {sigma}")));
        }
        negatives += vals.iter().filter(|v| **v < 0.0).count();
        prev = Some((vals, vecs));
    }
    Ok(negatives)
}

/// Number of eigenvalues in `[lo, hi)`.
pub fn count_in_window(h: &SparseMatrix, basis: &FockBasis, lo: f64, hi: f64) -> Result<usize> {
    if !(lo <= hi) {
        return Err(Error::invalid(format!("empty window [{lo}, {hi})")));
    }
    Ok(count_below(h, basis, hi)? - count_below(h, basis, lo)?)
}
