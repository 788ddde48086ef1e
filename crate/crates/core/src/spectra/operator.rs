//! Matrices of the Hamiltonian and of the conserved operator Q in the Fock
//! basis.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;

/// Model parameters `U`, `J`, `epsilon` and the boson count `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub u: f64,
    pub j: f64,
    pub epsilon: f64,
    pub n: usize,
}

impl ModelParams {
    pub fn new(u: f64, j: f64, epsilon: f64, n: usize) -> Result<Self> {
        let p = ModelParams { u, j, epsilon, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("N must be at least 1"));
        }
        if !(self.u.is_finite() && self.j.is_finite() && self.epsilon.is_finite()) {
            return Err(Error::invalid(format!("non-finite model parameters {self:?}")));
        }
        Ok(())
    }

    pub fn is_integrable(&self) -> bool {
        self.epsilon == 0.0
    }
}

/// Row-compressed sparse matrix. Rows are kept sorted by column.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds `value` at `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(pos) => row[pos].1 += value,
            Err(pos) => row.insert(pos, (j, value)),
        }
    }

    /// Adds `value` at `(i, j)` and `(j, i)` (once if `i == j`).
    pub fn add_symmetric(&mut self, i: usize, j: usize, value: f64) {
        self.add(i, j, value);
        if i != j {
            self.add(j, i, value);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |&(c, _)| c).map(|p| row[p].1).unwrap_or(0.0)
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for (yi, row) in y.iter_mut().zip(&self.rows) {
            *yi = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Largest off-diagonal distance `|i - j|` among stored entries.
    pub fn bandwidth(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    /// Max-entry norm of the commutator `AB - BA`.
    pub fn commutator_max_norm(&self, other: &SparseMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::invalid("commutator of matrices with different dimensions"));
        }
        let mut acc = vec![0.0; self.dim];
        let mut touched = Vec::new();
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for (lhs, rhs, sign) in [(self, other, 1.0), (other, self, -1.0)] {
                for &(k, a) in lhs.row(i) {
                    for &(j, b) in rhs.row(k) {
                        if acc[j] == 0.0 {
                            touched.push(j);
                        }
                        acc[j] += sign * a * b;
                    }
                }
            }
            for &j in &touched {
                worst = worst.max(acc[j].abs());
                acc[j] = 0.0;
            }
            touched.clear();
        }
        Ok(worst)
    }
}

/// Matrix of the Hamiltonian
/// `(U/N)(N1 - N2 + N3)^2 + eps (N3 - N1) + J/sqrt2 (a1+ a2 + a2+ a3 + h.c.)`.
pub fn build_hamiltonian(params: &ModelParams, basis: &FockBasis) -> Result<SparseMatrix> {
    params.validate()?;
    if basis.total_particles() != params.n {
        return Err(Error::invalid(format!(
            "basis holds {} bosons but parameters say N = {}",
            basis.total_particles(),
            params.n
        )));
    }
    let n = params.n as f64;
    let hop = params.j / std::f64::consts::SQRT_2;
    let mut h = SparseMatrix::zeros(basis.dim());
    for (i, s) in basis.states().iter().enumerate() {
        let imbalance = s.n1 as f64 - s.n2 as f64 + s.n3 as f64;
        let diag = params.u / n * imbalance * imbalance + params.epsilon * (s.n3 as f64 - s.n1 as f64);
        h.add(i, i, diag);
        if s.n2 == 0 || params.j == 0.0 {
            continue;
        }
        // a1+ a2 and a3+ a2; the Hermitian partners come from add_symmetric.
        let to_well1 = basis.index_of(s.n1 + 1, s.n3).expect("target in basis");
        h.add_symmetric(i, to_well1, hop * (((s.n1 + 1) * s.n2) as f64).sqrt());
        let to_well3 = basis.index_of(s.n1, s.n3 + 1).expect("target in basis");
        h.add_symmetric(i, to_well3, hop * (((s.n3 + 1) * s.n2) as f64).sqrt());
    }
    Ok(h)
}

/// Matrix of `Q = (N1 + N3) - (a1+ a3 + a3+ a1)`, which commutes with the
/// Hamiltonian when `epsilon = 0`.
pub fn build_q(basis: &FockBasis) -> SparseMatrix {
    let mut q = SparseMatrix::zeros(basis.dim());
    for (i, s) in basis.states().iter().enumerate() {
        q.add(i, i, (s.n1 + s.n3) as f64);
        if s.n3 > 0 {
            // a1+ a3
            let j = basis.index_of(s.n1 + 1, s.n3 - 1).expect("target in basis");
            q.add_symmetric(i, j, -(((s.n1 + 1) * s.n3) as f64).sqrt());
        }
    }
    q
}
