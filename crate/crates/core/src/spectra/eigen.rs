use faer::diag::Diag;
use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::{get_global_parallelism, Mat, MatRef};

use super::operator::{build_q, ModelParams, SparseMatrix};
use crate::error::{Error, Result};
use crate::fock::FockBasis;

/// Symmetry tolerance accepted by [`diagonalize`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Relative energy gap (in units of `max |E|`) under which eigenstates are
/// treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Full spectrum and eigenvectors of a Hamiltonian matrix.
///
/// `vectors` has one eigenvector per column, in Fock-basis order, matching
/// the ascending `energies`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    params: ModelParams,
    basis: FockBasis,
    energies: Vec<f64>,
    vectors: Mat<f64>,
}

impl EigenSystem {
    /// Assembles an eigensystem from stored parts, checking shapes and order.
    pub fn from_parts(params: ModelParams, energies: Vec<f64>, vectors: Mat<f64>) -> Result<Self> {
        params.validate()?;
        let basis = FockBasis::new(params.n)?;
        let d = basis.dim();
        if energies.len() != d || vectors.nrows() != d || vectors.ncols() != d {
            return Err(Error::invalid(format!(
                "eigensystem parts have {} energies and a {}x{} vector matrix, expected dimension {d}",
                energies.len(),
                vectors.nrows(),
                vectors.ncols()
            )));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("energies are not sorted ascending"));
        }
        Ok(EigenSystem { params, basis, energies, vectors })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `E_k / N`.
    pub fn scaled_energy(&self, k: usize) -> f64 {
        self.energies[k] / self.params.n as f64
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        self.vectors.col_as_slice(k)
    }

    pub fn vectors(&self) -> MatRef<'_, f64> {
        self.vectors.as_ref()
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.dim() {
            return Err(Error::invalid(format!(
                "eigenstate index {k} out of range (dimension {})",
                self.dim()
            )));
        }
        Ok(())
    }

    /// `|| H v_k - E_k v_k ||_2`.
    pub fn residual_norm(&self, h: &SparseMatrix, k: usize) -> f64 {
        let v = self.vector(k);
        let hv = h.apply(v);
        hv.iter()
            .zip(v)
            .map(|(a, b)| (a - self.energies[k] * b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_energy(&self) -> f64 {
        self.energies.iter().fold(0.0f64, |m, e| m.max(e.abs()))
    }
}

fn check_symmetric(h: &SparseMatrix) -> Result<()> {
    let asym = h.max_asymmetry();
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric { max_asymmetry: asym });
    }
    Ok(())
}

/// Full dense diagonalization of `h`.
pub fn diagonalize(h: &SparseMatrix, basis: &FockBasis, params: &ModelParams) -> Result<EigenSystem> {
    params.validate()?;
    if basis.total_particles() != params.n || basis.dim() != h.dim() {
        return Err(Error::invalid("matrix, basis and parameters disagree on the dimension"));
    }
    check_symmetric(h)?;
    let n = h.dim();
    let dense = h.to_dense();
    let par = get_global_parallelism();
    let mut values = Diag::<f64>::zeros(n);
    let mut vectors = Mat::<f64>::zeros(n, n);
    {
        let scratch = self_adjoint_evd_scratch::<f64>(n, ComputeEigenvectors::Yes, par, Default::default());
        let mut buf = MemBuffer::new(scratch);
        self_adjoint_evd(
            dense.as_ref(),
            values.as_mut(),
            Some(vectors.as_mut()),
            par,
            MemStack::new(&mut buf),
            Default::default(),
        )
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
    }
    drop(dense);
    let energies: Vec<f64> = values.column_vector().iter().copied().collect();
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(Error::Eigensolver("non-finite eigenvalue".into()));
    }
    EigenSystem::from_parts(*params, energies, vectors)
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(h: &SparseMatrix) -> Result<Vec<f64>> {
    check_symmetric(h)?;
    let dense = h.to_dense();
    dense
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|e| Error::Eigensolver(format!("{e:?}")))
}

/// Groups of consecutive eigenstates whose energies chain together with
/// gaps below `DEGENERACY_TOLERANCE * max|E|`.
pub fn degenerate_groups(energies: &[f64]) -> Vec<std::ops::Range<usize>> {
    let scale = energies.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(f64::MIN_POSITIVE);
    let tol = DEGENERACY_TOLERANCE * scale;
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=energies.len() {
        if k == energies.len() || energies[k] - energies[k - 1] >= tol {
            groups.push(start..k);
            start = k;
        }
    }
    groups
}

/// Eigenvalue of `Q/N` carried by each eigenstate of an `epsilon = 0`
/// system. Degenerate energy subspaces are resolved by diagonalizing `Q`
/// inside the subspace; within such a group the labels are listed ascending.
pub fn q_labels(es: &EigenSystem) -> Result<Vec<f64>> {
    if !es.params().is_integrable() {
        return Err(Error::domain(format!(
            "Q is conserved only at epsilon = 0 (got {})",
            es.params().epsilon
        )));
    }
    let q = build_q(es.basis());
    let n = es.params().n as f64;
    let mut labels = vec![0.0; es.dim()];
    for group in degenerate_groups(es.energies()) {
        let qv: Vec<Vec<f64>> = group.clone().map(|k| q.apply(es.vector(k))).collect();
        if group.len() == 1 {
            let k = group.start;
            labels[k] = dot(es.vector(k), &qv[0]) / n;
            continue;
        }
        let g = group.len();
        let sub = Mat::<f64>::from_fn(g, g, |a, b| dot(es.vector(group.start + a), &qv[b]) / n);
        let vals = sub
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Eigensolver(format!("{e:?}")))?;
        for (slot, v) in labels[group].iter_mut().zip(vals) {
            *slot = v;
        }
    }
    Ok(labels)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The `count` eigenstates with `E/N` closest to `target`, ties to the lower
/// index, returned in ascending index order.
pub fn select_near(es: &EigenSystem, target: f64, count: usize) -> Result<Vec<usize>> {
    if count == 0 || count > es.dim() {
        return Err(Error::invalid(format!("count must lie in 1..={}, got {count}", es.dim())));
    }
    let mut order: Vec<usize> = (0..es.dim()).collect();
    order.sort_by(|&a, &b| {
        let da = (es.scaled_energy(a) - target).abs();
        let db = (es.scaled_energy(b) - target).abs();
        da.total_cmp(&db).then(a.cmp(&b))
    });
    order.truncate(count);
    order.sort_unstable();
    Ok(order)
}

/// Eigenstates with `|E/N - center| < width / 2`, ascending.
pub fn select_window(es: &EigenSystem, center: f64, width: f64) -> Vec<usize> {
    (0..es.dim()).filter(|&k| (es.scaled_energy(k) - center).abs() < width / 2.0).collect()
}
