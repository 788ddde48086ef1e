//! Localization of eigenstates on the population plane: Fock projections,
//! phase-integrated Husimi projections, microcanonical averages and
//! dominant components.

mod grid;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use grid::{raise_power, GridMetadata, ProbabilityGrid};

use crate::error::{Error, Result};
use crate::fock::{validate_probabilities, FockBasis};
use crate::spectra::{select_near, select_window, EigenSystem};

/// Coherent state projected onto fixed `N`, labelled by populations and
/// relative phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentSpec {
    pub n1: f64,
    pub n3: f64,
    pub phi12: f64,
    pub phi32: f64,
}

impl CoherentSpec {
    pub fn probabilities(&self) -> Result<[f64; 3]> {
        let n2 = 1.0 - self.n1 - self.n3;
        // absorb rounding so that sum = 1 holds to the validator's tolerance
        let n2 = if n2.abs() < 1e-15 { 0.0 } else { n2 };
        validate_probabilities(self.n1, n2, self.n3)
    }
}

/// `|<n|E_k>|^2` on the `(n1, n3)` lattice.
pub fn fock_projection(es: &EigenSystem, k: usize) -> Result<ProbabilityGrid> {
    es.check_index(k)?;
    let values = es.vector(k).iter().map(|c| c * c).collect();
    ProbabilityGrid::from_values(es.params().n, values)
}

/// Amplitudes `sqrt(P(n)) e^{i (n1 phi12 + n3 phi32)}` of the coherent
/// state in Fock-basis order.
pub fn coherent_amplitudes(basis: &FockBasis, spec: &CoherentSpec) -> Result<Vec<Complex64>> {
    let p = spec.probabilities()?;
    Ok(basis
        .states()
        .iter()
        .map(|s| {
            let mag = (0.5 * basis.ln_multinomial(s, p)).exp();
            Complex64::from_polar(mag, s.n1 as f64 * spec.phi12 + s.n3 as f64 * spec.phi32)
        })
        .collect())
}

/// `|<E_k|spec>|^2`.
pub fn coherent_overlap(es: &EigenSystem, spec: &CoherentSpec, k: usize) -> Result<f64> {
    es.check_index(k)?;
    let amp = coherent_amplitudes(es.basis(), spec)?;
    let z: Complex64 = es.vector(k).iter().zip(&amp).map(|(c, a)| a * c).sum();
    Ok(z.norm_sqr())
}

/// Multinomial smoothing of a lattice function: the value at `(N1, N3)` is
/// `sum_n P(n; N1/N, N2/N, N3/N) g(n)`.
pub fn multinomial_smooth(grid: &ProbabilityGrid, basis: &FockBasis) -> Result<ProbabilityGrid> {
    grid.check_basis(basis)?;
    let n = basis.total_particles() as f64;
    let src = grid.values();
    let states = basis.states();
    let out: Vec<f64> = states
        .par_iter()
        .map(|at| {
            let p = [at.n1 as f64 / n, at.n2 as f64 / n, at.n3 as f64 / n];
            states
                .iter()
                .zip(src)
                .filter(|(_, g)| **g != 0.0)
                .map(|(s, g)| basis.ln_multinomial(s, p).exp() * g)
                .sum()
        })
        .collect();
    ProbabilityGrid::from_values(basis.total_particles(), out)
}

/// Phase-integrated Husimi projection via the exact multinomial smoothing
/// of the Fock projection.
pub fn husimi_projection_closed(es: &EigenSystem, k: usize) -> Result<ProbabilityGrid> {
    multinomial_smooth(&fock_projection(es, k)?, es.basis())
}

/// Result of the phase quadrature, with any accuracy warning.
#[derive(Debug, Clone)]
pub struct QuadratureProjection {
    pub grid: ProbabilityGrid,
    pub phase_points: usize,
    pub warnings: Vec<String>,
}

/// Smallest phase grid for which the trapezoid rule is exact.
pub fn minimal_phase_points(n: usize) -> usize {
    2 * n + 2
}

/// Husimi projection by `phase_points x phase_points` trapezoid quadrature
/// of `|<E_k|N1, N3, phi12, phi32>|^2` over both phases.
pub fn husimi_projection_quadrature(es: &EigenSystem, k: usize, phase_points: usize) -> Result<QuadratureProjection> {
    husimi_projection_quadrature_offset(es, k, phase_points, 0.0)
}

/// As [`husimi_projection_quadrature`] with the nodes shifted by `offset`.
pub fn husimi_projection_quadrature_offset(
    es: &EigenSystem,
    k: usize,
    phase_points: usize,
    offset: f64,
) -> Result<QuadratureProjection> {
    es.check_index(k)?;
    if phase_points == 0 {
        return Err(Error::invalid("phase_points must be positive"));
    }
    let basis = es.basis();
    let n = basis.total_particles();
    let nf = n as f64;
    let mut warnings = Vec::new();
    if phase_points < minimal_phase_points(n) {
        warnings.push(format!(
            "{phase_points} phase points per axis is below 2N+2 = {}; quadrature is not exact",
            minimal_phase_points(n)
        ));
    }
    let m = phase_points;
    let phases: Vec<f64> = (0..m).map(|j| offset + 2.0 * PI * j as f64 / m as f64).collect();
    // e^{i n phi_j} for every occupation and node
    let twiddle: Vec<Vec<Complex64>> =
        (0..=n).map(|occ| phases.iter().map(|f| Complex64::from_polar(1.0, occ as f64 * f)).collect()).collect();
    let coeff = es.vector(k);
    let states = basis.states();
    let values: Vec<f64> = states
        .par_iter()
        .map(|at| {
            let p = [at.n1 as f64 / nf, at.n2 as f64 / nf, at.n3 as f64 / nf];
            // weighted components c_n sqrt(P(n)) grouped by n1
            let w: Vec<f64> = states.iter().zip(coeff).map(|(s, c)| c * (0.5 * basis.ln_multinomial(s, p)).exp()).collect();
            let mut acc = 0.0;
            let mut inner = vec![Complex64::new(0.0, 0.0); n + 1];
            for j32 in 0..m {
                // inner[n1] = sum_n3 w e^{i n3 phi32}
                for (n1, slot) in inner.iter_mut().enumerate() {
                    let start = grid_start(n, n1);
                    let mut z = Complex64::new(0.0, 0.0);
                    for n3 in 0..=n - n1 {
                        let v = w[start + (n - n1 - n3)];
                        if v != 0.0 {
                            z += twiddle[n3][j32] * v;
                        }
                    }
                    *slot = z;
                }
                for j12 in 0..m {
                    let amp: Complex64 = inner.iter().enumerate().map(|(n1, z)| twiddle[n1][j12] * z).sum();
                    acc += amp.norm_sqr();
                }
            }
            acc / (m * m) as f64
        })
        .collect();
    Ok(QuadratureProjection { grid: ProbabilityGrid::from_values(n, values)?, phase_points, warnings })
}

/// First basis index with population `n1`.
fn grid_start(n: usize, n1: usize) -> usize {
    let m = n - n1;
    m * (m + 1) / 2
}

/// Eigenstate selection for microcanonical averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnergyWindow {
    /// All states with `|E/N - center| < width / 2`.
    Width(f64),
    /// The given number of states nearest the centre.
    Count(usize),
}

#[derive(Debug, Clone)]
pub struct MicrocanonicalAverage {
    pub grid: ProbabilityGrid,
    pub indices: Vec<usize>,
    /// Smallest and largest selected `E/N`.
    pub energy_bounds: (f64, f64),
    pub smoothed: bool,
}

impl MicrocanonicalAverage {
    pub fn metadata(&self) -> GridMetadata {
        GridMetadata {
            kind: if self.smoothed { "microcanonical-husimi" } else { "microcanonical-fock" }.into(),
            n: self.grid.total_particles(),
            indices: self.indices.clone(),
            energy_min: Some(self.energy_bounds.0),
            energy_max: Some(self.energy_bounds.1),
            count: self.indices.len(),
            normalization: self.grid.sum(),
            power: None,
            warnings: Vec::new(),
        }
    }
}

/// Unweighted mean of the Fock projections of the selected eigenstates;
/// with `smoothed` the mean is passed through [`multinomial_smooth`].
pub fn microcanonical_average(
    es: &EigenSystem,
    center: f64,
    window: EnergyWindow,
    smoothed: bool,
) -> Result<MicrocanonicalAverage> {
    let indices = match window {
        EnergyWindow::Width(w) => {
            if !(w > 0.0) {
                return Err(Error::invalid(format!("window width must be positive, got {w}")));
            }
            select_window(es, center, w)
        }
        EnergyWindow::Count(c) => select_near(es, center, c)?,
    };
    average_over(es, &indices, smoothed)
}

/// Mean Fock projection over an explicit list of eigenstates.
pub fn average_over(es: &EigenSystem, indices: &[usize], smoothed: bool) -> Result<MicrocanonicalAverage> {
    if indices.is_empty() {
        return Err(Error::invalid("energy window selects no eigenstates"));
    }
    let mut acc = vec![0.0; es.dim()];
    for &k in indices {
        es.check_index(k)?;
        for (a, c) in acc.iter_mut().zip(es.vector(k)) {
            *a += c * c;
        }
    }
    let inv = 1.0 / indices.len() as f64;
    acc.iter_mut().for_each(|a| *a *= inv);
    let mut grid = ProbabilityGrid::from_values(es.params().n, acc)?;
    if smoothed {
        grid = multinomial_smooth(&grid, es.basis())?;
    }
    let energies: Vec<f64> = indices.iter().map(|&k| es.scaled_energy(k)).collect();
    let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MicrocanonicalAverage { grid, indices: indices.to_vec(), energy_bounds: (lo, hi), smoothed })
}

/// For each listed eigenstate, the `per_state` Fock states with the largest
/// squared components (earlier basis states first on ties), as
/// `(n1/N, n3/N)` points.
pub fn top_components(es: &EigenSystem, indices: &[usize], per_state: usize) -> Result<Vec<(f64, f64)>> {
    if per_state == 0 {
        return Err(Error::invalid("per_state must be at least 1"));
    }
    let n = es.params().n as f64;
    let take = per_state.min(es.dim());
    let mut out = Vec::with_capacity(indices.len() * take);
    for &k in indices {
        es.check_index(k)?;
        let v = es.vector(k);
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| (v[b] * v[b]).total_cmp(&(v[a] * v[a])).then(a.cmp(&b)));
        for &i in &order[..take] {
            let s = es.basis().state(i);
            out.push((s.n1 as f64 / n, s.n3 as f64 / n));
        }
    }
    Ok(out)
}
