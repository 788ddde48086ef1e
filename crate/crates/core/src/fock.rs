//! Fixed-N Fock basis of the three-mode problem.
//!
//! States are ordered lexicographically descending in `(n1, n3)`: `n1` runs
//! from `N` down to 0 and, for each `n1`, `n3` runs from `N - n1` down to 0.
//! Every matrix, eigenvector and exported grid in this crate uses that order.
//! With it the Hamiltonian is banded with half-bandwidth `N + 1`.

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// Occupation numbers `(n1, n2, n3)` of the three wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl FockState {
    pub const fn new(n1: usize, n2: usize, n3: usize) -> Self {
        FockState { n1, n2, n3 }
    }

    pub const fn total(&self) -> usize {
        self.n1 + self.n2 + self.n3
    }

    /// The state with wells 1 and 3 exchanged.
    pub const fn mirrored(&self) -> Self {
        FockState { n1: self.n3, n2: self.n2, n3: self.n1 }
    }
}

/// Number of Fock states of `n` bosons in three wells, `(N+1)(N+2)/2`.
pub const fn dimension(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    total_particles: usize,
    states: Vec<FockState>,
    ln_fact: Vec<f64>,
}

impl FockBasis {
    /// Enumerates the basis for `n` bosons.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a basis needs at least one boson"));
        }
        let mut states = Vec::with_capacity(dimension(n));
        for n1 in (0..=n).rev() {
            for n3 in (0..=n - n1).rev() {
                states.push(FockState::new(n1, n - n1 - n3, n3));
            }
        }
        let ln_fact = (0..=n as u64).map(ln_factorial).collect();
        Ok(FockBasis { total_particles: n, states, ln_fact })
    }

    pub fn total_particles(&self) -> usize {
        self.total_particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockState {
        self.states[index]
    }

    /// Position of `(n1, n3)` (with `n2 = N - n1 - n3`) in the basis.
    pub fn index_of(&self, n1: usize, n3: usize) -> Option<usize> {
        let n = self.total_particles;
        if n1 + n3 > n {
            return None;
        }
        let m = n - n1;
        Some(m * (m + 1) / 2 + (m - n3))
    }

    pub fn index(&self, state: &FockState) -> Option<usize> {
        if state.total() != self.total_particles {
            return None;
        }
        self.index_of(state.n1, state.n3)
    }

    /// `ln k!` for `0 <= k <= N`.
    pub fn ln_factorial(&self, k: usize) -> f64 {
        self.ln_fact[k]
    }

    /// Natural log of the multinomial weight; `-inf` for impossible outcomes.
    /// Probabilities are assumed validated.
    pub(crate) fn ln_multinomial(&self, s: &FockState, p: [f64; 3]) -> f64 {
        let mut acc = self.ln_fact[self.total_particles]
            - self.ln_fact[s.n1]
            - self.ln_fact[s.n2]
            - self.ln_fact[s.n3];
        for (count, prob) in [(s.n1, p[0]), (s.n2, p[1]), (s.n3, p[2])] {
            if count == 0 {
                // 0^0 = 1
                continue;
            }
            if prob == 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += count as f64 * prob.ln();
        }
        acc
    }

    /// `N!/(n1! n2! n3!) p1^n1 p2^n2 p3^n3`, evaluated in log space.
    pub fn multinomial_weight(&self, state: &FockState, p1: f64, p2: f64, p3: f64) -> Result<f64> {
        if state.total() != self.total_particles {
            return Err(Error::invalid(format!(
                "state {state:?} does not hold {} bosons",
                self.total_particles
            )));
        }
        let p = validate_probabilities(p1, p2, p3)?;
        Ok(self.ln_multinomial(state, p).exp())
    }
}

/// Checks `p_i >= 0` and `sum p_i = 1` within `1e-12`.
pub fn validate_probabilities(p1: f64, p2: f64, p3: f64) -> Result<[f64; 3]> {
    let p = [p1, p2, p3];
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::domain(format!("probabilities must be non-negative, got {p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("probabilities sum to {sum}, expected 1")));
    }
    Ok(p)
}
