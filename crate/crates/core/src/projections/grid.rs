use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{dimension, FockBasis};

/// A function on the lattice `n1 + n3 <= N`, stored in Fock-basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityGrid {
    n: usize,
    values: Vec<f64>,
}

/// Position of `(n1, n3)` in Fock-basis order for `n` bosons.
pub(crate) fn lattice_index(n: usize, n1: usize, n3: usize) -> usize {
    let m = n - n1;
    m * (m + 1) / 2 + (m - n3)
}

impl ProbabilityGrid {
    pub fn zeros(n: usize) -> Self {
        ProbabilityGrid { n, values: vec![0.0; dimension(n)] }
    }

    /// Wraps values given in Fock-basis order.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != dimension(n) {
            return Err(Error::invalid(format!(
                "grid for N = {n} needs {} values, got {}",
                dimension(n),
                values.len()
            )));
        }
        Ok(ProbabilityGrid { n, values })
    }

    pub fn total_particles(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, n1: usize, n3: usize) -> Option<f64> {
        (n1 + n3 <= self.n).then(|| self.values[lattice_index(self.n, n1, n3)])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `(n1, n3, value)` in basis order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n;
        (0..=n).rev().flat_map(move |n1| (0..=n - n1).rev().map(move |n3| (n1, n3))).zip(&self.values).map(|((a, b), v)| (a, b, *v))
    }

    /// Lattice point with the largest value (first in basis order on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (a, b, v) in self.iter() {
            if v > best.2 {
                best = (a, b, v);
            }
        }
        (best.0, best.1)
    }

    pub fn check_basis(&self, basis: &FockBasis) -> Result<()> {
        if basis.total_particles() != self.n {
            return Err(Error::invalid(format!(
                "grid holds N = {} but basis has N = {}",
                self.n,
                basis.total_particles()
            )));
        }
        Ok(())
    }

    /// CSV rows `n1,n3,value` with integer occupations.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n1,n3,value")?;
        for (a, b, v) in self.iter() {
            writeln!(w, "{a},{b},{v:.17e}")?;
        }
        Ok(())
    }

    /// `(N+1) x (N+1)` whitespace-separated matrix, row `n3`, column `n1`;
    /// points outside the simplex are written as `nan`.
    pub fn write_dense<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for n3 in 0..=self.n {
            let row: Vec<String> = (0..=self.n)
                .map(|n1| match self.get(n1, n3) {
                    Some(v) => format!("{v:.17e}"),
                    None => "nan".to_string(),
                })
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Pointwise `value^gamma` (display contrast only).
pub fn raise_power(grid: &ProbabilityGrid, gamma: f64) -> Result<ProbabilityGrid> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("exponent must be positive, got {gamma}")));
    }
    let values = grid.values().iter().map(|v| if gamma == 1.0 { *v } else { v.max(0.0).powf(gamma) }).collect();
    ProbabilityGrid::from_values(grid.total_particles(), values)
}

/// Sidecar describing how a grid was produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GridMetadata {
    pub kind: String,
    pub n: usize,
    pub indices: Vec<usize>,
    pub energy_min: Option<f64>,
    pub energy_max: Option<f64>,
    pub count: usize,
    pub normalization: f64,
    pub power: Option<f64>,
    pub warnings: Vec<String>,
}

impl GridMetadata {
    pub fn write_json<W: Write>(&self, w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(std::io::Error::other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_matches_basis() {
        let b = FockBasis::new(5).unwrap();
        let g = ProbabilityGrid::from_values(5, (0..b.dim()).map(|i| i as f64).collect()).unwrap();
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(g.get(s.n1, s.n3), Some(i as f64));
        }
        let order: Vec<_> = g.iter().map(|(a, c, _)| (a, c)).collect();
        let want: Vec<_> = b.states().iter().map(|s| (s.n1, s.n3)).collect();
        assert_eq!(order, want);
        assert_eq!(g.get(3, 3), None);
        assert!(ProbabilityGrid::from_values(5, vec![0.0; 3]).is_err());
    }

    #[test]
    fn power_transform() {
        let g = ProbabilityGrid::from_values(1, vec![0.0016, 0.5, 0.25]).unwrap();
        let r = raise_power(&g, 0.25).unwrap();
        assert!((r.values()[0] - 0.2).abs() < 1e-15);
        assert_eq!(raise_power(&g, 1.0).unwrap(), g);
        assert!(r.values()[1] > r.values()[2]);
        assert!(raise_power(&g, 0.0).is_err());
    }

    #[test]
    fn dense_export_shape() {
        let g = ProbabilityGrid::zeros(3);
        let mut buf = Vec::new();
        g.write_dense(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.matches("nan").count(), 16 - 10);
    }
}
