//! Correspondence metrics between quantum grids and classical histograms.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poincare::{bin_of, VisitationHistogram};
use crate::projections::ProbabilityGrid;

/// A `bins x bins` array over `(n1, n3) in [0, 1]^2`, row `n1`, column `n3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinnedDensity {
    pub bins: usize,
    pub values: Vec<f64>,
}

impl BinnedDensity {
    pub fn new(bins: usize, values: Vec<f64>) -> Result<Self> {
        if bins < 1 || values.len() != bins * bins {
            return Err(Error::invalid(format!("{} values do not fill {bins} x {bins} bins", values.len())));
        }
        Ok(BinnedDensity { bins, values })
    }

    /// Sums the lattice values falling in each bin; lattice point
    /// `(n1, n3)` sits at `(n1/N, n3/N)`.
    pub fn from_grid(grid: &ProbabilityGrid, bins: usize) -> Result<Self> {
        if bins < 1 {
            return Err(Error::invalid("need at least one bin"));
        }
        let n = grid.total_particles() as f64;
        let mut values = vec![0.0; bins * bins];
        for (a, b, v) in grid.iter() {
            values[bin_of(a as f64 / n, bins) * bins + bin_of(b as f64 / n, bins)] += v;
        }
        Ok(BinnedDensity { bins, values })
    }

    pub fn from_histogram(h: &VisitationHistogram) -> Self {
        BinnedDensity { bins: h.bins, values: h.as_f64() }
    }

    fn centre(&self, idx: usize) -> (f64, f64) {
        let b = self.bins as f64;
        ((idx / self.bins) as f64 / b + 0.5 / b, (idx % self.bins) as f64 / b + 0.5 / b)
    }

    fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    /// Pearson correlation over bins where both inputs are nonzero.
    pub pearson: f64,
    pub common_support: usize,
    pub support_a: usize,
    pub support_b: usize,
    /// Distance between the two maxima in `(n1, n3)` units.
    pub peak_distance: f64,
    pub peak_a: (f64, f64),
    pub peak_b: (f64, f64),
    pub warnings: Vec<String>,
}

impl CompareReport {
    pub fn write_json<W: Write>(&self, w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(std::io::Error::other)
    }
}

/// Pearson correlation of two samples; `None` if either is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

/// Correlation on the common support plus peak locations.
pub fn compare(a: &BinnedDensity, b: &BinnedDensity) -> Result<CompareReport> {
    if a.bins != b.bins {
        return Err(Error::invalid(format!("shape mismatch: {} vs {} bins", a.bins, b.bins)));
    }
    let mut warnings = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (x, y) in a.values.iter().zip(&b.values) {
        if *x != 0.0 && *y != 0.0 {
            xs.push(*x);
            ys.push(*y);
        }
    }
    let pearson = match pearson(&xs, &ys) {
        Some(r) => r,
        None if xs.len() < 2 => {
            warnings.push(format!("common support has {} bins; correlation set to 0", xs.len()));
            0.0
        }
        None => {
            // one side constant on the support: identical inputs still score 1
            if xs == ys {
                1.0
            } else {
                warnings.push("one input is constant on the common support; correlation set to 0".into());
                0.0
            }
        }
    };
    let (pa, pb) = (a.centre(a.argmax()), b.centre(b.argmax()));
    Ok(CompareReport {
        pearson,
        common_support: xs.len(),
        support_a: a.values.iter().filter(|v| **v != 0.0).count(),
        support_b: b.values.iter().filter(|v| **v != 0.0).count(),
        peak_distance: ((pa.0 - pb.0).powi(2) + (pa.1 - pb.1).powi(2)).sqrt(),
        peak_a: pa,
        peak_b: pb,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_comparison() {
        let v: Vec<f64> = (0..16).map(|k| ((k * 7) % 5) as f64).collect();
        let d = BinnedDensity::new(4, v).unwrap();
        let r = compare(&d, &d).unwrap();
        assert!((r.pearson - 1.0).abs() < 1e-15);
        assert_eq!(r.peak_distance, 0.0);
    }

    #[test]
    fn disjoint_supports() {
        let mut a = vec![0.0; 9];
        let mut b = vec![0.0; 9];
        a[0] = 1.0;
        a[1] = 2.0;
        b[7] = 1.0;
        b[8] = 3.0;
        let r = compare(&BinnedDensity::new(3, a).unwrap(), &BinnedDensity::new(3, b).unwrap()).unwrap();
        assert_eq!(r.pearson, 0.0);
        assert_eq!(r.common_support, 0);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn shape_mismatch() {
        let a = BinnedDensity::new(2, vec![1.0; 4]).unwrap();
        let b = BinnedDensity::new(3, vec![1.0; 9]).unwrap();
        assert!(compare(&a, &b).is_err());
    }

    #[test]
    fn pearson_reference() {
        // perfectly anti-correlated and a hand-computed case
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
    }

    #[test]
    fn grid_binning_keeps_mass() {
        let g = ProbabilityGrid::from_values(4, (0..15).map(|k| k as f64).collect()).unwrap();
        let d = BinnedDensity::from_grid(&g, 7).unwrap();
        assert!((d.values.iter().sum::<f64>() - g.sum()).abs() < 1e-12);
    }
}
