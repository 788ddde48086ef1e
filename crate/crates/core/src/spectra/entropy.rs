use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::eigen::EigenSystem;
use crate::fock::{FockBasis, FockState};

/// Number of eigenstates in the running mean.
pub const SMOOTHING_WINDOW: usize = 200;

/// Components with probability below this contribute nothing.
const NEGLIGIBLE: f64 = 1e-300;

/// Shannon entropy (nats) of one eigenstate, split by whether the Fock
/// state has `n2 >= n1 + n3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRecord {
    pub index: usize,
    pub energy: f64,
    pub scaled_energy: f64,
    pub total: f64,
    pub upper: f64,
    pub lower: f64,
}

#[derive(Debug, Clone)]
pub struct EntropyProfile {
    pub records: Vec<EntropyRecord>,
    pub smoothed_total: Vec<f64>,
    pub smoothed_upper: Vec<f64>,
    pub smoothed_lower: Vec<f64>,
}

pub(crate) fn is_upper(s: &FockState) -> bool {
    s.n2 >= s.n1 + s.n3
}

/// `(upper, lower)` parts of `-sum p ln p` for a vector in basis order.
/// The vector need not be normalized; `p_k = v_k^2` as given.
pub fn entropy_parts(basis: &FockBasis, v: &[f64]) -> (f64, f64) {
    let mut upper = 0.0;
    let mut lower = 0.0;
    for (s, c) in basis.states().iter().zip(v) {
        let p = c * c;
        if p < NEGLIGIBLE {
            continue;
        }
        let term = -p * p.ln();
        if is_upper(s) {
            upper += term;
        } else {
            lower += term;
        }
    }
    (upper, lower)
}

/// Flat running mean over the `width` neighbours in index order
/// (`width / 2` below, the rest above), truncated at the ends.
pub fn running_mean(values: &[f64], width: usize) -> Vec<f64> {
    let n = values.len();
    let half = width / 2;
    let mut prefix = vec![0.0; n + 1];
    for (k, v) in values.iter().enumerate() {
        prefix[k + 1] = prefix[k] + v;
    }
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + width - half).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

impl EntropyProfile {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn scaled_energies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.scaled_energy).collect()
    }

    /// Index of the largest smoothed total entropy.
    pub fn argmax_total(&self) -> usize {
        argmax(&self.smoothed_total)
    }

    /// Slope `d(series)/d(E/N)` by central differences over `half` states
    /// on each side (one-sided at the ends). Zero where the energies
    /// coincide.
    pub fn slope(&self, series: &[f64], half: usize) -> Vec<f64> {
        let e = self.scaled_energies();
        let n = e.len();
        (0..n)
            .map(|k| {
                let lo = k.saturating_sub(half);
                let hi = (k + half).min(n - 1);
                let de = e[hi] - e[lo];
                if de > 0.0 {
                    (series[hi] - series[lo]) / de
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// CSV rows `index,E,E/N,sh_total,sh_upper,sh_lower` plus the smoothed
    /// columns.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,E,E_over_N,sh_total,sh_upper,sh_lower,smooth_total,smooth_upper,smooth_lower")?;
        for (k, r) in self.records.iter().enumerate() {
            writeln!(
                w,
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                r.index,
                r.energy,
                r.scaled_energy,
                r.total,
                r.upper,
                r.lower,
                self.smoothed_total[k],
                self.smoothed_upper[k],
                self.smoothed_lower[k]
            )?;
        }
        Ok(())
    }
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &x)| if x > bv { (i, x) } else { (bi, bv) })
        .0
}

/// Entropy of every eigenstate plus running means over
/// [`SMOOTHING_WINDOW`] neighbours in energy.
pub fn shannon_profile(es: &EigenSystem) -> EntropyProfile {
    let records: Vec<EntropyRecord> = (0..es.dim())
        .into_par_iter()
        .map(|k| {
            let (upper, lower) = entropy_parts(es.basis(), es.vector(k));
            EntropyRecord {
                index: k,
                energy: es.energies()[k],
                scaled_energy: es.scaled_energy(k),
                total: upper + lower,
                upper,
                lower,
            }
        })
        .collect();
    let col = |f: fn(&EntropyRecord) -> f64| running_mean(&records.iter().map(f).collect::<Vec<_>>(), SMOOTHING_WINDOW);
    let smoothed_total = col(|r| r.total);
    let smoothed_upper = col(|r| r.upper);
    let smoothed_lower = col(|r| r.lower);
    EntropyProfile { records, smoothed_total, smoothed_upper, smoothed_lower }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{build_hamiltonian, diagonalize, ModelParams};

    #[test]
    fn fock_state_has_zero_entropy() {
        let b = FockBasis::new(6).unwrap();
        let mut v = vec![0.0; b.dim()];
        v[4] = 1.0;
        let (u, l) = entropy_parts(&b, &v);
        assert_eq!(u + l, 0.0);
    }

    #[test]
    fn uniform_vector_has_log_d() {
        let b = FockBasis::new(9).unwrap();
        let d = b.dim() as f64;
        let v = vec![1.0 / d.sqrt(); b.dim()];
        let (u, l) = entropy_parts(&b, &v);
        assert!((u + l - d.ln()).abs() < 1e-12);
        let upper_states = b.states().iter().filter(|s| is_upper(s)).count() as f64;
        assert!((u - upper_states / d * d.ln()).abs() < 1e-12);
    }

    #[test]
    fn running_mean_window() {
        let v: Vec<f64> = (0..10).map(f64::from).collect();
        let m = running_mean(&v, 4);
        // k = 5 averages 3..=6
        assert!((m[5] - 4.5).abs() < 1e-15);
        // k = 0 truncates to 0..=1
        assert!((m[0] - 0.5).abs() < 1e-15);
        assert!((m[9] - 8.0).abs() < 1e-15);
        assert_eq!(running_mean(&[2.0; 3], 200), vec![2.0; 3]);
    }

    #[test]
    fn profile_bounds_and_partition() {
        let p = ModelParams::new(0.7, 1.0, 1.5, 16).unwrap();
        let b = FockBasis::new(16).unwrap();
        let h = build_hamiltonian(&p, &b).unwrap();
        let es = diagonalize(&h, &b, &p).unwrap();
        let prof = shannon_profile(&es);
        let ln_d = (es.dim() as f64).ln();
        for (k, r) in prof.records.iter().enumerate() {
            assert_eq!(r.total, r.upper + r.lower);
            assert!(r.total >= 0.0 && r.total <= ln_d + 1e-12);
            let norm: f64 = es.vector(k).iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
        let mut buf = Vec::new();
        prof.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), es.dim() + 1);
    }

    #[test]
    fn slope_of_linear_series() {
        let records = (0..50)
            .map(|k| EntropyRecord {
                index: k,
                energy: k as f64,
                scaled_energy: 0.1 * k as f64,
                total: 0.0,
                upper: 0.0,
                lower: 0.0,
            })
            .collect::<Vec<_>>();
        let series: Vec<f64> = (0..50).map(|k| 3.0 * 0.1 * k as f64).collect();
        let prof = EntropyProfile {
            records,
            smoothed_total: series.clone(),
            smoothed_upper: series.clone(),
            smoothed_lower: series.clone(),
        };
        for s in prof.slope(&series, 5) {
            assert!((s - 3.0).abs() < 1e-12);
        }
    }
}
