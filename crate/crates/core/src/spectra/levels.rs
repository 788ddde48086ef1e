use std::ops::Range;

use serde::Serialize;

use super::eigen::{EigenSystem, DEGENERACY_TOLERANCE};
use crate::error::{Error, Result};

/// Minimum number of levels accepted by [`spacing_ratio`].
pub const MIN_LEVELS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacingStats {
    /// Mean of `min(s_k, s_k+1) / max(s_k, s_k+1)`.
    pub mean_ratio: f64,
    /// Number of ratios averaged.
    pub ratios: usize,
    /// Spacings at or below the degeneracy threshold, left out.
    pub skipped: usize,
}

/// Indices of the middle third of `len` levels.
pub fn middle_third(len: usize) -> Range<usize> {
    len / 3..len - len / 3
}

/// Mean consecutive-spacing ratio of an ascending list of levels.
/// Spacings below `1e-9 * max|E|` are treated as exact degeneracies and
/// removed before forming ratios.
pub fn spacing_ratio_of(levels: &[f64]) -> Result<SpacingStats> {
    if levels.len() < MIN_LEVELS {
        return Err(Error::invalid(format!(
            "spacing statistics need at least {MIN_LEVELS} levels, got {}",
            levels.len()
        )));
    }
    if levels.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("levels must be sorted ascending"));
    }
    let scale = levels.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let tol = DEGENERACY_TOLERANCE * scale;
    let mut skipped = 0;
    let spacings: Vec<f64> = levels
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&s| {
            let keep = s > tol;
            if !keep {
                skipped += 1;
            }
            keep
        })
        .collect();
    if spacings.len() < 2 {
        return Err(Error::invalid("fewer than two non-degenerate spacings"));
    }
    let ratios: Vec<f64> = spacings.windows(2).map(|s| s[0].min(s[1]) / s[0].max(s[1])).collect();
    Ok(SpacingStats {
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        ratios: ratios.len(),
        skipped,
    })
}

/// [`spacing_ratio_of`] over `es.energies()[window]`.
pub fn spacing_ratio(es: &EigenSystem, window: Range<usize>) -> Result<SpacingStats> {
    if window.end > es.dim() || window.start >= window.end {
        return Err(Error::invalid(format!("bad level window {window:?} for dimension {}", es.dim())));
    }
    spacing_ratio_of(&es.energies()[window])
}

/// Levels whose `q` label rounds to sector `m` (`q = 2m/N`), ascending.
pub fn q_sector_levels(es: &EigenSystem, labels: &[f64], m: usize) -> Vec<f64> {
    let n = es.params().n as f64;
    es.energies()
        .iter()
        .zip(labels)
        .filter(|(_, q)| (*q * n / 2.0).round() as usize == m)
        .map(|(e, _)| *e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equally_spaced_gives_one() {
        let levels: Vec<f64> = (0..100).map(|k| 0.5 * k as f64 - 3.0).collect();
        let s = spacing_ratio_of(&levels).unwrap();
        assert!((s.mean_ratio - 1.0).abs() < 1e-12);
        assert_eq!(s.skipped, 0);
    }

    #[test]
    fn degenerate_spacings_are_skipped() {
        let mut levels: Vec<f64> = (0..60).map(f64::from).collect();
        levels.insert(10, 10.0);
        levels.insert(30, 29.0);
        let s = spacing_ratio_of(&levels).unwrap();
        assert_eq!(s.skipped, 2);
        assert!((s.mean_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_levels() {
        assert!(spacing_ratio_of(&[0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn poisson_levels_reference() {
        // Independent uniform levels: <r> = 2 ln 2 - 1.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut levels: Vec<f64> = (0..20000).map(|_| rng.random::<f64>()).collect();
        levels.sort_by(f64::total_cmp);
        let s = spacing_ratio_of(&levels).unwrap();
        assert!((s.mean_ratio - (2.0 * 2f64.ln() - 1.0)).abs() < 0.01, "{}", s.mean_ratio);
    }

    #[test]
    fn middle_third_bounds() {
        assert_eq!(middle_third(9), 3..6);
        assert_eq!(middle_third(10), 3..7);
    }
}
