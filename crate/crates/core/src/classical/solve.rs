use serde::Serialize;

use super::energy::energy_reduced;
use super::state::AngleActionView;
use crate::error::{Error, Result};
use crate::spectra::ModelParams;

/// Grid used to bracket roots in [`solve_on_section`].
pub const SECTION_GRID: usize = 512;
/// Bisection tolerance on `n3`.
pub const SECTION_TOLERANCE: f64 = 1e-12;

/// Points with `rho2 = 0` at a given energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Rho2ZeroLocus {
    /// The unique populations; the phases are free.
    Point { n1: f64, n3: f64 },
    /// `epsilon = 0` and `E = U`: the whole line `n1 + n3 = 1`.
    Line,
}

/// On `rho2 = 0` the energy is `U + eps (n3 - n1)` for any phases, so
/// `n1 = (1 - (E - U)/eps) / 2`.
pub fn solve_rho2_zero(params: &ModelParams, energy: f64) -> Result<Rho2ZeroLocus> {
    params.validate()?;
    let (u, eps) = (params.u, params.epsilon);
    if eps == 0.0 {
        if (energy - u).abs() <= 1e-12 * u.abs().max(1.0) {
            return Ok(Rho2ZeroLocus::Line);
        }
        return Err(Error::domain(format!("with epsilon = 0 the rho2 = 0 manifold only has energy U = {u}")));
    }
    let diff = (energy - u) / eps;
    if diff.abs() > 1.0 + 1e-15 {
        return Err(Error::domain(format!("energy {energy} is not reachable on rho2 = 0 (needs |E - U| <= |eps|)")));
    }
    let n1 = ((1.0 - diff) / 2.0).clamp(0.0, 1.0);
    Ok(Rho2ZeroLocus::Point { n1, n3: 1.0 - n1 })
}

/// All `n3` in `[0, 1 - n1]` with `E(n1, n3, phi12, phi32) = energy`.
pub fn solve_on_section(
    params: &ModelParams,
    energy: f64,
    n1: f64,
    phi12: f64,
    phi32: f64,
) -> Result<Vec<AngleActionView>> {
    if !(0.0..=1.0).contains(&n1) {
        return Err(Error::domain(format!("n1 = {n1} outside [0, 1]")));
    }
    let top = 1.0 - n1;
    let f = |n3: f64| -> f64 {
        let v = AngleActionView { n1, n3, phi12, phi32 };
        energy_reduced(&v.to_reduced(), params).map(|e| e - energy).unwrap_or(f64::NAN)
    };
    let grid: Vec<f64> = (0..=SECTION_GRID).map(|k| top * k as f64 / SECTION_GRID as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for k in 0..SECTION_GRID {
        let (a, b) = (grid[k], grid[k + 1]);
        let (fa, fb) = (vals[k], vals[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if k + 1 == SECTION_GRID && fb == 0.0 {
            roots.push(b);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut flo) = (a, b, fa);
        while hi - lo > SECTION_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots.into_iter().map(|n3| AngleActionView::new(n1, n3, phi12, phi32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(eps: f64) -> ModelParams {
        ModelParams::new(0.7, 1.0, eps, 100).unwrap()
    }

    #[test]
    fn rho2_zero_examples() {
        match solve_rho2_zero(&p(1.5), 0.0752).unwrap() {
            Rho2ZeroLocus::Point { n1, n3 } => {
                assert!((n1 - 0.7082).abs() < 2e-4 && (n3 - 0.2917).abs() < 2e-4);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(solve_rho2_zero(&p(1.5), 0.7).unwrap(), Rho2ZeroLocus::Point { n1: 0.5, n3: 0.5 });
        assert_eq!(solve_rho2_zero(&p(1.5), 2.2).unwrap(), Rho2ZeroLocus::Point { n1: 0.0, n3: 1.0 });
        assert!(matches!(solve_rho2_zero(&p(1.5), 2.3), Err(Error::Domain(_))));
        assert!(matches!(solve_rho2_zero(&p(0.0), 0.0752), Err(Error::Domain(_))));
        assert_eq!(solve_rho2_zero(&p(0.0), 0.7).unwrap(), Rho2ZeroLocus::Line);
    }

    #[test]
    fn section_roots_are_on_shell() {
        let pr = p(1.5);
        let mut found = 0;
        for i in 0..20 {
            let n1 = (i as f64 + 0.5) / 20.0;
            for phi12 in [-2.0, 0.0, 1.0, PI] {
                for v in solve_on_section(&pr, 0.0752, n1, phi12, 0.0).unwrap() {
                    let e = energy_reduced(&v.to_reduced(), &pr).unwrap();
                    assert!((e - 0.0752).abs() < 1e-10, "{e}");
                    assert!(v.n3 >= 0.0 && v.n1 + v.n3 <= 1.0 + 1e-12);
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn below_minimum_is_empty() {
        let pr = p(1.5);
        for i in 0..10 {
            let n1 = i as f64 / 10.0;
            assert!(solve_on_section(&pr, -50.0, n1, 0.0, 0.0).unwrap().is_empty());
        }
    }
}
