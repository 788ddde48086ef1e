//! Equilibria of the reduced Hamiltonian by Newton iteration on its gradient.

use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use super::energy::{energy_reduced, reduced_gradient, reduced_hessian};
use super::state::{AngleActionView, ReducedState};
use crate::error::Result;
use crate::spectra::ModelParams;

/// Gradient norm a returned point must satisfy.
pub const GRADIENT_TOLERANCE: f64 = 1e-10;
/// Points closer than this (in the reduced chart) are merged.
pub const DEDUP_DISTANCE: f64 = 1e-6;
const MAX_NEWTON: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    /// Hessian definite: an energy extremum.
    Stable,
    /// Linearized flow has an exponentially growing mode.
    Unstable,
    /// Hessian indefinite but the linearized flow is elliptic.
    Saddle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub state: AngleActionView,
    pub reduced: ReducedState,
    pub energy: f64,
    pub stability: Stability,
    pub gradient_norm: f64,
    /// Hessian eigenvalue signs: (negative, positive).
    pub signature: (usize, usize),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CriticalSearch {
    pub points: Vec<CriticalPoint>,
    pub seeds: usize,
    pub not_converged: usize,
    pub singular: usize,
}

impl CriticalSearch {
    pub fn write_json<W: Write>(&self, w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(std::io::Error::other)
    }
}

fn norm4(v: &[f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting; `None`
/// when a pivot falls below `1e-14` of the largest entry.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Eigenvalues of a symmetric 4x4 matrix, ascending (cyclic Jacobi).
fn sym_eigenvalues4(mut a: [[f64; 4]; 4]) -> [f64; 4] {
    for _ in 0..100 {
        let off: f64 = (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [a[0][0], a[1][1], a[2][2], a[3][3]];
    ev.sort_by(f64::total_cmp);
    ev
}

/// Classifies an equilibrium from the Hessian of the reduced energy.
///
/// With the symplectic matrix `S` of the pairs `(q1, p1)`, `(q3, p3)` the
/// linearized flow `S H` has characteristic polynomial
/// `l^4 + a2 l^2 + a0` with `a2 = -tr((SH)^2)/2` and `a0 = det H`. The
/// equilibrium is elliptic exactly when both roots in `l^2` are real and
/// negative.
pub fn classify(hess: &[[f64; 4]; 4]) -> (Stability, (usize, usize)) {
    let ev = sym_eigenvalues4(*hess);
    let scale = ev.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let neg = ev.iter().filter(|x| **x < -1e-12 * scale).count();
    let pos = ev.iter().filter(|x| **x > 1e-12 * scale).count();
    if neg == 4 || pos == 4 {
        return (Stability::Stable, (neg, pos));
    }
    // S = [[0, 1], [-1, 0]] on each pair: (S H)_{ij} = sum_k S_ik H_kj
    let s = [[0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0]];
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| s[i][k] * hess[k][j]).sum();
        }
    }
    let tr_m2: f64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[j][i]).sum();
    let a2 = -0.5 * tr_m2;
    let a0: f64 = ev.iter().product();
    let disc = a2 * a2 - 4.0 * a0;
    let tol = 1e-12 * scale.powi(4);
    let elliptic = disc >= -tol && a2 > 0.0 && a0 > -tol;
    let stability = if elliptic { Stability::Saddle } else { Stability::Unstable };
    (stability, (neg, pos))
}

enum Outcome {
    Converged(ReducedState),
    NotConverged,
    Singular,
}

fn newton(params: &ModelParams, seed: ReducedState) -> Outcome {
    let mut x = seed;
    for _ in 0..MAX_NEWTON {
        let (Ok(g), Ok(h)) = (reduced_gradient(&x, params), reduced_hessian(&x, params)) else {
            return Outcome::NotConverged;
        };
        if !g.iter().all(|v| v.is_finite()) {
            return Outcome::NotConverged;
        }
        if norm4(&g) <= 0.1 * GRADIENT_TOLERANCE {
            return Outcome::Converged(x);
        }
        let Some(dx) = solve4(h, g) else {
            return Outcome::Singular;
        };
        let mut next = x.to_array();
        for i in 0..4 {
            next[i] -= dx[i];
        }
        x = ReducedState::from_array(next);
        if x.outer_population() >= 1.0 {
            return Outcome::NotConverged;
        }
    }
    match reduced_gradient(&x, params) {
        Ok(g) if norm4(&g) <= GRADIENT_TOLERANCE => Outcome::Converged(x),
        _ => Outcome::NotConverged,
    }
}

/// Seed grid: `resolution` population values per axis (cell centres, inside
/// the simplex) times phases `phi12, phi32` in `{0, pi}`.
pub fn seed_grid(resolution: usize) -> Vec<AngleActionView> {
    let mut seeds = Vec::new();
    let r = resolution as f64;
    for i in 0..resolution {
        for k in 0..resolution {
            let (n1, n3) = ((i as f64 + 0.5) / r, (k as f64 + 0.5) / r);
            if n1 + n3 >= 1.0 {
                continue;
            }
            for phi12 in [0.0, PI] {
                for phi32 in [0.0, PI] {
                    seeds.push(AngleActionView { n1, n3, phi12, phi32 });
                }
            }
        }
    }
    seeds
}

/// Newton search from [`seed_grid`]`(resolution)`; converged points are
/// deduplicated and classified. Seeds that fail are counted, not reported.
pub fn find_critical_points(params: &ModelParams, resolution: usize) -> Result<CriticalSearch> {
    params.validate()?;
    let seeds = seed_grid(resolution);
    let mut out = CriticalSearch { seeds: seeds.len(), ..Default::default() };
    for seed in &seeds {
        let x = match newton(params, seed.to_reduced()) {
            Outcome::Converged(x) => x,
            Outcome::NotConverged => {
                out.not_converged += 1;
                continue;
            }
            Outcome::Singular => {
                out.singular += 1;
                continue;
            }
        };
        let dup = out.points.iter().any(|p| {
            let (a, b) = (p.reduced.to_array(), x.to_array());
            (0..4).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt() < DEDUP_DISTANCE
        });
        if dup {
            continue;
        }
        let g = reduced_gradient(&x, params)?;
        let h = reduced_hessian(&x, params)?;
        let (stability, signature) = classify(&h);
        out.points.push(CriticalPoint {
            state: x.to_angles()?,
            reduced: x,
            energy: energy_reduced(&x, params)?,
            stability,
            gradient_norm: norm4(&g),
            signature,
        });
    }
    out.points.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}
