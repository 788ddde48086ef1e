//! Poincare sections on `phi32 = const` and visitation histograms on the
//! population plane.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{
    classical_q, hamilton_rhs, integrate_with, solve_on_section, wrap_phase, AngleActionView, CartesianState,
    IntegratorOptions, TaylorIntegrator, TaylorStep, Trajectory,
};
use crate::error::{Error, Result};
use crate::spectra::ModelParams;

/// Default bisection tolerance on `phi32`.
pub const SECTION_TOLERANCE: f64 = 1e-9;
/// Events with `rho2` or `rho3` below this are dropped.
pub const MANIFOLD_DISTANCE: f64 = 1e-8;
/// Below this amplitude (`rho2` or `rho3`) the phase `phi32` is too poorly
/// conditioned for the sampling check.
const PHASE_CONDITIONING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Both,
    Positive,
    Negative,
}

impl Direction {
    fn admits(self, sign: i8) -> bool {
        match self {
            Direction::Both => true,
            Direction::Positive => sign > 0,
            Direction::Negative => sign < 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionEvent {
    pub t: f64,
    pub n1: f64,
    pub n3: f64,
    pub phi12: f64,
    /// Sign of `d phi32 / dt` at the crossing.
    pub direction: i8,
    pub seed: usize,
    pub state: CartesianState,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SectionResult {
    pub events: Vec<SectionEvent>,
    /// Crossings discarded because `rho2` or `rho3` was within
    /// [`MANIFOLD_DISTANCE`] of zero.
    pub dropped: usize,
}

impl SectionResult {
    /// CSV rows `t,n1,n3,phi12,direction,seed_id`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,n1,n3,phi12,direction,seed_id")?;
        for e in &self.events {
            writeln!(w, "{:.15e},{:.15e},{:.15e},{:.15e},{},{}", e.t, e.n1, e.n3, e.phi12, e.direction, e.seed)?;
        }
        Ok(())
    }
}

fn phi32(s: &CartesianState) -> f64 {
    s.to_angles().phi32
}

/// `d phi32 / dt` from the vector field.
fn phi32_rate(s: &CartesianState, params: &ModelParams) -> f64 {
    let d = hamilton_rhs(s, params);
    let rate = |q: f64, p: f64, dq: f64, dp: f64| (q * dp - p * dq) / (q * q + p * p);
    rate(s.q3, s.p3, d.q3, d.p3) - rate(s.q2, s.p2, d.q2, d.p2)
}

fn well_conditioned(s: &CartesianState) -> bool {
    let [_, r2, r3] = s.populations();
    r2.sqrt() > PHASE_CONDITIONING && r3.sqrt() > PHASE_CONDITIONING
}

/// Dense solution over `[0, dt]` from a re-integration.
struct Bracket {
    steps: Vec<TaylorStep>,
}

impl Bracket {
    fn eval(&self, t: f64) -> CartesianState {
        let step = self.steps.iter().find(|s| t <= s.t1()).unwrap_or_else(|| self.steps.last().expect("nonempty"));
        step.eval(t - step.t0)
    }
}

/// Crossings of `phi32 = phi_section` along `traj`, refined by bisection on
/// the re-integrated bracketing interval.
pub fn section(traj: &Trajectory, phi_section: f64, filter: Direction) -> Result<SectionResult> {
    section_with_tolerance(traj, phi_section, filter, SECTION_TOLERANCE)
}

pub fn section_with_tolerance(
    traj: &Trajectory,
    phi_section: f64,
    filter: Direction,
    tolerance: f64,
) -> Result<SectionResult> {
    let mut out = SectionResult::default();
    let mut integrator = TaylorIntegrator::new(&traj.params, traj.options)?;
    let offset = |s: &CartesianState| wrap_phase(phi32(s) - phi_section);
    let mut times = Vec::new();
    for pair in traj.samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (da, db) = (offset(&a.state), offset(&b.state));
        let jump = wrap_phase(db - da);
        let fast = jump.abs() >= FRAC_PI_2;
        if fast && well_conditioned(&a.state) && well_conditioned(&b.state) {
            return Err(Error::Undersampled { t0: a.t, t1: b.t, jump: jump.abs() });
        }
        if !fast && !crosses(da, db) {
            continue;
        }
        let dt = b.t - a.t;
        let mut steps = Vec::new();
        integrator.run(&a.state, 0.0, dt, |s| {
            steps.push(s.clone());
            Ok(())
        })?;
        let bracket = Bracket { steps };
        times.clear();
        scan(&bracket, &offset, (0.0, da), (dt, db), tolerance, 0, &mut times);
        for &t_event in &times {
            let state = bracket.eval(t_event);
            let [_, r2, r3] = state.populations();
            if r2.sqrt() < MANIFOLD_DISTANCE || r3.sqrt() < MANIFOLD_DISTANCE {
                out.dropped += 1;
                continue;
            }
            let direction = if phi32_rate(&state, &traj.params) >= 0.0 { 1 } else { -1 };
            if !filter.admits(direction) {
                continue;
            }
            let angles = state.to_angles();
            out.events.push(SectionEvent {
                t: a.t + t_event,
                n1: angles.n1,
                n3: angles.n3,
                phi12: angles.phi12,
                direction,
                seed: 0,
                state,
            });
        }
    }
    Ok(out)
}

/// True if the offset passes through zero (not through the cut at pi)
/// on `(t_a, t_b]`.
fn crosses(da: f64, db: f64) -> bool {
    db != 0.0 && (da == 0.0 || da.signum() != db.signum()) && (db - da).abs() < PI
}

/// Collects crossing times in `(lo, hi]`, halving intervals over which the
/// phase moves too fast to bracket reliably.
fn scan<F: Fn(&CartesianState) -> f64>(
    bracket: &Bracket,
    offset: &F,
    lo: (f64, f64),
    hi: (f64, f64),
    tolerance: f64,
    depth: usize,
    times: &mut Vec<f64>,
) {
    if wrap_phase(hi.1 - lo.1).abs() >= FRAC_PI_2 && depth < 40 {
        let mid_t = 0.5 * (lo.0 + hi.0);
        let mid = (mid_t, offset(&bracket.eval(mid_t)));
        scan(bracket, offset, lo, mid, tolerance, depth + 1, times);
        scan(bracket, offset, mid, hi, tolerance, depth + 1, times);
        return;
    }
    if !crosses(lo.1, hi.1) {
        return;
    }
    if lo.1 == 0.0 {
        // already counted as the end of the previous interval
        return;
    }
    let (mut a, mut b, mut fa) = (lo.0, hi.0, lo.1);
    let span = hi.0 - lo.0;
    loop {
        let mid = 0.5 * (a + b);
        let fm = offset(&bracket.eval(mid));
        if fm.abs() <= tolerance || b - a <= 1e-15 * span.max(1.0) {
            times.push(mid);
            return;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
}

/// Settings for short-time ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    pub t_short: f64,
    pub sample_dt: f64,
    pub direction: Direction,
    /// Fraction of a grid cell by which the seed grid is shifted.
    pub grid_offset: f64,
    pub integrator: IntegratorOptions,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions {
            t_short: 100.0,
            sample_dt: 0.01,
            direction: Direction::Both,
            grid_offset: 0.5,
            integrator: IntegratorOptions::default(),
        }
    }
}

/// `count` initial conditions on `phi32 = phi_section` at energy `e`: all
/// solutions of [`solve_on_section`] over a uniform `(n1, phi12)` grid,
/// refined until there are enough, then thinned evenly.
pub fn ensemble_seeds(params: &ModelParams, e: f64, count: usize, phi_section: f64, grid_offset: f64) -> Result<Vec<AngleActionView>> {
    if count == 0 {
        return Err(Error::invalid("ensemble needs at least one seed"));
    }
    let mut side = 16usize;
    loop {
        let mut all = Vec::new();
        for i in 0..side {
            let n1 = (i as f64 + grid_offset) / side as f64;
            for j in 0..side {
                let phi12 = wrap_phase(-PI + 2.0 * PI * (j as f64 + grid_offset) / side as f64);
                all.extend(solve_on_section(params, e, n1.clamp(0.0, 1.0), phi12, phi_section)?);
            }
        }
        if all.len() >= count || side >= 512 {
            if all.is_empty() {
                return Err(Error::domain(format!("no initial conditions on the section at E = {e}")));
            }
            let picked = (0..count.min(all.len())).map(|k| all[k * all.len() / count.min(all.len())]).collect();
            return Ok(picked);
        }
        side *= 2;
    }
}

/// Per-seed failures of an ensemble run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub seeds: usize,
    pub failures: Vec<(usize, String)>,
}

/// Short-time ensemble section: integrates every seed and collects its
/// events, ordered by seed then time.
pub fn ensemble_section(
    params: &ModelParams,
    e: f64,
    count: usize,
    phi_section: f64,
    options: &EnsembleOptions,
) -> Result<(SectionResult, EnsembleReport)> {
    let seeds = ensemble_seeds(params, e, count, phi_section, options.grid_offset)?;
    let results: Vec<Result<SectionResult>> = seeds
        .par_iter()
        .map(|seed| {
            let s0 = seed.to_cartesian()?;
            let traj = integrate_with(&s0, params, options.t_short, options.sample_dt, options.integrator)?;
            section(&traj, phi_section, options.direction)
        })
        .collect();
    let mut merged = SectionResult::default();
    let mut report = EnsembleReport { seeds: seeds.len(), failures: Vec::new() };
    for (id, r) in results.into_iter().enumerate() {
        match r {
            Ok(mut s) => {
                s.events.iter_mut().for_each(|ev| ev.seed = id);
                merged.events.extend(s.events);
                merged.dropped += s.dropped;
            }
            Err(err) => {
                log::warn!("ensemble seed {id} failed: {err}");
                report.failures.push((id, err.to_string()));
            }
        }
    }
    Ok((merged, report))
}

/// Counts on a `bins x bins` grid over `(n1, n3) in [0, 1]^2`; row `n1`,
/// column `n3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitationHistogram {
    pub bins: usize,
    pub counts: Vec<u64>,
    pub total: u64,
}

pub(crate) fn bin_of(x: f64, bins: usize) -> usize {
    ((x * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

impl VisitationHistogram {
    pub fn new(bins: usize) -> Result<Self> {
        if bins < 2 {
            return Err(Error::invalid(format!("need at least 2 bins, got {bins}")));
        }
        Ok(VisitationHistogram { bins, counts: vec![0; bins * bins], total: 0 })
    }

    pub fn add(&mut self, n1: f64, n3: f64) {
        let (i, j) = (bin_of(n1, self.bins), bin_of(n3, self.bins));
        self.counts[i * self.bins + j] += 1;
        self.total += 1;
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.bins + j]
    }

    pub fn from_points(points: &[(f64, f64)], bins: usize) -> Result<Self> {
        let mut h = VisitationHistogram::new(bins)?;
        for &(a, b) in points {
            h.add(a, b);
        }
        Ok(h)
    }

    /// Adds another histogram with the same binning.
    pub fn merge(&mut self, other: &VisitationHistogram) -> Result<()> {
        if other.bins != self.bins {
            return Err(Error::invalid("histograms have different binning"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.counts.iter().map(|c| *c as f64).collect()
    }

    /// Whitespace-separated matrix, row `n1` bin, column `n3` bin.
    pub fn write_dense<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for row in self.counts.chunks(self.bins) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Residence histogram of a trajectory's samples.
pub fn visitation(traj: &Trajectory, bins: usize) -> Result<VisitationHistogram> {
    let mut h = VisitationHistogram::new(bins)?;
    for s in &traj.samples {
        let [n1, _, n3] = s.state.populations();
        h.add(n1, n3);
    }
    Ok(h)
}

/// Largest spread of the classical `Q` over the events.
pub fn q_spread(events: &[SectionEvent]) -> f64 {
    let qs: Vec<f64> = events.iter().map(|e| classical_q(&e.state)).collect();
    let lo = qs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = qs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if qs.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{energy_cartesian, integrate, Sample};

    fn p(eps: f64) -> ModelParams {
        ModelParams::new(0.7, 1.0, eps, 100).unwrap()
    }

    fn traj(eps: f64, t: f64) -> Trajectory {
        let s = AngleActionView::new(0.3, 0.25, 0.5, -2.0).unwrap().to_cartesian().unwrap();
        integrate(&s, &p(eps), t, 0.01).unwrap()
    }

    #[test]
    fn events_lie_on_section_and_shell() {
        let tr = traj(1.5, 100.0);
        let e0 = tr.initial_energy();
        for phi in [0.0, PI] {
            let res = section(&tr, phi, Direction::Both).unwrap();
            assert!(!res.events.is_empty());
            for ev in &res.events {
                assert!(wrap_phase(phi32(&ev.state) - phi).abs() <= SECTION_TOLERANCE);
                assert!((energy_cartesian(&ev.state, &tr.params) - e0).abs() < 1e-8);
            }
            let pos = section(&tr, phi, Direction::Positive).unwrap().events.len();
            let neg = section(&tr, phi, Direction::Negative).unwrap().events.len();
            assert_eq!(pos + neg, res.events.len());
        }
    }

    #[test]
    fn refinement_converges() {
        let tr = traj(1.5, 50.0);
        let a = section_with_tolerance(&tr, 0.0, Direction::Both, 1e-9).unwrap();
        let b = section_with_tolerance(&tr, 0.0, Direction::Both, 5e-10).unwrap();
        assert_eq!(a.events.len(), b.events.len());
        for (x, y) in a.events.iter().zip(&b.events) {
            assert!((x.n1 - y.n1).abs() < 1e-6 && (x.n3 - y.n3).abs() < 1e-6 && (x.phi12 - y.phi12).abs() < 1e-6);
        }
    }

    #[test]
    fn integrable_events_share_q() {
        let tr = traj(0.0, 200.0);
        let res = section(&tr, 0.0, Direction::Both).unwrap();
        assert!(!res.events.is_empty());
        assert!(q_spread(&res.events) < 1e-8);
    }

    #[test]
    fn synthetic_orbit_off_the_section() {
        // phi32 fixed at pi/2: no crossing of phi32 = 0
        let s = AngleActionView::new(0.3, 0.3, 0.0, FRAC_PI_2).unwrap().to_cartesian().unwrap();
        let tr = Trajectory {
            params: p(1.5),
            options: IntegratorOptions::default(),
            sample_dt: 1.0,
            samples: (0..10).map(|k| Sample { t: k as f64, state: s }).collect(),
            energy_drift: 0.0,
            norm_drift: 0.0,
            q_drift: None,
        };
        assert!(section(&tr, 0.0, Direction::Both).unwrap().events.is_empty());
    }

    #[test]
    fn undersampling_is_detected() {
        let tr = traj(1.5, 50.0);
        let coarse = Trajectory { samples: tr.samples.iter().step_by(200).copied().collect(), ..tr.clone() };
        assert!(matches!(section(&coarse, 0.0, Direction::Both), Err(Error::Undersampled { .. })));
    }

    #[test]
    fn single_seed_ensemble() {
        let pr = p(1.5);
        let opts = EnsembleOptions { t_short: 20.0, ..Default::default() };
        let (res, report) = ensemble_section(&pr, 0.0752, 1, 0.0, &opts).unwrap();
        assert!(report.failures.is_empty());
        let seed = ensemble_seeds(&pr, 0.0752, 1, 0.0, 0.5).unwrap()[0];
        let tr = integrate(&seed.to_cartesian().unwrap(), &pr, 20.0, 0.01).unwrap();
        let direct = section(&tr, 0.0, Direction::Both).unwrap();
        assert_eq!(res.events, direct.events);
    }

    #[test]
    fn seeds_are_on_shell() {
        let pr = p(0.7);
        let seeds = ensemble_seeds(&pr, 0.0752, 40, 0.0, 0.5).unwrap();
        assert_eq!(seeds.len(), 40);
        for s in seeds {
            let e = energy_cartesian(&s.to_cartesian().unwrap(), &pr);
            assert!((e - 0.0752).abs() < 1e-10);
        }
    }

    #[test]
    fn histogram_basics() {
        let s = AngleActionView::new(0.3, 0.3, 0.0, 0.0).unwrap().to_cartesian().unwrap();
        let tr = Trajectory {
            params: p(1.5),
            options: IntegratorOptions::default(),
            sample_dt: 1.0,
            samples: (0..7).map(|k| Sample { t: k as f64, state: s }).collect(),
            energy_drift: 0.0,
            norm_drift: 0.0,
            q_drift: None,
        };
        let h = visitation(&tr, 10).unwrap();
        assert_eq!(h.total, 7);
        assert_eq!(h.counts.iter().sum::<u64>(), 7);
        assert_eq!(h.counts.iter().filter(|c| **c > 0).count(), 1);
        assert!(VisitationHistogram::new(1).is_err());
        let real = visitation(&traj(1.5, 20.0), 50).unwrap();
        assert_eq!(real.counts.iter().sum::<u64>(), real.total);
        for i in 0..50 {
            for j in 0..50 {
                if i + j > 50 {
                    assert_eq!(real.count(i, j), 0);
                }
            }
        }
    }
}
