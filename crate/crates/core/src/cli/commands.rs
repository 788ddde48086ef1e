//! Subcommand implementations. Each writes its files through [`OutputDir`]
//! and logs what it did on stderr.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::{ExperimentConfig, Recipe};
use super::output::OutputDir;
use crate::classical::{
    energy_cartesian, find_critical_points, integrate_with, solve_rho2_zero, wrap_phase, AngleActionView,
    Rho2ZeroLocus, Trajectory,
};
use crate::compare::{compare as correlate, BinnedDensity, CompareReport};
use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::poincare::{
    ensemble_section, q_spread, section, visitation, EnsembleOptions, SectionResult, VisitationHistogram,
};
use crate::projections::{
    fock_projection, husimi_projection_closed, husimi_projection_quadrature, microcanonical_average, raise_power,
    top_components, EnergyWindow, GridMetadata, ProbabilityGrid,
};
use crate::spectra::cache::load_or_build;
use crate::spectra::{select_near, shannon_profile, EigenSystem, ModelParams, SMOOTHING_WINDOW};

/// Width in `E/N` of the default microcanonical window.
const DEFAULT_WINDOW: f64 = 0.02;
/// Energy of the unstable equilibrium at `(U, J, eps) = (0.7, 1, 1.5)`.
const E_CRITICAL: f64 = 0.0752;

pub struct Context {
    pub cfg: ExperimentConfig,
    pub out: OutputDir,
}

impl Context {
    fn params(&self) -> Result<ModelParams> {
        self.cfg.params()
    }

    fn eigensystem(&self) -> Result<EigenSystem> {
        let (es, _) = load_or_build(&self.cfg.cache_dir(), &self.params()?)?;
        Ok(es)
    }

    fn plot(&self) -> bool {
        self.cfg.output.plot
    }
}

pub fn spectrum(ctx: &mut Context) -> Result<()> {
    let es = ctx.eigensystem()?;
    ctx.out.text("energies.csv", |w| {
        writeln!(w, "index,E,E_over_N")?;
        for (k, e) in es.energies().iter().enumerate() {
            writeln!(w, "{k},{e:.17e},{:.17e}", es.scaled_energy(k))?;
        }
        Ok(())
    })?;
    log::info!("{} eigenvalues in [{:.6}, {:.6}]", es.dim(), es.energies()[0], es.energies()[es.dim() - 1]);
    Ok(())
}

pub fn entropy(ctx: &mut Context) -> Result<()> {
    let es = ctx.eigensystem()?;
    let profile = shannon_profile(&es);
    ctx.out.text("entropy.csv", |w| profile.write_csv(w))?;
    let e = profile.scaled_energies();
    let slope = profile.slope(&profile.smoothed_upper, SMOOTHING_WINDOW / 2);
    let steepest = (0..slope.len()).max_by(|&a, &b| slope[a].abs().total_cmp(&slope[b].abs())).unwrap_or(0);
    let peak = profile.argmax_total();
    ctx.out.json(
        "entropy.json",
        &json!({
            "params": es.params(),
            "states": profile.len(),
            "smoothing_window": SMOOTHING_WINDOW,
            "total_peak": { "index": peak, "E_over_N": e[peak] },
            "upper_steepest_slope": { "index": steepest, "E_over_N": e[steepest], "slope": slope[steepest] },
        }),
    )?;
    Ok(())
}

/// Rows `n3 = 0..=N` of the lattice, columns `n1`, `nan` off the simplex.
fn grid_rows(grid: &ProbabilityGrid) -> Vec<Vec<f64>> {
    let n = grid.total_particles();
    (0..=n).map(|n3| (0..=n).map(|n1| grid.get(n1, n3).unwrap_or(f64::NAN)).collect()).collect()
}

/// Rows `n3` bins, columns `n1` bins.
fn histogram_rows(h: &VisitationHistogram) -> Vec<Vec<f64>> {
    (0..h.bins).map(|j| (0..h.bins).map(|i| h.count(i, j) as f64).collect()).collect()
}

fn write_grid(ctx: &mut Context, stem: &str, grid: &ProbabilityGrid, mut meta: GridMetadata) -> Result<()> {
    let p = &ctx.cfg.project;
    let (dense, power, plot) = (p.dense, p.power, ctx.plot());
    ctx.out.text(&format!("{stem}.csv"), |w| grid.write_csv(w))?;
    if dense || plot {
        let shown = match power {
            Some(g) => raise_power(grid, g)?,
            None => grid.clone(),
        };
        if dense {
            ctx.out.text(&format!("{stem}.dat"), |w| shown.write_dense(w))?;
        }
        if plot {
            ctx.out.raster(&format!("{stem}.pgm"), &grid_rows(&shown))?;
        }
        meta.power = power;
    }
    ctx.out.json(&format!("{stem}.json"), &meta)?;
    Ok(())
}

fn write_histogram(ctx: &mut Context, stem: &str, h: &VisitationHistogram, extra: serde_json::Value) -> Result<()> {
    ctx.out.text(&format!("{stem}.dat"), |w| h.write_dense(w))?;
    if ctx.plot() {
        ctx.out.raster(&format!("{stem}.pgm"), &histogram_rows(h))?;
    }
    let mut v = json!({ "bins": h.bins, "count": h.total, "layout": "row n1 bin, column n3 bin" });
    if let (Some(m), serde_json::Value::Object(e)) = (v.as_object_mut(), extra) {
        m.extend(e);
    }
    ctx.out.json(&format!("{stem}.json"), &v)?;
    Ok(())
}

pub fn project(ctx: &mut Context) -> Result<()> {
    let es = ctx.eigensystem()?;
    let p = ctx.cfg.project.clone();
    let mut indices = p.indices.clone();
    if let Some(t) = p.target {
        indices.extend(select_near(&es, t, p.count)?);
    }
    indices.sort_unstable();
    indices.dedup();
    let window = match (p.window, p.window_count) {
        (Some(_), Some(_)) => return Err(Error::Config("give either project.window or project.window_count".into())),
        (Some(w), None) => Some(EnergyWindow::Width(w)),
        (None, Some(c)) => Some(EnergyWindow::Count(c)),
        (None, None) => None,
    };
    if indices.is_empty() && window.is_none() {
        return Err(Error::Config("no eigenstates selected: use --index, --near or --window".into()));
    }
    let husimi = p.husimi || p.quadrature_points.is_some();
    for &k in &indices {
        es.check_index(k)?;
        let (kind, grid, warnings) = match (husimi, p.quadrature_points) {
            (false, _) => ("fock", fock_projection(&es, k)?, Vec::new()),
            (true, None) => ("husimi", husimi_projection_closed(&es, k)?, Vec::new()),
            (true, Some(m)) => {
                let q = husimi_projection_quadrature(&es, k, m)?;
                ("husimi-quadrature", q.grid, q.warnings)
            }
        };
        for w in &warnings {
            log::warn!("eigenstate {k}: {w}");
        }
        let e = es.scaled_energy(k);
        let meta = GridMetadata {
            kind: kind.into(),
            n: es.params().n,
            indices: vec![k],
            energy_min: Some(e),
            energy_max: Some(e),
            count: 1,
            normalization: grid.sum(),
            power: None,
            warnings,
        };
        log::info!("eigenstate {k}: E/N = {e:.6}");
        write_grid(ctx, &format!("{kind}-k{k}"), &grid, meta)?;
    }

    let mut window_indices = Vec::new();
    if let Some(win) = window {
        let center = p.center.or(p.target).unwrap_or(E_CRITICAL);
        let avg = microcanonical_average(&es, center, win, husimi)?;
        log::info!(
            "microcanonical window around E/N = {center}: {} eigenstates in [{:.6}, {:.6}]",
            avg.indices.len(),
            avg.energy_bounds.0,
            avg.energy_bounds.1
        );
        let meta = avg.metadata();
        write_grid(ctx, &meta.kind.clone(), &avg.grid, meta)?;
        window_indices = avg.indices;
    }

    if let Some(per_state) = p.top_components {
        let source = if indices.is_empty() { &window_indices } else { &indices };
        let points = top_components(&es, source, per_state)?;
        ctx.out.text("top-components.csv", |w| {
            writeln!(w, "n1_over_N,n3_over_N")?;
            for (a, b) in &points {
                writeln!(w, "{a:.17e},{b:.17e}")?;
            }
            Ok(())
        })?;
        let h = VisitationHistogram::from_points(&points, p.bins)?;
        write_histogram(ctx, "top-components", &h, json!({ "indices": source, "per_state": per_state }))?;
    }
    Ok(())
}

/// Offset of ensemble seed grids within their cells: drawn from the config
/// seed when there is one, cell centres otherwise.
fn grid_offset(cfg: &ExperimentConfig) -> f64 {
    cfg.seed.map_or(0.5, |s| ChaCha8Rng::seed_from_u64(s).random::<f64>())
}

fn rho2_zero_point(params: &ModelParams, energy: f64) -> Result<(f64, f64)> {
    match solve_rho2_zero(params, energy)? {
        Rho2ZeroLocus::Point { n1, n3 } => Ok((n1, n3)),
        Rho2ZeroLocus::Line => Err(Error::Domain(
            "the rho2 = 0 locus is a whole line here; give classical.initial explicitly".into(),
        )),
    }
}

fn initial_state(cfg: &ExperimentConfig, params: &ModelParams) -> Result<AngleActionView> {
    match cfg.classical.initial {
        Some([n1, n3, phi12, phi32]) => AngleActionView::new(n1, n3, phi12, phi32),
        None => {
            let (n1, n3) = rho2_zero_point(params, cfg.classical.energy)?;
            AngleActionView::new(n1, n3, 0.0, 0.0)
        }
    }
}

fn run_trajectory(cfg: &ExperimentConfig, params: &ModelParams, s0: &AngleActionView, t_final: f64) -> Result<Trajectory> {
    let c = &cfg.classical;
    let x0 = s0.to_cartesian()?;
    log::info!(
        "integrating from (n1, n3, phi12, phi32) = ({:.6}, {:.6}, {:.6}, {:.6}), E/N = {:.6}, to t = {t_final}",
        s0.n1,
        s0.n3,
        s0.phi12,
        s0.phi32,
        energy_cartesian(&x0, params)
    );
    integrate_with(&x0, params, t_final, c.sample_dt, c.integrator)
}

fn drift_json(t: &Trajectory) -> serde_json::Value {
    json!({
        "energy": t.initial_energy(),
        "energy_drift": t.energy_drift,
        "norm_drift": t.norm_drift,
        "q_drift": t.q_drift,
        "samples": t.len(),
    })
}

fn write_section(ctx: &mut Context, stem: &str, s: &SectionResult, extra: serde_json::Value) -> Result<()> {
    ctx.out.text(&format!("{stem}.csv"), |w| s.write_csv(w))?;
    let mut v = json!({ "events": s.events.len(), "dropped": s.dropped, "q_spread": q_spread(&s.events) });
    if let (Some(m), serde_json::Value::Object(e)) = (v.as_object_mut(), extra) {
        m.extend(e);
    }
    ctx.out.json(&format!("{stem}.json"), &v)?;
    Ok(())
}

fn ensemble_options(cfg: &ExperimentConfig) -> EnsembleOptions {
    let c = &cfg.classical;
    EnsembleOptions {
        t_short: c.t_short,
        sample_dt: c.sample_dt,
        direction: c.direction,
        grid_offset: grid_offset(cfg),
        integrator: c.integrator,
    }
}

fn run_ensemble(ctx: &mut Context, params: &ModelParams, phi_section: f64, stem: &str) -> Result<SectionResult> {
    let c = ctx.cfg.classical.clone();
    let opts = ensemble_options(&ctx.cfg);
    log::info!("ensemble of {} seeds on phi32 = {phi_section}, t = {}", c.seeds, c.t_short);
    let (events, report) = ensemble_section(params, c.energy, c.seeds, phi_section, &opts)?;
    write_section(
        ctx,
        stem,
        &events,
        json!({
            "phi_section": phi_section,
            "seeds": report.seeds,
            "failures": report.failures,
            "grid_offset": opts.grid_offset,
            "t_short": c.t_short,
        }),
    )?;
    Ok(events)
}

/// The fig9/fig11 procedure: a short-time ensemble plus a few long
/// trajectories taken evenly from the same seed set.
fn ensemble_and_long(ctx: &mut Context, params: &ModelParams) -> Result<()> {
    let c = ctx.cfg.classical.clone();
    run_ensemble(ctx, params, c.phi_section, "ensemble-section")?;
    let seeds = crate::poincare::ensemble_seeds(params, c.energy, c.long_seeds.max(1), c.phi_section, grid_offset(&ctx.cfg))?;
    let mut merged = SectionResult::default();
    let mut runs = Vec::new();
    for (id, seed) in seeds.iter().take(c.long_seeds).enumerate() {
        let traj = run_trajectory(&ctx.cfg, params, seed, c.t_final)?;
        let mut s = section(&traj, c.phi_section, c.direction)?;
        s.events.iter_mut().for_each(|e| e.seed = id);
        runs.push(json!({
            "seed": id,
            "initial": seed,
            "classical_q": crate::classical::classical_q(traj.initial()),
            "events": s.events.len(),
            "q_spread": q_spread(&s.events),
            "drift": drift_json(&traj),
        }));
        merged.dropped += s.dropped;
        merged.events.extend(s.events);
    }
    write_section(ctx, "long-section", &merged, json!({ "phi_section": c.phi_section, "t_final": c.t_final, "runs": runs }))
}

/// Classical histogram and the microcanonical average at the model size,
/// both on `bins x bins`.
fn fig14_pair(ctx: &mut Context, params: &ModelParams) -> Result<CompareReport> {
    let c = ctx.cfg.classical.clone();
    let s0 = initial_state(&ctx.cfg, params)?;
    let traj = run_trajectory(&ctx.cfg, params, &s0, c.t_final)?;
    let hist = visitation(&traj, c.bins)?;
    write_histogram(ctx, "visitation", &hist, json!({ "initial": s0, "t_final": c.t_final, "drift": drift_json(&traj) }))?;

    let es = ctx.eigensystem()?;
    let p = &ctx.cfg.project;
    let center = p.center.unwrap_or(c.energy);
    let window = match p.window_count {
        Some(k) => EnergyWindow::Count(k),
        None => EnergyWindow::Width(p.window.unwrap_or(DEFAULT_WINDOW)),
    };
    let avg = microcanonical_average(&es, center, window, false)?;
    log::info!("microcanonical window: {} eigenstates", avg.indices.len());
    let meta = avg.metadata();
    write_grid(ctx, &meta.kind.clone(), &avg.grid, meta)?;
    correlate(&BinnedDensity::from_grid(&avg.grid, c.bins)?, &BinnedDensity::from_histogram(&hist))
}

fn write_report(ctx: &mut Context, report: &CompareReport, a: &str, b: &str) -> Result<()> {
    for w in &report.warnings {
        log::warn!("{w}");
    }
    log::info!("Pearson correlation {:.4} on {} common bins", report.pearson, report.common_support);
    let mut v = serde_json::to_value(report).map_err(std::io::Error::other)?;
    if let Some(m) = v.as_object_mut() {
        m.insert("a".into(), json!(a));
        m.insert("b".into(), json!(b));
    }
    ctx.out.json("compare.json", &v)?;
    Ok(())
}

pub fn classical(ctx: &mut Context) -> Result<()> {
    let params = ctx.params()?;
    let c = ctx.cfg.classical.clone();
    match c.recipe {
        Recipe::Trajectory => {
            let s0 = initial_state(&ctx.cfg, &params)?;
            let traj = run_trajectory(&ctx.cfg, &params, &s0, c.t_final)?;
            if c.write_trajectories {
                ctx.out.text("trajectory.csv", |w| traj.write_csv(w))?;
            }
            let hist = visitation(&traj, c.bins)?;
            write_histogram(ctx, "visitation", &hist, json!({ "initial": s0, "t_final": c.t_final, "drift": drift_json(&traj) }))?;
        }
        Recipe::Section => {
            let s0 = initial_state(&ctx.cfg, &params)?;
            let traj = run_trajectory(&ctx.cfg, &params, &s0, c.t_final)?;
            if c.write_trajectories {
                ctx.out.text("trajectory.csv", |w| traj.write_csv(w))?;
            }
            let s = section(&traj, c.phi_section, c.direction)?;
            write_section(
                ctx,
                "section",
                &s,
                json!({ "initial": s0, "phi_section": c.phi_section, "t_final": c.t_final, "drift": drift_json(&traj) }),
            )?;
        }
        Recipe::Ensemble => {
            run_ensemble(ctx, &params, c.phi_section, "ensemble-section")?;
        }
        Recipe::Critical => {
            let search = find_critical_points(&params, c.critical_resolution)?;
            log::info!("{} critical points from {} seeds", search.points.len(), search.seeds);
            ctx.out.json("critical.json", &search)?;
        }
        Recipe::Fig2 => {
            let (n1, n3) = rho2_zero_point(&params, c.energy)?;
            let mut runs = Vec::new();
            for k in 0..6 {
                let delta = k as f64 * FRAC_PI_4;
                let s0 = AngleActionView::new(n1, n3, -PI, wrap_phase(-PI + delta))?;
                let traj = run_trajectory(&ctx.cfg, &params, &s0, c.t_short)?;
                let name = format!("fig2-delta{k}.csv");
                ctx.out.text(&name, |w| traj.write_csv(w))?;
                runs.push(json!({ "file": name, "phase_difference": delta, "initial": s0, "drift": drift_json(&traj) }));
            }
            ctx.out.json("fig2.json", &json!({ "t_final": c.t_short, "runs": runs }))?;
        }
        Recipe::Fig3 => {
            let (n1, n3) = rho2_zero_point(&params, c.energy)?;
            let mut runs = Vec::new();
            let mut trajs = Vec::new();
            for (k, theta) in [0.0, FRAC_PI_4, FRAC_PI_2].into_iter().enumerate() {
                let s0 = AngleActionView::new(n1, n3, theta, theta)?;
                let traj = run_trajectory(&ctx.cfg, &params, &s0, c.t_short)?;
                let name = format!("fig3-theta{k}.csv");
                ctx.out.text(&name, |w| {
                    writeln!(w, "t,n1,n3,q1,p1,q3,p3")?;
                    for s in &traj.samples {
                        let [a, _, b] = s.state.populations();
                        let x = &s.state;
                        writeln!(w, "{},{a:.15e},{b:.15e},{:.15e},{:.15e},{:.15e},{:.15e}", s.t, x.q1, x.p1, x.q3, x.p3)?;
                    }
                    Ok(())
                })?;
                runs.push(json!({ "file": name, "theta": theta, "initial": s0, "drift": drift_json(&traj) }));
                trajs.push(traj);
            }
            // agreement of the population histories with the unrotated run
            for (run, traj) in runs.iter_mut().zip(&trajs).skip(1) {
                let dev = population_deviation(&trajs[0], traj);
                run["max_population_deviation"] = json!(dev);
            }
            ctx.out.json("fig3.json", &json!({ "t_final": c.t_short, "runs": runs }))?;
        }
        Recipe::Fig9 | Recipe::Fig11 => ensemble_and_long(ctx, &params)?,
        Recipe::Fig13 => {
            let zero = run_ensemble(ctx, &params, 0.0, "section-phi0")?;
            let pi = run_ensemble(ctx, &params, PI, "section-phipi")?;
            ctx.out.text("section-overlap.csv", |w| {
                writeln!(w, "phi_section,t,n1,n3,phi12,direction,seed_id")?;
                for (phi, s) in [(0.0, &zero), (PI, &pi)] {
                    for e in &s.events {
                        writeln!(w, "{phi:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{},{}", e.t, e.n1, e.n3, e.phi12, e.direction, e.seed)?;
                    }
                }
                Ok(())
            })?;
            let points: Vec<(f64, f64)> = zero.events.iter().chain(&pi.events).map(|e| (e.n1, e.n3)).collect();
            let overlap = VisitationHistogram::from_points(&points, c.bins)?;
            write_histogram(ctx, "section-overlap", &overlap, json!({}))?;
            let s0 = initial_state(&ctx.cfg, &params)?;
            let traj = run_trajectory(&ctx.cfg, &params, &s0, c.t_final)?;
            let hist = visitation(&traj, c.bins)?;
            write_histogram(ctx, "visitation", &hist, json!({ "initial": s0, "t_final": c.t_final, "drift": drift_json(&traj) }))?;
            let report = correlate(&BinnedDensity::from_histogram(&overlap), &BinnedDensity::from_histogram(&hist))?;
            write_report(ctx, &report, "section-overlap.dat", "visitation.dat")?;
        }
        Recipe::Fig14 => {
            let report = fig14_pair(ctx, &params)?;
            write_report(ctx, &report, "microcanonical-fock.csv", "visitation.dat")?;
        }
    }
    Ok(())
}

fn population_deviation(a: &Trajectory, b: &Trajectory) -> f64 {
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| {
            let (p, q) = (x.state.populations(), y.state.populations());
            (p[0] - q[0]).abs().max((p[2] - q[2]).abs())
        })
        .fold(0.0, f64::max)
}

/// A density read from disk: a lattice grid or a binned histogram.
enum Density {
    Grid(ProbabilityGrid),
    Binned(BinnedDensity),
}

impl Density {
    fn binned(self, bins: usize) -> Result<BinnedDensity> {
        match self {
            Density::Grid(g) => BinnedDensity::from_grid(&g, bins),
            Density::Binned(b) => Ok(b),
        }
    }
}

/// Reads a grid CSV (`n1,n3,value` rows) or a whitespace-separated square
/// matrix; `#` lines are skipped.
fn read_density(path: &Path) -> Result<Density> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    let lines: Vec<String> = BufReader::new(file)
        .lines()
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .collect();
    let bad = |msg: String| Error::InvalidInput(format!("{}: {msg}", path.display()));
    let first = lines.first().ok_or_else(|| bad("no data".into()))?;
    if first.trim() == "n1,n3,value" {
        let mut rows = Vec::with_capacity(lines.len() - 1);
        for (i, l) in lines[1..].iter().enumerate() {
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 3 {
                return Err(bad(format!("row {} has {} fields", i + 2, f.len())));
            }
            let a: usize = f[0].trim().parse().map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
            let b: usize = f[1].trim().parse().map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
            let v: f64 = f[2].trim().parse().map_err(|e| bad(format!("row {}: {e}", i + 2)))?;
            rows.push((a, b, v));
        }
        let n = rows.iter().map(|&(a, b, _)| a + b).max().unwrap_or(0);
        let basis = FockBasis::new(n).map_err(|e| bad(e.to_string()))?;
        let mut values = vec![0.0; basis.dim()];
        for (a, b, v) in rows {
            let i = basis.index_of(a, b).ok_or_else(|| bad(format!("({a}, {b}) is off the lattice")))?;
            values[i] = v;
        }
        return Ok(Density::Grid(ProbabilityGrid::from_values(n, values)?));
    }
    let mut values = Vec::new();
    for l in &lines {
        for tok in l.split_whitespace() {
            values.push(tok.parse::<f64>().map_err(|e| bad(format!("{tok:?}: {e}")))?);
        }
    }
    let bins = lines.len();
    if values.len() != bins * bins {
        return Err(bad(format!("{} values in {bins} rows is not a square matrix", values.len())));
    }
    Ok(Density::Binned(BinnedDensity::new(bins, values)?))
}

pub fn compare(ctx: &mut Context) -> Result<()> {
    let bins = ctx.cfg.compare.bins;
    match (ctx.cfg.compare.a.clone(), ctx.cfg.compare.b.clone()) {
        (Some(a), Some(b)) => {
            let da = read_density(&a)?.binned(bins)?;
            let db = read_density(&b)?.binned(bins)?;
            let report = correlate(&da, &db)?;
            write_report(ctx, &report, &a.display().to_string(), &b.display().to_string())
        }
        (None, None) => {
            log::info!("no inputs given; building the classical histogram and microcanonical average");
            let params = ctx.params()?;
            ctx.cfg.classical.bins = bins;
            let report = fig14_pair(ctx, &params)?;
            write_report(ctx, &report, "microcanonical-fock.csv", "visitation.dat")
        }
        _ => Err(Error::Config("compare needs two inputs, or none to build the default pair".into())),
    }
}
