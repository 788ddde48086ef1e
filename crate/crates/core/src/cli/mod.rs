//! Command-line front end: argument parsing, config resolution and the
//! subcommands.

pub mod commands;
pub mod config;
pub mod output;

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::poincare::Direction;

use config::{ExperimentConfig, Recipe};
use output::OutputDir;

#[derive(Debug, Parser)]
#[command(name = "triwell", version, about = "Spectra, phase-space projections and classical dynamics of bosons in three wells")]
pub struct Cli {
    /// Experiment file (TOML); flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Eigensystem cache directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads for the eigensolver and ensembles.
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,

    /// Debug logging.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(flatten)]
    pub model: ModelArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of bosons.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Tilt.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Seed for randomized ensemble offsets.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Also write PGM rasters.
    #[arg(long, global = true)]
    pub plot: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diagonalize (or load from cache) and write the energies.
    Spectrum,
    /// Shannon entropy of every eigenstate in the Fock basis.
    Entropy,
    /// Population-plane projections of selected eigenstates.
    Project(ProjectArgs),
    /// Trajectories, sections, equilibria and figure recipes.
    Classical(ClassicalArgs),
    /// Correlation report between two densities on the population plane.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Eigenstate indices (ascending energy order), comma separated.
    #[arg(long = "index", value_delimiter = ',')]
    pub indices: Vec<usize>,
    /// Select the eigenstates nearest this E/N.
    #[arg(long, allow_negative_numbers = true, value_name = "E_OVER_N")]
    pub near: Option<f64>,
    /// How many eigenstates `--near` selects.
    #[arg(long)]
    pub count: Option<usize>,
    /// Coherent-state projection instead of the Fock projection.
    #[arg(long)]
    pub husimi: bool,
    /// Evaluate the coherent-state projection by phase quadrature with this many points per angle.
    #[arg(long, value_name = "POINTS")]
    pub quadrature: Option<usize>,
    /// Display exponent applied to the dense export.
    #[arg(long)]
    pub power: Option<f64>,
    /// Also write the dense matrix export.
    #[arg(long)]
    pub dense: bool,
    /// Microcanonical average over an E/N window of this width.
    #[arg(long)]
    pub window: Option<f64>,
    /// Microcanonical average over this many eigenstates.
    #[arg(long)]
    pub window_count: Option<usize>,
    /// Centre of the microcanonical window.
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
    /// Export the largest components of each selected eigenstate.
    #[arg(long, value_name = "K")]
    pub top: Option<usize>,
    /// Bins per axis for the top-component histogram.
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, value_enum)]
    pub recipe: Option<Recipe>,
    /// Scaled energy E/N.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub sample_dt: Option<f64>,
    /// Integration time of ensemble members.
    #[arg(long)]
    pub t_short: Option<f64>,
    /// Ensemble size.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Long trajectories in the fig9/fig11 recipes.
    #[arg(long)]
    pub long_seeds: Option<usize>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_section: Option<f64>,
    #[arg(long, value_enum)]
    pub direction: Option<Direction>,
    /// Initial condition `n1,n3,phi12,phi32`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_name = "N1,N3,PHI12,PHI32")]
    pub initial: Option<Vec<f64>>,
    /// Seed grid resolution of the equilibrium search.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Write full trajectories as CSV.
    #[arg(long)]
    pub write_trajectories: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First density: grid CSV (`n1,n3,value`) or dense histogram.
    pub a: Option<PathBuf>,
    /// Second density.
    pub b: Option<PathBuf>,
    /// Bins per axis for lattice grids.
    #[arg(long)]
    pub bins: Option<usize>,
}

impl Cli {
    /// The file config (or defaults) with every flag applied.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(d) = &self.out {
            cfg.output.dir = Some(d.clone());
        }
        if let Some(d) = &self.cache_dir {
            cfg.output.cache_dir = Some(d.clone());
        }
        let m = &self.model;
        set(&mut cfg.model.n, m.n);
        set(&mut cfg.model.u, m.u);
        set(&mut cfg.model.j, m.j);
        set(&mut cfg.model.epsilon, m.epsilon);
        if m.seed.is_some() {
            cfg.seed = m.seed;
        }
        cfg.output.plot |= m.plot;

        match &self.command {
            Command::Project(a) => {
                let p = &mut cfg.project;
                if !a.indices.is_empty() {
                    p.indices = a.indices.clone();
                }
                if a.near.is_some() {
                    p.target = a.near;
                }
                set(&mut p.count, a.count);
                p.husimi |= a.husimi;
                if a.quadrature.is_some() {
                    p.husimi = true;
                    p.quadrature_points = a.quadrature;
                }
                if a.power.is_some() {
                    p.power = a.power;
                }
                p.dense |= a.dense;
                if a.window.is_some() {
                    p.window = a.window;
                }
                if a.window_count.is_some() {
                    p.window_count = a.window_count;
                }
                if a.center.is_some() {
                    p.center = a.center;
                }
                if a.top.is_some() {
                    p.top_components = a.top;
                }
                set(&mut p.bins, a.bins);
            }
            Command::Classical(a) => {
                let c = &mut cfg.classical;
                set(&mut c.recipe, a.recipe);
                set(&mut c.energy, a.energy);
                set(&mut c.t_final, a.t_final);
                set(&mut c.sample_dt, a.sample_dt);
                set(&mut c.t_short, a.t_short);
                set(&mut c.seeds, a.seeds);
                set(&mut c.long_seeds, a.long_seeds);
                set(&mut c.bins, a.bins);
                set(&mut c.phi_section, a.phi_section);
                set(&mut c.direction, a.direction);
                set(&mut c.critical_resolution, a.resolution);
                if let Some(v) = &a.initial {
                    let x: [f64; 4] = v
                        .as_slice()
                        .try_into()
                        .map_err(|_| Error::Config(format!("--initial needs 4 values, got {}", v.len())))?;
                    c.initial = Some(x);
                }
                c.write_trajectories |= a.write_trajectories;
            }
            Command::Compare(a) => {
                if a.a.is_some() {
                    cfg.compare.a = a.a.clone();
                }
                if a.b.is_some() {
                    cfg.compare.b = a.b.clone();
                }
                set(&mut cfg.compare.bins, a.bins);
            }
            Command::Spectrum | Command::Entropy => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Process exit status for an error: 2 for bad input or configuration, 3
/// for numerical failures, 1 for I/O and cache problems.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidInput(_) | Error::Domain(_) => 2,
        Error::Undersampled { .. } => 3,
        e if e.is_numeric() => 3,
        _ => 1,
    }
}

fn configure_threads(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Config("--threads must be at least 1".into()));
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
        log::warn!("thread pool already configured: {e}");
    }
    faer::set_global_parallelism(if k == 1 { faer::Par::Seq } else { faer::Par::rayon(k) });
    Ok(())
}

/// Resolves the configuration and runs the chosen subcommand.
pub fn run(cli: &Cli) -> Result<()> {
    if let Some(k) = cli.threads {
        configure_threads(k)?;
    }
    let cfg = cli.resolve()?;
    let hash = cfg.hash()?;
    log::debug!("config hash {hash}");
    let mut out = OutputDir::create(&cfg.out_dir(), &hash)?;
    let resolved = cfg.to_toml()?;
    out.text("config.toml", |w| w.write_all(resolved.as_bytes()))?;
    let mut ctx = commands::Context { cfg, out };
    match &cli.command {
        Command::Spectrum => commands::spectrum(&mut ctx),
        Command::Entropy => commands::entropy(&mut ctx),
        Command::Project(_) => commands::project(&mut ctx),
        Command::Classical(_) => commands::classical(&mut ctx),
        Command::Compare(_) => commands::compare(&mut ctx),
    }
}
