//! Classical limit: Hamiltonians in the six- and four-variable charts,
//! Hamilton's equations, trajectories, initial-condition solvers and
//! equilibria.

mod critical;
mod energy;
mod solve;
mod state;
mod taylor;
mod trajectory;

pub use critical::{classify, find_critical_points, seed_grid, CriticalPoint, CriticalSearch, Stability};
pub use energy::{
    classical_q, energy_cartesian, energy_reduced, hamilton_rhs, reduced_gradient, reduced_hessian,
};
pub use solve::{solve_on_section, solve_rho2_zero, Rho2ZeroLocus, SECTION_GRID, SECTION_TOLERANCE};
pub use state::{phase_distance, wrap_phase, AngleActionView, CartesianState, ReducedState};
pub use taylor::{propagate, IntegratorOptions, TaylorIntegrator, TaylorStep};
pub use trajectory::{integrate, integrate_with, Sample, Trajectory};
