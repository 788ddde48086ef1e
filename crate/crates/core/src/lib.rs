//! Exact diagonalization, phase-space projections and classical dynamics of
//! bosons in three aligned wells.

pub mod classical;
pub mod cli;
pub mod compare;
pub mod error;
pub mod fock;
pub mod poincare;
pub mod projections;
pub mod spectra;

pub use error::{Error, Result};
