//! C ABI over the `triwell` library.
//!
//! Every fallible call returns a [`TwStatus`]; on failure a message is
//! kept per thread and can be read with [`tw_last_error_message`]. Handles
//! are opaque and owned by the caller, who releases them with the matching
//! `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use triwell::classical::{integrate, solve_rho2_zero, AngleActionView, Rho2ZeroLocus, Trajectory};
use triwell::fock::{dimension, FockBasis};
use triwell::projections::{fock_projection, husimi_projection_closed};
use triwell::spectra::cache::load_or_build;
use triwell::spectra::{build_hamiltonian, diagonalize, EigenSystem, ModelParams};
use triwell::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Domain = 3,
    BufferSize = 4,
    Numeric = 5,
    Io = 6,
    Panic = 7,
}

/// Model parameters `(U, J, epsilon, N)`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct TwModelParams {
    pub u: f64,
    pub j: f64,
    pub epsilon: f64,
    pub n: usize,
}

/// Diagonalized Hamiltonian with its Fock basis.
pub struct TwEigenSystem {
    inner: EigenSystem,
}

/// Sampled classical trajectory.
pub struct TwTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidInput(_) | Error::Config(_) => TwStatus::InvalidInput,
            Error::Domain(_) => TwStatus::Domain,
            Error::Io(_) | Error::Cache { .. } => TwStatus::Io,
            _ => TwStatus::Numeric,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> TwStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let (status, msg) = match outcome {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            return TwStatus::Ok;
        }
        Ok(Err(Failure(s, m))) => (s, m),
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            (TwStatus::Panic, format!("panic: {m}"))
        }
    };
    set_error(&msg);
    status
}

fn null(what: &str) -> Failure {
    Failure(TwStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Copies `src` into the caller's buffer, which must hold exactly `len`
/// values.
unsafe fn fill(src: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if len != src.len() {
        return Err(Failure(TwStatus::BufferSize, format!("buffer holds {len} values, need {}", src.len())));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, len);
    Ok(())
}

fn params(p: &TwModelParams) -> Result<ModelParams, Failure> {
    Ok(ModelParams::new(p.u, p.j, p.epsilon, p.n)?)
}

/// Message of the last failed call on this thread, or null after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Number of Fock states `(N+1)(N+2)/2`.
#[no_mangle]
pub extern "C" fn tw_dimension(n: usize) -> usize {
    dimension(n)
}

/// Position of `|n1, N - n1 - n3, n3>` in the basis order.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tw_fock_index(n: usize, n1: usize, n3: usize, out: *mut usize) -> TwStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let basis = FockBasis::new(n)?;
        *out = basis
            .index_of(n1, n3)
            .ok_or_else(|| Failure(TwStatus::InvalidInput, format!("({n1}, {n3}) is not a state with N = {n}")))?;
        Ok(())
    })
}

/// Builds and diagonalizes the Hamiltonian.
///
/// # Safety
/// `p` must point to valid parameters and `out` be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tw_eigensystem_new(p: *const TwModelParams, out: *mut *mut TwEigenSystem) -> TwStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let basis = FockBasis::new(p.n)?;
        let h = build_hamiltonian(&p, &basis)?;
        let es = diagonalize(&h, &basis, &p)?;
        *out = Box::into_raw(Box::new(TwEigenSystem { inner: es }));
        Ok(())
    })
}

/// Like [`tw_eigensystem_new`] but reads and writes the on-disk cache in
/// `cache_dir` (UTF-8 path).
///
/// # Safety
/// `cache_dir` must be a NUL-terminated string; see [`tw_eigensystem_new`].
#[no_mangle]
pub unsafe extern "C" fn tw_eigensystem_load_or_build(
    p: *const TwModelParams,
    cache_dir: *const c_char,
    out: *mut *mut TwEigenSystem,
) -> TwStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        if cache_dir.is_null() {
            return Err(null("cache_dir"));
        }
        let dir = CStr::from_ptr(cache_dir)
            .to_str()
            .map_err(|e| Failure(TwStatus::InvalidInput, format!("cache_dir is not UTF-8: {e}")))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (es, _) = load_or_build(Path::new(dir), &p)?;
        *out = Box::into_raw(Box::new(TwEigenSystem { inner: es }));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `es` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tw_eigensystem_free(es: *mut TwEigenSystem) {
    if !es.is_null() {
        drop(Box::from_raw(es));
    }
}

/// Dimension of the eigensystem; 0 for a null handle.
///
/// # Safety
/// `es` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tw_eigensystem_dim(es: *const TwEigenSystem) -> usize {
    es.as_ref().map_or(0, |e| e.inner.dim())
}

/// Ascending eigenvalues into `out[0..len]`, `len` equal to the dimension.
///
/// # Safety
/// `es` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tw_eigensystem_energies(es: *const TwEigenSystem, out: *mut f64, len: usize) -> TwStatus {
    guard(|| fill(deref(es, "eigensystem")?.inner.energies(), out, len))
}

/// Squared components of eigenvector `k` in basis order.
///
/// # Safety
/// As for [`tw_eigensystem_energies`].
#[no_mangle]
pub unsafe extern "C" fn tw_fock_projection(es: *const TwEigenSystem, k: usize, out: *mut f64, len: usize) -> TwStatus {
    guard(|| {
        let grid = fock_projection(&deref(es, "eigensystem")?.inner, k)?;
        fill(grid.values(), out, len)
    })
}

/// Coherent-state projection of eigenvector `k` in basis order.
///
/// # Safety
/// As for [`tw_eigensystem_energies`].
#[no_mangle]
pub unsafe extern "C" fn tw_husimi_projection(es: *const TwEigenSystem, k: usize, out: *mut f64, len: usize) -> TwStatus {
    guard(|| {
        let grid = husimi_projection_closed(&deref(es, "eigensystem")?.inner, k)?;
        fill(grid.values(), out, len)
    })
}

/// Populations `(n1, n3)` of the `rho2 = 0` point at scaled energy `e`.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tw_rho2_zero(p: *const TwModelParams, e: f64, n1: *mut f64, n3: *mut f64) -> TwStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        let (a, b) = (n1.as_mut().ok_or_else(|| null("n1"))?, n3.as_mut().ok_or_else(|| null("n3"))?);
        match solve_rho2_zero(&p, e)? {
            Rho2ZeroLocus::Point { n1, n3 } => {
                *a = n1;
                *b = n3;
                Ok(())
            }
            Rho2ZeroLocus::Line => Err(Failure(TwStatus::Domain, "the rho2 = 0 locus is a line".into())),
        }
    })
}

/// Integrates from `(n1, n3, phi12, phi32)` to `t_final`, sampling every
/// `sample_dt`.
///
/// # Safety
/// `p` and `initial` (4 values) must be readable, `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tw_trajectory_new(
    p: *const TwModelParams,
    initial: *const f64,
    t_final: f64,
    sample_dt: f64,
    out: *mut *mut TwTrajectory,
) -> TwStatus {
    guard(|| {
        let p = params(deref(p, "params")?)?;
        if initial.is_null() {
            return Err(null("initial"));
        }
        let x = std::slice::from_raw_parts(initial, 4);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let s0 = AngleActionView::new(x[0], x[1], x[2], x[3])?.to_cartesian()?;
        let traj = integrate(&s0, &p, t_final, sample_dt)?;
        *out = Box::into_raw(Box::new(TwTrajectory { inner: traj }));
        Ok(())
    })
}

/// Releases a trajectory; null is ignored.
///
/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tw_trajectory_free(t: *mut TwTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of samples; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tw_trajectory_len(t: *const TwTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.len())
}

/// Sample times and populations as rows `(t, n1, n2, n3)`; `len` must be
/// four times the sample count.
///
/// # Safety
/// `t` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn tw_trajectory_populations(t: *const TwTrajectory, out: *mut f64, len: usize) -> TwStatus {
    guard(|| {
        let t = deref(t, "trajectory")?;
        let rows: Vec<f64> = t
            .inner
            .samples
            .iter()
            .flat_map(|s| {
                let [a, b, c] = s.state.populations();
                [s.t, a, b, c]
            })
            .collect();
        fill(&rows, out, len)
    })
}

/// Largest relative energy and norm deviations along the trajectory.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tw_trajectory_drift(t: *const TwTrajectory, energy: *mut f64, norm: *mut f64) -> TwStatus {
    guard(|| {
        let t = deref(t, "trajectory")?;
        *energy.as_mut().ok_or_else(|| null("energy"))? = t.inner.energy_drift;
        *norm.as_mut().ok_or_else(|| null("norm"))? = t.inner.norm_drift;
        Ok(())
    })
}
