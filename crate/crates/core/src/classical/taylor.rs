//! Adaptive Taylor-series integrator for the cubic Cartesian equations of
//! motion.
//!
//! Coefficients come from the Cauchy-product recurrences of the polynomial
//! right-hand side. The step size follows Jorba and Zou: the last two
//! coefficients are each required to contribute less than the tolerance.
//! Norms are Euclidean over all six variables, so the step sequence is
//! unchanged by a common phase rotation.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::state::CartesianState;
use crate::error::{Error, Result};
use crate::spectra::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorOptions {
    /// Degree of the Taylor polynomial.
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of steps in one call.
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions { order: 25, abs_tol: 1e-12, rel_tol: 1e-12, max_steps: 50_000_000 }
    }
}

impl IntegratorOptions {
    pub fn validate(&self) -> Result<()> {
        if self.order < 4 || self.order > 60 {
            return Err(Error::invalid(format!("Taylor order {} outside 4..=60", self.order)));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::invalid("integrator tolerances must be positive"));
        }
        Ok(())
    }
}

/// One accepted step: the Taylor polynomial of the solution on
/// `[t0, t0 + h]`.
#[derive(Debug, Clone)]
pub struct TaylorStep {
    pub t0: f64,
    pub h: f64,
    /// `coeffs[k][i]`: coefficient of `(t - t0)^k` for variable `i`.
    pub coeffs: Vec<[f64; 6]>,
}

impl TaylorStep {
    /// State at `t0 + s` by Horner evaluation.
    pub fn eval(&self, s: f64) -> CartesianState {
        let mut x = [0.0; 6];
        for c in self.coeffs.iter().rev() {
            for i in 0..6 {
                x[i] = x[i] * s + c[i];
            }
        }
        CartesianState::from_array(x)
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }
}

/// Computes Taylor coefficients and step sizes for one parameter set.
#[derive(Debug, Clone)]
pub struct TaylorIntegrator {
    u: f64,
    eps: f64,
    hop: f64,
    opts: IntegratorOptions,
    x: Vec<[f64; 6]>,
    a: Vec<f64>,
}

fn norm(x: &[f64; 6]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl TaylorIntegrator {
    pub fn new(params: &ModelParams, opts: IntegratorOptions) -> Result<Self> {
        params.validate()?;
        opts.validate()?;
        Ok(TaylorIntegrator {
            u: params.u,
            eps: params.epsilon,
            hop: params.j / SQRT_2,
            opts,
            x: vec![[0.0; 6]; opts.order + 1],
            a: vec![0.0; opts.order + 1],
        })
    }

    pub fn options(&self) -> &IntegratorOptions {
        &self.opts
    }

    /// Fills the coefficient table for the solution through `x0`.
    fn expand(&mut self, x0: [f64; 6]) {
        let (u, e, h) = (self.u, self.eps, self.hop);
        self.x[0] = x0;
        for k in 0..self.opts.order {
            let x = &self.x;
            // k-th coefficient of the imbalance A = |a1|^2 - |a2|^2 + |a3|^2 (times 2)
            let mut ak = 0.0;
            for j in 0..=k {
                let (l, r) = (&x[j], &x[k - j]);
                ak += l[0] * r[0] + l[1] * r[1] - l[2] * r[2] - l[3] * r[3] + l[4] * r[4] + l[5] * r[5];
            }
            self.a[k] = ak;
            // k-th coefficients of A * x_i
            let mut ax = [0.0; 6];
            for j in 0..=k {
                let aj = self.a[j];
                let r = &x[k - j];
                for i in 0..6 {
                    ax[i] += aj * r[i];
                }
            }
            let c = &x[k];
            let f = [
                u * ax[1] - e * c[1] + h * c[3],
                -(u * ax[0] - e * c[0] + h * c[2]),
                -u * ax[3] + h * (c[1] + c[5]),
                -(-u * ax[2] + h * (c[0] + c[4])),
                u * ax[5] + e * c[5] + h * c[3],
                -(u * ax[4] + e * c[4] + h * c[2]),
            ];
            let inv = 1.0 / (k + 1) as f64;
            let next = &mut self.x[k + 1];
            for i in 0..6 {
                next[i] = f[i] * inv;
            }
        }
    }

    /// Jorba-Zou step size from the last two coefficients.
    fn step_size(&self) -> f64 {
        let p = self.opts.order;
        let x0 = norm(&self.x[0]);
        let tol = self.opts.abs_tol.min(self.opts.rel_tol * x0.max(f64::MIN_POSITIVE));
        let mut h = f64::INFINITY;
        for k in [p - 1, p] {
            let nk = norm(&self.x[k]);
            if nk > 0.0 {
                h = h.min((tol / nk).powf(1.0 / k as f64));
            }
        }
        h
    }

    /// Expands around `x0` at time `t0` and returns the accepted step,
    /// truncated so that it does not pass `t_end`.
    pub fn step(&mut self, t0: f64, x0: [f64; 6], t_end: f64) -> Result<TaylorStep> {
        if !x0.iter().all(|v| v.is_finite()) {
            return Err(Error::Integration { time: t0, reason: "non-finite state".into() });
        }
        self.expand(x0);
        let mut h = self.step_size();
        if !(h > 1e-12 * t0.abs().max(1.0)) {
            return Err(Error::Integration {
                time: t0,
                reason: format!("step size {h:e} below the resolvable minimum"),
            });
        }
        h = h.min(t_end - t0);
        Ok(TaylorStep { t0, h, coeffs: self.x.clone() })
    }

    /// Integrates from `t0` to `t_end`, handing every step to `visit`.
    /// Returns the final state.
    pub fn run<F>(&mut self, s0: &CartesianState, t0: f64, t_end: f64, mut visit: F) -> Result<CartesianState>
    where
        F: FnMut(&TaylorStep) -> Result<()>,
    {
        let mut t = t0;
        let mut x = s0.to_array();
        let mut steps = 0usize;
        while t < t_end {
            let step = self.step(t, x, t_end)?;
            visit(&step)?;
            let end = step.eval(step.h);
            if !end.is_finite() {
                return Err(Error::Integration { time: step.t1(), reason: "NaN or infinity in the solution".into() });
            }
            x = end.to_array();
            t = if step.t1() >= t_end { t_end } else { step.t1() };
            steps += 1;
            if steps >= self.opts.max_steps {
                return Err(Error::Integration { time: t, reason: format!("exceeded {steps} steps") });
            }
        }
        Ok(CartesianState::from_array(x))
    }
}

/// State after evolving `s0` for `duration`.
pub fn propagate(s0: &CartesianState, params: &ModelParams, duration: f64, opts: IntegratorOptions) -> Result<CartesianState> {
    TaylorIntegrator::new(params, opts)?.run(s0, 0.0, duration, |_| Ok(()))
}
