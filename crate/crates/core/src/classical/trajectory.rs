use std::io::Write;

use serde::Serialize;

use super::energy::{classical_q, energy_cartesian};
use super::state::CartesianState;
use super::taylor::{IntegratorOptions, TaylorIntegrator};
use crate::error::{Error, Result};
use crate::spectra::ModelParams;

/// Norm deviation accepted for an initial condition.
pub const INITIAL_NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub state: CartesianState,
}

/// Samples of one orbit at multiples of `sample_dt`, with the conservation
/// audit.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub params: ModelParams,
    pub options: IntegratorOptions,
    pub sample_dt: f64,
    pub samples: Vec<Sample>,
    /// `max |E(t) - E(0)| / |E(0)|`; absolute when `|E(0)| < 1e-12`.
    pub energy_drift: f64,
    /// `max |sum rho_k^2 (t) - sum rho_k^2 (0)|`.
    pub norm_drift: f64,
    /// `max |Q(t) - Q(0)|`, recorded only when `epsilon = 0`.
    pub q_drift: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn initial(&self) -> &CartesianState {
        &self.samples[0].state
    }

    pub fn last(&self) -> &CartesianState {
        &self.samples[self.samples.len() - 1].state
    }

    pub fn initial_energy(&self) -> f64 {
        energy_cartesian(self.initial(), &self.params)
    }

    /// CSV rows `t,n1,n2,n3,phi12,phi32,E,Q`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,n1,n2,n3,phi12,phi32,E,Q")?;
        for s in &self.samples {
            let [n1, n2, n3] = s.state.populations();
            let a = s.state.to_angles();
            writeln!(
                w,
                "{},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e},{:.15e}",
                s.t,
                n1,
                n2,
                n3,
                a.phi12,
                a.phi32,
                energy_cartesian(&s.state, &self.params),
                classical_q(&s.state)
            )?;
        }
        Ok(())
    }
}

/// Integrates Hamilton's equations with the default options.
pub fn integrate(s0: &CartesianState, params: &ModelParams, t_final: f64, sample_dt: f64) -> Result<Trajectory> {
    integrate_with(s0, params, t_final, sample_dt, IntegratorOptions::default())
}

pub fn integrate_with(
    s0: &CartesianState,
    params: &ModelParams,
    t_final: f64,
    sample_dt: f64,
    options: IntegratorOptions,
) -> Result<Trajectory> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid(format!("t_final must be finite and non-negative, got {t_final}")));
    }
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(Error::invalid(format!("sample_dt must be positive, got {sample_dt}")));
    }
    s0.check_norm(INITIAL_NORM_TOLERANCE)?;
    let n_samples = (t_final / sample_dt + 1e-9).floor() as usize + 1;
    let mut samples = Vec::with_capacity(n_samples);
    samples.push(Sample { t: 0.0, state: *s0 });
    let e0 = energy_cartesian(s0, params);
    let norm0 = s0.norm();
    let q0 = classical_q(s0);
    let track_q = params.is_integrable();
    let scale = if e0.abs() < 1e-12 { 1.0 } else { e0.abs() };
    let (mut de, mut dn, mut dq) = (0.0f64, 0.0f64, 0.0f64);
    let mut audit = |s: &CartesianState| {
        de = de.max((energy_cartesian(s, params) - e0).abs() / scale);
        dn = dn.max((s.norm() - norm0).abs());
        if track_q {
            dq = dq.max((classical_q(s) - q0).abs());
        }
    };
    let mut next = 1usize;
    let mut integrator = TaylorIntegrator::new(params, options)?;
    let end = integrator.run(s0, 0.0, t_final, |step| {
        let last = step.t1() >= t_final;
        while next < n_samples {
            let t = (next as f64 * sample_dt).min(t_final);
            if t > step.t1() && !last {
                break;
            }
            let s = step.eval(t - step.t0);
            if !s.is_finite() {
                return Err(Error::Integration { time: t, reason: "NaN in dense output".into() });
            }
            audit(&s);
            samples.push(Sample { t, state: s });
            next += 1;
        }
        Ok(())
    })?;
    audit(&end);
    Ok(Trajectory {
        params: *params,
        options,
        sample_dt,
        samples,
        energy_drift: de,
        norm_drift: dn,
        q_drift: track_q.then_some(dq),
    })
}
