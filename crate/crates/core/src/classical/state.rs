use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed on the constraint `rho1^2 + rho3^2 <= 1` before a state is
/// rejected; values inside the slack are clamped.
pub const CONSTRAINT_SLACK: f64 = 1e-12;

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Point of the six-variable chart, `Q_k + i P_k = sqrt2 rho_k e^{i phi_k}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CartesianState {
    pub q1: f64,
    pub p1: f64,
    pub q2: f64,
    pub p2: f64,
    pub q3: f64,
    pub p3: f64,
}

/// Point of the reduced chart `q1 + i p1 = sqrt2 rho1 e^{i phi12}`,
/// `q3 + i p3 = sqrt2 rho3 e^{i phi23}` with `phi23 = -phi32`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducedState {
    pub q1: f64,
    pub p1: f64,
    pub q3: f64,
    pub p3: f64,
}

/// Populations `n_k = N_k / N` and relative phases in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleActionView {
    pub n1: f64,
    pub n3: f64,
    pub phi12: f64,
    pub phi32: f64,
}

impl CartesianState {
    pub fn from_array(x: [f64; 6]) -> Self {
        CartesianState { q1: x[0], p1: x[1], q2: x[2], p2: x[3], q3: x[4], p3: x[5] }
    }

    /// `[Q1, P1, Q2, P2, Q3, P3]`.
    pub fn to_array(&self) -> [f64; 6] {
        [self.q1, self.p1, self.q2, self.p2, self.q3, self.p3]
    }

    /// `rho_k^2 = (Q_k^2 + P_k^2) / 2`.
    pub fn populations(&self) -> [f64; 3] {
        [
            0.5 * (self.q1 * self.q1 + self.p1 * self.p1),
            0.5 * (self.q2 * self.q2 + self.p2 * self.p2),
            0.5 * (self.q3 * self.q3 + self.p3 * self.p3),
        ]
    }

    /// `sum rho_k^2`, equal to 1 on the physical manifold.
    pub fn norm(&self) -> f64 {
        self.populations().iter().sum()
    }

    pub fn phases(&self) -> [f64; 3] {
        [self.p1.atan2(self.q1), self.p2.atan2(self.q2), self.p3.atan2(self.q3)]
    }

    /// Populations and the phase differences `phi1 - phi2`, `phi3 - phi2`.
    pub fn to_angles(&self) -> AngleActionView {
        let [n1, _, n3] = self.populations();
        let [f1, f2, f3] = self.phases();
        AngleActionView { n1, n3, phi12: wrap_phase(f1 - f2), phi32: wrap_phase(f3 - f2) }
    }

    pub fn to_reduced(&self) -> ReducedState {
        self.to_angles().to_reduced()
    }

    /// Common phase rotation `phi_k -> phi_k + theta` in every well.
    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let r = |q: f64, p: f64| (q * c - p * s, p * c + q * s);
        let (q1, p1) = r(self.q1, self.p1);
        let (q2, p2) = r(self.q2, self.p2);
        let (q3, p3) = r(self.q3, self.p3);
        CartesianState { q1, p1, q2, p2, q3, p3 }
    }

    /// Wells 1 and 3 exchanged.
    pub fn mirrored(&self) -> Self {
        CartesianState { q1: self.q3, p1: self.p3, q2: self.q2, p2: self.p2, q3: self.q1, p3: self.p1 }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Checks `|sum rho_k^2 - 1| <= tol`.
    pub fn check_norm(&self, tol: f64) -> Result<()> {
        let n = self.norm();
        if !((n - 1.0).abs() <= tol) {
            return Err(Error::domain(format!("state norm {n} differs from 1 by more than {tol:e}")));
        }
        Ok(())
    }
}

impl ReducedState {
    /// `(q1^2 + p1^2 + q3^2 + p3^2) / 2 = rho1^2 + rho3^2`.
    pub fn outer_population(&self) -> f64 {
        0.5 * (self.q1 * self.q1 + self.p1 * self.p1 + self.q3 * self.q3 + self.p3 * self.p3)
    }

    /// `rho2^2`, or a domain error when the state leaves the simplex.
    pub fn rho2_sq(&self) -> Result<f64> {
        let r = 1.0 - self.outer_population();
        if r < -CONSTRAINT_SLACK || r.is_nan() {
            return Err(Error::domain(format!("rho2^2 = {r} is negative")));
        }
        Ok(r.max(0.0))
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.q1, self.p1, self.q3, self.p3]
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        ReducedState { q1: x[0], p1: x[1], q3: x[2], p3: x[3] }
    }

    pub fn to_angles(&self) -> Result<AngleActionView> {
        self.rho2_sq()?;
        Ok(AngleActionView {
            n1: 0.5 * (self.q1 * self.q1 + self.p1 * self.p1),
            n3: 0.5 * (self.q3 * self.q3 + self.p3 * self.p3),
            phi12: wrap_phase(self.p1.atan2(self.q1)),
            phi32: wrap_phase(-self.p3.atan2(self.q3)),
        })
    }

    /// Full state with the gauge `phi2 = 0`.
    pub fn to_cartesian(&self) -> Result<CartesianState> {
        self.to_angles()?.to_cartesian()
    }
}

impl AngleActionView {
    pub fn new(n1: f64, n3: f64, phi12: f64, phi32: f64) -> Result<Self> {
        let v = AngleActionView { n1, n3, phi12: wrap_phase(phi12), phi32: wrap_phase(phi32) };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.n1 >= -CONSTRAINT_SLACK
            && self.n3 >= -CONSTRAINT_SLACK
            && self.n1 + self.n3 <= 1.0 + CONSTRAINT_SLACK
            && self.phi12.is_finite()
            && self.phi32.is_finite();
        if !ok {
            return Err(Error::domain(format!("populations/phases outside the simplex: {self:?}")));
        }
        Ok(())
    }

    pub fn n2(&self) -> f64 {
        (1.0 - self.n1 - self.n3).max(0.0)
    }

    pub fn to_reduced(&self) -> ReducedState {
        let r1 = (2.0 * self.n1.max(0.0)).sqrt();
        let r3 = (2.0 * self.n3.max(0.0)).sqrt();
        let (s1, c1) = self.phi12.sin_cos();
        let (s3, c3) = (-self.phi32).sin_cos();
        ReducedState { q1: r1 * c1, p1: r1 * s1, q3: r3 * c3, p3: r3 * s3 }
    }

    /// Full state with the gauge `phi2 = 0`.
    pub fn to_cartesian(&self) -> Result<CartesianState> {
        self.validate()?;
        let r1 = (2.0 * self.n1.max(0.0)).sqrt();
        let r3 = (2.0 * self.n3.max(0.0)).sqrt();
        let (s1, c1) = self.phi12.sin_cos();
        let (s3, c3) = self.phi32.sin_cos();
        Ok(CartesianState {
            q1: r1 * c1,
            p1: r1 * s1,
            q2: SQRT_2 * self.n2().sqrt(),
            p2: 0.0,
            q3: r3 * c3,
            p3: r3 * s3,
        })
    }

    /// Wells 1 and 3 exchanged.
    pub fn mirrored(&self) -> Self {
        AngleActionView { n1: self.n3, n3: self.n1, phi12: self.phi32, phi32: self.phi12 }
    }
}

/// Smallest distance between two angles on the circle.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}
