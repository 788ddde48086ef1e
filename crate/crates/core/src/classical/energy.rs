use std::f64::consts::SQRT_2;

use super::state::{CartesianState, ReducedState};
use crate::error::Result;
use crate::spectra::ModelParams;

/// `Q1^2 + P1^2 - Q2^2 - P2^2 + Q3^2 + P3^2`.
fn imbalance(s: &CartesianState) -> f64 {
    s.q1 * s.q1 + s.p1 * s.p1 - s.q2 * s.q2 - s.p2 * s.p2 + s.q3 * s.q3 + s.p3 * s.p3
}

/// Scaled energy `E/N` in the six-variable chart.
pub fn energy_cartesian(s: &CartesianState, params: &ModelParams) -> f64 {
    let a = imbalance(s);
    let tilt = s.q3 * s.q3 + s.p3 * s.p3 - s.q1 * s.q1 - s.p1 * s.p1;
    let hop = s.q1 * s.q2 + s.p1 * s.p2 + s.q2 * s.q3 + s.p2 * s.p3;
    0.25 * params.u * a * a + 0.5 * params.epsilon * tilt + params.j / SQRT_2 * hop
}

/// Hamilton's equations `(dQ_k/dt, dP_k/dt) = (dH/dP_k, -dH/dQ_k)`.
pub fn hamilton_rhs(s: &CartesianState, params: &ModelParams) -> CartesianState {
    let ua = params.u * imbalance(s);
    let e = params.epsilon;
    let h = params.j / SQRT_2;
    CartesianState {
        q1: ua * s.p1 - e * s.p1 + h * s.p2,
        p1: -(ua * s.q1 - e * s.q1 + h * s.q2),
        q2: -ua * s.p2 + h * (s.p1 + s.p3),
        p2: -(-ua * s.q2 + h * (s.q1 + s.q3)),
        q3: ua * s.p3 + e * s.p3 + h * s.p2,
        p3: -(ua * s.q3 + e * s.q3 + h * s.q2),
    }
}

/// `rho1^2 + rho3^2 - 2 rho1 rho3 cos(phi32 - phi12)`, written as a
/// polynomial in the Cartesian variables.
pub fn classical_q(s: &CartesianState) -> f64 {
    0.5 * (s.q1 * s.q1 + s.p1 * s.p1 + s.q3 * s.q3 + s.p3 * s.p3) - (s.q1 * s.q3 + s.p1 * s.p3)
}

/// Sign of the tilt term for `(q1, p1, q3, p3)`.
const TILT_SIGN: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];
/// Which reduced variables enter the hopping term linearly.
const HOP_MASK: [f64; 4] = [1.0, 0.0, 1.0, 0.0];

/// Scaled energy in the reduced chart,
/// `U (r^2 - 1)^2 + eps/2 (q3^2 + p3^2 - q1^2 - p1^2) + J (q1 + q3) sqrt(1 - r^2/2)`.
pub fn energy_reduced(s: &ReducedState, params: &ModelParams) -> Result<f64> {
    let rho2 = s.rho2_sq()?.sqrt();
    let r2 = 2.0 * s.outer_population();
    let tilt = s.q3 * s.q3 + s.p3 * s.p3 - s.q1 * s.q1 - s.p1 * s.p1;
    Ok(params.u * (r2 - 1.0).powi(2) + 0.5 * params.epsilon * tilt + params.j * (s.q1 + s.q3) * rho2)
}

/// Gradient of [`energy_reduced`] in `(q1, p1, q3, p3)`. Requires `rho2 > 0`.
pub fn reduced_gradient(s: &ReducedState, params: &ModelParams) -> Result<[f64; 4]> {
    let x = s.to_array();
    let rho2 = s.rho2_sq()?.sqrt();
    let r2 = 2.0 * s.outer_population();
    let sum = s.q1 + s.q3;
    let mut g = [0.0; 4];
    for i in 0..4 {
        g[i] = 4.0 * params.u * (r2 - 1.0) * x[i]
            + params.epsilon * TILT_SIGN[i] * x[i]
            + params.j * (HOP_MASK[i] * rho2 - sum * x[i] / (2.0 * rho2));
    }
    Ok(g)
}

/// Hessian of [`energy_reduced`] in `(q1, p1, q3, p3)`. Requires `rho2 > 0`.
pub fn reduced_hessian(s: &ReducedState, params: &ModelParams) -> Result<[[f64; 4]; 4]> {
    let x = s.to_array();
    let rho2 = s.rho2_sq()?.sqrt();
    let r2 = 2.0 * s.outer_population();
    let sum = s.q1 + s.q3;
    let mut h = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let d = if i == j { 1.0 } else { 0.0 };
            h[i][j] = 4.0 * params.u * ((r2 - 1.0) * d + 2.0 * x[i] * x[j])
                + params.epsilon * TILT_SIGN[i] * d
                + params.j
                    * (-(HOP_MASK[i] * x[j] + HOP_MASK[j] * x[i]) / (2.0 * rho2)
                        - sum * (d / (2.0 * rho2) + x[i] * x[j] / (4.0 * rho2.powi(3))));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::state::AngleActionView;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(eps: f64) -> ModelParams {
        ModelParams::new(0.7, 1.0, eps, 100).unwrap()
    }

    #[test]
    fn all_in_middle_well() {
        let s = CartesianState { q2: SQRT_2, ..Default::default() };
        assert!((energy_cartesian(&s, &params(1.5)) - 0.7).abs() < 1e-15);
        let r = ReducedState::default();
        assert!((energy_reduced(&r, &params(1.5)).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(classical_q(&s), 0.0);
    }

    #[test]
    fn critical_energy() {
        let v = AngleActionView::new(0.081, 0.294, 0.0, PI).unwrap();
        let e = energy_cartesian(&v.to_cartesian().unwrap(), &params(1.5));
        assert!((e - 0.0752).abs() < 1e-3, "{e}");
    }

    #[test]
    fn q_values() {
        let half = AngleActionView::new(0.5, 0.5, 0.0, PI).unwrap().to_cartesian().unwrap();
        assert!((classical_q(&half) - 2.0).abs() < 1e-14);
        let same = AngleActionView::new(0.5, 0.5, 0.3, 0.3).unwrap().to_cartesian().unwrap();
        assert!(classical_q(&same).abs() < 1e-14);
    }

    #[test]
    fn rho2_zero_energy_ignores_phases() {
        let p = params(1.5);
        let e0 = energy_reduced(&AngleActionView::new(0.6, 0.4, 0.0, 0.0).unwrap().to_reduced(), &p).unwrap();
        for (a, b) in [(0.3, 1.0), (-2.0, 2.5), (PI, 0.1)] {
            let e = energy_reduced(&AngleActionView::new(0.6, 0.4, a, b).unwrap().to_reduced(), &p).unwrap();
            // rho2 = sqrt(rounding error) here, so the hopping term is ~1e-8
            assert!((e - e0).abs() < 1e-7);
        }
    }

    fn state_from(a: f64, b: f64, f: f64, g: f64, k: f64) -> CartesianState {
        let v = AngleActionView::new(a * (1.0 - b * 0.999), (1.0 - a) * b, f, g).unwrap();
        v.to_cartesian().unwrap().rotate(k)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn charts_agree(a in 0.0f64..1.0, b in 0.0f64..1.0, f in -PI..PI, g in -PI..PI,
                        eps in prop::sample::select(vec![0.0, 0.7, 1.5])) {
            let c = state_from(a, b, f, g, 0.0);
            let p = params(eps);
            let e1 = energy_cartesian(&c, &p);
            let e2 = energy_reduced(&c.to_reduced(), &p).unwrap();
            prop_assert!((e1 - e2).abs() < 1e-12);
        }

        #[test]
        fn rotation_invariance(a in 0.0f64..1.0, b in 0.0f64..1.0, f in -PI..PI, g in -PI..PI, k in -PI..PI) {
            let c = state_from(a, b, f, g, 0.3);
            let p = params(1.5);
            prop_assert!((energy_cartesian(&c, &p) - energy_cartesian(&c.rotate(k), &p)).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn rhs_matches_finite_differences(a in 0.0f64..1.0, b in 0.0f64..1.0, f in -PI..PI,
                                          g in -PI..PI, k in -PI..PI) {
            let s = state_from(a, b, f, g, k);
            let p = params(1.5);
            let rhs = hamilton_rhs(&s, &p).to_array();
            let x = s.to_array();
            let step = 1e-6;
            for i in 0..6 {
                let mut up = x;
                let mut dn = x;
                up[i] += step;
                dn[i] -= step;
                let d = (energy_cartesian(&CartesianState::from_array(up), &p)
                    - energy_cartesian(&CartesianState::from_array(dn), &p)) / (2.0 * step);
                // dQ/dt = dH/dP, dP/dt = -dH/dQ
                let want = if i % 2 == 0 { -rhs[i + 1] } else { rhs[i - 1] };
                prop_assert!((d - want).abs() < 1e-7, "component {}: {} vs {}", i, d, want);
            }
        }

        #[test]
        fn reduced_derivatives(a in 0.05f64..0.95, b in 0.05f64..0.95, f in -PI..PI, g in -PI..PI) {
            let v = AngleActionView::new(a * (1.0 - b), (1.0 - a) * b, f, g).unwrap();
            let s = v.to_reduced();
            let p = params(1.5);
            let grad = reduced_gradient(&s, &p).unwrap();
            let hess = reduced_hessian(&s, &p).unwrap();
            let step = 1e-6;
            for i in 0..4 {
                let mut up = s.to_array();
                let mut dn = s.to_array();
                up[i] += step;
                dn[i] -= step;
                let (su, sd) = (ReducedState::from_array(up), ReducedState::from_array(dn));
                let d = (energy_reduced(&su, &p).unwrap() - energy_reduced(&sd, &p).unwrap()) / (2.0 * step);
                prop_assert!((d - grad[i]).abs() < 1e-6);
                let gu = reduced_gradient(&su, &p).unwrap();
                let gd = reduced_gradient(&sd, &p).unwrap();
                for j in 0..4 {
                    let dd = (gu[j] - gd[j]) / (2.0 * step);
                    prop_assert!((dd - hess[j][i]).abs() < 1e-5 * (1.0 + hess[j][i].abs()));
                }
            }
        }
    }
}
