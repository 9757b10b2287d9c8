//! Adaptive Dormand-Prince 5(4) integration for small explicit systems.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on any step.
    pub max_step: f64,
    /// Tighter bound applied once `t >= fine_from`.
    pub fine_step: f64,
    pub fine_from: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rtol: 1e-11,
            atol: 1e-14,
            max_step: 1e-2,
            fine_step: 1e-3,
            fine_from: f64::INFINITY,
            max_steps: 2_000_000,
        }
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    /// Reached the requested end point.
    Completed,
    /// The stop predicate fired at the recorded time.
    Event(f64),
}

/// Accepted steps of an integration.
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub t: Vec<f64>,
    pub y: Vec<[f64; N]>,
    pub stop: Stop,
}

// Dormand-Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b̂ (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1 > t0`, recording every accepted
/// step. The integration ends early when `stop(t, y)` returns true.
pub fn integrate<const N: usize, F, S>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    ctl: &StepControl,
    mut stop: S,
) -> Result<Solution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]) -> bool,
{
    if !(t1 > t0) {
        return Err(Error::Internal(alloc::format!("integration interval [{t0}, {t1}] is empty")));
    }
    let mut t = t0;
    let mut y = y0;
    let mut ts = alloc::vec![t0];
    let mut ys = alloc::vec![y0];
    let mut k1 = f(t, &y);
    let mut h = ctl.max_step.min(t1 - t0).min(1e-3);
    let bound = |t: f64| if t >= ctl.fine_from { ctl.fine_step } else { ctl.max_step };

    for _ in 0..ctl.max_steps {
        if t >= t1 {
            return Ok(Solution { t: ts, y: ys, stop: Stop::Completed });
        }
        // land exactly on the fine-step threshold and on t1
        let mut h_try = h.min(bound(t));
        let mut target = t + h_try;
        if t < ctl.fine_from && target > ctl.fine_from && ctl.fine_from < t1 {
            target = ctl.fine_from;
        }
        if target >= t1 || t1 - target < 1e-12 * (1.0 + t1.abs()) {
            target = t1;
        }
        h_try = target - t;

        let k2 = f(t + C2 * h_try, &axpy(&y, &[(A21, &k1)], h_try));
        let k3 = f(t + C3 * h_try, &axpy(&y, &[(A31, &k1), (A32, &k2)], h_try));
        let k4 = f(t + C4 * h_try, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h_try));
        let k5 = f(t + C5 * h_try, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h_try));
        let k6 = f(target, &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h_try));
        let y_new = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h_try);
        let k7 = f(target, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctl.atol + ctl.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h = 0.25 * h_try;
            if h < 1e-300 {
                return Err(Error::Internal(alloc::format!("step size underflow at t = {t}")));
            }
            continue;
        }
        if err <= 1.0 {
            t = target;
            y = y_new;
            k1 = k7;
            ts.push(t);
            ys.push(y);
            if stop(t, &y) {
                return Ok(Solution { t: ts, y: ys, stop: Stop::Event(t) });
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0) };
            h = h_try * fac;
        } else {
            h = h_try * (0.9 * libm::pow(err, -0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(Error::Internal(alloc::format!("step size collapsed at t = {t}")));
        }
    }
    Err(Error::Internal(alloc::format!("exceeded {} integration steps", ctl.max_steps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let ctl = StepControl { max_step: 0.5, ..Default::default() };
        let sol = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 3.0, &ctl, |_, _| false).unwrap();
        assert_eq!(sol.stop, Stop::Completed);
        assert_eq!(*sol.t.last().unwrap(), 3.0);
        assert!((sol.y.last().unwrap()[0] - libm::exp(-3.0)).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator() {
        let ctl = StepControl { max_step: 0.1, ..Default::default() };
        let sol = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 10.0, &ctl, |_, _| false).unwrap();
        let y = sol.y.last().unwrap();
        assert!((y[0] - libm::sin(10.0)).abs() < 1e-9);
        assert!((y[1] - libm::cos(10.0)).abs() < 1e-9);
    }

    #[test]
    fn blow_up_event() {
        // y' = y², y(0) = 1 blows up at t = 1
        let ctl = StepControl::default();
        let sol = integrate(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &ctl, |_, y| y[0] > 1e8).unwrap();
        match sol.stop {
            Stop::Event(t) => assert!((t - 1.0).abs() < 1e-7),
            other => panic!("expected event, got {other:?}"),
        }
    }

    #[test]
    fn fine_step_region_respected() {
        let ctl = StepControl { max_step: 0.1, fine_step: 1e-3, fine_from: 0.9, ..Default::default() };
        let sol = integrate(|_, _y: &[f64; 1]| [1.0], 0.0, [0.0], 1.0, &ctl, |_, _| false).unwrap();
        assert!(sol.t.contains(&0.9));
        for w in sol.t.windows(2) {
            if w[0] >= 0.9 {
                assert!(w[1] - w[0] <= 1e-3 + 1e-15);
            }
        }
    }
}
