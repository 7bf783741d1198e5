//! Dormand–Prince 5(4) with PI step-size control for complex state vectors
//! over a real parameter.

use crate::error::{Error, Result};
use crate::linalg::C64;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - 0.75 * BETA;
const MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Largest accepted scaled error estimate (at most 1).
    pub max_error: f64,
}

impl OdeStats {
    pub fn merge(&mut self, other: OdeStats) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.max_error = self.max_error.max(other.max_error);
    }
}

/// Integrates `y′ = f(s, y)` from `s0` to `s1`. Each accepted step keeps
/// the local error estimate below `tol·(1 + |y|)` componentwise in RMS.
pub fn integrate<F>(
    mut f: F,
    s0: f64,
    s1: f64,
    y0: Vec<C64>,
    tol: f64,
) -> Result<(Vec<C64>, OdeStats)>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let dim = y0.len();
    let mut stats = OdeStats::default();
    let span = s1 - s0;
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let dir = span.signum();
    let mut s = s0;
    let mut y = y0;
    let mut k: Vec<Vec<C64>> = vec![vec![C64::default(); dim]; 7];
    let mut tmp = vec![C64::default(); dim];
    let mut y_new = vec![C64::default(); dim];
    f(s, &y, &mut k[0]);
    let mut h = span * 1e-2;
    let mut err_old = 1e-4f64;
    let mut last_rejected = false;

    for _ in 0..MAX_STEPS {
        if (s1 - s) * dir <= 0.0 {
            return Ok((y, stats));
        }
        let hits_end = (s + h - s1) * dir >= 0.0;
        if hits_end {
            h = s1 - s;
        }
        if h.abs() <= 1e-14 * (1.0 + s.abs()) {
            return Err(Error::StepUnderflow { s });
        }
        for stage in 1..7 {
            for d in 0..dim {
                let mut acc = C64::default();
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc += kj[d] * A[stage][j];
                }
                tmp[d] = y[d] + acc * h;
            }
            f(s + C[stage] * h, &tmp, &mut k[stage]);
            if stage == 6 {
                y_new.copy_from_slice(&tmp);
            }
        }
        let mut sum = 0.0;
        for d in 0..dim {
            let mut e = C64::default();
            for (j, kj) in k.iter().enumerate() {
                e += kj[d] * E[j];
            }
            let sc = tol + tol * y[d].norm().max(y_new[d].norm());
            sum += (e * h).norm_sqr() / (sc * sc);
        }
        let err = (sum / dim.max(1) as f64).sqrt();
        if !err.is_finite() {
            h *= FAC_MIN;
            stats.rejected += 1;
            last_rejected = true;
            continue;
        }
        if err <= 1.0 {
            let fac = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-EXPO1) * err_old.powf(BETA)).clamp(FAC_MIN, FAC_MAX)
            };
            err_old = err.max(1e-4);
            s = if hits_end { s1 } else { s + h };
            std::mem::swap(&mut y, &mut y_new);
            // First-same-as-last: the seventh stage is f at the new point.
            k.swap(0, 6);
            stats.accepted += 1;
            stats.max_error = stats.max_error.max(err);
            h *= if last_rejected { fac.min(1.0) } else { fac };
            last_rejected = false;
        } else {
            h *= (SAFETY * err.powf(-EXPO1)).clamp(FAC_MIN, 1.0);
            stats.rejected += 1;
            last_rejected = true;
        }
    }
    Err(Error::StepUnderflow { s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, I};

    #[test]
    fn exponential() {
        let (y, stats) = integrate(
            |_, y, dy| dy[0] = y[0] * I,
            0.0,
            2.0 * std::f64::consts::PI,
            vec![c(1.0, 0.0)],
            1e-12,
        )
        .unwrap();
        assert!((y[0] - c(1.0, 0.0)).norm() < 1e-10, "{y:?}");
        assert!(stats.accepted > 10);
    }

    #[test]
    fn backwards() {
        let (y, _) = integrate(
            |_, y, dy| dy[0] = y[0],
            1.0,
            0.0,
            vec![c(std::f64::consts::E, 0.0)],
            1e-12,
        )
        .unwrap();
        assert!((y[0] - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn polynomial_is_exact() {
        let (y, _) = integrate(
            |s, _, dy| dy[0] = c(4.0 * s * s * s, 0.0),
            0.0,
            1.0,
            vec![c(0.0, 0.0)],
            1e-10,
        )
        .unwrap();
        assert!((y[0] - c(1.0, 0.0)).norm() < 1e-13);
    }
}
