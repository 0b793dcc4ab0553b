//! Embedded Dormand-Prince 5(4) stepper with step-size control.
//!
//! Small fixed-dimension integrator for the stance dynamics. The pair gives
//! a 5th-order solution with a 4th-order error estimate; step acceptance
//! uses the usual mixed absolute/relative scaled RMS norm. The first-same-
//! as-last property saves one derivative evaluation per accepted step.

/// Butcher tableau of the Dormand-Prince 5(4) pair.
const A: [[f64; 6]; 6] = [
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

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// 5th-order weights (same as the last row of A: FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];

/// Difference between 5th- and 4th-order weights, for the error estimate.
const B_ERR: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// One proposed step.
pub struct StepOutcome<const N: usize> {
    pub y: [f64; N],
    /// Derivative at the end of the step (reusable as the next k1).
    pub f_end: [f64; N],
    /// Scaled error norm; the step is acceptable when <= 1.
    pub error: f64,
}

pub struct Dopri45<const N: usize> {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    h: f64,
}

impl<const N: usize> Dopri45<N> {
    pub fn new(abs_tol: f64, rel_tol: f64, max_step: f64) -> Self {
        Dopri45 {
            abs_tol,
            rel_tol,
            max_step,
            h: max_step,
        }
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// Trial step of size `h` from `(t, y)` with `f1 = f(t, y)` already
    /// evaluated.
    pub fn try_step<F>(
        &self,
        f: &mut F,
        t: f64,
        y: &[f64; N],
        f1: &[f64; N],
        h: f64,
    ) -> StepOutcome<N>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut k = [[0.0; N]; 7];
        k[0] = *f1;
        let mut y_stage = [0.0; N];
        for i in 0..6 {
            for n in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(i + 1) {
                    acc += A[i][j] * kj[n];
                }
                y_stage[n] = y[n] + h * acc;
            }
            k[i + 1] = f(t + C[i] * h, &y_stage);
        }

        let mut y_new = [0.0; N];
        let mut err_raw = [0.0; N];
        for n in 0..N {
            let mut acc5 = 0.0;
            let mut acce = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc5 += B5[j] * kj[n];
                acce += B_ERR[j] * kj[n];
            }
            y_new[n] = y[n] + h * acc5;
            err_raw[n] = h * acce;
        }

        let mut err_sq = 0.0;
        for n in 0..N {
            let scale = self.abs_tol + self.rel_tol * y[n].abs().max(y_new[n].abs());
            let e = err_raw[n] / scale;
            err_sq += e * e;
        }
        let error = (err_sq / N as f64).sqrt();

        StepOutcome {
            y: y_new,
            f_end: k[6],
            error,
        }
    }

    /// Propose the next step size after a step with scaled error `error`.
    pub fn next_step_size(&mut self, error: f64) -> f64 {
        let factor = if error == 0.0 {
            5.0
        } else {
            (0.9 * error.powf(-0.2)).clamp(0.2, 5.0)
        };
        self.h = (self.h * factor).min(self.max_step);
        self.h
    }
}

/// Cubic Hermite interpolation of the state inside an accepted step, using
/// the derivative evaluations at both endpoints. `theta` in [0, 1].
pub fn hermite<const N: usize>(
    theta: f64,
    h: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    y1: &[f64; N],
    f1: &[f64; N],
) -> [f64; N] {
    let t2 = theta * theta;
    let t3 = t2 * theta;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + theta;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let mut out = [0.0; N];
    for n in 0..N {
        out[n] = h00 * y0[n] + h10 * h * f0[n] + h01 * y1[n] + h11 * h * f1[n];
    }
    out
}
