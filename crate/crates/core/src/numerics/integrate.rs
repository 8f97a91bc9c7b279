use num_complex::Complex64;
use serde::Serialize;

use super::NumericError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    /// Classical fixed-step Runge-Kutta.
    Rk4 { steps: usize },
    /// Dormand-Prince 5(4) with relative and absolute tolerance `tol`.
    Rk45 { tol: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    pub method: Method,
    /// `BlowupDetected` once any component exceeds this modulus.
    pub bound: f64,
    pub max_steps: usize,
}

impl IntegrateOptions {
    pub fn rk45(tol: f64) -> IntegrateOptions {
        IntegrateOptions {
            method: Method::Rk45 { tol },
            bound: 1e8,
            max_steps: 1_000_000,
        }
    }

    pub fn rk4(steps: usize) -> IntegrateOptions {
        IntegrateOptions {
            method: Method::Rk4 { steps },
            bound: 1e8,
            max_steps: steps + 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<Vec<Complex64>>,
    pub method: Method,
}

impl Trajectory {
    pub fn last(&self) -> &[Complex64] {
        self.states.last().unwrap()
    }
}

type C = Complex64;

fn axpy(y: &[C], h: f64, ks: &[(&[C], f64)]) -> Vec<C> {
    let mut out = y.to_vec();
    for (k, c) in ks {
        if *c != 0.0 {
            for (o, x) in out.iter_mut().zip(k.iter()) {
                *o += x * (h * c);
            }
        }
    }
    out
}

fn norm_inf(y: &[C]) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn guard(y: &[C], t: f64, bound: f64) -> Result<(), NumericError> {
    let n = norm_inf(y);
    if !n.is_finite() || n > bound {
        return Err(NumericError::BlowupDetected { t, norm: n });
    }
    Ok(())
}

fn rk4_step(f: &impl Fn(f64, &[C]) -> Vec<C>, t: f64, y: &[C], h: f64) -> Vec<C> {
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &axpy(y, h, &[(&k1, 0.5)]));
    let k3 = f(t + h / 2.0, &axpy(y, h, &[(&k2, 0.5)]));
    let k4 = f(t + h, &axpy(y, h, &[(&k3, 1.0)]));
    axpy(y, h, &[(&k1, 1.0 / 6.0), (&k2, 1.0 / 3.0), (&k3, 1.0 / 3.0), (&k4, 1.0 / 6.0)])
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const CT: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// fifth-order weights minus fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t1`, recording every accepted step.
pub fn integrate(
    f: impl Fn(f64, &[C]) -> Vec<C>,
    y0: &[C],
    t0: f64,
    t1: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory, NumericError> {
    if t1 < t0 {
        return Err(NumericError::Config(format!("t1 = {t1} precedes t0 = {t0}")));
    }
    let mut times = vec![t0];
    let mut states = vec![y0.to_vec()];
    guard(y0, t0, opts.bound)?;
    if t1 == t0 {
        return Ok(Trajectory { times, states, method: opts.method });
    }
    match opts.method {
        Method::Rk4 { steps } => {
            if steps == 0 {
                return Err(NumericError::Config("rk4 needs at least one step".into()));
            }
            let h = (t1 - t0) / steps as f64;
            let mut y = y0.to_vec();
            for i in 0..steps {
                let t = t0 + h * i as f64;
                y = rk4_step(&f, t, &y, h);
                let tn = if i + 1 == steps { t1 } else { t0 + h * (i + 1) as f64 };
                guard(&y, tn, opts.bound)?;
                times.push(tn);
                states.push(y.clone());
            }
        }
        Method::Rk45 { tol } => {
            let mut t = t0;
            let mut y = y0.to_vec();
            let mut h = ((t1 - t0) / 100.0).min(tol.powf(0.2) * 0.1).max(1e-12);
            let mut k1 = f(t, &y);
            let mut steps = 0;
            while t < t1 {
                steps += 1;
                if steps > opts.max_steps {
                    return Err(NumericError::StepLimit { t });
                }
                if t + h > t1 {
                    h = t1 - t;
                }
                let mut ks: Vec<Vec<C>> = vec![k1.clone()];
                for s in 0..6 {
                    let coeffs: Vec<(&[C], f64)> = ks.iter().zip(&A[s]).map(|(k, a)| (k.as_slice(), *a)).collect();
                    let ys = axpy(&y, h, &coeffs);
                    ks.push(f(t + CT[s] * h, &ys));
                }
                // the seventh stage is evaluated at the fifth-order solution
                let coeffs: Vec<(&[C], f64)> = ks[..6].iter().zip(&A[5]).map(|(k, a)| (k.as_slice(), *a)).collect();
                let yn = axpy(&y, h, &coeffs);
                let mut err: f64 = 0.0;
                for i in 0..y.len() {
                    let mut e = Complex64::new(0.0, 0.0);
                    for (k, c) in ks.iter().zip(&E) {
                        e += k[i] * *c;
                    }
                    let sc = tol + tol * y[i].norm().max(yn[i].norm());
                    err = err.max((e * h).norm() / sc);
                }
                if !err.is_finite() {
                    return Err(NumericError::BlowupDetected { t, norm: f64::INFINITY });
                }
                if err <= 1.0 {
                    t += h;
                    y = yn;
                    k1 = ks.pop().unwrap();
                    guard(&y, t, opts.bound)?;
                    times.push(t);
                    states.push(y.clone());
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
                if h < 1e-14 * (1.0 + t.abs()) {
                    return Err(NumericError::BlowupDetected { t, norm: norm_inf(&y) });
                }
            }
        }
    }
    Ok(Trajectory { times, states, method: opts.method })
}
