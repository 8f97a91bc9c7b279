use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::cases::CaseDefinition;
use crate::exactpoly::{parse_poly, var};
use crate::isomono::{Derivation, Orientation};
use crate::sampling;

use super::compile::{compile_flow, HamiltonianField};
use super::integrate::{integrate, IntegrateOptions, Trajectory};
use super::system::NumericSystem;
use super::NumericError;

type C = Complex64;

fn c(x: f64) -> C {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Blowup {
    pub t: f64,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericReport {
    pub case: String,
    pub check: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub parameters: BTreeMap<String, f64>,
    pub lambdas: Vec<f64>,
    pub t0: f64,
    pub t1: f64,
    pub tol: f64,
    pub samples: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<Blowup>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl NumericReport {
    fn new(sys: &NumericSystem, check: &str, t0: f64, t1: f64, tol: f64) -> NumericReport {
        NumericReport {
            case: sys.case.clone(),
            check: check.to_string(),
            max_residual: 0.0,
            threshold: 0.0,
            parameters: sys.parameters.clone(),
            lambdas: Vec::new(),
            t0,
            t1,
            tol,
            samples: 0,
            pass: false,
            blowup: None,
            detail: None,
        }
    }

    /// Passing means below threshold, or above it for the `expect_large` probes.
    fn finish(mut self, threshold: f64, expect_large: bool) -> NumericReport {
        self.threshold = threshold;
        self.pass = self.blowup.is_none()
            && self.max_residual.is_finite()
            && if expect_large { self.max_residual > threshold } else { self.max_residual < threshold };
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralVariant {
    /// Parameters frozen; drift should vanish.
    Autonomous,
    /// Parameters promoted to times; drift is expected.
    Promoted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureVariant {
    /// `dL/dt = [A, L] + dA/dlambda` along the promoted flow.
    Promoted,
    /// Autonomous data with the `dA/dlambda` term kept, which is wrong there.
    AutonomousWithTerm,
}

impl NumericSystem {
    pub fn from_derivation(d: &Derivation, case: &CaseDefinition) -> Result<NumericSystem, NumericError> {
        let num = case
            .numeric
            .as_ref()
            .ok_or_else(|| NumericError::Config(format!("case {} has no numeric section", case.id)))?;
        NumericSystem::new(d, num, case.orientation)
    }

    fn flow_index(&self, flow: usize) -> Result<usize, NumericError> {
        if flow < self.flows.len() {
            Ok(flow)
        } else {
            Err(NumericError::Config(format!("case {} has {} flows, asked for flow {}", self.case, self.flows.len(), flow + 1)))
        }
    }

    fn state(&self, x0: &[f64]) -> Result<Vec<C>, NumericError> {
        if x0.len() != self.dim {
            return Err(NumericError::Config(format!(
                "x0 has {} components, phase dimension is {}",
                x0.len(),
                self.dim
            )));
        }
        Ok(x0.iter().map(|x| c(*x)).collect())
    }

    /// Velocity of flow `flow`; its own time follows the integration variable,
    /// the others stay at `times`.
    pub fn velocity(&self, flow: usize, autonomous: bool, times: &[f64], t: f64, y: &[C]) -> Vec<C> {
        let mut ts = times.to_vec();
        ts[flow] = t;
        let env = self.env(y, &ts, 0.0);
        let f = &self.flows[flow];
        if autonomous { f.auto_field.eval(&env) } else { f.field.eval(&env) }
    }

    pub fn trajectory(
        &self,
        flow: usize,
        autonomous: bool,
        x0: &[f64],
        t0: f64,
        t1: f64,
        opts: &IntegrateOptions,
    ) -> Result<Trajectory, NumericError> {
        let flow = self.flow_index(flow)?;
        let y0 = self.state(x0)?;
        let times = vec![0.0; self.times.len()];
        integrate(|t, y| self.velocity(flow, autonomous, &times, t, y), &y0, t0, t1, opts)
    }
}

fn blowup_of(e: &NumericError) -> Option<Blowup> {
    match e {
        NumericError::BlowupDetected { t, norm } => Some(Blowup { t: *t, norm: *norm }),
        _ => None,
    }
}

/// Integrates, turning a blowup into a failed report instead of an error.
fn run(
    report: &mut NumericReport,
    traj: Result<Trajectory, NumericError>,
) -> Result<Option<Trajectory>, NumericError> {
    match traj {
        Ok(t) => {
            report.samples = t.times.len();
            Ok(Some(t))
        }
        Err(e) => match blowup_of(&e) {
            Some(b) => {
                report.detail = Some(e.to_string());
                report.blowup = Some(b);
                report.max_residual = f64::INFINITY;
                Ok(None)
            }
            None => Err(e),
        },
    }
}

fn spectral_coeffs(sys: &NumericSystem, x: &[super::CompiledExpr], env: &[C]) -> Vec<C> {
    let m = sys.matrix(&NumericSystem::eval(x, env));
    m.char_poly()
}

/// Largest relative drift of the coefficients of `det(mu - X(lambda))`
/// along flow `flow`, over every sample time and every `lambda`.
#[allow(clippy::too_many_arguments)]
pub fn spectral_drift(
    sys: &NumericSystem,
    flow: usize,
    variant: SpectralVariant,
    x0: &[f64],
    t0: f64,
    t1: f64,
    tol: f64,
    lambdas: &[f64],
    threshold: f64,
) -> Result<NumericReport, NumericError> {
    let name = match variant {
        SpectralVariant::Autonomous => "spectral",
        SpectralVariant::Promoted => "spectral promoted",
    };
    let mut report = NumericReport::new(sys, name, t0, t1, tol);
    let autonomous = variant == SpectralVariant::Autonomous;
    let lambdas: Vec<f64> = if autonomous {
        lambdas.to_vec()
    } else {
        lambdas.iter().copied().filter(|x| sys.l == 0 || *x != 0.0).collect()
    };
    report.lambdas = lambdas.clone();
    let traj = run(&mut report, sys.trajectory(flow, autonomous, x0, t0, t1, &IntegrateOptions::rk45(tol)))?;
    let Some(traj) = traj else {
        return Ok(report.finish(threshold, !autonomous));
    };
    let x = if autonomous { &sys.auto_x } else { &sys.l_coords };
    let mut times = vec![0.0; sys.times.len()];
    let env_at = |times: &[f64], y: &[C], lam: f64| sys.env(y, times, lam);
    let mut drift: f64 = 0.0;
    for lam in &lambdas {
        times[flow] = traj.times[0];
        let c0 = spectral_coeffs(sys, x, &env_at(&times, &traj.states[0], *lam));
        for (t, y) in traj.times.iter().zip(&traj.states) {
            times[flow] = *t;
            let ct = spectral_coeffs(sys, x, &env_at(&times, y, *lam));
            for (a, b) in ct.iter().zip(&c0) {
                drift = drift.max((a - b).norm() / b.norm().max(1.0));
            }
        }
    }
    report.max_residual = drift;
    Ok(report.finish(threshold, !autonomous))
}

/// Largest entry of `dL/dt - [A, L] - dA/dlambda` in the representation,
/// with `dL/dt` taken by the chain rule along the trajectory. Every flow is
/// checked; `flow = None` means all of them.
#[allow(clippy::too_many_arguments)]
pub fn curvature_residual(
    sys: &NumericSystem,
    flow: Option<usize>,
    variant: CurvatureVariant,
    x0: &[f64],
    t0: f64,
    t1: f64,
    tol: f64,
    lambdas: &[f64],
    threshold: f64,
) -> Result<NumericReport, NumericError> {
    let name = match variant {
        CurvatureVariant::Promoted => "curvature",
        CurvatureVariant::AutonomousWithTerm => "curvature autonomous with dA/dlambda",
    };
    let mut report = NumericReport::new(sys, name, t0, t1, tol);
    let lambdas = sys.lambda_samples(lambdas);
    report.lambdas = lambdas.clone();
    let flows: Vec<usize> = match flow {
        Some(f) => vec![sys.flow_index(f)?],
        None => (0..sys.flows.len()).collect(),
    };
    let autonomous = variant == CurvatureVariant::AutonomousWithTerm;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for fi in flows {
        let traj = run(&mut report, sys.trajectory(fi, autonomous, x0, t0, t1, &IntegrateOptions::rk45(tol)))?;
        let Some(traj) = traj else {
            return Ok(report.finish(threshold, autonomous));
        };
        samples += traj.times.len();
        let f = &sys.flows[fi];
        let (x, dx_dv, a, da) = if autonomous {
            (&sys.auto_x, &sys.auto_dx_dv, &f.auto_a, &f.auto_da_dlambda)
        } else {
            (&sys.l_coords, &sys.dl_dv, &f.a, &f.da_dlambda)
        };
        let mut times = vec![0.0; sys.times.len()];
        for (t, y) in traj.times.iter().zip(&traj.states) {
            times[fi] = *t;
            let env0 = sys.env(y, &times, 0.0);
            let vel = if autonomous { f.auto_field.eval(&env0) } else { f.field.eval(&env0) };
            for lam in &lambdas {
                let env = sys.env(y, &times, *lam);
                let mut r: Vec<C> = if autonomous {
                    vec![c(0.0); x.len()]
                } else {
                    NumericSystem::eval(&f.dl_dt, &env)
                };
                for (dv, v) in dx_dv.iter().zip(&vel) {
                    for (ri, e) in r.iter_mut().zip(dv) {
                        *ri += e.eval(&env) * v;
                    }
                }
                let xv = NumericSystem::eval(x, &env);
                let av = NumericSystem::eval(a, &env);
                let br = match sys.orientation {
                    Orientation::AL => sys.bracket(&av, &xv),
                    Orientation::LA => sys.bracket(&xv, &av),
                };
                for (ri, (b, d)) in r.iter_mut().zip(br.iter().zip(NumericSystem::eval(da, &env))) {
                    *ri -= b + d;
                }
                worst = worst.max(sys.matrix_norm(&r));
            }
        }
    }
    report.samples = samples;
    report.max_residual = worst;
    Ok(report.finish(threshold, autonomous))
}

/// A flow for `flow_commutation`: velocity given all times and the state.
pub type TimedField<'a> = Box<dyn Fn(&[f64], &[C]) -> Vec<C> + 'a>;

impl NumericSystem {
    /// Velocity of the promoted flow `flow` as a function of every time.
    pub fn timed_field(&self, flow: usize) -> TimedField<'_> {
        Box::new(move |times: &[f64], y: &[C]| {
            let env = self.env(y, times, 0.0);
            self.flows[flow].field.eval(&env)
        })
    }
}

fn advance(f: &TimedField<'_>, which: usize, times: &mut [f64], y: &[C], s: f64, tol: f64) -> Result<Vec<C>, NumericError> {
    let start = times[which];
    let fixed = times.to_vec();
    let traj = integrate(
        |t, y| {
            let mut ts = fixed.clone();
            ts[which] = t;
            f(&ts, y)
        },
        y,
        start,
        start + s,
        &IntegrateOptions::rk45(tol),
    )?;
    times[which] = start + s;
    Ok(traj.last().to_vec())
}

/// `|Phi1_s Phi2_s x0 - Phi2_s Phi1_s x0|`, each flow advancing its own time
/// by `s` with the other held fixed, both starting from zero times.
#[allow(clippy::too_many_arguments)]
pub fn flow_commutation(
    sys: &NumericSystem,
    f1: &TimedField<'_>,
    f2: &TimedField<'_>,
    x0: &[f64],
    s: f64,
    tol: f64,
    threshold: f64,
    expect_large: bool,
) -> Result<NumericReport, NumericError> {
    if sys.times.len() != 2 {
        return Err(NumericError::Config(format!("case {} is not a two-time case", sys.case)));
    }
    let mut report = NumericReport::new(sys, "commute", 0.0, s, tol);
    let y0 = sys.state(x0)?;
    let order = |first: (&TimedField<'_>, usize), second: (&TimedField<'_>, usize)| {
        let mut times = vec![0.0, 0.0];
        let y = advance(first.0, first.1, &mut times, &y0, s, tol)?;
        advance(second.0, second.1, &mut times, &y, s, tol)
    };
    let a = order((f1, 0), (f2, 1));
    let b = order((f2, 1), (f1, 0));
    match (a, b) {
        (Ok(a), Ok(b)) => {
            report.samples = 2;
            report.max_residual = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        }
        (Err(e), _) | (_, Err(e)) => {
            report.blowup = blowup_of(&e);
            if report.blowup.is_none() {
                return Err(e);
            }
            report.detail = Some(e.to_string());
            report.max_residual = f64::INFINITY;
        }
    }
    Ok(report.finish(threshold, expect_large))
}

/// Compiled partials against central differences of `H` at `points` seeded
/// points, relative error `|fd - exact| / max(1, |exact|)`.
pub fn gradient_check(sys: &NumericSystem, seed: u64, points: usize, step: f64, threshold: f64) -> NumericReport {
    let mut report = NumericReport::new(sys, "gradient", 0.0, 0.0, step);
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..points {
        let y: Vec<C> = (0..sys.dim).map(|_| c(rng.gen_range(-1.0..1.0))).collect();
        let times: Vec<f64> = (0..sys.times.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for f in &sys.flows {
            for field in [&f.field, &f.auto_field] {
                worst = worst.max(field_gradient_error(sys, field, &y, &times, step));
            }
        }
    }
    report.samples = points;
    report.max_residual = worst;
    report.finish(threshold, false)
}

fn field_gradient_error(sys: &NumericSystem, field: &HamiltonianField, y: &[C], times: &[f64], step: f64) -> f64 {
    let env = sys.env(y, times, 0.0);
    let mut worst: f64 = 0.0;
    for (k, d) in field.partials().iter().enumerate() {
        let mut up = env.clone();
        let mut dn = env.clone();
        up[k] += step;
        dn[k] -= step;
        let fd = (field.h.eval(&up) - field.h.eval(&dn)) / (2.0 * step);
        let exact = d.eval(&env);
        worst = worst.max((fd - exact).norm() / exact.norm().max(1.0));
    }
    worst
}

/// `|H(x(t)) - H(x(0))|` along the autonomous flow. The threshold is
/// `10 tol span`, times `max(1, |grad H|)` over the trajectory since the
/// integrator controls the state error, not the energy error.
pub fn energy_drift(sys: &NumericSystem, flow: usize, x0: &[f64], t0: f64, t1: f64, tol: f64) -> Result<NumericReport, NumericError> {
    let mut report = NumericReport::new(sys, "energy", t0, t1, tol);
    let traj = run(&mut report, sys.trajectory(flow, true, x0, t0, t1, &IntegrateOptions::rk45(tol)))?;
    let base = 10.0 * tol * (t1 - t0).max(f64::MIN_POSITIVE);
    let Some(traj) = traj else {
        return Ok(report.finish(base, false));
    };
    let field = &sys.flows[flow].auto_field;
    let times = vec![0.0; sys.times.len()];
    let env = |y: &[C]| sys.env(y, &times, 0.0);
    let e0 = field.h.eval(&env(&traj.states[0]));
    let mut drift: f64 = 0.0;
    let mut grad: f64 = 1.0;
    for y in &traj.states {
        let en = env(y);
        drift = drift.max((field.h.eval(&en) - e0).norm());
        grad = grad.max(field.eval(&en).iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    report.max_residual = drift;
    Ok(report.finish(base * grad, false))
}

/// `H = (p^2 + q^2)/2` over the layout `q, p`.
pub fn harmonic_toy() -> HamiltonianField {
    let h = parse_poly("p^2/2 + q^2/2").expect("toy Hamiltonian parses");
    compile_flow(&h, &[(var("q"), var("p"))], &[var("q"), var("p")]).expect("toy layout")
}

/// Error ratio of fixed-step rk4 at `steps` and `2 steps` on the harmonic
/// toy from `(1, 0)` over `[0, t1]`, against the exact rotation.
pub fn rk4_convergence(steps: usize, t1: f64) -> Result<f64, NumericError> {
    let f = harmonic_toy();
    let y0 = [c(1.0), c(0.0)];
    let exact = [c(t1.cos()), c(-t1.sin())];
    let err = |n: usize| -> Result<f64, NumericError> {
        let tr = integrate(|_, y| f.eval(y), &y0, 0.0, t1, &IntegrateOptions::rk4(n))?;
        Ok(tr.last().iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    };
    Ok(err(steps)? / err(2 * steps)?)
}

/// Integrates flow `flow` along the real line until the bound is crossed.
/// Returns the blowup, or `None` when the span is crossed without one.
pub fn blowup_probe(sys: &NumericSystem, flow: usize, x0: &[f64], t1: f64, bound: f64) -> Result<Option<Blowup>, NumericError> {
    let mut opts = IntegrateOptions::rk45(1e-10);
    opts.bound = bound;
    match sys.trajectory(flow, false, x0, 0.0, t1, &opts) {
        Ok(_) => Ok(None),
        Err(e) => match blowup_of(&e) {
            Some(b) => Ok(Some(b)),
            None => Err(e),
        },
    }
}

/// Default `s` for `commute`: each flow advances its time by this much.
pub const COMMUTE_SPAN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Spectral,
    Curvature,
    Commute,
    Gradient,
}

#[derive(Clone, Debug)]
pub struct NumericOptions {
    pub t0: f64,
    pub t1: Option<f64>,
    pub tol: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub lambdas: Vec<f64>,
    pub seed: u64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            t0: 0.0,
            t1: None,
            tol: None,
            x0: None,
            lambdas: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            seed: sampling::DEFAULT_SEED,
        }
    }
}

/// One named check on a derived case with the case's numeric defaults.
pub fn run_check(d: &Derivation, case: &CaseDefinition, kind: CheckKind, opts: &NumericOptions) -> Result<NumericReport, NumericError> {
    let num = case
        .numeric
        .as_ref()
        .ok_or_else(|| NumericError::Config(format!("case {} has no numeric section", case.id)))?;
    let sys = NumericSystem::new(d, num, case.orientation)?;
    let x0 = opts.x0.clone().unwrap_or_else(|| num.x0.clone());
    let tol = opts.tol.unwrap_or(num.tol);
    let span = if kind == CheckKind::Commute { COMMUTE_SPAN } else { num.span };
    let t1 = opts.t1.unwrap_or(opts.t0 + span);
    match kind {
        CheckKind::Spectral => {
            spectral_drift(&sys, 0, SpectralVariant::Autonomous, &x0, opts.t0, t1, tol, &opts.lambdas, num.threshold)
        }
        CheckKind::Curvature => {
            curvature_residual(&sys, None, CurvatureVariant::Promoted, &x0, opts.t0, t1, tol, &opts.lambdas, num.threshold)
        }
        CheckKind::Commute => {
            let (f1, f2) = (sys.timed_field(0), sys.timed_field(1));
            if sys.flows.len() != 2 {
                return Err(NumericError::Config(format!("case {} is not a two-time case", case.id)));
            }
            let mut r = flow_commutation(&sys, &f1, &f2, &x0, t1 - opts.t0, tol, 1e-6, false)?;
            r.t0 = opts.t0;
            r.t1 = t1;
            Ok(r)
        }
        CheckKind::Gradient => Ok(gradient_check(&sys, opts.seed, 20, 1e-5, 1e-7)),
    }
}

