//! Floating point integration of derived Hamiltonian systems and numeric
//! probes of isospectrality, zero curvature, flow commutation and gradients.

mod checks;
mod compile;
mod integrate;
mod system;

pub use checks::{
    blowup_probe, curvature_residual, energy_drift, flow_commutation, gradient_check, harmonic_toy, rk4_convergence,
    run_check, spectral_drift, CheckKind, COMMUTE_SPAN, CurvatureVariant, NumericOptions, NumericReport, SpectralVariant,
};
pub use compile::{compile_all, compile_flow, layout_index, CompiledExpr, CompiledPoly, HamiltonianField};
pub use integrate::{integrate, IntegrateOptions, Method, Trajectory};
pub use system::{CompiledFlow, NumericSystem};

use crate::isomono::IsomonoError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("layout: {0}")]
    Layout(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("step limit reached at t = {t}")]
    StepLimit { t: f64 },
    #[error("blowup detected at t = {t} (|x| = {norm})")]
    BlowupDetected { t: f64, norm: f64 },
    #[error(transparent)]
    Isomono(#[from] IsomonoError),
}
