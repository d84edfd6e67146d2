//! Mean-field self-phase modulation: `a(t) -> a(t) exp(i kappa psi(t))`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::model::{response_function, ComplexEnvelope, MediumParams};

/// Phase profile used for `psi(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseMode {
    /// `psi(t) = 2 gamma |a(t)|^2`.
    #[default]
    Exact,
    /// `psi(t) = psi0 (1 - t^2)`; only meaningful for the Gaussian input.
    Paraxial,
}

/// How much of `psi(t)` ends up as the phase of the field.
///
/// With `Literal` the field is multiplied by `exp(i psi)`. The broadening
/// factor of the closed form, `V^2 = (1 - s psi0 phi)^2 + phi^2`, is only
/// recovered when the field carries `exp(i psi / 2)`, which is what
/// `ClosedForm` does. The literal reading gives `1 - 2 s psi0 phi` instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Literal,
    ClosedForm,
}

impl PhaseConvention {
    pub fn factor(self) -> f64 {
        match self {
            PhaseConvention::Literal => 1.0,
            PhaseConvention::ClosedForm => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhaseConvention::Literal => "literal",
            PhaseConvention::ClosedForm => "closed-form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpmOptions {
    pub mode: PhaseMode,
    pub convention: PhaseConvention,
    /// Use `2 gamma (h * nbar)(t) / sqrt(pi)` instead of `2 gamma nbar(t)` for the
    /// exact phase. Off by default; for sensitivity studies only.
    pub convolved_mean_phase: bool,
}

impl SpmOptions {
    pub fn new(mode: PhaseMode, convention: PhaseConvention) -> Self {
        Self {
            mode,
            convention,
            convolved_mean_phase: false,
        }
    }
}

/// Sampled nonlinear phase `psi(t_k)`.
pub fn nonlinear_phase(env: &ComplexEnvelope, m: &MediumParams, mode: PhaseMode) -> Vec<f64> {
    match mode {
        PhaseMode::Exact => env
            .samples()
            .iter()
            .map(|a| 2.0 * m.gamma * a.norm_sqr())
            .collect(),
        PhaseMode::Paraxial => env.grid().times().map(|t| m.psi0 * (1.0 - t * t)).collect(),
    }
}

fn convolved_phase(env: &ComplexEnvelope, m: &MediumParams) -> Vec<f64> {
    let g = env.grid();
    let dt = g.dt();
    let reach = ((8.0 * m.tau_r) / dt).ceil() as usize;
    let h: Vec<f64> = (0..=reach)
        .map(|j| response_function(m, j as f64 * dt))
        .collect();
    let density = env.intensity();
    let n = density.len();
    let scale = 2.0 * m.gamma * dt / PI.sqrt();
    (0..n)
        .map(|k| {
            let lo = k.saturating_sub(reach);
            let hi = (k + reach).min(n - 1);
            scale
                * (lo..=hi)
                    .map(|j| h[k.abs_diff(j)] * density[j])
                    .sum::<f64>()
        })
        .collect()
}

pub fn nonlinear_phase_with(
    env: &ComplexEnvelope,
    m: &MediumParams,
    opts: &SpmOptions,
) -> Vec<f64> {
    if opts.convolved_mean_phase && opts.mode == PhaseMode::Exact {
        convolved_phase(env, m)
    } else {
        nonlinear_phase(env, m, opts.mode)
    }
}

/// Multiply the envelope by `exp(i psi(t))`.
pub fn apply_spm(env: &ComplexEnvelope, m: &MediumParams, mode: PhaseMode) -> ComplexEnvelope {
    apply_spm_with(env, m, &SpmOptions::new(mode, PhaseConvention::Literal))
}

pub fn apply_spm_with(
    env: &ComplexEnvelope,
    m: &MediumParams,
    opts: &SpmOptions,
) -> ComplexEnvelope {
    let kappa = opts.convention.factor();
    let phase = nonlinear_phase_with(env, m, opts);
    let samples = env
        .samples()
        .iter()
        .zip(&phase)
        .map(|(a, psi)| a * Complex64::cis(kappa * psi))
        .collect();
    ComplexEnvelope::from_parts_unchecked(*env.grid(), samples)
}
