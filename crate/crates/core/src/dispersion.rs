//! Propagation through a quadratic-dispersion element.
//!
//! The Green function is
//! `G(t) = (-i 2 pi k2 z)^(-1/2) exp(-i t^2 / (2 k2 z))`; with time in units of
//! `tau_p` and `k2 z = -s phi` this becomes
//! `G(t) = (2 pi i s phi)^(-1/2) exp(i s t^2 / (2 phi))`.
//!
//! Two implementations are provided: a direct O(n^2) convolution with the
//! sampled kernel, and multiplication of the discrete spectrum by the transfer
//! function. With the forward transform `F(w) = sum f(t) exp(-i w t)` used by
//! `rustfft` the transfer function is `exp(-i s phi w^2 / 2)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::model::{ComplexEnvelope, TimeGrid};

/// Largest fraction of the output energy tolerated in the guard band.
pub const WRAP_LIMIT: f64 = 1e-6;

/// Fraction of the half-span, measured from each edge, treated as guard band.
const GUARD_FRACTION: f64 = 0.25;

/// Sign `s` of the dispersion: `s = +1` for `k2 < 0`, `s = -1` for `k2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GvdSign {
    /// `k2 < 0`, `s = +1`; compresses the SPM up-chirped pulse.
    Anomalous,
    /// `k2 > 0`, `s = -1`.
    Normal,
}

impl GvdSign {
    pub fn value(self) -> f64 {
        match self {
            GvdSign::Anomalous => 1.0,
            GvdSign::Normal => -1.0,
        }
    }

    pub fn from_value(s: i64) -> Result<Self> {
        match s {
            1 => Ok(GvdSign::Anomalous),
            -1 => Ok(GvdSign::Normal),
            _ => Err(Error::config(format!(
                "dispersion sign must be +1 or -1, got {s}"
            ))),
        }
    }
}

impl fmt::Display for GvdSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GvdSign::Anomalous => f.write_str("+1"),
            GvdSign::Normal => f.write_str("-1"),
        }
    }
}

/// Dimensionless description of the dispersive element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams {
    pub sign: GvdSign,
    /// `phi = z / D`, `D = tau_p^2 / |k2|`.
    pub phi: f64,
    /// `phi_d = z / d`, `d = tau_r^2 / |k2|`.
    pub phi_d: f64,
    /// `tau_p / tau_r`.
    pub r_ratio: f64,
}

impl DispersionParams {
    pub fn new(sign: GvdSign, phi: f64, r_ratio: f64) -> Result<Self> {
        if !(phi >= 0.0 && phi.is_finite()) {
            return Err(Error::config(format!(
                "dispersion phase must be non-negative, got {phi}"
            )));
        }
        if !(r_ratio > 0.0 && r_ratio.is_finite()) {
            return Err(Error::config(format!(
                "tau_p / tau_r must be positive, got {r_ratio}"
            )));
        }
        Ok(Self {
            sign,
            phi,
            phi_d: phi * r_ratio * r_ratio,
            r_ratio,
        })
    }

    /// Build from explicit `phi` and `phi_d`, checking `phi_d = phi r^2`.
    pub fn from_phases(sign: GvdSign, phi: f64, phi_d: f64, r_ratio: f64) -> Result<Self> {
        let dp = Self::new(sign, phi, r_ratio)?;
        let tol = 1e-12 * dp.phi_d.abs().max(f64::MIN_POSITIVE);
        if (dp.phi_d - phi_d).abs() > tol {
            return Err(Error::config(format!(
                "phi_d = {phi_d} is inconsistent with phi (tau_p/tau_r)^2 = {}",
                dp.phi_d
            )));
        }
        Ok(dp)
    }

    pub fn s(&self) -> f64 {
        self.sign.value()
    }

    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.sign, phi, self.r_ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PropagationMethod {
    /// Direct quadrature of the convolution with the sampled Green function.
    Kernel,
    /// Quadratic spectral phase, O(n log n) and exactly unitary.
    #[default]
    Spectral,
}

fn kernel_prefactor(dp: &DispersionParams) -> Complex64 {
    // (2 pi i s phi)^(-1/2) on the principal branch.
    Complex64::from_polar((2.0 * PI * dp.phi).powf(-0.5), -dp.s() * FRAC_PI_4)
}

fn kernel_value(dp: &DispersionParams, pref: Complex64, t: f64) -> Complex64 {
    pref * Complex64::cis(dp.s() * t * t / (2.0 * dp.phi))
}

/// Green function sampled at the grid times.
pub fn green_kernel(dp: &DispersionParams, g: &TimeGrid) -> Result<Vec<Complex64>> {
    if dp.phi == 0.0 {
        return Err(Error::ZeroDispersion);
    }
    let pref = kernel_prefactor(dp);
    Ok(g.times().map(|t| kernel_value(dp, pref, t)).collect())
}

/// Reusable spectral propagator for one grid.
#[derive(Clone)]
pub struct SpectralPropagator {
    grid: TimeGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    omega_sq: Vec<f64>,
}

impl fmt::Debug for SpectralPropagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralPropagator")
            .field("grid", &self.grid)
            .finish_non_exhaustive()
    }
}

impl SpectralPropagator {
    pub fn new(grid: TimeGrid) -> Self {
        let n = grid.n_samples();
        let mut planner = FftPlanner::new();
        let dw = 2.0 * PI / (n as f64 * grid.dt());
        let omega_sq = (0..n)
            .map(|k| {
                let m = if k < n / 2 {
                    k as f64
                } else {
                    k as f64 - n as f64
                };
                (m * dw).powi(2)
            })
            .collect();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            omega_sq,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn apply_in_place(&self, buf: &mut [Complex64], dp: &DispersionParams) {
        if dp.phi == 0.0 {
            return;
        }
        let n = buf.len();
        self.forward.process(buf);
        let c = -0.5 * dp.s() * dp.phi;
        let norm = 1.0 / n as f64;
        for (z, w2) in buf.iter_mut().zip(&self.omega_sq) {
            *z *= Complex64::cis(c * w2) * norm;
        }
        self.inverse.process(buf);
    }

    /// Propagate without the wrap-around check.
    pub fn propagate_samples(&self, input: &[Complex64], dp: &DispersionParams) -> Vec<Complex64> {
        let mut buf = input.to_vec();
        self.apply_in_place(&mut buf, dp);
        buf
    }

    pub fn propagate(
        &self,
        env: &ComplexEnvelope,
        dp: &DispersionParams,
    ) -> Result<ComplexEnvelope> {
        if env.grid() != &self.grid {
            return Err(Error::config(
                "envelope grid differs from the propagator grid",
            ));
        }
        if dp.phi == 0.0 {
            return Ok(env.clone());
        }
        let out = self.propagate_samples(env.samples(), dp);
        check_wrap_around(&self.grid, &out)?;
        Ok(ComplexEnvelope::from_parts_unchecked(self.grid, out))
    }
}

fn kernel_propagate_samples(
    g: &TimeGrid,
    input: &[Complex64],
    dp: &DispersionParams,
) -> Vec<Complex64> {
    let n = g.n_samples();
    let dt = g.dt();
    let pref = kernel_prefactor(dp) * dt;
    // Past |u| = pi phi / dt the chirp oscillates faster than the grid can
    // represent and the sampled kernel only contributes aliases. A hard cut
    // there leaves an end-point echo, so the kernel is rolled off with a
    // raised cosine between 60% and 90% of that lag.
    let nyquist_lag = PI * dp.phi / (dt * dt);
    let (taper_start, taper_end) = (0.6 * nyquist_lag, 0.9 * nyquist_lag);
    let reach = (taper_end.floor() as usize).min(n - 1);
    let lag: Vec<Complex64> = (0..=reach)
        .map(|m| {
            let x = m as f64;
            let w = if x <= taper_start {
                1.0
            } else {
                0.5 * (1.0 + (PI * (x - taper_start) / (taper_end - taper_start)).cos())
            };
            w * kernel_value(dp, pref, x * dt)
        })
        .collect();
    (0..n)
        .map(|j| {
            let lo = j.saturating_sub(reach);
            let hi = (j + reach).min(n - 1);
            (lo..=hi).map(|k| lag[j.abs_diff(k)] * input[k]).sum()
        })
        .collect()
}

/// `B(t) = integral G(t - t1) A(t1) dt1`; `phi = 0` returns the input.
pub fn propagate(
    env: &ComplexEnvelope,
    dp: &DispersionParams,
    method: PropagationMethod,
) -> Result<ComplexEnvelope> {
    if dp.phi == 0.0 {
        return Ok(env.clone());
    }
    match method {
        PropagationMethod::Spectral => SpectralPropagator::new(*env.grid()).propagate(env, dp),
        PropagationMethod::Kernel => {
            let out = kernel_propagate_samples(env.grid(), env.samples(), dp);
            check_wrap_around(env.grid(), &out)?;
            Ok(ComplexEnvelope::from_parts_unchecked(*env.grid(), out))
        }
    }
}

/// Rejects fields with more than [`WRAP_LIMIT`] of their energy near the grid
/// edges, where the periodic spectral propagator folds the tails back.
pub fn check_wrap_around(g: &TimeGrid, samples: &[Complex64]) -> Result<()> {
    let n = samples.len();
    let guard = ((n / 2) as f64 * GUARD_FRACTION) as usize;
    let total: f64 = samples.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(());
    }
    let edge: f64 = samples[..guard]
        .iter()
        .chain(&samples[n - guard..])
        .map(|z| z.norm_sqr())
        .sum();
    let fraction = edge / total;
    if fraction <= WRAP_LIMIT {
        return Ok(());
    }
    let (mut m1, mut m2) = (0.0, 0.0);
    for (t, z) in g.times().zip(samples) {
        let w = z.norm_sqr() / total;
        m1 += w * t;
        m2 += w * t * t;
    }
    let sigma = (m2 - m1 * m1).max(0.0).sqrt();
    // Gaussian intensity exp(-t^2/V^2) has sigma = V/sqrt(2); 8 V covers 1e-27.
    let required_half_span = (m1.abs() + 8.0 * 2f64.sqrt() * sigma) / (1.0 - GUARD_FRACTION);
    Err(Error::WrapAround {
        fraction,
        limit: WRAP_LIMIT,
        required_half_span,
    })
}

/// Discretised form of the unitarity condition
/// `integral G(t1 - t) G*(t2 - t) dt = delta(t2 - t1)`.
///
/// The point-sampled Gram matrix of the chirped kernel is not `I / dt` on any
/// finite grid (its chirp exceeds the Nyquist rate away from the origin), so
/// the condition is tested in weak form: a bank of Gaussian probes
/// `exp(-(t - c)^2 / 0.5)` centred at `c = -2..=2` is propagated and the
/// Gram matrix of the outputs is compared with that of the inputs. The value
/// returned is the largest entry-wise deviation relative to the largest
/// input overlap.
pub fn unitarity_residual(
    dp: &DispersionParams,
    g: &TimeGrid,
    method: PropagationMethod,
) -> Result<f64> {
    if dp.phi == 0.0 {
        return Err(Error::ZeroDispersion);
    }
    const SIGMA: f64 = 0.5;
    let probes: Vec<Vec<Complex64>> = (-2..=2)
        .map(|c| {
            g.times()
                .map(|t| {
                    Complex64::new((-(t - c as f64).powi(2) / (2.0 * SIGMA * SIGMA)).exp(), 0.0)
                })
                .collect()
        })
        .collect();
    let outputs: Vec<Vec<Complex64>> = match method {
        PropagationMethod::Spectral => {
            let prop = SpectralPropagator::new(*g);
            probes
                .iter()
                .map(|p| prop.propagate_samples(p, dp))
                .collect()
        }
        PropagationMethod::Kernel => probes
            .iter()
            .map(|p| kernel_propagate_samples(g, p, dp))
            .collect(),
    };
    let gram = |v: &[Vec<Complex64>], i: usize, j: usize| -> Complex64 {
        v[i].iter()
            .zip(&v[j])
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * g.dt()
    };
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..probes.len() {
        for j in 0..probes.len() {
            let reference = gram(&probes, i, j);
            scale = scale.max(reference.norm());
            worst = worst.max((gram(&outputs, i, j) - reference).norm());
        }
    }
    Ok(worst / scale)
}
