//! Domain types shared by every stage: the sampled time axis, the input
//! coherent pulse and the Kerr response function.
//!
//! Times are in units of `tau_p`. Envelope samples `a(t)` are normalised so
//! that `|a(t)|^2` is the photon density in photons per `tau_p`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Half-span every grid must cover: Gaussian intensity tails drop below
/// `1e-27` of the peak at `8 tau_p`.
pub const MIN_HALF_SPAN: f64 = 8.0;

pub const DEFAULT_SAMPLES: usize = 4096;
pub const DEFAULT_HALF_SPAN: f64 = 12.0;

/// Validity limit of the small measurement window regime, `T <= tau_p / 4`.
pub const MAX_WINDOW_RATIO: f64 = 0.25;

/// Uniformly sampled time axis, `t_k = t_min + k dt` for `k < n_samples`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    n_samples: usize,
    dt: f64,
    t_min: f64,
}

impl TimeGrid {
    pub fn new(n_samples: usize, t_min: f64, dt: f64) -> Result<Self> {
        if n_samples < 2 || !n_samples.is_multiple_of(2) {
            return Err(Error::config(format!(
                "grid needs an even number of samples, got {n_samples}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) || !t_min.is_finite() {
            return Err(Error::config(format!(
                "grid step must be positive and finite (dt = {dt}, t_min = {t_min})"
            )));
        }
        Ok(Self {
            n_samples,
            dt,
            t_min,
        })
    }

    /// Grid on `[-half_span, half_span)` with `dt = 2 half_span / n_samples`,
    /// so that `t = 0` is the sample at index `n_samples / 2`.
    pub fn centered(n_samples: usize, half_span: f64) -> Result<Self> {
        if half_span.is_nan() || half_span <= 0.0 {
            return Err(Error::config(format!(
                "half span must be positive, got {half_span}"
            )));
        }
        Self::new(n_samples, -half_span, 2.0 * half_span / n_samples as f64)
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.n_samples - 1)
    }

    pub fn span(&self) -> f64 {
        self.n_samples as f64 * self.dt
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_samples).map(|k| self.time(k))
    }

    /// Index of the sample at time `t`. Fails unless `t` is a grid point to
    /// within `1e-9 dt`.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let x = (t - self.t_min) / self.dt;
        let k = x.round();
        if !(k >= 0.0 && k < self.n_samples as f64) || (x - k).abs() > 1e-9 {
            return Err(Error::OffGrid { t });
        }
        Ok(k as usize)
    }

    pub fn covers(&self, half_span: f64) -> bool {
        self.t_min <= -half_span && self.t_max() >= half_span
    }

    pub fn ensure_covers(&self, half_span: f64) -> Result<()> {
        if self.covers(half_span) {
            Ok(())
        } else {
            Err(Error::GridTooSmall {
                t_min: self.t_min,
                t_max: self.t_max(),
                required: half_span,
            })
        }
    }

    /// Same span, half the step.
    pub fn refined(&self) -> Self {
        Self {
            n_samples: 2 * self.n_samples,
            dt: 0.5 * self.dt,
            t_min: self.t_min,
        }
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self::centered(DEFAULT_SAMPLES, DEFAULT_HALF_SPAN).expect("default grid is valid")
    }
}

/// Input pulse: `nbar0(t) = nbar0 exp(-t^2 / tau_p^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseParams {
    /// Peak photon density, photons per unit time.
    pub nbar0: f64,
    /// Half-duration at 1/e of the intensity, same time unit as `nbar0`.
    pub tau_p: f64,
}

impl PulseParams {
    pub fn new(nbar0: f64, tau_p: f64) -> Result<Self> {
        if !(nbar0 > 0.0 && nbar0.is_finite()) {
            return Err(Error::config(format!(
                "nbar0 must be positive, got {nbar0}"
            )));
        }
        if !(tau_p > 0.0 && tau_p.is_finite()) {
            return Err(Error::config(format!(
                "tau_p must be positive, got {tau_p}"
            )));
        }
        Ok(Self { nbar0, tau_p })
    }

    /// Peak density in photons per `tau_p`, the internal density unit.
    pub fn peak_density(&self) -> f64 {
        self.nbar0 * self.tau_p
    }
}

/// Kerr stage. `gamma` is derived from `psi0 = 2 gamma nbar0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    pub psi0: f64,
    /// Relaxation time of the nonlinearity, units of `tau_p`.
    pub tau_r: f64,
    /// Peak photon density of the pulse the phase refers to (photons per `tau_p`).
    pub nbar0: f64,
    pub gamma: f64,
}

impl MediumParams {
    pub fn new(psi0: f64, tau_r: f64, nbar0: f64) -> Result<Self> {
        if !(psi0 >= 0.0 && psi0.is_finite()) {
            return Err(Error::config(format!(
                "psi0 must be non-negative, got {psi0}"
            )));
        }
        if !(tau_r > 0.0 && tau_r.is_finite()) {
            return Err(Error::config(format!(
                "tau_r must be positive, got {tau_r}"
            )));
        }
        if !(nbar0 > 0.0 && nbar0.is_finite()) {
            return Err(Error::config(format!(
                "nbar0 must be positive, got {nbar0}"
            )));
        }
        Ok(Self {
            psi0,
            tau_r,
            nbar0,
            gamma: psi0 / (2.0 * nbar0),
        })
    }

    /// Convenience constructor from the ratio `tau_p / tau_r`.
    pub fn with_ratio(psi0: f64, r_ratio: f64, nbar0: f64) -> Result<Self> {
        if r_ratio.is_nan() || r_ratio <= 0.0 {
            return Err(Error::config(format!(
                "tau_p / tau_r must be positive, got {r_ratio}"
            )));
        }
        Self::new(psi0, 1.0 / r_ratio, nbar0)
    }

    pub fn r_ratio(&self) -> f64 {
        1.0 / self.tau_r
    }
}

/// Photodetector integration window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    /// Measurement time `T`, units of `tau_p`.
    pub t_window: f64,
}

impl DetectionParams {
    pub fn new(t_window: f64) -> Result<Self> {
        if !(t_window > 0.0 && t_window.is_finite()) {
            return Err(Error::config(format!(
                "measurement window must be positive, got {t_window}"
            )));
        }
        Ok(Self { t_window })
    }

    pub fn in_validity_regime(&self) -> bool {
        self.t_window <= MAX_WINDOW_RATIO
    }
}

/// Sampled complex field on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexEnvelope {
    grid: TimeGrid,
    samples: Vec<Complex64>,
}

impl ComplexEnvelope {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_samples() {
            return Err(Error::config(format!(
                "envelope has {} samples but the grid has {}",
                samples.len(),
                grid.n_samples()
            )));
        }
        if samples.iter().any(|z| !z.is_finite()) {
            return Err(Error::config("envelope contains non-finite samples"));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = grid.times().map(f).collect();
        Self::new(grid, samples)
    }

    pub(crate) fn from_parts_unchecked(grid: TimeGrid, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_samples());
        Self { grid, samples }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn at(&self, t: f64) -> Result<Complex64> {
        Ok(self.samples[self.grid.index_of(t)?])
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `integral |a(t)|^2 dt` by the trapezoid rule (photons).
    pub fn photon_number(&self) -> f64 {
        trapz(&self.intensity(), self.grid.dt())
    }
}

/// Coherent Gaussian input, `alpha(t) = sqrt(nbar0 tau_p) exp(-t^2 / 2)` with
/// `t` in units of `tau_p`.
pub fn make_gaussian_pulse(p: PulseParams, g: TimeGrid) -> Result<ComplexEnvelope> {
    g.ensure_covers(MIN_HALF_SPAN)?;
    let amp = p.peak_density().sqrt();
    Ok(ComplexEnvelope::from_parts_unchecked(
        g,
        g.times()
            .map(|t| Complex64::new(amp * (-0.5 * t * t).exp(), 0.0))
            .collect(),
    ))
}

/// Nonlinearity response `h(t) = exp(-t^2 / tau_r^2) / tau_r`.
///
/// Not normalised: its area is `sqrt(pi)`.
pub fn response_function(m: &MediumParams, t: f64) -> f64 {
    let x = t / m.tau_r;
    (-x * x).exp() / m.tau_r
}

pub fn trapz(values: &[f64], dt: f64) -> f64 {
    match values {
        [] => 0.0,
        [v] => 0.0 * v,
        [first, .., last] => (values.iter().sum::<f64>() - 0.5 * (first + last)) * dt,
    }
}
