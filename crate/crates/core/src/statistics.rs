//! Mean photon number, variance excess and Mandel `Q` from the mean-field
//! integrals
//!
//! ```text
//! I1(t) = integral G(t - t1) f(t1) dt1
//! I2(t) = double integral G(t - t1) G(t - t2) f(t1) f(t2) h(t1 - t2) dt1 dt2
//! eps   = 2 gamma T^2 Im[I1^2 conj(I2)],   <N_T> = T |I1|^2,   Q = eps / <N_T>
//! ```
//!
//! where `f = alpha exp(i kappa psi)` is the field leaving the Kerr medium.
//!
//! `I2` is reduced to a single integral by writing `h` through its spectrum
//! `W(w) = exp(-w^2 tau_r^2 / 4) / (2 sqrt(pi))`:
//! `I2(t) = integral W(w) P(+w, t) P(-w, t) dw`, `P(w) = propagate(f exp(i w t))`.
//! For the quadratic Green function a frequency shift is a pure delay,
//! `P(w, t) = exp(i w t - i s phi w^2 / 2) I1(t - s phi w)`, so every node only
//! needs two samples of `I1`. Nodes are placed at `w_j = j m dt / phi` so the
//! delays land on grid points; the stride `m` is halved (node count doubled)
//! until successive estimates agree to `tol`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dispersion::{DispersionParams, SpectralPropagator};
use crate::error::{Error, Result};
use crate::model::{ComplexEnvelope, DetectionParams, MediumParams};

/// `W(w)` is cut where `w tau_r / 2` exceeds this (`exp(-42)`).
const SPECTRUM_CUTOFF: f64 = 6.5;

/// Mean photon numbers below `MEAN_FLOOR nbar0 T` leave `Q` undefined.
const MEAN_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Node count of the first (coarsest) estimate.
    pub omega_nodes: usize,
    /// Relative change between successive estimates accepted as converged.
    pub tol: f64,
    /// Refinement stops with an error beyond this many nodes.
    pub max_nodes: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            omega_nodes: 64,
            tol: 1e-6,
            max_nodes: 16_385,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.omega_nodes < 16 {
            return Err(Error::config(format!(
                "omega_nodes must be at least 16, got {}",
                self.omega_nodes
            )));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(Error::config(format!(
                "quadrature tol must lie in (0, 1e-2], got {}",
                self.tol
            )));
        }
        if self.max_nodes < self.omega_nodes {
            return Err(Error::config("max_nodes must be at least omega_nodes"));
        }
        Ok(())
    }
}

/// Regime warnings attached to every numeric result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Caveats {
    /// `psi0 > 1`: beyond the small-phase regime the integrals were derived in.
    pub large_phase: bool,
    /// `tau_r >= tau_p`.
    pub slow_response: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelResult {
    pub t: f64,
    /// `<N_T>` in photons.
    pub mean_n: f64,
    /// `<N_T^2> - <N_T>^2 - <N_T>`.
    pub epsilon: f64,
    pub q: f64,
    pub i1: Complex64,
    pub i2: Complex64,
    /// Nodes used by the accepted `I2` estimate.
    pub nodes: usize,
    pub caveats: Caveats,
}

/// `I1` of a prepared field; identical to `dispersion::propagate` with the
/// spectral method.
pub fn compute_i1(f: &ComplexEnvelope, dp: &DispersionParams) -> Result<ComplexEnvelope> {
    SpectralPropagator::new(*f.grid()).propagate(f, dp)
}

pub fn compute_i2(
    f: &ComplexEnvelope,
    m: &MediumParams,
    dp: &DispersionParams,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let field = DispersedField::new(f.clone(), *m, *dp)?;
    Ok(field.i2_at(field.i1.grid().index_of(t)?, spec)?.0)
}

pub fn mandel_q_numeric(
    f: &ComplexEnvelope,
    m: &MediumParams,
    dp: &DispersionParams,
    det: &DetectionParams,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<MandelResult> {
    let field = DispersedField::new(f.clone(), *m, *dp)?;
    field.mandel_at(field.i1.grid().index_of(t)?, det, spec)
}

/// A Kerr-modulated field together with its dispersed image `I1`, ready for
/// statistics at any grid time.
#[derive(Debug, Clone)]
pub struct DispersedField {
    field: ComplexEnvelope,
    i1: ComplexEnvelope,
    medium: MediumParams,
    dispersion: DispersionParams,
}

impl DispersedField {
    pub fn new(
        field: ComplexEnvelope,
        medium: MediumParams,
        dispersion: DispersionParams,
    ) -> Result<Self> {
        let prop = SpectralPropagator::new(*field.grid());
        Self::with_propagator(&prop, field, medium, dispersion)
    }

    pub fn with_propagator(
        prop: &SpectralPropagator,
        field: ComplexEnvelope,
        medium: MediumParams,
        dispersion: DispersionParams,
    ) -> Result<Self> {
        let i1 = prop.propagate(&field, &dispersion)?;
        Ok(Self {
            field,
            i1,
            medium,
            dispersion,
        })
    }

    pub fn field(&self) -> &ComplexEnvelope {
        &self.field
    }

    pub fn i1(&self) -> &ComplexEnvelope {
        &self.i1
    }

    pub fn medium(&self) -> &MediumParams {
        &self.medium
    }

    pub fn dispersion(&self) -> &DispersionParams {
        &self.dispersion
    }

    /// `I2` at grid index `k` and the number of nodes used.
    pub fn i2_at(&self, k: usize, spec: &QuadratureSpec) -> Result<(Complex64, usize)> {
        spec.validate()?;
        let tau_r = self.medium.tau_r;
        let phi = self.dispersion.phi;
        let i1 = self.i1.samples();
        if phi == 0.0 {
            return Ok((i1[k] * i1[k] / tau_r, 1));
        }

        let grid = self.i1.grid();
        let n = grid.n_samples();
        let d_omega = grid.dt() / phi;
        if d_omega * tau_r > 1.0 {
            return Err(Error::config(format!(
                "dispersion phase {phi} is too small for grid step {}: the response spectrum is \
                 not resolved by the lag quadrature",
                grid.dt()
            )));
        }
        let omega_cut = 2.0 * SPECTRUM_CUTOFF / tau_r;
        let max_lag = ((omega_cut / d_omega).ceil() as usize).min(n - 1);

        let w0 = 1.0 / (2.0 * PI.sqrt());
        let s = self.dispersion.s();
        let term = |lag: usize| -> Complex64 {
            if lag > k || k + lag >= n {
                return Complex64::new(0.0, 0.0);
            }
            let omega = lag as f64 * d_omega;
            let weight = w0 * (-0.25 * (omega * tau_r).powi(2)).exp();
            weight * Complex64::cis(-s * phi * omega * omega) * i1[k - lag] * i1[k + lag]
        };
        let estimate = |stride: usize| -> (Complex64, usize) {
            let mut acc = term(0);
            let mut nodes = 1;
            let mut lag = stride;
            while lag <= max_lag {
                acc += 2.0 * term(lag);
                nodes += 2;
                lag += stride;
            }
            (acc * d_omega * stride as f64, nodes)
        };

        let wanted = (2 * max_lag).div_ceil(spec.omega_nodes).max(2);
        let mut stride = wanted.next_power_of_two();
        let (mut previous, _) = estimate(stride);
        loop {
            stride /= 2;
            let (current, nodes) = estimate(stride);
            if (current - previous).norm() <= spec.tol * current.norm() {
                return Ok((current, nodes));
            }
            if stride == 1 || nodes > spec.max_nodes {
                return Err(Error::Quadrature {
                    nodes,
                    last: current,
                    previous,
                });
            }
            previous = current;
        }
    }

    pub fn mandel_at(
        &self,
        k: usize,
        det: &DetectionParams,
        spec: &QuadratureSpec,
    ) -> Result<MandelResult> {
        if !det.in_validity_regime() {
            return Err(Error::config(format!(
                "measurement window T = {} tau_p is outside the T <= tau_p/4 regime",
                det.t_window
            )));
        }
        let i1 = self.i1.samples()[k];
        let mean_n = det.t_window * i1.norm_sqr();
        let floor = MEAN_FLOOR * self.medium.nbar0 * det.t_window;
        if mean_n < floor {
            return Err(Error::UndefinedQ { mean_n, floor });
        }
        let (i2, nodes) = self.i2_at(k, spec)?;
        let epsilon = 2.0 * self.medium.gamma * det.t_window.powi(2) * (i1 * i1 * i2.conj()).im;
        Ok(MandelResult {
            t: self.i1.grid().time(k),
            mean_n,
            epsilon,
            q: epsilon / mean_n,
            i1,
            i2,
            nodes,
            caveats: Caveats {
                large_phase: self.medium.psi0 > 1.0,
                slow_response: self.medium.tau_r >= 1.0,
            },
        })
    }
}
