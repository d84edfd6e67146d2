//! Slow reference evaluations used to cross-check the production engines.
//! Nothing here shares code with [`crate::statistics`] or
//! [`crate::dispersion`] beyond the envelope and grid types.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::ComplexEnvelope;

/// `h(u)` is dropped beyond this many `tau_r` (`exp(-144)`).
const RESPONSE_REACH: f64 = 12.0;

/// Input samples below this fraction of the peak modulus are skipped.
const FIELD_FLOOR: f64 = 1e-18;

fn green(s: f64, phi: f64, u: f64) -> Complex64 {
    // (2 pi i s phi)^(-1/2) exp(i s u^2 / (2 phi))
    let i_s_phi = Complex64::new(0.0, 2.0 * std::f64::consts::PI * s * phi);
    i_s_phi.sqrt().inv() * Complex64::new(0.0, s * u * u / (2.0 * phi)).exp()
}

/// `I2` at grid index `k` as a plain double trapezoid sum over `(t1, t2)`.
pub fn brute_force_i2(
    f: &ComplexEnvelope,
    tau_r: f64,
    s: f64,
    phi: f64,
    k: usize,
) -> Result<Complex64> {
    if phi <= 0.0 {
        return Err(Error::ZeroDispersion);
    }
    let g = f.grid();
    let dt = g.dt();
    let t = g.time(k);
    let samples = f.samples();
    let peak = samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let support: Vec<usize> = (0..samples.len())
        .filter(|&j| samples[j].norm() > FIELD_FLOOR * peak)
        .collect();
    let weighted: Vec<Complex64> = (0..samples.len())
        .map(|j| green(s, phi, t - g.time(j)) * samples[j])
        .collect();
    let band = (RESPONSE_REACH * tau_r / dt).ceil() as usize;
    let h: Vec<f64> = (0..=band)
        .map(|m| (-(m as f64 * dt / tau_r).powi(2)).exp() / tau_r)
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &j1 in &support {
        let lo = j1.saturating_sub(band);
        let hi = (j1 + band).min(samples.len() - 1);
        let inner: Complex64 = (lo..=hi).map(|j2| h[j1.abs_diff(j2)] * weighted[j2]).sum();
        acc += weighted[j1] * inner;
    }
    Ok(acc * dt * dt)
}

/// `Q(0)` of the numeric model for the untruncated field
/// `exp(-t^2 / 2 + i kappa psi0 (1 - t^2))`, obtained by doing every Gaussian
/// integral in closed form:
///
/// ```text
/// a = 1/2 + i kappa psi0 - i s / (2 phi)
/// Q = psi0 T |a| / (2 phi) Im[ 1 / (a conj(sqrt(2a) sqrt(1 + a tau_r^2 / 2))) ]
/// ```
///
/// `T` is in units of `tau_p`, `tau_r = 1 / r_ratio`.
pub fn gaussian_q_exact(
    psi0: f64,
    s: f64,
    phi: f64,
    t_ratio: f64,
    r_ratio: f64,
    kappa: f64,
) -> f64 {
    let tau_r = 1.0 / r_ratio;
    let a = Complex64::new(0.5, kappa * psi0 - s / (2.0 * phi));
    let root = (2.0 * a).sqrt() * (1.0 + a * tau_r * tau_r / 2.0).sqrt();
    psi0 * t_ratio * a.norm() / (2.0 * phi) * (a * root.conj()).inv().im
}

/// `<N_T(0)> / (nbar0 T)` for the same field.
pub fn gaussian_mean_exact(psi0: f64, s: f64, phi: f64, kappa: f64) -> f64 {
    let a = Complex64::new(0.5, kappa * psi0 - s / (2.0 * phi));
    1.0 / (2.0 * phi * a.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TimeGrid;

    #[test]
    fn green_matches_free_spreading() {
        // A unit Gaussian spreads to modulus (1 + phi^2)^(-1/4) at the centre.
        let g = TimeGrid::default();
        let f = ComplexEnvelope::from_fn(g, |t| Complex64::new((-0.5 * t * t).exp(), 0.0)).unwrap();
        let k = g.index_of(0.0).unwrap();
        let out: Complex64 = f
            .samples()
            .iter()
            .enumerate()
            .map(|(j, z)| green(1.0, 0.7, -g.time(j)) * z)
            .sum::<Complex64>()
            * g.dt();
        assert!(
            (out.norm() - (1.0f64 + 0.49).powf(-0.25)).abs() < 1e-10,
            "{out}"
        );
        assert!(k > 0);
    }

    #[test]
    fn mean_reduces_to_width_factor() {
        let (psi0, phi) = (3.0_f64, 0.2);
        let v = (1.0 - psi0 * phi).hypot(phi);
        assert!((gaussian_mean_exact(psi0, 1.0, phi, 0.5) - 1.0 / v).abs() < 1e-13);
    }

    #[test]
    fn exact_q_vanishes_without_kerr_phase() {
        assert_eq!(gaussian_q_exact(0.0, 1.0, 0.3, 0.125, 10.0, 0.5), 0.0);
    }
}
