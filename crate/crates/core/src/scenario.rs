//! Laboratory parameters in SI units and their mapping onto the dimensionless
//! model.

use std::f64::consts::PI;

use crate::dispersion::GvdSign;
use crate::error::{Error, Result};
use crate::paraxial::{
    claimed_optimum, min_duration_phase, optimal_dispersion_phase, BranchConvention,
};

/// Nonlinear index of fused silica, m^2/W. A typical value, not a measured one.
pub const DEFAULT_N2: f64 = 3.2e-20;
pub const DEFAULT_C_CONV: f64 = 1.0;

/// Fibre example: 1 um, 2 tau_p = 10 ps, 1e7 W/cm^2, 100 m, |k2| = 1e-26 s^2/cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabScenario {
    /// m
    pub wavelength: f64,
    /// W/m^2
    pub peak_intensity: f64,
    /// m
    pub fiber_length: f64,
    /// m^2/W
    pub n2: f64,
    /// s^2/m
    pub k2_abs: f64,
    pub sign: GvdSign,
    /// s
    pub tau_p: f64,
    /// s
    pub tau_r: f64,
    /// s
    pub t_window: f64,
    pub c_conv: f64,
}

impl LabScenario {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("wavelength", self.wavelength),
            ("peak_intensity", self.peak_intensity),
            ("fiber_length", self.fiber_length),
            ("n2", self.n2),
            ("k2_abs", self.k2_abs),
            ("tau_p", self.tau_p),
            ("tau_r", self.tau_r),
            ("t_window", self.t_window),
            ("c_conv", self.c_conv),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!(
                    "scenario.{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn paper_fiber() -> Self {
        let tau_p = 5e-12;
        Self {
            wavelength: 1e-6,
            peak_intensity: 1e11,
            fiber_length: 100.0,
            n2: DEFAULT_N2,
            k2_abs: 1e-24,
            sign: GvdSign::Anomalous,
            tau_p,
            tau_r: tau_p / 10.0,
            t_window: tau_p / 8.0,
            c_conv: DEFAULT_C_CONV,
        }
    }

    pub fn to_dimensionless(&self) -> Result<Dimensionless> {
        self.validate()?;
        let (d_big, _) = dispersion_lengths(self);
        Ok(Dimensionless {
            psi0: estimate_psi0(self),
            sign: self.sign,
            phi: self.fiber_length / d_big,
            r_ratio: self.tau_p / self.tau_r,
            t_ratio: self.t_window / self.tau_p,
        })
    }
}

/// Model parameters at the fibre output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dimensionless {
    pub psi0: f64,
    pub sign: GvdSign,
    pub phi: f64,
    pub r_ratio: f64,
    pub t_ratio: f64,
}

impl Dimensionless {
    pub fn phi_d(&self) -> f64 {
        self.phi * self.r_ratio * self.r_ratio
    }

    /// Inverse of [`LabScenario::to_dimensionless`]; the quantities that fix
    /// the scales (`tau_p`, `|k2|`, wavelength, `n2`, `c_conv`) come from `anchor`.
    pub fn to_lab(&self, anchor: &LabScenario) -> LabScenario {
        let d_big = anchor.tau_p * anchor.tau_p / anchor.k2_abs;
        let fiber_length = self.phi * d_big;
        let per_intensity = b_integral(
            anchor.wavelength,
            anchor.n2,
            1.0,
            fiber_length,
            anchor.c_conv,
        );
        LabScenario {
            peak_intensity: self.psi0 / per_intensity,
            fiber_length,
            sign: self.sign,
            tau_r: anchor.tau_p / self.r_ratio,
            t_window: self.t_window_in(anchor.tau_p),
            ..*anchor
        }
    }

    fn t_window_in(&self, tau_p: f64) -> f64 {
        self.t_ratio * tau_p
    }
}

/// `(D, d) = (tau_p^2, tau_r^2) / |k2|`.
pub fn dispersion_lengths(sc: &LabScenario) -> (f64, f64) {
    (
        sc.tau_p * sc.tau_p / sc.k2_abs,
        sc.tau_r * sc.tau_r / sc.k2_abs,
    )
}

pub fn z_for_dispersion_phase(phi: f64, d_big: f64) -> f64 {
    phi * d_big
}

/// `c_conv (2 pi / lambda) n2 I l`.
pub fn b_integral(wavelength: f64, n2: f64, intensity: f64, length: f64, c_conv: f64) -> f64 {
    c_conv * 2.0 * PI / wavelength * n2 * intensity * length
}

pub fn estimate_psi0(sc: &LabScenario) -> f64 {
    b_integral(
        sc.wavelength,
        sc.n2,
        sc.peak_intensity,
        sc.fiber_length,
        sc.c_conv,
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub dispersion_length: f64,
    pub response_dispersion_length: f64,
    pub psi0_estimate: f64,
    pub n2: f64,
    pub n2_is_default: bool,
    pub c_conv: f64,
    /// Phase used for the distances below; the estimate unless overridden.
    pub psi0: f64,
    pub branch: BranchConvention,
    pub phi_opt_claimed: f64,
    pub z_opt_claimed: f64,
    pub phi_opt_computed: f64,
    pub z_opt_computed: f64,
    pub q_min_claimed: f64,
    pub q_min_computed: f64,
    pub phi_min_duration: f64,
    pub z_min_duration: f64,
    pub v_min: f64,
}

pub fn scenario_report(
    sc: &LabScenario,
    psi0_override: Option<f64>,
    branch: BranchConvention,
) -> Result<ScenarioReport> {
    sc.validate()?;
    let (d_big, d_small) = dispersion_lengths(sc);
    let psi0_estimate = estimate_psi0(sc);
    let psi0 = psi0_override.unwrap_or(psi0_estimate);
    let t_ratio = sc.t_window / sc.tau_p;
    let opt = optimal_dispersion_phase(psi0, t_ratio, sc.tau_p / sc.tau_r, branch)?;
    let (phi_opt_claimed, q_min_claimed) = claimed_optimum(psi0, t_ratio);
    let (phi_md, v_min) = min_duration_phase(psi0);
    Ok(ScenarioReport {
        dispersion_length: d_big,
        response_dispersion_length: d_small,
        psi0_estimate,
        n2: sc.n2,
        n2_is_default: sc.n2 == DEFAULT_N2,
        c_conv: sc.c_conv,
        psi0,
        branch,
        phi_opt_claimed,
        z_opt_claimed: z_for_dispersion_phase(phi_opt_claimed, d_big),
        phi_opt_computed: opt.phi_opt,
        z_opt_computed: z_for_dispersion_phase(opt.phi_opt, d_big),
        q_min_claimed,
        q_min_computed: opt.q_min,
        phi_min_duration: phi_md,
        z_min_duration: z_for_dispersion_phase(phi_md, d_big),
        v_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn paper_dispersion_length() {
        let sc = LabScenario::paper_fiber();
        let (d_big, d_small) = dispersion_lengths(&sc);
        assert!(rel(d_big, 25.0) < 1e-12);
        assert!(rel(d_small, 0.25) < 1e-12);
        let same = LabScenario {
            tau_r: sc.tau_p,
            ..sc
        };
        assert_eq!(dispersion_lengths(&same).1, d_big);
    }

    #[test]
    fn distances() {
        assert!(rel(z_for_dispersion_phase(1.0 / 3.0, 25.0), 25.0 / 3.0) < 1e-15);
        assert_eq!(z_for_dispersion_phase(0.0, 25.0), 0.0);
        assert_eq!(z_for_dispersion_phase(1.0, 25.0), 25.0);
    }

    #[test]
    fn psi0_estimate() {
        let sc = LabScenario::paper_fiber();
        let psi0 = estimate_psi0(&sc);
        assert!((psi0 - 2.0106).abs() < 1e-3, "{psi0}");
        assert_eq!(b_integral(1e-6, DEFAULT_N2, 1e11, 0.0, 1.0), 0.0);
        let doubled = LabScenario {
            peak_intensity: 2e11,
            ..sc
        };
        assert!(rel(estimate_psi0(&doubled), 2.0 * psi0) < 1e-15);
    }

    #[test]
    fn report_for_paper_phase() {
        let r = scenario_report(
            &LabScenario::paper_fiber(),
            Some(3.0),
            BranchConvention::PrincipalArctan,
        )
        .unwrap();
        assert!((r.z_opt_claimed - 25.0 / 3.0).abs() < 1e-9);
        assert!((r.z_min_duration - 7.5).abs() < 1e-9);
        assert!(r.n2_is_default);
        assert!(r.q_min_computed < 0.0);
    }

    #[test]
    fn rejects_non_positive() {
        let sc = LabScenario {
            k2_abs: 0.0,
            ..LabScenario::paper_fiber()
        };
        assert!(sc.to_dimensionless().is_err());
    }
}
