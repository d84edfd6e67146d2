//! Closed-form results for a Gaussian pulse whose nonlinear phase is expanded
//! to second order, `psi(t) = psi0 (1 - t^2)`:
//!
//! ```text
//! <N_T(t)> = nbar0 T / V exp(-t^2 / V^2)
//! Q(0)     = -psi0 T sin{ atan(phi / w) + atan(2 phi_d w / (2 phi phi_d - w^2)) / 2 }
//!            / (w^4 - 2 phi^2 w^2 + 4 phi^4)^(1/4)
//! V^2 = w^2 + phi^2,   w = 1 - s psi0 phi
//! ```
//!
//! with `T` in units of `tau_p`. The arctangent branches are not fixed by the
//! expression itself; see [`BranchConvention`].

use std::f64::consts::{FRAC_PI_2, SQRT_2};
use std::fmt;

use crate::dispersion::GvdSign;
use crate::error::{Error, Result};
use crate::search::{golden_section, scan_then_golden};

/// Points in the dense scan that precedes golden-section refinement.
pub const SCAN_POINTS: usize = 2048;
pub const SEARCH_XTOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaxialPoint {
    pub psi0: f64,
    pub sign: GvdSign,
    pub phi: f64,
    pub phi_d: f64,
    /// `T / tau_p`.
    pub t_ratio: f64,
    /// `tau_p / tau_r`, must exceed 1.
    pub r_ratio: f64,
}

impl ParaxialPoint {
    pub fn new(psi0: f64, sign: GvdSign, phi: f64, t_ratio: f64, r_ratio: f64) -> Result<Self> {
        if !(psi0 >= 0.0 && psi0.is_finite()) {
            return Err(Error::config(format!(
                "psi0 must be non-negative, got {psi0}"
            )));
        }
        if !(phi >= 0.0 && phi.is_finite()) {
            return Err(Error::config(format!(
                "phi must be non-negative, got {phi}"
            )));
        }
        if !(t_ratio > 0.0 && t_ratio.is_finite()) {
            return Err(Error::config(format!(
                "T / tau_p must be positive, got {t_ratio}"
            )));
        }
        if !(r_ratio > 1.0 && r_ratio.is_finite()) {
            return Err(Error::config(format!(
                "the closed form needs tau_p > tau_r, got tau_p / tau_r = {r_ratio}"
            )));
        }
        Ok(Self {
            psi0,
            sign,
            phi,
            phi_d: phi * r_ratio * r_ratio,
            t_ratio,
            r_ratio,
        })
    }

    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.psi0, self.sign, phi, self.t_ratio, self.r_ratio)
    }

    pub fn varpi(&self) -> f64 {
        1.0 - self.sign.value() * self.psi0 * self.phi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchConvention {
    /// One-argument arctangents. Reproduces `Q -> 0` as `phi -> 0`, but the
    /// first term jumps by `pi` where `w` changes sign.
    #[default]
    PrincipalArctan,
    /// Two-argument angles: first term `angle(w, phi)`, second
    /// `angle(2 phi phi_d - w^2, 2 phi_d w) / 2`. Continuous through the focus
    /// but does not vanish as `phi -> 0`.
    ContinuousArg,
}

impl BranchConvention {
    pub fn name(self) -> &'static str {
        match self {
            BranchConvention::PrincipalArctan => "principal-arctan",
            BranchConvention::ContinuousArg => "continuous-arg",
        }
    }
}

impl fmt::Display for BranchConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `(V, w)`.
pub fn v_factor(p: &ParaxialPoint) -> (f64, f64) {
    let w = p.varpi();
    (w.hypot(p.phi), w)
}

/// `<N_T(t)>` in photons; `t` in units of `tau_p`, `t_window` is `T / tau_p`
/// and `nbar0` is the peak density in photons per `tau_p`.
pub fn mean_photons_paraxial(p: &ParaxialPoint, t: f64, nbar0: f64, t_window: f64) -> Result<f64> {
    let (v, _) = v_factor(p);
    if v == 0.0 {
        return Err(Error::SingularFocus);
    }
    Ok(nbar0 * t_window / v * (-(t * t) / (v * v)).exp())
}

/// `Q(0, z)` from the closed form.
pub fn q_paraxial(p: &ParaxialPoint, conv: BranchConvention) -> Result<f64> {
    let ParaxialPoint {
        psi0,
        phi,
        phi_d,
        t_ratio,
        ..
    } = *p;
    let w = p.varpi();
    let bracket = w.powi(4) - 2.0 * phi * phi * w * w + 4.0 * phi.powi(4);
    if bracket.is_nan() || bracket <= 0.0 {
        return Err(Error::Domain {
            psi0,
            phi,
            phi_d,
            reason: "w^4 - 2 phi^2 w^2 + 4 phi^4 must be positive",
        });
    }
    let num = 2.0 * phi_d * w;
    let den = 2.0 * phi * phi_d - w * w;
    let angle = match conv {
        BranchConvention::PrincipalArctan => {
            let first = if w == 0.0 {
                FRAC_PI_2
            } else {
                (phi / w).atan()
            };
            first + 0.5 * (num / den).atan()
        }
        BranchConvention::ContinuousArg => phi.atan2(w) + 0.5 * num.atan2(den),
    };
    let q = -t_ratio * (psi0 * angle.sin() / bracket.powf(0.25));
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Error::Domain {
            psi0,
            phi,
            phi_d,
            reason: "non-finite result",
        })
    }
}

/// Limit of the closed form at `w = 0`: `-psi0 T / (sqrt(2) phi)`.
pub fn q_at_focus(p: &ParaxialPoint) -> f64 {
    -p.psi0 * p.t_ratio / (SQRT_2 * p.phi)
}

/// Analytic claims for the optimum compression, `phi_opt = 1 / psi0` and
/// `Q_min = -T psi0^2`.
pub fn claimed_optimum(psi0: f64, t_ratio: f64) -> (f64, f64) {
    (1.0 / psi0, -t_ratio * psi0 * psi0)
}

/// Claimed and computed optimum of `Q(0, z)` over `phi` for compression (`s = +1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumReport {
    pub psi0: f64,
    pub branch: BranchConvention,
    pub phi_opt: f64,
    pub q_min: f64,
    pub claimed_phi_opt: f64,
    pub claimed_q_min: f64,
}

impl OptimumReport {
    pub fn phi_ratio(&self) -> f64 {
        self.phi_opt / self.claimed_phi_opt
    }

    pub fn q_ratio(&self) -> f64 {
        self.q_min / self.claimed_q_min
    }
}

/// Minimise `q_paraxial` over `phi` in `(0, 4 / psi0]` for `s = +1`.
pub fn optimal_dispersion_phase(
    psi0: f64,
    t_ratio: f64,
    r_ratio: f64,
    conv: BranchConvention,
) -> Result<OptimumReport> {
    if psi0.is_nan() || psi0 <= 0.0 {
        return Err(Error::config(format!(
            "psi0 must be positive for the optimum search, got {psi0}"
        )));
    }
    let base = ParaxialPoint::new(psi0, GvdSign::Anomalous, 0.0, t_ratio, r_ratio)?;
    let q = |phi: f64| {
        base.with_phi(phi)
            .and_then(|p| q_paraxial(&p, conv))
            .unwrap_or(f64::NAN)
    };
    let (phi_opt, q_min) = scan_then_golden(q, 0.0, 4.0 / psi0, SCAN_POINTS, SEARCH_XTOL)
        .ok_or_else(|| Error::config("closed form is undefined over the whole search interval"))?;
    let (claimed_phi_opt, claimed_q_min) = claimed_optimum(psi0, t_ratio);
    Ok(OptimumReport {
        psi0,
        branch: conv,
        phi_opt,
        q_min,
        claimed_phi_opt,
        claimed_q_min,
    })
}

/// Dispersion phase of the shortest pulse and its width factor:
/// `phi_md = psi0 / (1 + psi0^2)`, `V_min = (1 + psi0^2)^(-1/2)`.
pub fn min_duration_phase(psi0: f64) -> (f64, f64) {
    let q = 1.0 + psi0 * psi0;
    (psi0 / q, q.sqrt().recip())
}

/// Minimum of `V^2(phi)` for `s = +1` found numerically, as a check on
/// [`min_duration_phase`]. Returns `(phi, V^2)`.
pub fn min_duration_scan(psi0: f64) -> (f64, f64) {
    let v2 = |phi: f64| (1.0 - psi0 * phi).powi(2) + phi * phi;
    let hi = if psi0 > 0.0 { 4.0 / psi0 } else { 1.0 };
    scan_then_golden(v2, 0.0, hi, SCAN_POINTS, 1e-12)
        .unwrap_or_else(|| golden_section(v2, 0.0, hi, 1e-12))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(psi0: f64, sign: GvdSign, phi: f64) -> ParaxialPoint {
        ParaxialPoint::new(psi0, sign, phi, 0.125, 10.0).unwrap()
    }

    #[test]
    fn v_factor_examples() {
        let (v, w) = v_factor(&point(3.0, GvdSign::Anomalous, 1.0 / 3.0));
        assert!(w.abs() < 1e-15);
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v_factor(&point(3.0, GvdSign::Anomalous, 0.0)), (1.0, 1.0));
        let (v, _) = v_factor(&point(3.0, GvdSign::Anomalous, 0.3));
        assert!((v * v - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_slow_response() {
        assert!(ParaxialPoint::new(1.0, GvdSign::Anomalous, 0.1, 0.125, 1.0).is_err());
    }

    #[test]
    fn mean_photons_examples() {
        let n =
            mean_photons_paraxial(&point(3.0, GvdSign::Anomalous, 0.0), 0.0, 2.0, 0.125).unwrap();
        assert_eq!(n, 0.25);
        let n = mean_photons_paraxial(&point(3.0, GvdSign::Anomalous, 1.0 / 3.0), 0.0, 2.0, 0.125)
            .unwrap();
        assert!((n - 0.75).abs() < 1e-14);
    }

    #[test]
    fn focus_value() {
        let p = point(3.0, GvdSign::Anomalous, 1.0 / 3.0);
        let expected = -9.0 / (8.0 * SQRT_2);
        assert!((q_at_focus(&p) - expected).abs() < 1e-15);
        for conv in [
            BranchConvention::PrincipalArctan,
            BranchConvention::ContinuousArg,
        ] {
            let exact = ParaxialPoint {
                phi: 1.0 / 3.0,
                ..p
            };
            let w_zero = ParaxialPoint {
                psi0: 1.0 / exact.phi,
                ..exact
            };
            let q = q_paraxial(&w_zero, conv).unwrap();
            assert!(
                (q - q_at_focus(&w_zero)).abs() < 1e-12 * q.abs(),
                "{conv}: {q}"
            );
        }
    }

    #[test]
    fn continuous_arg_brackets_focus() {
        let phi = 1.0 / 3.0;
        for dw in [1e-6, -1e-6] {
            let psi0 = (1.0 - dw) / phi;
            let p = point(psi0, GvdSign::Anomalous, phi);
            assert!((p.varpi() - dw).abs() < 1e-12);
            let q = q_paraxial(&p, BranchConvention::ContinuousArg).unwrap();
            let lim = q_at_focus(&p);
            assert!(((q - lim) / lim).abs() < 1e-4, "dw = {dw}: {q} vs {lim}");
        }
    }

    #[test]
    fn principal_branch_jumps_at_focus() {
        let phi = 1.0 / 3.0;
        let above = q_paraxial(
            &point((1.0 - 1e-6) / phi, GvdSign::Anomalous, phi),
            BranchConvention::PrincipalArctan,
        )
        .unwrap();
        let below = q_paraxial(
            &point((1.0 + 1e-6) / phi, GvdSign::Anomalous, phi),
            BranchConvention::PrincipalArctan,
        )
        .unwrap();
        assert!(above < 0.0 && below > 0.0);
    }

    #[test]
    fn principal_vanishes_near_zero_dispersion() {
        for psi0 in [0.5, 1.0, 2.0, 4.0, 6.0] {
            for sign in [GvdSign::Anomalous, GvdSign::Normal] {
                let q = q_paraxial(&point(psi0, sign, 1e-6), BranchConvention::PrincipalArctan)
                    .unwrap();
                assert!(q.abs() < 1e-3 * psi0 * 0.125, "psi0 = {psi0}: {q}");
            }
        }
        let q = q_paraxial(
            &point(2.0, GvdSign::Anomalous, 1e-6),
            BranchConvention::ContinuousArg,
        )
        .unwrap();
        assert!(q.abs() > 0.1);
    }

    #[test]
    fn q_scales_with_window() {
        let p = point(2.5, GvdSign::Normal, 0.37);
        let double = ParaxialPoint { t_ratio: 0.25, ..p };
        let conv = BranchConvention::PrincipalArctan;
        assert_eq!(
            q_paraxial(&double, conv).unwrap(),
            2.0 * q_paraxial(&p, conv).unwrap()
        );
    }

    #[test]
    fn psi4_scan_minimum_bracket() {
        let base = point(4.0, GvdSign::Anomalous, 0.0);
        let (phi, q) = scan_then_golden(
            |phi| {
                q_paraxial(
                    &base.with_phi(phi).unwrap(),
                    BranchConvention::PrincipalArctan,
                )
                .unwrap()
            },
            0.0,
            1.0,
            SCAN_POINTS,
            SEARCH_XTOL,
        )
        .unwrap();
        assert!((-2.2..=-1.2).contains(&q), "{q}");
        assert!((0.15..=0.30).contains(&phi), "{phi}");
    }

    #[test]
    fn claimed_optimum_values() {
        assert_eq!(claimed_optimum(3.0, 0.125), (1.0 / 3.0, -9.0 / 8.0));
    }

    #[test]
    fn min_duration() {
        let (phi, v) = min_duration_phase(3.0);
        assert!((phi - 0.3).abs() < 1e-15);
        assert!((v * v - 0.1).abs() < 1e-15);
        assert_eq!(min_duration_phase(0.0), (0.0, 1.0));
        for psi0 in [1.0, 2.0, 3.0, 4.0] {
            let (phi_scan, v2_scan) = min_duration_scan(psi0);
            let (phi, v) = min_duration_phase(psi0);
            assert!((phi_scan - phi).abs() < 1e-6);
            assert!((v2_scan - v * v).abs() < 1e-6);
        }
    }

    #[test]
    fn extrema_coincide_for_large_phase() {
        let psi0 = 50.0;
        let (phi_md, _) = min_duration_phase(psi0);
        let (phi_opt, _) = claimed_optimum(psi0, 0.125);
        assert!((phi_md - phi_opt).abs() / phi_opt < 1e-3);
    }

    #[test]
    fn both_signs_reach_sub_poissonian() {
        for sign in [GvdSign::Anomalous, GvdSign::Normal] {
            let best = (1..=400)
                .map(|k| {
                    q_paraxial(
                        &point(2.0, sign, k as f64 * 0.005),
                        BranchConvention::PrincipalArctan,
                    )
                    .unwrap()
                })
                .fold(f64::INFINITY, f64::min);
            assert!(best < -0.01, "{sign:?}: {best}");
        }
    }
}
