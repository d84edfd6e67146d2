//! Acceptance checks, each returning per-check outcomes together with its
//! wall-clock time and budget.

use std::fmt;
use std::time::{Duration, Instant};

use crate::dispersion::{propagate, DispersionParams, GvdSign, PropagationMethod};
use crate::error::Result;
use crate::model::{
    make_gaussian_pulse, trapz, ComplexEnvelope, DetectionParams, MediumParams, PulseParams,
    TimeGrid,
};
use crate::oracle::brute_force_i2;
use crate::paraxial::{
    mean_photons_paraxial, min_duration_phase, min_duration_scan, optimal_dispersion_phase,
    q_paraxial, v_factor, BranchConvention, ParaxialPoint,
};
use crate::scenario::{scenario_report, LabScenario};
use crate::spm::{apply_spm_with, PhaseConvention, PhaseMode, SpmOptions};
use crate::statistics::{compute_i1, DispersedField, QuadratureSpec};

pub const R_RATIO: f64 = 10.0;
pub const T_RATIO: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Known not to hold under the selected convention; does not count as a failure.
    ExpectedDivergent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedDivergent => "EXPECTED-DIVERGENT",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    /// `value <= limit`, failing on NaN.
    fn at_most(label: impl Into<String>, value: f64, limit: f64) -> Self {
        Self::new(label, value <= limit, format!("{value:.3e} <= {limit:.1e}"))
    }

    fn error(label: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            label: label.into(),
            status: Status::Fail,
            detail: format!("error: {err}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub time_limit: Duration,
}

impl CriterionReport {
    pub fn within_time(&self) -> bool {
        self.elapsed <= self.time_limit
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn status(&self) -> Status {
        if !self.passed() {
            Status::Fail
        } else if self
            .checks
            .iter()
            .any(|c| c.status == Status::ExpectedDivergent)
        {
            Status::ExpectedDivergent
        } else {
            Status::Pass
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({:.3} s, limit {} s)",
            self.status(),
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.time_limit.as_secs()
        )
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.summary_line())?;
        for c in &self.checks {
            writeln!(f, "    [{}] {}: {}", c.status, c.label, c.detail)?;
        }
        if !self.within_time() {
            writeln!(f, "    [FAIL] runtime budget exceeded")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidationConfig {
    pub grid: TimeGrid,
    pub branch: BranchConvention,
    pub quadrature: QuadratureSpec,
}

fn timed(
    id: &'static str,
    title: &'static str,
    limit_secs: u64,
    body: impl FnOnce() -> Vec<Check>,
) -> CriterionReport {
    let start = Instant::now();
    let checks = body();
    CriterionReport {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(limit_secs),
    }
}

fn kerr_field(g: TimeGrid, psi0: f64, mode: PhaseMode) -> Result<(ComplexEnvelope, MediumParams)> {
    let m = MediumParams::with_ratio(psi0, R_RATIO, 1.0)?;
    let a = make_gaussian_pulse(PulseParams::new(1.0, 1.0)?, g)?;
    Ok((
        apply_spm_with(&a, &m, &SpmOptions::new(mode, PhaseConvention::ClosedForm)),
        m,
    ))
}

fn nearest_index(g: &TimeGrid, t: f64) -> usize {
    (((t - g.t_min()) / g.dt()).round() as usize).min(g.n_samples() - 1)
}

fn numeric_q(
    cfg: &ValidationConfig,
    psi0: f64,
    sign: GvdSign,
    phi: f64,
    mode: PhaseMode,
) -> Result<f64> {
    let (f, m) = kerr_field(cfg.grid, psi0, mode)?;
    let dp = DispersionParams::new(sign, phi, R_RATIO)?;
    let field = DispersedField::new(f, m, dp)?;
    let det = DetectionParams::new(T_RATIO)?;
    Ok(field
        .mandel_at(nearest_index(&cfg.grid, 0.0), &det, &cfg.quadrature)?
        .q)
}

fn paraxial_q(psi0: f64, sign: GvdSign, phi: f64, branch: BranchConvention) -> Result<f64> {
    q_paraxial(
        &ParaxialPoint::new(psi0, sign, phi, T_RATIO, R_RATIO)?,
        branch,
    )
}

pub fn spm_invariance(cfg: &ValidationConfig) -> CriterionReport {
    timed("1", "Kerr phase alone leaves Q = 0", 1, || {
        [1.0, 3.0, 6.0]
            .iter()
            .map(|&psi0| {
                let label = format!("psi0 = {psi0}, phi = 0");
                match numeric_q(cfg, psi0, GvdSign::Anomalous, 0.0, PhaseMode::Exact) {
                    Ok(q) => Check::at_most(label, q.abs(), 1e-9),
                    Err(e) => Check::error(label, e),
                }
            })
            .collect()
    })
}

fn total_photons(samples: &[num_complex::Complex64], dt: f64) -> f64 {
    trapz(
        &samples.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>(),
        dt,
    )
}

pub fn dispersion_unitarity(cfg: &ValidationConfig) -> CriterionReport {
    timed("2", "dispersion conserves photon number", 5, || {
        let g = cfg.grid;
        let input = match make_gaussian_pulse(
            PulseParams {
                nbar0: 1.0,
                tau_p: 1.0,
            },
            g,
        ) {
            Ok(a) => a,
            Err(e) => return vec![Check::error("input pulse", e)],
        };
        let n0 = total_photons(input.samples(), g.dt());
        let mut checks = Vec::new();
        for phi in [0.05, 0.33, 1.0, 2.0] {
            let dp = match DispersionParams::new(GvdSign::Anomalous, phi, R_RATIO) {
                Ok(dp) => dp,
                Err(e) => {
                    checks.push(Check::error(format!("phi = {phi}"), e));
                    continue;
                }
            };
            let spectral = propagate(&input, &dp, PropagationMethod::Spectral);
            let kernel = propagate(&input, &dp, PropagationMethod::Kernel);
            let (spectral, kernel) = match (spectral, kernel) {
                (Ok(s), Ok(k)) => (s, k),
                (Err(e), _) | (_, Err(e)) => {
                    checks.push(Check::error(format!("phi = {phi}"), e));
                    continue;
                }
            };
            let drift =
                |out: &ComplexEnvelope| (total_photons(out.samples(), g.dt()) / n0 - 1.0).abs();
            checks.push(Check::at_most(
                format!("spectral, phi = {phi}"),
                drift(&spectral),
                1e-8,
            ));
            checks.push(Check::at_most(
                format!("kernel, phi = {phi}"),
                drift(&kernel),
                1e-5,
            ));
            let diff: f64 = spectral
                .samples()
                .iter()
                .zip(kernel.samples())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            let norm: f64 = spectral.samples().iter().map(|a| a.norm_sqr()).sum();
            checks.push(Check::at_most(
                format!("methods agree, phi = {phi}"),
                (diff / norm).sqrt(),
                1e-5,
            ));
        }
        checks
    })
}

/// Half width at `1/e` of the peak of `|I1|^2` on the `t > 0` side.
fn half_width_1e(env: &ComplexEnvelope) -> Option<f64> {
    let g = env.grid();
    let n = env.intensity();
    let (k0, peak) =
        n.iter()
            .copied()
            .enumerate()
            .fold((0, f64::MIN), |b, c| if c.1 > b.1 { c } else { b });
    let level = peak / std::f64::consts::E;
    (k0..n.len() - 1)
        .find(|&k| n[k] >= level && n[k + 1] < level)
        .map(|k| {
            let frac = (n[k] - level) / (n[k] - n[k + 1]);
            g.time(k) + frac * g.dt() - g.time(k0)
        })
}

pub fn compression_law(cfg: &ValidationConfig) -> CriterionReport {
    timed("3", "compression law", 30, || {
        let mut checks = Vec::new();
        for psi0 in [1.0, 2.0, 3.0, 4.0] {
            let (phi_scan, v2_scan) = min_duration_scan(psi0);
            let (phi_md, v_min) = min_duration_phase(psi0);
            checks.push(Check::at_most(
                format!("phi_md, psi0 = {psi0}"),
                (phi_scan - phi_md).abs(),
                1e-6,
            ));
            checks.push(Check::at_most(
                format!("V_min^2, psi0 = {psi0}"),
                (v2_scan - v_min * v_min).abs(),
                1e-6,
            ));
        }
        let label = "numeric width at psi0 = 3, phi = 1/3";
        let width = kerr_field(cfg.grid, 3.0, PhaseMode::Paraxial).and_then(|(f, _)| {
            let dp = DispersionParams::new(GvdSign::Anomalous, 1.0 / 3.0, R_RATIO)?;
            compute_i1(&f, &dp)
        });
        match width.map(|i1| half_width_1e(&i1)) {
            Ok(Some(w)) => {
                let dev = (w * 3.0 - 1.0).abs();
                checks.push(Check::new(
                    label,
                    dev <= 0.02,
                    format!("width {w:.6} tau_p, deviation {dev:.2e} <= 2e-2"),
                ));
            }
            Ok(None) => checks.push(Check::new(label, false, "no 1/e crossing on the grid")),
            Err(e) => checks.push(Check::error(label, e)),
        }
        checks
    })
}

pub fn photon_conservation(cfg: &ValidationConfig) -> CriterionReport {
    timed(
        "4",
        "closed-form mean photon number integrates to a constant",
        1,
        || {
            let g = cfg.grid;
            let mut checks = Vec::new();
            for sign in [GvdSign::Anomalous, GvdSign::Normal] {
                let areas: Result<Vec<f64>> = (0..=20)
                    .map(|k| {
                        let p = ParaxialPoint::new(3.0, sign, k as f64 / 20.0, T_RATIO, R_RATIO)?;
                        // The profile is exp(-t^2 / V^2); integrate over the same
                        // number of widths whatever V is.
                        let (v, _) = v_factor(&p);
                        let wide = TimeGrid::centered(g.n_samples(), -g.t_min() * v.max(1.0))?;
                        let n: Result<Vec<f64>> = wide
                            .times()
                            .map(|t| mean_photons_paraxial(&p, t, 1.0, T_RATIO))
                            .collect();
                        Ok(trapz(&n?, wide.dt()))
                    })
                    .collect();
                let label = format!("psi0 = 3, s = {sign}, 21 values of phi in [0, 1]");
                match areas {
                    Ok(a) => {
                        let spread = a.iter().map(|x| (x / a[0] - 1.0).abs()).fold(0.0, f64::max);
                        checks.push(Check::at_most(label, spread, 1e-10));
                    }
                    Err(e) => checks.push(Check::error(label, e)),
                }
            }
            checks
        },
    )
}

pub fn worked_example(cfg: &ValidationConfig) -> CriterionReport {
    timed("5", "fibre example distances", 1, || {
        match scenario_report(&LabScenario::paper_fiber(), Some(3.0), cfg.branch) {
        Ok(r) => vec![
            Check::new(
                "D = 25 m",
                ((r.dispersion_length - 25.0) / 25.0).abs() < 1e-12,
                format!("D = {:.12} m", r.dispersion_length),
            ),
            Check::new(
                "z_opt in [7.9, 8.7] m",
                (7.9..=8.7).contains(&r.z_opt_claimed),
                format!("z_opt = {:.4} m at phi = 1/3", r.z_opt_claimed),
            ),
            Check::new(
                "z at minimum duration",
                (r.z_min_duration - 7.5).abs() < 1e-9,
                format!(
                    "z_md = {:.4} m; computed optimum of Q at z = {:.4} m (psi0 estimate from n2: {:.4})",
                    r.z_min_duration, r.z_opt_computed, r.psi0_estimate
                ),
            ),
        ],
        Err(e) => vec![Check::error("scenario", e)],
    }
    })
}

pub fn optimum_claims(_cfg: &ValidationConfig) -> CriterionReport {
    timed("6", "closed-form optimum near phi = 1/psi0", 5, || {
        let mut checks = Vec::new();
        for psi0 in [2.0, 3.0, 4.0] {
            match optimal_dispersion_phase(
                psi0,
                T_RATIO,
                R_RATIO,
                BranchConvention::PrincipalArctan,
            ) {
                Ok(r) => {
                    let dphi = (r.phi_ratio() - 1.0).abs();
                    checks.push(Check::new(
                        format!("phi* within 35% of 1/psi0, psi0 = {psi0}"),
                        dphi <= 0.35,
                        format!(
                            "phi* = {:.8}, 1/psi0 = {:.8}, off by {:.1}%",
                            r.phi_opt,
                            r.claimed_phi_opt,
                            100.0 * dphi
                        ),
                    ));
                    let qr = r.q_ratio();
                    checks.push(Check::new(
                        format!("Q* within a factor 2 of -T psi0^2, psi0 = {psi0}"),
                        (0.5..=2.0).contains(&qr),
                        format!(
                            "Q* = {:.8}, claim {:.8}, ratio {qr:.4}",
                            r.q_min, r.claimed_q_min
                        ),
                    ));
                }
                Err(e) => checks.push(Check::error(format!("psi0 = {psi0}"), e)),
            }
        }
        checks
    })
}

/// Points compared by [`cross_engine`]: `(psi0, s, phi)`.
pub const CROSS_ENGINE_POINTS: [(f64, GvdSign, f64); 6] = [
    (1.0, GvdSign::Anomalous, 0.2),
    (1.0, GvdSign::Normal, 0.2),
    (2.0, GvdSign::Anomalous, 0.3),
    (2.0, GvdSign::Normal, 0.3),
    (1.5, GvdSign::Anomalous, 0.45),
    (1.5, GvdSign::Normal, 0.45),
];

pub fn cross_engine(cfg: &ValidationConfig) -> CriterionReport {
    timed("7", "numeric and closed-form Q agree", 120, || {
        CROSS_ENGINE_POINTS
            .iter()
            .map(|&(psi0, sign, phi)| {
                let label = format!("psi0 = {psi0}, s = {sign}, phi = {phi}");
                let numeric = numeric_q(cfg, psi0, sign, phi, PhaseMode::Paraxial);
                let closed = paraxial_q(psi0, sign, phi, cfg.branch);
                match (numeric, closed) {
                    (Ok(qn), Ok(qp)) => {
                        let dev = (qn / qp - 1.0).abs();
                        Check::new(
                            label,
                            dev < 0.1,
                            format!("numeric {qn:.6e}, closed form {qp:.6e}, |ratio - 1| = {dev:.3} < 0.1"),
                        )
                    }
                    (Err(e), _) | (_, Err(e)) => Check::error(label, e),
                }
            })
            .collect()
    })
}

/// Points compared by [`factorisation_oracle`]: `(psi0, s, phi, t)`.
pub const FACTORISATION_POINTS: [(f64, GvdSign, f64, f64); 3] = [
    (1.0, GvdSign::Anomalous, 0.2, 0.0),
    (2.0, GvdSign::Normal, 0.3, 0.25),
    (1.5, GvdSign::Anomalous, 0.45, -0.5),
];

pub fn factorisation_oracle(cfg: &ValidationConfig) -> CriterionReport {
    timed(
        "8",
        "factorised I2 matches a direct double integral",
        120,
        || {
            FACTORISATION_POINTS
                .iter()
                .map(|&(psi0, sign, phi, t)| {
                    let k = nearest_index(&cfg.grid, t);
                    let label = format!(
                        "psi0 = {psi0}, s = {sign}, phi = {phi}, t = {:.4}",
                        cfg.grid.time(k)
                    );
                    let result = kerr_field(cfg.grid, psi0, PhaseMode::Exact).and_then(|(f, m)| {
                        let dp = DispersionParams::new(sign, phi, R_RATIO)?;
                        let brute = brute_force_i2(&f, m.tau_r, sign.value(), phi, k)?;
                        let (fast, _) = DispersedField::new(f, m, dp)?.i2_at(k, &cfg.quadrature)?;
                        Ok((fast - brute).norm() / brute.norm())
                    });
                    match result {
                        Ok(rel) => Check::at_most(label, rel, 1e-4),
                        Err(e) => Check::error(label, e),
                    }
                })
                .collect()
        },
    )
}

pub fn both_signs(cfg: &ValidationConfig) -> CriterionReport {
    timed(
        "9",
        "sub-Poissonian light for both signs of dispersion",
        1,
        || {
            [GvdSign::Anomalous, GvdSign::Normal]
                .iter()
                .map(|&sign| {
                    let best = (1..=400)
                        .filter_map(|k| {
                            let phi = k as f64 * 0.005;
                            paraxial_q(2.0, sign, phi, cfg.branch)
                                .ok()
                                .map(|q| (phi, q))
                        })
                        .fold(
                            (f64::NAN, f64::INFINITY),
                            |b, c| if c.1 < b.1 { c } else { b },
                        );
                    Check::new(
                        format!("psi0 = 2, s = {sign}"),
                        best.1 < -0.01,
                        format!("min Q = {:.6} at phi = {:.3} (< -0.01)", best.1, best.0),
                    )
                })
                .collect()
        },
    )
}

/// `Q -> 0` as `phi -> 0` for the closed form. The two-argument branch does
/// not have this limit.
pub fn zero_dispersion_limit(cfg: &ValidationConfig) -> CriterionReport {
    timed("limit", "closed form vanishes as phi -> 0", 1, || {
        [1.0, 3.0, 6.0]
            .iter()
            .map(|&psi0| {
                let label = format!("psi0 = {psi0}, phi = 1e-6, {}", cfg.branch);
                let limit = 1e-3 * psi0 * T_RATIO;
                match paraxial_q(psi0, GvdSign::Anomalous, 1e-6, cfg.branch) {
                    Ok(q) => {
                        let mut c = Check::at_most(label, q.abs(), limit);
                        if c.status == Status::Fail && cfg.branch == BranchConvention::ContinuousArg
                        {
                            c.status = Status::ExpectedDivergent;
                        }
                        c
                    }
                    Err(e) => Check::error(label, e),
                }
            })
            .collect()
    })
}

pub fn run_all(cfg: &ValidationConfig) -> Vec<CriterionReport> {
    vec![
        spm_invariance(cfg),
        dispersion_unitarity(cfg),
        compression_law(cfg),
        photon_conservation(cfg),
        worked_example(cfg),
        optimum_claims(cfg),
        cross_engine(cfg),
        factorisation_oracle(cfg),
        both_signs(cfg),
        zero_dispersion_limit(cfg),
    ]
}
