use std::time::{Duration, Instant};

use rayon::prelude::*;

use subpoisson_core::dispersion::DispersionParams;
use subpoisson_core::paraxial::{mean_photons_paraxial, q_paraxial, ParaxialPoint};
use subpoisson_core::scenario::scenario_report;
use subpoisson_core::spm::apply_spm_with;
use subpoisson_core::statistics::{DispersedField, MandelResult};
use subpoisson_core::validation::{run_all, Check, CriterionReport, Status, ValidationConfig};
use subpoisson_core::{
    make_gaussian_pulse, BranchConvention, ComplexEnvelope, DetectionParams, Error, MediumParams,
    PhaseConvention, PulseParams, SpectralPropagator, SpmOptions, TimeGrid, VERSION,
};

use crate::args::{Branch, Engine, Format};
use crate::config::{RangeSpec, Settings};
use crate::error::CliError;
use crate::output::{Cell, Table};

/// Short machine-readable tag for the status column.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Config(_) => "config",
        Error::GridTooSmall { .. } => "grid-too-small",
        Error::ZeroDispersion => "zero-dispersion",
        Error::WrapAround { .. } => "wrap-around",
        Error::OffGrid { .. } => "off-grid",
        Error::Quadrature { .. } => "quadrature",
        Error::UndefinedQ { .. } => "undefined-q",
        Error::SingularFocus => "singular-focus",
        Error::Domain { .. } => "domain",
    }
}

fn branch_name(b: Branch) -> &'static str {
    BranchConvention::from(b).name()
}

fn metadata(s: &Settings, engine: &str) -> Vec<(String, Cell)> {
    vec![
        ("engine".to_owned(), Cell::from(engine)),
        ("branch".to_owned(), Cell::from(branch_name(s.branch))),
        ("grid_samples".to_owned(), Cell::from(s.grid_samples)),
        ("grid_half_span".to_owned(), Cell::from(s.grid_half_span)),
        (
            "omega_nodes".to_owned(),
            Cell::from(s.quadrature.omega_nodes),
        ),
        ("tol".to_owned(), Cell::from(s.quadrature.tol)),
        ("version".to_owned(), Cell::from(VERSION)),
    ]
}

fn status_cell<T>(r: &Result<T, Error>) -> Cell {
    match r {
        Ok(_) => Cell::from("ok"),
        Err(e) => Cell::from(error_kind(e)),
    }
}

/// Shared state for numeric evaluations on one grid.
struct NumericContext {
    grid: TimeGrid,
    propagator: SpectralPropagator,
    pulse: ComplexEnvelope,
    detection: DetectionParams,
    index: usize,
}

impl NumericContext {
    fn new(s: &Settings) -> Result<Self, CliError> {
        let grid = s.grid()?;
        let pulse = make_gaussian_pulse(PulseParams::new(s.nbar0, 1.0)?, grid)?;
        let index = (((s.t - grid.t_min()) / grid.dt()).round().max(0.0) as usize)
            .min(grid.n_samples() - 1);
        Ok(Self {
            grid,
            propagator: SpectralPropagator::new(grid),
            pulse,
            detection: DetectionParams::new(s.t_ratio)?,
            index,
        })
    }

    fn time(&self) -> f64 {
        self.grid.time(self.index)
    }

    fn mandel(&self, s: &Settings, psi0: f64, phi: f64) -> Result<MandelResult, Error> {
        let m = MediumParams::with_ratio(psi0, s.r_ratio, s.nbar0)?;
        let f = apply_spm_with(
            &self.pulse,
            &m,
            &SpmOptions::new(s.phase.into(), PhaseConvention::ClosedForm),
        );
        let dp = DispersionParams::new(s.sign, phi, s.r_ratio)?;
        DispersedField::with_propagator(&self.propagator, f, m, dp)?.mandel_at(
            self.index,
            &self.detection,
            &s.quadrature,
        )
    }
}

fn paraxial_point(s: &Settings, psi0: f64, phi: f64) -> Result<ParaxialPoint, Error> {
    ParaxialPoint::new(psi0, s.sign, phi, s.t_ratio, s.r_ratio)
}

fn grid_points(psi: &RangeSpec, phi: &RangeSpec) -> Vec<(f64, f64)> {
    let phis = phi.values();
    psi.values()
        .into_iter()
        .flat_map(|p| phis.iter().map(move |&f| (p, f)))
        .collect()
}

/// `Q(0)` over the `(psi0, phi)` grid, row-major in `psi0`.
pub fn sweep_q(s: &Settings) -> Result<Table, CliError> {
    let points = grid_points(&s.psi0_range, &s.phi_range);
    let ctx = match s.engine {
        Engine::Numeric => Some(NumericContext::new(s)?),
        Engine::Paraxial => None,
    };
    let branch = s.branch.into();
    let results: Vec<Result<f64, Error>> = points
        .par_iter()
        .map(|&(psi0, phi)| match &ctx {
            Some(ctx) => ctx.mandel(s, psi0, phi).map(|r| r.q),
            None => paraxial_point(s, psi0, phi).and_then(|p| q_paraxial(&p, branch)),
        })
        .collect();

    let mut table = Table::new(
        &["psi0", "phi", "phi_d", "s", "t", "q", "status"],
        metadata(s, s.engine.name()),
    );
    let t = ctx.as_ref().map_or(0.0, NumericContext::time);
    for (&(psi0, phi), r) in points.iter().zip(&results) {
        table.push(vec![
            Cell::from(psi0),
            Cell::from(phi),
            Cell::from(phi * s.r_ratio * s.r_ratio),
            Cell::Int(s.sign.value() as i64),
            Cell::from(t),
            Cell::from(*r.as_ref().unwrap_or(&f64::NAN)),
            status_cell(r),
        ]);
    }
    Ok(table)
}

/// Closed-form `<N_T(t)>` on the `(phi, t)` grid, one block of rows per `phi`.
pub fn pulse_evolution(s: &Settings) -> Result<Table, CliError> {
    if s.engine != Engine::Paraxial {
        return Err(CliError::Config(
            "pulse-evolution is only available for the paraxial engine".to_owned(),
        ));
    }
    let mut table = Table::new(
        &["t", "phi", "psi0", "s", "mean_n", "status"],
        metadata(s, Engine::Paraxial.name()),
    );
    let times = s.t_range.values();
    for phi in s.phi_range.values() {
        let p = paraxial_point(s, s.psi0, phi)?;
        for &t in &times {
            let r = mean_photons_paraxial(&p, t, s.nbar0, s.t_ratio);
            table.push(vec![
                Cell::from(t),
                Cell::from(phi),
                Cell::from(s.psi0),
                Cell::Int(s.sign.value() as i64),
                Cell::from(*r.as_ref().unwrap_or(&f64::NAN)),
                status_cell(&r),
            ]);
        }
    }
    Ok(table)
}

/// Both engines at one `(psi0, phi, t)`; numeric failures abort.
pub fn point(s: &Settings) -> Result<Table, CliError> {
    let ctx = NumericContext::new(s)?;
    let t = ctx.time();
    let numeric = ctx.mandel(s, s.psi0, s.phi).map_err(CliError::Numeric)?;
    let p = paraxial_point(s, s.psi0, s.phi)?;
    // The closed form only describes the pulse centre.
    let q_par = if t == 0.0 {
        q_paraxial(&p, s.branch.into()).map_err(CliError::Numeric)?
    } else {
        f64::NAN
    };
    let n_par = mean_photons_paraxial(&p, t, s.nbar0, s.t_ratio).map_err(CliError::Numeric)?;
    let mut table = Table::new(
        &[
            "psi0",
            "phi",
            "phi_d",
            "s",
            "t",
            "q_paraxial",
            "q_numeric",
            "ratio",
            "mean_n_paraxial",
            "mean_n_numeric",
            "nodes",
            "large_phase",
            "slow_response",
        ],
        metadata(s, "paraxial+numeric"),
    );
    table.push(vec![
        Cell::from(s.psi0),
        Cell::from(s.phi),
        Cell::from(p.phi_d),
        Cell::Int(s.sign.value() as i64),
        Cell::from(t),
        Cell::from(q_par),
        Cell::from(numeric.q),
        Cell::from(numeric.q / q_par),
        Cell::from(n_par),
        Cell::from(numeric.mean_n),
        Cell::from(numeric.nodes),
        Cell::from(if numeric.caveats.large_phase {
            "yes"
        } else {
            "no"
        }),
        Cell::from(if numeric.caveats.slow_response {
            "yes"
        } else {
            "no"
        }),
    ]);
    Ok(table)
}

pub fn scenario(s: &Settings) -> Result<Table, CliError> {
    let section = s.scenario.as_ref().ok_or_else(|| {
        CliError::Config("the scenario command needs a [scenario] section in the config".to_owned())
    })?;
    let lab = section.to_lab()?;
    let r = scenario_report(&lab, s.psi0_override, s.branch.into())?;
    let mut table = Table::new(
        &[
            "dispersion_length_m",
            "response_dispersion_length_m",
            "psi0_estimate",
            "n2_m2_per_w",
            "n2_source",
            "c_conv",
            "psi0",
            "phi_opt_claimed",
            "z_opt_claimed_m",
            "phi_opt_computed",
            "z_opt_computed_m",
            "phi_min_duration",
            "z_min_duration_m",
            "v_min",
            "q_min_claimed",
            "q_min_computed",
        ],
        metadata(s, Engine::Paraxial.name()),
    );
    table.push(vec![
        Cell::from(r.dispersion_length),
        Cell::from(r.response_dispersion_length),
        Cell::from(r.psi0_estimate),
        Cell::from(r.n2),
        Cell::from(if r.n2_is_default { "default" } else { "config" }),
        Cell::from(r.c_conv),
        Cell::from(r.psi0),
        Cell::from(r.phi_opt_claimed),
        Cell::from(r.z_opt_claimed),
        Cell::from(r.phi_opt_computed),
        Cell::from(r.z_opt_computed),
        Cell::from(r.phi_min_duration),
        Cell::from(r.z_min_duration),
        Cell::from(r.v_min),
        Cell::from(r.q_min_claimed),
        Cell::from(r.q_min_computed),
    ]);
    Ok(table)
}

/// Settings for the figure data products: a 64 x 64 sweep at `T = tau_p / 8`
/// and the pulse evolution at `psi0 = 3`.
pub fn figure_settings(base: &Settings) -> (Settings, Settings) {
    let sweep = Settings {
        engine: Engine::Paraxial,
        t_ratio: 0.125,
        psi0_range: RangeSpec::new(0.5, 6.0, 64),
        phi_range: RangeSpec::new(0.01, 1.0, 64),
        ..base.clone()
    };
    let evolution = Settings {
        engine: Engine::Paraxial,
        psi0: 3.0,
        phi_range: RangeSpec::new(0.0, 1.0, 101),
        ..sweep.clone()
    };
    (sweep, evolution)
}

pub fn figure_products(base: &Settings) -> CriterionReport {
    let start = Instant::now();
    let (sweep, evolution) = figure_settings(base);
    let render = || -> Result<Vec<Vec<u8>>, CliError> {
        let mut out = Vec::new();
        for format in [Format::Csv, Format::Json] {
            out.push(sweep_q(&sweep)?.render(format));
            out.push(pulse_evolution(&evolution)?.render(format));
        }
        Ok(out)
    };
    let checks = match (render(), render()) {
        (Ok(a), Ok(b)) => vec![Check {
            label: "two renderings are byte-identical".to_owned(),
            status: if a == b { Status::Pass } else { Status::Fail },
            detail: format!("{} bytes", a.iter().map(Vec::len).sum::<usize>()),
        }],
        (Err(e), _) | (_, Err(e)) => {
            vec![Check {
                label: "rendering".to_owned(),
                status: Status::Fail,
                detail: e.to_string(),
            }]
        }
    };
    CriterionReport {
        id: "10",
        title: "figure data products are deterministic",
        checks,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(60),
    }
}

pub fn validate(s: &Settings) -> Result<Vec<CriterionReport>, CliError> {
    let cfg = ValidationConfig {
        grid: s.grid()?,
        branch: s.branch.into(),
        quadrature: s.quadrature,
    };
    let mut reports = run_all(&cfg);
    reports.push(figure_products(s));
    Ok(reports)
}
