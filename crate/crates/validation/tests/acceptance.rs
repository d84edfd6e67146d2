//! Every acceptance criterion at its stated tolerance, one line each,
//! followed by the numeric command examples.
//! Exits non-zero when any criterion fails.

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;

use subpoisson_cli::args::Cli;
use subpoisson_core::validation::{run_all, Check, CriterionReport, Status, ValidationConfig};

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("out");
    let path_str = path.to_str().ok_or("temp path is not UTF-8")?;
    let mut argv = vec!["subpoisson"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--output", path_str]);
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    subpoisson_cli::run(&cli).map_err(|e| e.to_string())?;
    fs::read(&path).map_err(|e| e.to_string())
}

fn figure_products() -> CriterionReport {
    let sweep = [
        "sweep-q",
        "--engine",
        "paraxial",
        "--t-ratio",
        "0.125",
        "--psi0-min",
        "0.5",
        "--psi0-max",
        "6",
        "--psi0-steps",
        "64",
        "--phi-min",
        "0.01",
        "--phi-max",
        "1",
        "--phi-steps",
        "64",
    ];
    let evolution = [
        "pulse-evolution",
        "--psi0",
        "3",
        "--t-ratio",
        "0.125",
        "--phi-min",
        "0",
        "--phi-max",
        "1",
        "--phi-steps",
        "101",
    ];
    let start = Instant::now();
    let mut checks = Vec::new();
    for (name, args) in [
        ("sweep-q 64 x 64", &sweep[..]),
        ("pulse-evolution psi0 = 3", &evolution[..]),
    ] {
        for format in ["csv", "json"] {
            let mut full = args.to_vec();
            full.extend_from_slice(&["--format", format]);
            let label = format!("{name}, {format}");
            let check = match (run_cli(&full), run_cli(&full)) {
                (Ok(a), Ok(b)) => Check {
                    label,
                    status: if a == b && !a.is_empty() {
                        Status::Pass
                    } else {
                        Status::Fail
                    },
                    detail: format!("{} and {} bytes, identical: {}", a.len(), b.len(), a == b),
                },
                (Err(e), _) | (_, Err(e)) => Check {
                    label,
                    status: Status::Fail,
                    detail: e,
                },
            };
            checks.push(check);
        }
    }
    CriterionReport {
        id: "10",
        title: "figure data products are byte-identical across two runs",
        checks,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(60),
    }
}

/// Values of `name` in a CSV table with no quoted fields.
fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let k = lines
        .next()
        .and_then(|h| h.split(',').position(|c| c == name))
        .expect("column present");
    lines
        .map(|l| {
            l.split(',')
                .nth(k)
                .and_then(|v| v.parse().ok())
                .unwrap_or(f64::NAN)
        })
        .collect()
}

fn check(label: &str, pass: bool, detail: String) -> Check {
    Check {
        label: label.to_owned(),
        status: if pass { Status::Pass } else { Status::Fail },
        detail,
    }
}

/// The sweep-q example: on the 64 x 64 figure grid every `phi = 0.01` row has `|Q| < 0.05`.
fn sweep_small_phi_example() -> CriterionReport {
    let start = Instant::now();
    let args = [
        "sweep-q",
        "--engine",
        "paraxial",
        "--sign",
        "1",
        "--t-ratio",
        "0.125",
        "--psi0-min",
        "0.5",
        "--psi0-max",
        "6",
        "--psi0-steps",
        "64",
        "--phi-min",
        "0.01",
        "--phi-max",
        "1",
        "--phi-steps",
        "64",
    ];
    let checks = match run_cli(&args).map(|b| String::from_utf8_lossy(&b).into_owned()) {
        Ok(text) => {
            let (psi, phi, q) = (
                csv_column(&text, "psi0"),
                csv_column(&text, "phi"),
                csv_column(&text, "q"),
            );
            let small: Vec<(f64, f64)> = (0..q.len())
                .filter(|&k| phi[k] == 0.01)
                .map(|k| (psi[k], q[k]))
                .collect();
            let worst = small.iter().copied().fold((f64::NAN, 0.0_f64), |b, c| {
                if c.1.abs() > b.1.abs() {
                    c
                } else {
                    b
                }
            });
            let inside = small.iter().filter(|(_, q)| q.abs() < 0.05).count();
            vec![
                check("4096 rows", q.len() == 4096, format!("{} rows", q.len())),
                check(
                    "|Q| < 0.05 on every phi = 0.01 row",
                    inside == small.len() && !small.is_empty(),
                    format!(
                        "{inside} of {} rows; largest |Q| = {:.4} at psi0 = {:.4}",
                        small.len(),
                        worst.1.abs(),
                        worst.0
                    ),
                ),
            ]
        }
        Err(e) => vec![check("sweep-q", false, e)],
    };
    CriterionReport {
        id: "example sweep-q",
        title: "closed-form Q is small at phi = 0.01",
        checks,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(60),
    }
}

/// The point example: `psi0 = 1, phi = 0.2, s = +1` gives `|Q_numeric / Q_paraxial - 1| < 0.1`.
fn point_example() -> CriterionReport {
    let start = Instant::now();
    let args = [
        "point",
        "--psi0",
        "1",
        "--phi",
        "0.2",
        "--sign",
        "1",
        "--r-ratio",
        "10",
        "--t-ratio",
        "0.125",
    ];
    let checks = match run_cli(&args).map(|b| String::from_utf8_lossy(&b).into_owned()) {
        Ok(text) => {
            let (qp, qn, ratio) = (
                csv_column(&text, "q_paraxial")[0],
                csv_column(&text, "q_numeric")[0],
                csv_column(&text, "ratio")[0],
            );
            vec![check(
                "|Q_numeric / Q_paraxial - 1| < 0.1",
                (ratio - 1.0).abs() < 0.1,
                format!(
                    "numeric {qn:.6e}, closed form {qp:.6e}, |ratio - 1| = {:.3}",
                    (ratio - 1.0).abs()
                ),
            )]
        }
        Err(e) => vec![check("point", false, e)],
    };
    CriterionReport {
        id: "example point",
        title: "engines agree at psi0 = 1, phi = 0.2",
        checks,
        elapsed: start.elapsed(),
        time_limit: Duration::from_secs(60),
    }
}

fn main() -> ExitCode {
    let mut reports = run_all(&ValidationConfig::default());
    reports.push(figure_products());
    reports.push(sweep_small_phi_example());
    reports.push(point_example());

    for r in &reports {
        println!("{}", r.summary_line());
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    for r in &failed {
        print!("\n{r}");
    }
    println!(
        "\n{} of {} criteria passed",
        reports.len() - failed.len(),
        reports.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
