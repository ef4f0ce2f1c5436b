//! The three bundled experiments: parameter sweep, benchmark evolution with
//! discrepancy scanning, and the thermal run with heat and bound checks.
//!
//! Each runner emits a CSV series plus a JSON report into the configured
//! output directory and returns a [`RunStatus`] for the process exit code.

use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

use qcorr::config::LogBase;
use qcorr::correlation::{correlation_matrix, qmi_in};
use qcorr::dynamics::{
    benchmark_hamiltonian, discrepancy_scan, sweep, DynamicsError, Trajectory,
};
use qcorr::presets::{constant_correlation_state, reference_discrepancy_intervals};
use qcorr::thermo::{
    area_law_bound, heat_ledger, integrated_qmi_identity, ThermalReference, ThermoError,
};

use crate::config::ExperimentConfig;
use crate::output::{write_json, Cell, CsvWriter, OutputError};

/// Tolerance on reference interval endpoints.
const ENDPOINT_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Output(#[from] OutputError),

    #[error(transparent)]
    Dynamics(#[from] DynamicsError),

    #[error(transparent)]
    Thermo(#[from] ThermoError),

    #[error("cannot create output directory {path}: {source}")]
    OutputDir { path: PathBuf, source: std::io::Error },
}

/// Outcome of a run, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Outputs written; reference checks passed or did not apply.
    Ok,
    /// A swept state failed density-matrix validation.
    ValidationFailure,
    /// Outputs disagree with the bundled reference expectations.
    ReferenceMismatch,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::ValidationFailure => 2,
            RunStatus::ReferenceMismatch => 3,
        }
    }
}

pub fn run(config: &ExperimentConfig) -> Result<RunStatus, RunError> {
    std::fs::create_dir_all(&config.output_dir).map_err(|source| RunError::OutputDir {
        path: config.output_dir.clone(),
        source,
    })?;
    match config.experiment {
        crate::config::Experiment::Example1 => run_example1(config),
        crate::config::Experiment::Example2 => run_example2(config),
        crate::config::Experiment::Thermal => run_thermal(config),
    }
}

#[derive(Debug, Serialize)]
struct Example1Summary {
    experiment: &'static str,
    x_min: f64,
    x_max: f64,
    x_step: f64,
    log_base: String,
    seed: u64,
    rows: usize,
    all_states_valid: bool,
    /// First grid point whose state failed validation, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    invalid_x: Option<f64>,
    argmin_x: f64,
    qmi_min: f64,
    qmi_max: f64,
    /// max over the grid of | ‖χ‖₂ - sqrt(0.02) |.
    chi_norm2_max_deviation: f64,
    /// Whether the argmin/constancy expectations were gated on this grid.
    reference_applicable: bool,
    reference_ok: bool,
}

fn run_example1(config: &ExperimentConfig) -> Result<RunStatus, RunError> {
    let steps = ((config.x_max - config.x_min) / config.x_step).round() as usize;
    let chi_target = 0.02f64.sqrt();

    let mut csv = CsvWriter::create(
        &config.output_dir.join("example1.csv"),
        &["x", "qmi", "chi_norm2"],
    )?;

    let mut argmin_x = f64::NAN;
    let mut qmi_min = f64::INFINITY;
    let mut qmi_max = f64::NEG_INFINITY;
    let mut chi_deviation = 0.0f64;
    let mut invalid_x = None;
    let mut rows = 0usize;

    for k in 0..=steps {
        let x = config.x_min + k as f64 * config.x_step;
        match constant_correlation_state(x) {
            Ok(state) => {
                let mutual = qmi_in(&state, config.log_base);
                let chi = correlation_matrix(&state).norm2();
                csv.row(&[x.into(), mutual.into(), chi.into()])?;
                rows += 1;
                if mutual < qmi_min {
                    qmi_min = mutual;
                    argmin_x = x;
                }
                qmi_max = qmi_max.max(mutual);
                chi_deviation = chi_deviation.max((chi - chi_target).abs());
            }
            Err(_) => {
                invalid_x = Some(x);
                break;
            }
        }
    }
    csv.finish()?;

    let all_states_valid = invalid_x.is_none();
    // The argmin gate needs the grid to contain the minimum's neighbourhood.
    let reference_applicable =
        all_states_valid && config.x_min <= 0.635 && config.x_max >= 0.65 && rows >= 2;
    let reference_ok = reference_applicable
        && (argmin_x - 0.640).abs() <= 0.005 + 1e-12
        && chi_deviation <= 1e-12
        && qmi_max > qmi_min;

    let summary = Example1Summary {
        experiment: "example1",
        x_min: config.x_min,
        x_max: config.x_max,
        x_step: config.x_step,
        log_base: config.log_base.to_string(),
        seed: config.seed,
        rows,
        all_states_valid,
        invalid_x,
        argmin_x,
        qmi_min,
        qmi_max,
        chi_norm2_max_deviation: chi_deviation,
        reference_applicable,
        reference_ok,
    };
    write_json(&config.output_dir.join("example1_summary.json"), &summary)?;

    Ok(if !all_states_valid {
        RunStatus::ValidationFailure
    } else if reference_applicable && !reference_ok {
        RunStatus::ReferenceMismatch
    } else {
        RunStatus::Ok
    })
}

fn sign_with_floor(x: f64, zero_eps: f64) -> i64 {
    if x.abs() < zero_eps {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Write the shared time-series CSV (same columns for both time
/// experiments). Entropic columns are scaled into the configured base;
/// `sign_product` is computed from the natural-log rates with the
/// configured `zero_eps`, matching the scanner.
fn write_time_series(
    path: &std::path::Path,
    trajectory: &Trajectory,
    log_base: LogBase,
    zero_eps: f64,
) -> Result<(), OutputError> {
    let scale = log_base.from_nats();
    let mut csv = CsvWriter::create(
        path,
        &["t", "qmi", "chi_norm2", "qmi_rate", "chi_norm2_rate", "sign_product"],
    )?;
    for k in 0..trajectory.len() {
        let rate_qmi = trajectory.qmi_rate_series()[k];
        let rate_chi = trajectory.chi_norm2_rate_series()[k];
        let sign = sign_with_floor(rate_qmi, zero_eps) * sign_with_floor(rate_chi, zero_eps);
        csv.row(&[
            trajectory.times()[k].into(),
            (trajectory.qmi_series()[k] * scale).into(),
            trajectory.chi_norm_series()[k].into(),
            (rate_qmi * scale).into(),
            rate_chi.into(),
            Cell::Int(sign),
        ])?;
    }
    csv.finish()
}

#[derive(Debug, Serialize)]
struct Example2Intervals {
    experiment: &'static str,
    t_min: f64,
    t_max: f64,
    dt: f64,
    zero_eps: f64,
    log_base: String,
    seed: u64,
    endpoint_tolerance: f64,
    intervals: Vec<[f64; 2]>,
    reference_total: usize,
    reference_matched: usize,
    unmatched_reference: Vec<[f64; 2]>,
    matched_highlighted_first: bool,
    matched_highlighted_second: bool,
    /// Whether the reference gates were applied (the run must cover the
    /// reference window t ∈ [4, 8]).
    reference_applicable: bool,
    reference_ok: bool,
}

fn run_example2(config: &ExperimentConfig) -> Result<RunStatus, RunError> {
    let h = benchmark_hamiltonian();
    let trajectory = sweep(
        &qcorr::presets::benchmark_state(),
        &h,
        config.t_min,
        config.t_max,
        config.dt,
    )?;
    write_time_series(
        &config.output_dir.join("example2.csv"),
        &trajectory,
        config.log_base,
        config.zero_eps,
    )?;

    let intervals = discrepancy_scan(&trajectory, config.zero_eps);
    let pairs: Vec<[f64; 2]> = intervals.iter().map(|iv| [iv.t_start, iv.t_end]).collect();
    let matches = |a: f64, b: f64| {
        pairs.iter().any(|[s, e]| {
            (s - a).abs() <= ENDPOINT_TOLERANCE && (e - b).abs() <= ENDPOINT_TOLERANCE
        })
    };

    let reference = reference_discrepancy_intervals();
    let unmatched: Vec<[f64; 2]> = reference
        .iter()
        .filter(|(a, b)| !matches(*a, *b))
        .map(|&(a, b)| [a, b])
        .collect();
    let matched = reference.len() - unmatched.len();
    let first = matches(4.371, 4.432);
    let second = matches(7.177, 7.218);

    let reference_applicable = config.t_min <= 4.0 && config.t_max >= 8.0;
    let reference_ok = reference_applicable && first && second && matched >= 20;

    let report = Example2Intervals {
        experiment: "example2",
        t_min: config.t_min,
        t_max: config.t_max,
        dt: config.dt,
        zero_eps: config.zero_eps,
        log_base: config.log_base.to_string(),
        seed: config.seed,
        endpoint_tolerance: ENDPOINT_TOLERANCE,
        intervals: pairs,
        reference_total: reference.len(),
        reference_matched: matched,
        unmatched_reference: unmatched,
        matched_highlighted_first: first,
        matched_highlighted_second: second,
        reference_applicable,
        reference_ok,
    };
    write_json(&config.output_dir.join("example2_intervals.json"), &report)?;

    Ok(if reference_applicable && !reference_ok {
        RunStatus::ReferenceMismatch
    } else {
        RunStatus::Ok
    })
}

#[derive(Debug, Serialize)]
struct ThermalReport {
    experiment: &'static str,
    beta: f64,
    t_min: f64,
    t_max: f64,
    dt: f64,
    log_base: String,
    seed: u64,
    /// max over grid steps of |dQ_S + dQ_B + dU_chi|.
    max_heat_residual: f64,
    /// max violation of the integrated identity (nats); null when the run
    /// does not start at t = 0.
    #[serde(skip_serializing_if = "Option::is_none")]
    integrated_identity_residual: Option<f64>,
    max_qmi_nats: f64,
    area_law_bound_nats: f64,
    bound_held: bool,
    heat_residual_ok: bool,
    identity_ok: bool,
    reference_ok: bool,
}

fn run_thermal(config: &ExperimentConfig) -> Result<RunStatus, RunError> {
    let h = benchmark_hamiltonian();
    let reference = ThermalReference::new(&h, config.beta)?;
    let trajectory = sweep(
        &reference.product_state(),
        &h,
        config.t_min,
        config.t_max,
        config.dt,
    )?;
    write_time_series(
        &config.output_dir.join("thermal.csv"),
        &trajectory,
        config.log_base,
        config.zero_eps,
    )?;

    let max_heat_residual = heat_ledger(&trajectory, &h)
        .iter()
        .map(|row| row.residual.abs())
        .fold(0.0f64, f64::max);

    let identity_residual = if config.t_min == 0.0 {
        Some(integrated_qmi_identity(&trajectory, &h, config.beta)?)
    } else {
        None
    };

    let bound = area_law_bound(&h, config.beta);
    let max_qmi = trajectory.qmi_series().iter().fold(0.0f64, |acc, &x| acc.max(x));
    let bound_held = max_qmi <= bound + 1e-9;
    let heat_residual_ok = max_heat_residual <= 1e-8;
    let identity_ok = identity_residual.map_or(true, |r| r <= 1e-7);
    let reference_ok = bound_held && heat_residual_ok && identity_ok;

    let report = ThermalReport {
        experiment: "thermal",
        beta: config.beta,
        t_min: config.t_min,
        t_max: config.t_max,
        dt: config.dt,
        log_base: config.log_base.to_string(),
        seed: config.seed,
        max_heat_residual,
        integrated_identity_residual: identity_residual,
        max_qmi_nats: max_qmi,
        area_law_bound_nats: bound,
        bound_held,
        heat_residual_ok,
        identity_ok,
        reference_ok,
    };
    write_json(&config.output_dir.join("thermal_report.json"), &report)?;

    Ok(if reference_ok { RunStatus::Ok } else { RunStatus::ReferenceMismatch })
}
