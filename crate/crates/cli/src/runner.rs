//! Run orchestration: assemble, execute, certify, emit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dcprox_core::diagnostics::{
    self, criticality_residual, summability_report, Certificate,
};
use dcprox_core::instances;
use dcprox_core::solver::{run, Algo, Termination, Trace};

use crate::config::{Assembled, CertRequest, RunConfig, CERTIFICATE_NAMES};
use crate::traceio;
use crate::{CliError, EXIT_CERT, EXIT_OK, EXIT_RUN};

/// One evaluated certificate, as printed in the report.
#[derive(Debug, Clone, PartialEq)]
pub struct CertOutcome {
    pub name: String,
    pub min_slack: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<Certificate> for CertOutcome {
    fn from(c: Certificate) -> Self {
        CertOutcome {
            name: c.name,
            min_slack: c.min_slack,
            tolerance: c.tolerance,
            passed: c.passed,
        }
    }
}

/// Result of an executed configuration.
#[derive(Debug)]
pub struct RunSummary {
    pub termination: Termination,
    pub iterations: usize,
    pub final_f: f64,
    pub final_step_norm: f64,
    pub final_residual: f64,
    pub certificates: Vec<CertOutcome>,
    pub trace_path: PathBuf,
    pub report_path: PathBuf,
}

impl RunSummary {
    pub fn all_certificates_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.passed)
    }

    /// Exit-status contract: 0 only for a regular termination with all
    /// requested certificates passing; run failures and certificate failures
    /// get distinct codes.
    pub fn exit_code(&self) -> i32 {
        if !self.termination.is_regular() {
            EXIT_RUN
        } else if !self.all_certificates_pass() {
            EXIT_CERT
        } else {
            EXIT_OK
        }
    }
}

/// Executes a validated configuration: runs the solver, writes the trace CSV
/// and the certificate report, and returns the summary. IO failures surface
/// as errors; run and certificate failures are encoded in the summary's exit
/// code after the artifacts are written.
pub fn run_command(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let Assembled {
        problem,
        pair,
        schedule,
        solver,
        problem_id,
    } = crate::config::assemble(cfg)?;

    let mut trace = run(&problem, &pair, cfg.algorithm, &cfg.x0, &schedule, &solver)?;
    trace.problem_id = problem_id;

    let mut certificates = Vec::new();
    for req in &cfg.certificates {
        let cert: Certificate = match req {
            CertRequest::Beta => diagnostics::beta_certificate(&trace),
            CertRequest::Monotone => diagnostics::monotone_certificate(&trace),
            CertRequest::Descent { rho, kappa } => match cfg.algorithm {
                Algo::Alg1 => diagnostics::descent_certificate_alg1(
                    &trace,
                    *rho,
                    kappa.expect("validated at parse"),
                )?,
                Algo::Alg2 => diagnostics::descent_certificate_alg2(&trace, *rho)?,
            },
            CertRequest::Fejer {
                gamma,
                lipschitz,
                x_bar,
            } => diagnostics::fejer_certificate(
                &problem, &trace, &pair, x_bar, *gamma, *lipschitz, cfg.seed,
            )?,
        };
        certificates.push(CertOutcome::from(cert));
    }

    let trace_path = PathBuf::from(&cfg.trace_path);
    let report_path = PathBuf::from(&cfg.report_path);
    traceio::write_trace_csv(&trace, &trace_path)?;

    let summary = RunSummary {
        termination: trace.termination,
        iterations: trace.len(),
        final_f: trace.final_f(),
        final_step_norm: trace.records.last().map_or(0.0, |r| r.step_norm),
        final_residual: final_criticality(cfg, &problem, &trace),
        certificates,
        trace_path,
        report_path: report_path.clone(),
    };
    traceio::write_text(&report_path, &report_string(cfg, &trace, &summary))?;
    Ok(summary)
}

fn final_criticality(cfg: &RunConfig, problem: &dcprox_core::dcfun::DCProblem, trace: &Trace) -> f64 {
    criticality_residual(problem, trace.final_x(), cfg.probes, cfg.radius, cfg.seed)
        .unwrap_or(f64::NAN)
}

fn report_string(cfg: &RunConfig, trace: &Trace, summary: &RunSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dcprox run report");
    let _ = writeln!(out, "problem: {}", trace.problem_id);
    let _ = writeln!(out, "distance: {}", trace.distance_id);
    let _ = writeln!(out, "algorithm: {}", trace.algo.name());
    let _ = writeln!(out, "schedule: {}", trace.schedule_desc);
    let _ = writeln!(out, "termination: {}", summary.termination.name());
    let _ = writeln!(out, "iterations: {}", summary.iterations);
    let _ = writeln!(out, "final_f: {}", traceio::format_float(summary.final_f));
    let _ = writeln!(
        out,
        "final_step_norm: {}",
        traceio::format_float(summary.final_step_norm)
    );
    let _ = writeln!(
        out,
        "final_criticality_residual: {}",
        traceio::format_float(summary.final_residual)
    );
    let s = summability_report(trace);
    let _ = writeln!(out, "sum_sq_steps: {}", traceio::format_float(s.sum_sq_steps));
    let _ = writeln!(out, "sum_beta: {}", traceio::format_float(s.sum_beta));
    let _ = writeln!(out, "tail_ratio: {}", traceio::format_float(s.tail_ratio));
    let clamped = trace.records.iter().filter(|r| r.lambda_clamped).count();
    let _ = writeln!(out, "clamped_lambdas: {clamped}");
    let _ = writeln!(out, "seed: {}", cfg.seed);
    for c in &summary.certificates {
        let _ = writeln!(
            out,
            "certificate {}: min_slack = {} tolerance = {} {}",
            c.name,
            traceio::format_float(c.min_slack),
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        out,
        "overall: {}",
        if summary.exit_code() == EXIT_OK {
            "PASS"
        } else {
            "FAIL"
        }
    );
    out
}

/// Stable, sorted listing of the shipped kernels, problem instances
/// (with their declared constants), and certificates.
pub fn list_builtins() -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kernels:");
    let _ = writeln!(
        out,
        "  boltzmann_shannon          domain: positive_orthant  H = d           closure_pair: yes"
    );
    let _ = writeln!(
        out,
        "  burg                       domain: positive_orthant  H = d           closure_pair: no"
    );
    let _ = writeln!(
        out,
        "  second_order_homogeneous   domain: positive_orthant  H = (1+theta)/2 ||x-y||^2 (theta >= 1 for the closure inequality)  closure_pair: yes"
    );
    let _ = writeln!(
        out,
        "  sq_euclidean               domain: any               H = d           closure_pair: yes"
    );
    let _ = writeln!(out, "instances:");
    for i in instances::all() {
        let kappa = i
            .kappa
            .map_or("unbounded".to_string(), |k| format!("{k}"));
        let l = i
            .smooth_l
            .map_or("nonsmooth".to_string(), |l| format!("{l}"));
        let _ = writeln!(
            out,
            "  {:<18} dim {}  rho = {}  gamma = {}  L = {}  kappa = {}  # {}",
            i.name, i.dim, i.rho, i.gamma, l, kappa, i.description
        );
    }
    let _ = writeln!(out, "certificates:");
    for name in CERTIFICATE_NAMES {
        let constants = match name {
            "beta" | "monotone" => "none",
            "descent" => "rho (and kappa under alg1)",
            "fejer" => "gamma, lipschitz, x_bar",
            _ => unreachable!(),
        };
        let _ = writeln!(out, "  {name:<10} constants: {constants}");
    }
    out
}

/// Convenience wrapper: parse a config file and execute it.
pub fn run_config_file(path: &Path) -> Result<RunSummary, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let cfg = crate::config::parse_config(&text)?;
    run_command(&cfg)
}
