//! Trace CSV and report file emission.
//!
//! The trace format is one row per iterate with the header pinned exactly:
//!
//! ```text
//! k,f,step_norm,lambda,beta,alpha,resid
//! ```
//!
//! Row `k < K` carries `f(x^k)` together with the data of step `k`
//! (`x^k -> x^{k+1}`); the final row `K` carries `f(x^K)` and zeros in the
//! step columns. Floats are printed with 17 significant digits, which
//! round-trips `f64` exactly, so certificates recomputed from a reloaded
//! file match the in-memory ones bit for bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use dcprox_core::diagnostics::StepSeries;
use dcprox_core::solver::Trace;

use crate::CliError;

pub const TRACE_HEADER: &str = "k,f,step_norm,lambda,beta,alpha,resid";

/// 17 significant digits: enough to reconstruct the exact f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_csv_string(trace: &Trace) -> String {
    let f = trace.f_values();
    let mut out = String::with_capacity(64 * (f.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for (k, fk) in f.iter().enumerate() {
        let (step_norm, lambda, beta, alpha, resid) = if k < trace.records.len() {
            let r = &trace.records[k];
            (r.step_norm, r.lambda, r.beta, r.alpha, r.resid)
        } else {
            (0.0, 0.0, 0.0, 0.0, 0.0)
        };
        out.push_str(&format!(
            "{k},{},{},{},{},{},{}\n",
            format_float(*fk),
            format_float(step_norm),
            format_float(lambda),
            format_float(beta),
            format_float(alpha),
            format_float(resid),
        ));
    }
    out
}

pub fn write_text(path: &Path, content: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(content.as_bytes()).map_err(io_err)
}

pub fn write_trace_csv(trace: &Trace, path: &Path) -> Result<(), CliError> {
    write_text(path, &trace_csv_string(trace))
}

/// Reloads an emitted trace file into the columnar form the scalar
/// certificates consume.
pub fn read_step_series(path: &Path) -> Result<StepSeries, CliError> {
    let content = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut lines = content.lines();
    match lines.next() {
        Some(h) if h == TRACE_HEADER => {}
        other => {
            return Err(CliError::TraceFormat(format!(
                "expected header `{TRACE_HEADER}`, got `{}`",
                other.unwrap_or("<empty file>")
            )))
        }
    }
    let mut f = Vec::new();
    let mut step_norm = Vec::new();
    let mut lambda = Vec::new();
    let mut beta = Vec::new();
    let mut alpha = Vec::new();
    let mut resid = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(CliError::TraceFormat(format!(
                "row {}: expected 7 columns, got {}",
                i + 1,
                cols.len()
            )));
        }
        let num = |s: &str| -> Result<f64, CliError> {
            s.parse::<f64>().map_err(|_| {
                CliError::TraceFormat(format!("row {}: malformed number `{s}`", i + 1))
            })
        };
        let k: usize = cols[0].parse().map_err(|_| {
            CliError::TraceFormat(format!("row {}: malformed index `{}`", i + 1, cols[0]))
        })?;
        if k != i {
            return Err(CliError::TraceFormat(format!(
                "row {}: indices must be consecutive from 0, got {k}",
                i + 1
            )));
        }
        f.push(num(cols[1])?);
        step_norm.push(num(cols[2])?);
        lambda.push(num(cols[3])?);
        beta.push(num(cols[4])?);
        alpha.push(num(cols[5])?);
        resid.push(num(cols[6])?);
    }
    if f.is_empty() {
        return Err(CliError::TraceFormat("trace has no rows".into()));
    }
    // the final row carries only f(x^K); drop its zero step columns
    step_norm.pop();
    lambda.pop();
    beta.pop();
    alpha.pop();
    resid.pop();
    StepSeries::new(f, lambda, beta, alpha, step_norm, resid)
        .map_err(|e| CliError::TraceFormat(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcprox_core::dcfun::{ConvexOracle, DCProblem};
    use dcprox_core::linalg::SymMatrix;
    use dcprox_core::proxdist::{DomainC, ProxDistancePair};
    use dcprox_core::solver::{run, Algo, SolverConfig, StepSchedule};

    fn sample_trace() -> Trace {
        let g = ConvexOracle::scaled_norm_sq(1, 2.0).unwrap();
        let h = ConvexOracle::quadratic(SymMatrix::diag(&[1.0]), vec![2.0], -2.0).unwrap();
        let p = DCProblem::new(g, h, DomainC::all_space(1).unwrap()).unwrap();
        let pair = ProxDistancePair::squared_euclidean(1).unwrap();
        let cfg = SolverConfig {
            max_iter: 25,
            ..SolverConfig::default()
        };
        run(
            &p,
            &pair,
            Algo::Alg2,
            &[5.0],
            &StepSchedule::constant(0.4).unwrap(),
            &cfg,
        )
        .unwrap()
    }

    #[test]
    fn header_is_bit_exact() {
        let csv = trace_csv_string(&sample_trace());
        assert!(csv.starts_with("k,f,step_norm,lambda,beta,alpha,resid\n"));
    }

    #[test]
    fn floats_round_trip_exactly() {
        for v in [0.1, 1.0 / 3.0, 2.0_f64.sqrt(), 1e-300, -5.4321e17, 0.0] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_reload_reproduces_the_step_series() {
        let trace = sample_trace();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        write_trace_csv(&trace, &path).unwrap();
        let reloaded = read_step_series(&path).unwrap();
        let original = StepSeries::from_trace(&trace);
        assert_eq!(reloaded, original);
    }

    #[test]
    fn reload_rejects_wrong_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "k,f\n0,1.0\n").unwrap();
        assert!(matches!(
            read_step_series(&path),
            Err(CliError::TraceFormat(_))
        ));
    }
}
