//! Flat `key = value` run configurations.
//!
//! One setting per line, `#` starts a comment, vectors are comma-separated
//! decimals in brackets (`x0 = [5, 1.5]`), matrices are row-major vectors.
//! Unknown and duplicate keys are errors with their line number, as are
//! infeasible starting points: nothing runs on a typo.
//!
//! ```text
//! # minimal run
//! problem   = quadratic_dc
//! algorithm = alg2
//! distance  = sq_euclidean
//! x0        = [5]
//! lambda    = 0.4
//! max_iter  = 200
//! trace     = out/trace.csv
//! report    = out/report.txt
//! ```
//!
//! Certificates are requested by name with their constants; constants omitted
//! for a built-in problem default to the instance's declared values, which is
//! what lets `certificates = [descent, beta]` work without restating `rho`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dcprox_core::dcfun::{ConvexOracle, DCProblem};
use dcprox_core::instances;
use dcprox_core::linalg::SymMatrix;
use dcprox_core::proxdist::{DomainC, Kernel, ProxDistancePair};
use dcprox_core::solver::{Algo, SolverConfig, StepRule, StepSchedule};

use crate::CliError;

pub const KERNEL_NAMES: [&str; 4] = [
    "boltzmann_shannon",
    "burg",
    "second_order_homogeneous",
    "sq_euclidean",
];

pub const CERTIFICATE_NAMES: [&str; 4] = ["beta", "descent", "fejer", "monotone"];

/// Inline oracle description for custom problems.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    /// `1/2 x'Ax + b'x + c`, `a` row-major.
    Quadratic { a: Vec<f64>, b: Vec<f64>, c: f64 },
    /// `mu/2 ||x||^2`.
    ScaledNormSq { mu: f64 },
    /// `max_i (rows_i' x + offsets_i)`, `rows` row-major.
    AffineMax { rows: Vec<f64>, offsets: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Builtin(String),
    Custom { g: OracleSpec, h: OracleSpec },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    AllSpace,
    PositiveOrthant,
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScheduleSpec {
    Constant(f64),
    Sequence(Vec<f64>),
}

/// Certificate request with its constants already resolved.
#[derive(Debug, Clone, PartialEq)]
pub enum CertRequest {
    Beta,
    Monotone,
    Descent { rho: f64, kappa: Option<f64> },
    Fejer {
        gamma: f64,
        lipschitz: f64,
        x_bar: Vec<f64>,
    },
}

impl CertRequest {
    pub fn name(&self) -> &'static str {
        match self {
            CertRequest::Beta => "beta",
            CertRequest::Monotone => "monotone",
            CertRequest::Descent { .. } => "descent",
            CertRequest::Fejer { .. } => "fejer",
        }
    }
}

/// A fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub algorithm: Algo,
    pub kernel: Kernel,
    pub domain: DomainSpec,
    pub x0: Vec<f64>,
    pub schedule: ScheduleSpec,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_iter: usize,
    pub step_tol: f64,
    pub inner_tol: f64,
    pub seed: u64,
    pub certificates: Vec<CertRequest>,
    pub probes: usize,
    pub radius: f64,
    pub trace_path: String,
    pub report_path: String,
}

/// Everything `run` needs, built from a validated config.
pub struct Assembled {
    pub problem: DCProblem,
    pub pair: ProxDistancePair,
    pub schedule: StepSchedule,
    pub solver: SolverConfig,
    pub problem_id: String,
}

struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {line_no}: expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
            {
                return Err(CliError::Config(format!(
                    "line {line_no}: invalid key `{key}` (lowercase identifiers only)"
                )));
            }
            if value.is_empty() {
                return Err(CliError::Config(format!(
                    "line {line_no}: key `{key}` has an empty value"
                )));
            }
            if entries
                .insert(key.to_string(), (value.to_string(), line_no))
                .is_some()
            {
                return Err(CliError::Config(format!(
                    "line {line_no}: duplicate key `{key}`"
                )));
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|(_, l)| *l)
    }

    fn finish(self) -> Result<(), CliError> {
        if let Some((key, (_, line))) = self.entries.into_iter().next() {
            return Err(CliError::Config(format!(
                "line {line}: unknown key `{key}`"
            )));
        }
        Ok(())
    }
}

fn parse_scalar(key: &str, value: &str, line: usize) -> Result<f64, CliError> {
    value.parse::<f64>().map_err(|_| {
        CliError::Config(format!("line {line}: `{key}` is not a number: `{value}`"))
    })
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize, CliError> {
    value.parse::<usize>().map_err(|_| {
        CliError::Config(format!(
            "line {line}: `{key}` is not a nonnegative integer: `{value}`"
        ))
    })
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64, CliError> {
    value.parse::<u64>().map_err(|_| {
        CliError::Config(format!(
            "line {line}: `{key}` is not a nonnegative integer: `{value}`"
        ))
    })
}

fn bracket_items<'a>(key: &str, value: &'a str, line: usize) -> Result<Vec<&'a str>, CliError> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| {
            CliError::Config(format!(
                "line {line}: `{key}` must be a bracketed list like [1, 2]"
            ))
        })?;
    let items: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(CliError::Config(format!(
            "line {line}: `{key}` must not be empty"
        )));
    }
    Ok(items)
}

fn parse_vector(key: &str, value: &str, line: usize) -> Result<Vec<f64>, CliError> {
    bracket_items(key, value, line)?
        .into_iter()
        .map(|s| {
            s.parse::<f64>().map_err(|_| {
                CliError::Config(format!(
                    "line {line}: `{key}` has a malformed number `{s}`"
                ))
            })
        })
        .collect()
}

fn parse_name_list(key: &str, value: &str, line: usize) -> Result<Vec<String>, CliError> {
    Ok(bracket_items(key, value, line)?
        .into_iter()
        .map(str::to_string)
        .collect())
}

struct OracleKeys {
    kind: Option<(String, usize)>,
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    c: Option<f64>,
    mu: Option<f64>,
    rows: Option<Vec<f64>>,
    offsets: Option<Vec<f64>>,
}

fn take_oracle_keys(raw: &mut RawConfig, prefix: &str) -> Result<OracleKeys, CliError> {
    let take_vec = |raw: &mut RawConfig, name: String| -> Result<Option<Vec<f64>>, CliError> {
        match raw.take(&name) {
            Some((v, l)) => Ok(Some(parse_vector(&name, &v, l)?)),
            None => Ok(None),
        }
    };
    let take_num = |raw: &mut RawConfig, name: String| -> Result<Option<f64>, CliError> {
        match raw.take(&name) {
            Some((v, l)) => Ok(Some(parse_scalar(&name, &v, l)?)),
            None => Ok(None),
        }
    };
    Ok(OracleKeys {
        kind: raw.take(&format!("{prefix}_kind")),
        a: take_vec(raw, format!("{prefix}_a"))?,
        b: take_vec(raw, format!("{prefix}_b"))?,
        c: take_num(raw, format!("{prefix}_c"))?,
        mu: take_num(raw, format!("{prefix}_mu"))?,
        rows: take_vec(raw, format!("{prefix}_rows"))?,
        offsets: take_vec(raw, format!("{prefix}_offsets"))?,
    })
}

fn oracle_spec_from_keys(prefix: &str, keys: OracleKeys) -> Result<OracleSpec, CliError> {
    let (kind, line) = keys.kind.ok_or_else(|| {
        CliError::Config(format!(
            "custom problems need `{prefix}_kind` (quadratic, scaled_norm_sq, or affine_max)"
        ))
    })?;
    let forbid = |cond: bool, what: &str| -> Result<(), CliError> {
        if cond {
            Err(CliError::Config(format!(
                "line {line}: `{prefix}_kind = {kind}` does not take `{prefix}_{what}`"
            )))
        } else {
            Ok(())
        }
    };
    match kind.as_str() {
        "quadratic" => {
            forbid(keys.mu.is_some(), "mu")?;
            forbid(keys.rows.is_some(), "rows")?;
            forbid(keys.offsets.is_some(), "offsets")?;
            Ok(OracleSpec::Quadratic {
                a: keys.a.ok_or_else(|| {
                    CliError::Config(format!("`{prefix}_a` required for a quadratic oracle"))
                })?,
                b: keys.b.ok_or_else(|| {
                    CliError::Config(format!("`{prefix}_b` required for a quadratic oracle"))
                })?,
                c: keys.c.unwrap_or(0.0),
            })
        }
        "scaled_norm_sq" => {
            forbid(keys.a.is_some(), "a")?;
            forbid(keys.b.is_some(), "b")?;
            forbid(keys.c.is_some(), "c")?;
            forbid(keys.rows.is_some(), "rows")?;
            forbid(keys.offsets.is_some(), "offsets")?;
            Ok(OracleSpec::ScaledNormSq {
                mu: keys.mu.ok_or_else(|| {
                    CliError::Config(format!("`{prefix}_mu` required for scaled_norm_sq"))
                })?,
            })
        }
        "affine_max" => {
            forbid(keys.a.is_some(), "a")?;
            forbid(keys.b.is_some(), "b")?;
            forbid(keys.c.is_some(), "c")?;
            forbid(keys.mu.is_some(), "mu")?;
            Ok(OracleSpec::AffineMax {
                rows: keys.rows.ok_or_else(|| {
                    CliError::Config(format!("`{prefix}_rows` required for affine_max"))
                })?,
                offsets: keys.offsets.ok_or_else(|| {
                    CliError::Config(format!("`{prefix}_offsets` required for affine_max"))
                })?,
            })
        }
        other => Err(CliError::Config(format!(
            "line {line}: unknown `{prefix}_kind` `{other}`; valid kinds: affine_max, quadratic, scaled_norm_sq"
        ))),
    }
}

fn build_oracle(spec: &OracleSpec, dim: usize) -> Result<ConvexOracle, CliError> {
    let oracle = match spec {
        OracleSpec::Quadratic { a, b, c } => {
            if a.len() != dim * dim {
                return Err(CliError::Config(format!(
                    "quadratic matrix needs {} row-major entries for dimension {dim}, got {}",
                    dim * dim,
                    a.len()
                )));
            }
            ConvexOracle::quadratic(SymMatrix::new(dim, a.clone())?, b.clone(), *c)?
        }
        OracleSpec::ScaledNormSq { mu } => ConvexOracle::scaled_norm_sq(dim, *mu)?,
        OracleSpec::AffineMax { rows, offsets } => {
            if rows.len() % dim != 0 || rows.is_empty() {
                return Err(CliError::Config(format!(
                    "affine_max rows must be a multiple of the dimension {dim}, got {} entries",
                    rows.len()
                )));
            }
            let mat: Vec<Vec<f64>> = rows.chunks(dim).map(|r| r.to_vec()).collect();
            ConvexOracle::affine_max(mat, offsets.clone())?
        }
    };
    Ok(oracle)
}

/// Parses and fully validates a configuration. Every error names its source
/// line; semantic errors (unknown kernel, infeasible `x0`, missing
/// certificate constants) surface here, before any iteration runs.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut raw = RawConfig::parse(text)?;

    let require = |raw: &mut RawConfig, key: &str| -> Result<(String, usize), CliError> {
        raw.take(key)
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))
    };

    // problem
    let (problem_name, _) = require(&mut raw, "problem")?;
    let problem = if problem_name == "custom" {
        let g = oracle_spec_from_keys("g", take_oracle_keys(&mut raw, "g")?)?;
        let h = oracle_spec_from_keys("h", take_oracle_keys(&mut raw, "h")?)?;
        ProblemSpec::Custom { g, h }
    } else {
        ProblemSpec::Builtin(problem_name)
    };

    // algorithm
    let (algo_s, algo_line) = require(&mut raw, "algorithm")?;
    let algorithm = match algo_s.as_str() {
        "alg1" => Algo::Alg1,
        "alg2" => Algo::Alg2,
        other => {
            return Err(CliError::Config(format!(
                "line {algo_line}: unknown algorithm `{other}`; valid algorithms: alg1, alg2"
            )))
        }
    };

    // distance kernel
    let (kernel_s, kernel_line) = require(&mut raw, "distance")?;
    let theta = match raw.take("theta") {
        Some((v, l)) => {
            if kernel_s != "second_order_homogeneous" {
                return Err(CliError::Config(format!(
                    "line {l}: `theta` only applies to second_order_homogeneous"
                )));
            }
            Some(parse_scalar("theta", &v, l)?)
        }
        None => None,
    };
    let kernel = match kernel_s.as_str() {
        "sq_euclidean" => Kernel::SquaredEuclidean,
        "boltzmann_shannon" => Kernel::BoltzmannShannon,
        "burg" => Kernel::Burg,
        "second_order_homogeneous" => Kernel::SecondOrderHomogeneous {
            theta: theta.unwrap_or(1.0),
        },
        other => {
            return Err(CliError::Config(format!(
                "line {kernel_line}: unknown distance `{other}`; valid kernels: {}",
                KERNEL_NAMES.join(", ")
            )))
        }
    };

    // x0
    let (x0_s, x0_line) = require(&mut raw, "x0")?;
    let x0 = parse_vector("x0", &x0_s, x0_line)?;

    // domain
    let domain = match raw.take("domain") {
        Some((v, l)) => match v.as_str() {
            "all_space" => {
                if raw.line("box_lower").is_some() || raw.line("box_upper").is_some() {
                    return Err(CliError::Config(format!(
                        "line {l}: box bounds given for a non-box domain"
                    )));
                }
                DomainSpec::AllSpace
            }
            "positive_orthant" => DomainSpec::PositiveOrthant,
            "box" => {
                let (lo_s, lo_l) = require(&mut raw, "box_lower")?;
                let (hi_s, hi_l) = require(&mut raw, "box_upper")?;
                DomainSpec::Box {
                    lower: parse_vector("box_lower", &lo_s, lo_l)?,
                    upper: parse_vector("box_upper", &hi_s, hi_l)?,
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "line {l}: unknown domain `{other}`; valid domains: all_space, box, positive_orthant"
                )))
            }
        },
        None => default_domain_spec(&problem, kernel)?,
    };

    // schedule
    let lambda = raw.take("lambda");
    let lambda_seq = raw.take("lambda_seq");
    let schedule = match (lambda, lambda_seq) {
        (Some((v, l)), None) => ScheduleSpec::Constant(parse_scalar("lambda", &v, l)?),
        (None, Some((v, l))) => ScheduleSpec::Sequence(parse_vector("lambda_seq", &v, l)?),
        (Some(_), Some((_, l))) => {
            return Err(CliError::Config(format!(
                "line {l}: give either `lambda` or `lambda_seq`, not both"
            )))
        }
        (None, None) => {
            return Err(CliError::Config(
                "missing required key `lambda` (or `lambda_seq`)".into(),
            ))
        }
    };
    let (default_min, default_max) = match &schedule {
        ScheduleSpec::Constant(v) => (*v, *v),
        ScheduleSpec::Sequence(seq) => (
            seq.iter().cloned().fold(f64::INFINITY, f64::min),
            seq.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        ),
    };
    let lambda_min = match raw.take("lambda_min") {
        Some((v, l)) => parse_scalar("lambda_min", &v, l)?,
        None => default_min,
    };
    let lambda_max = match raw.take("lambda_max") {
        Some((v, l)) => parse_scalar("lambda_max", &v, l)?,
        None => default_max,
    };

    // solver knobs
    let max_iter = match raw.take("max_iter") {
        Some((v, l)) => parse_usize("max_iter", &v, l)?,
        None => 10_000,
    };
    let step_tol = match raw.take("step_tol") {
        Some((v, l)) => parse_scalar("step_tol", &v, l)?,
        None => 1e-10,
    };
    let inner_tol = match raw.take("inner_tol") {
        Some((v, l)) => parse_scalar("inner_tol", &v, l)?,
        None => 1e-8,
    };
    let seed = match raw.take("seed") {
        Some((v, l)) => parse_u64("seed", &v, l)?,
        None => 0,
    };
    let probes = match raw.take("probes") {
        Some((v, l)) => parse_usize("probes", &v, l)?,
        None => 200,
    };
    let radius = match raw.take("radius") {
        Some((v, l)) => parse_scalar("radius", &v, l)?,
        None => 1.0,
    };

    // certificate constants (may default from the instance metadata)
    let rho = match raw.take("rho") {
        Some((v, l)) => Some(parse_scalar("rho", &v, l)?),
        None => None,
    };
    let kappa = match raw.take("kappa") {
        Some((v, l)) => Some(parse_scalar("kappa", &v, l)?),
        None => None,
    };
    let gamma = match raw.take("gamma") {
        Some((v, l)) => Some(parse_scalar("gamma", &v, l)?),
        None => None,
    };
    let lipschitz = match raw.take("lipschitz") {
        Some((v, l)) => Some(parse_scalar("lipschitz", &v, l)?),
        None => None,
    };
    let x_bar = match raw.take("x_bar") {
        Some((v, l)) => Some(parse_vector("x_bar", &v, l)?),
        None => None,
    };
    let cert_names = match raw.take("certificates") {
        Some((v, l)) => parse_name_list("certificates", &v, l)?,
        None => Vec::new(),
    };

    // outputs
    let (trace_path, _) = require(&mut raw, "trace")?;
    let (report_path, _) = require(&mut raw, "report")?;

    raw.finish()?;

    // resolve certificate constants against the instance metadata
    let meta = match &problem {
        ProblemSpec::Builtin(name) => instances::info(name).ok(),
        ProblemSpec::Custom { .. } => None,
    };
    let mut certificates = Vec::new();
    for name in cert_names {
        let req = match name.as_str() {
            "beta" => CertRequest::Beta,
            "monotone" => CertRequest::Monotone,
            "descent" => {
                let rho = rho.or(meta.as_ref().map(|m| m.rho)).ok_or_else(|| {
                    CliError::Config(
                        "certificate `descent` needs `rho` (not declared by this problem)".into(),
                    )
                })?;
                let kappa = kappa.or(meta.as_ref().and_then(|m| m.kappa));
                if algorithm == Algo::Alg1 && kappa.is_none() {
                    return Err(CliError::Config(
                        "certificate `descent` under alg1 needs `kappa` (not declared by this problem)"
                            .into(),
                    ));
                }
                CertRequest::Descent { rho, kappa }
            }
            "fejer" => {
                let gamma = gamma.or(meta.as_ref().map(|m| m.gamma)).ok_or_else(|| {
                    CliError::Config("certificate `fejer` needs `gamma`".into())
                })?;
                if gamma <= 0.0 {
                    return Err(CliError::Config(format!(
                        "certificate `fejer` needs a strongly convex g (gamma > 0), got {gamma}"
                    )));
                }
                let lipschitz = lipschitz
                    .or(meta.as_ref().and_then(|m| m.smooth_l))
                    .ok_or_else(|| {
                        CliError::Config(
                            "certificate `fejer` needs `lipschitz` (h must be smooth)".into(),
                        )
                    })?;
                let x_bar = x_bar.clone().ok_or(()).or_else(|_| {
                    default_x_bar(&problem).ok_or_else(|| {
                        CliError::Config(
                            "certificate `fejer` needs `x_bar` (no declared critical point)".into(),
                        )
                    })
                })?;
                CertRequest::Fejer {
                    gamma,
                    lipschitz,
                    x_bar,
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown certificate `{other}`; valid certificates: {}",
                    CERTIFICATE_NAMES.join(", ")
                )))
            }
        };
        certificates.push(req);
    }

    let cfg = RunConfig {
        problem,
        algorithm,
        kernel,
        domain,
        x0,
        schedule,
        lambda_min,
        lambda_max,
        max_iter,
        step_tol,
        inner_tol,
        seed,
        certificates,
        probes,
        radius,
        trace_path,
        report_path,
    };

    // full semantic validation, including x0 interiority, happens by
    // assembling once up front
    assemble(&cfg).map_err(|e| match e {
        CliError::Core(inner) => CliError::Config(format!(
            "line {x0_line}: configuration rejected: {inner}"
        )),
        other => other,
    })?;
    Ok(cfg)
}

fn default_domain_spec(problem: &ProblemSpec, kernel: Kernel) -> Result<DomainSpec, CliError> {
    match problem {
        ProblemSpec::Builtin(name) => {
            let d = instances::default_domain(name, kernel)?;
            Ok(match d {
                DomainC::AllSpace { .. } => DomainSpec::AllSpace,
                DomainC::PositiveOrthant { .. } => DomainSpec::PositiveOrthant,
                DomainC::OpenBox { lower, upper } => DomainSpec::Box { lower, upper },
            })
        }
        ProblemSpec::Custom { .. } => Ok(match kernel {
            Kernel::SquaredEuclidean => DomainSpec::AllSpace,
            _ => DomainSpec::PositiveOrthant,
        }),
    }
}

fn default_x_bar(problem: &ProblemSpec) -> Option<Vec<f64>> {
    match problem {
        ProblemSpec::Builtin(name) => {
            let domain = instances::default_domain(name, Kernel::SquaredEuclidean).ok()?;
            let p = instances::build(name, domain).ok()?;
            p.known_minimizer
                .clone()
                .or_else(|| p.known_critical_points.first().cloned())
        }
        ProblemSpec::Custom { .. } => None,
    }
}

/// Builds the concrete problem, distance pair, schedule, and solver settings.
pub fn assemble(cfg: &RunConfig) -> Result<Assembled, CliError> {
    let dim = cfg.x0.len();
    let domain = match &cfg.domain {
        DomainSpec::AllSpace => DomainC::all_space(dim)?,
        DomainSpec::PositiveOrthant => DomainC::positive_orthant(dim)?,
        DomainSpec::Box { lower, upper } => DomainC::open_box(lower.clone(), upper.clone())?,
    };
    let (problem, problem_id) = match &cfg.problem {
        ProblemSpec::Builtin(name) => (instances::build(name, domain.clone())?, name.clone()),
        ProblemSpec::Custom { g, h } => (
            DCProblem::new(build_oracle(g, dim)?, build_oracle(h, dim)?, domain.clone())?,
            "custom".to_string(),
        ),
    };
    let pair = ProxDistancePair::new(cfg.kernel, domain)?;
    pair.domain().check_interior(&cfg.x0)?;
    let rule = match &cfg.schedule {
        ScheduleSpec::Constant(v) => StepRule::Constant(*v),
        ScheduleSpec::Sequence(seq) => StepRule::Sequence(seq.clone()),
    };
    let schedule = StepSchedule::new(rule, cfg.lambda_min, cfg.lambda_max)?;
    let solver = SolverConfig {
        max_iter: cfg.max_iter,
        step_tol: cfg.step_tol,
        inner_tol: cfg.inner_tol,
        record_certificates: true,
        probe_seed: cfg.seed,
    };
    solver.validate()?;
    Ok(Assembled {
        problem,
        pair,
        schedule,
        solver,
        problem_id,
    })
}

fn fmt_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", items.join(", "))
}

impl RunConfig {
    /// Canonical `key = value` rendering; parsing it back yields an equal
    /// configuration.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        match &self.problem {
            ProblemSpec::Builtin(name) => {
                let _ = writeln!(out, "problem = {name}");
            }
            ProblemSpec::Custom { g, h } => {
                let _ = writeln!(out, "problem = custom");
                write_oracle(&mut out, "g", g);
                write_oracle(&mut out, "h", h);
            }
        }
        let _ = writeln!(out, "algorithm = {}", self.algorithm.name());
        let _ = writeln!(out, "distance = {}", self.kernel.name());
        if let Kernel::SecondOrderHomogeneous { theta } = self.kernel {
            let _ = writeln!(out, "theta = {theta}");
        }
        match &self.domain {
            DomainSpec::AllSpace => {
                let _ = writeln!(out, "domain = all_space");
            }
            DomainSpec::PositiveOrthant => {
                let _ = writeln!(out, "domain = positive_orthant");
            }
            DomainSpec::Box { lower, upper } => {
                let _ = writeln!(out, "domain = box");
                let _ = writeln!(out, "box_lower = {}", fmt_vec(lower));
                let _ = writeln!(out, "box_upper = {}", fmt_vec(upper));
            }
        }
        let _ = writeln!(out, "x0 = {}", fmt_vec(&self.x0));
        match &self.schedule {
            ScheduleSpec::Constant(v) => {
                let _ = writeln!(out, "lambda = {v}");
            }
            ScheduleSpec::Sequence(seq) => {
                let _ = writeln!(out, "lambda_seq = {}", fmt_vec(seq));
            }
        }
        let _ = writeln!(out, "lambda_min = {}", self.lambda_min);
        let _ = writeln!(out, "lambda_max = {}", self.lambda_max);
        let _ = writeln!(out, "max_iter = {}", self.max_iter);
        let _ = writeln!(out, "step_tol = {}", self.step_tol);
        let _ = writeln!(out, "inner_tol = {}", self.inner_tol);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "probes = {}", self.probes);
        let _ = writeln!(out, "radius = {}", self.radius);
        if !self.certificates.is_empty() {
            let names: Vec<&str> = self.certificates.iter().map(|c| c.name()).collect();
            let _ = writeln!(out, "certificates = [{}]", names.join(", "));
            for c in &self.certificates {
                match c {
                    CertRequest::Descent { rho, kappa } => {
                        let _ = writeln!(out, "rho = {rho}");
                        if let Some(k) = kappa {
                            let _ = writeln!(out, "kappa = {k}");
                        }
                    }
                    CertRequest::Fejer {
                        gamma,
                        lipschitz,
                        x_bar,
                    } => {
                        let _ = writeln!(out, "gamma = {gamma}");
                        let _ = writeln!(out, "lipschitz = {lipschitz}");
                        let _ = writeln!(out, "x_bar = {}", fmt_vec(x_bar));
                    }
                    CertRequest::Beta | CertRequest::Monotone => {}
                }
            }
        }
        let _ = writeln!(out, "trace = {}", self.trace_path);
        let _ = writeln!(out, "report = {}", self.report_path);
        out
    }
}

fn write_oracle(out: &mut String, prefix: &str, spec: &OracleSpec) {
    match spec {
        OracleSpec::Quadratic { a, b, c } => {
            let _ = writeln!(out, "{prefix}_kind = quadratic");
            let _ = writeln!(out, "{prefix}_a = {}", fmt_vec(a));
            let _ = writeln!(out, "{prefix}_b = {}", fmt_vec(b));
            let _ = writeln!(out, "{prefix}_c = {c}");
        }
        OracleSpec::ScaledNormSq { mu } => {
            let _ = writeln!(out, "{prefix}_kind = scaled_norm_sq");
            let _ = writeln!(out, "{prefix}_mu = {mu}");
        }
        OracleSpec::AffineMax { rows, offsets } => {
            let _ = writeln!(out, "{prefix}_kind = affine_max");
            let _ = writeln!(out, "{prefix}_rows = {}", fmt_vec(rows));
            let _ = writeln!(out, "{prefix}_offsets = {}", fmt_vec(offsets));
        }
    }
}
