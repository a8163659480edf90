//! Acceptance suite: one test per criterion, each pinned to its stated
//! tolerance and printing a PASS line on success (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::path::Path;
use std::time::Instant;

use dcprox_core::dcfun::DCProblem;
use dcprox_core::diagnostics::{
    beta_certificate, brute_force_min, criticality_residual, descent_certificate_alg1,
    descent_certificate_alg2, fejer_certificate, finite_diff_grad, monotone_certificate,
};
use dcprox_core::instances;
use dcprox_core::linalg;
use dcprox_core::proxdist::{DomainC, Kernel, ProxDistancePair};
use dcprox_core::solver::{run, Algo, SolverConfig, StepSchedule, Termination, Trace};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KERNELS: [Kernel; 4] = [
    Kernel::SquaredEuclidean,
    Kernel::BoltzmannShannon,
    Kernel::Burg,
    Kernel::SecondOrderHomogeneous { theta: 1.0 },
];

fn shipped_pair(kernel: Kernel, dim: usize) -> ProxDistancePair {
    let domain = match kernel {
        Kernel::SquaredEuclidean => DomainC::all_space(dim).unwrap(),
        _ => DomainC::positive_orthant(dim).unwrap(),
    };
    ProxDistancePair::new(kernel, domain).unwrap()
}

fn interior_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| 0.05 + 19.95 * rng.gen::<f64>()).collect()
}

/// One solver run of the acceptance matrix.
struct Combo {
    instance: &'static str,
    kernel: Kernel,
    algo: Algo,
    x0: Vec<f64>,
    lambda: f64,
    max_iter: usize,
}

impl Combo {
    fn id(&self) -> String {
        format!(
            "{} x {} x {}",
            self.instance,
            self.kernel.name(),
            self.algo.name()
        )
    }

    fn execute(&self) -> (DCProblem, ProxDistancePair, Trace) {
        let domain = instances::default_domain(self.instance, self.kernel).unwrap();
        let problem = instances::build(self.instance, domain.clone()).unwrap();
        let pair = ProxDistancePair::new(self.kernel, domain).unwrap();
        let schedule = StepSchedule::new(
            dcprox_core::solver::StepRule::Constant(self.lambda),
            (0.5 * self.lambda).min(self.lambda),
            self.lambda,
        )
        .unwrap();
        let cfg = SolverConfig {
            max_iter: self.max_iter,
            step_tol: 1e-12,
            inner_tol: 1e-8,
            ..SolverConfig::default()
        };
        let trace = run(&problem, &pair, self.algo, &self.x0, &schedule, &cfg).unwrap();
        (problem, pair, trace)
    }

    /// Alg1 and the Euclidean-quadratic Alg2 route are closed forms; the
    /// remaining Alg2 routes go through the Newton inner solver.
    fn closed_form(&self) -> bool {
        self.algo == Algo::Alg1
            || (matches!(self.kernel, Kernel::SquaredEuclidean)
                && self.instance != "abs_quadratic_dc")
    }
}

/// Instance x kernel x algorithm matrix used by criteria 2 and 3. Every
/// shipped instance appears with every compatible pair and both algorithms
/// where supported.
fn stationarity_matrix() -> Vec<Combo> {
    let mut combos = Vec::new();
    let all_kernel_instances: [(&str, Vec<f64>, f64); 5] = [
        ("quadratic_dc", vec![5.0], 0.4),
        ("quadratic2d_dc", vec![3.0, 2.5], 0.3),
        ("halfsq_dc", vec![1.0], 0.4),
        ("absdiff_dc", vec![0.9], 0.5),
        ("maxsum2d_dc", vec![2.0, 2.0], 0.4),
    ];
    for (instance, x0, lambda) in all_kernel_instances {
        for kernel in KERNELS {
            for algo in [Algo::Alg1, Algo::Alg2] {
                combos.push(Combo {
                    instance,
                    kernel,
                    algo,
                    x0: x0.clone(),
                    lambda,
                    max_iter: 300,
                });
            }
        }
    }
    // zero_dc: fixed point after one step under every kernel
    for kernel in KERNELS {
        for algo in [Algo::Alg1, Algo::Alg2] {
            combos.push(Combo {
                instance: "zero_dc",
                kernel,
                algo,
                x0: vec![1.5],
                lambda: 1.0,
                max_iter: 10,
            });
        }
    }
    // abs_quadratic_dc has nonsmooth g: subgradient algorithm only
    for kernel in KERNELS {
        combos.push(Combo {
            instance: "abs_quadratic_dc",
            kernel,
            algo: Algo::Alg1,
            x0: vec![0.9],
            lambda: 0.3,
            max_iter: 60,
        });
    }
    // the box instance pairs with the Euclidean kernel only
    for algo in [Algo::Alg1, Algo::Alg2] {
        combos.push(Combo {
            instance: "concave_box_dc",
            kernel: Kernel::SquaredEuclidean,
            algo,
            x0: vec![1.0],
            lambda: 0.1,
            max_iter: 300,
        });
    }
    combos
}

#[test]
fn acceptance_1_distance_axiom_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC1);
    for kernel in KERNELS {
        let pair = shipped_pair(kernel, 3);
        // 1000 random admissible triples: three-point inequality residual
        for _ in 0..1000 {
            let z = interior_point(&mut rng, 3);
            let x = interior_point(&mut rng, 3);
            let y = interior_point(&mut rng, 3);
            let r = pair.h2_residual(&z, &x, &y).unwrap();
            assert!(
                r >= -1e-12,
                "{}: three-point residual {r:e} at z={z:?} x={x:?} y={y:?}",
                kernel.name()
            );
        }
        // d(y,y) = 0 and grad1_d(y,y) = 0 at 100 interior points
        for _ in 0..100 {
            let y = interior_point(&mut rng, 3);
            assert_eq!(pair.eval_d(&y, &y).unwrap(), 0.0, "{}", kernel.name());
            let g = pair.grad1_d(&y, &y).unwrap();
            assert!(
                linalg::norm2(&g) <= 1e-14,
                "{}: grad at diagonal {g:?}",
                kernel.name()
            );
        }
        // analytic gradient vs central differences at 100 interior points
        for _ in 0..100 {
            let x = interior_point(&mut rng, 3);
            let y = interior_point(&mut rng, 3);
            let fd = finite_diff_grad(|p| pair.eval_d(p, &y).unwrap(), &x, 1e-6).unwrap();
            let an = pair.grad1_d(&x, &y).unwrap();
            let rel = linalg::dist2(&fd, &an) / linalg::norm2(&an).max(1.0);
            assert!(rel <= 1e-5, "{}: fd mismatch {rel:e}", kernel.name());
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "axiom suite took {elapsed:?}");
    println!("ACCEPTANCE 1 (distance axiom suite, 4 kernels): PASS in {elapsed:?}");
}

#[test]
fn acceptance_2_stationarity_certificates() {
    let started = Instant::now();
    let combos = stationarity_matrix();
    assert!(combos.len() >= 12, "matrix has {} combos", combos.len());
    for combo in &combos {
        let (problem, _pair, trace) = combo.execute();
        assert!(!trace.is_empty(), "{}: empty trace", combo.id());
        let tol = if combo.closed_form() { 1e-10 } else { 1e-8 };
        for rec in &trace.records {
            assert!(
                rec.resid <= tol,
                "{}: residual {:e} > {tol:e} at k={}",
                combo.id(),
                rec.resid,
                rec.k
            );
            assert!(
                problem.domain.is_strictly_inside(&rec.x),
                "{}: iterate left the interior at k={}",
                combo.id(),
                rec.k
            );
        }
        // the box instance always ends at the wall, and the barrier kernels
        // can legitimately collapse onto a boundary minimizer faster than
        // the interiority margin allows; everything else stops regularly
        if combo.instance == "concave_box_dc" {
            assert_eq!(trace.termination, Termination::InfeasibleStep, "{}", combo.id());
        } else {
            let boundary_collapse_ok = combo.instance == "abs_quadratic_dc"
                && !matches!(combo.kernel, Kernel::SquaredEuclidean);
            assert!(
                trace.termination.is_regular()
                    || (boundary_collapse_ok
                        && trace.termination == Termination::InfeasibleStep),
                "{}: {:?}",
                combo.id(),
                trace.termination
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0);
    println!(
        "ACCEPTANCE 2 (stationarity residuals on {} combos): PASS in {elapsed:?}",
        combos.len()
    );
}

#[test]
fn acceptance_3_descent_and_beta() {
    let combos = stationarity_matrix();
    let mut descent_checked = 0;
    let mut rho_above_kappa_checked = 0;
    for combo in &combos {
        let (problem, _pair, trace) = combo.execute();
        // beta_k >= -1e-12 always, including rho <= kappa configurations
        let beta = beta_certificate(&trace);
        assert!(
            beta.min_slack >= -1e-12,
            "{}: beta {:e}",
            combo.id(),
            beta.min_slack
        );
        // descent certificates wherever the hypotheses hold
        let rho = problem.h.strong_convexity_modulus();
        if rho <= 0.0 {
            continue;
        }
        match combo.algo {
            Algo::Alg1 => {
                let Some(kappa) = problem.g.subdiff_lipschitz() else {
                    continue;
                };
                let cert = descent_certificate_alg1(&trace, rho, kappa).unwrap();
                assert!(
                    cert.min_slack >= -1e-9,
                    "{}: descent slack {:e}",
                    combo.id(),
                    cert.min_slack
                );
                descent_checked += 1;
                if rho > kappa {
                    rho_above_kappa_checked += 1;
                    // in this regime the objective is also monotone
                    let mono = monotone_certificate(&trace);
                    assert!(
                        mono.min_slack >= -1e-10,
                        "{}: monotone slack {:e}",
                        combo.id(),
                        mono.min_slack
                    );
                }
            }
            Algo::Alg2 => {
                let cert = descent_certificate_alg2(&trace, rho).unwrap();
                assert!(
                    cert.min_slack >= -1e-9,
                    "{}: descent slack {:e}",
                    combo.id(),
                    cert.min_slack
                );
                descent_checked += 1;
            }
        }
    }
    assert!(descent_checked >= 12, "only {descent_checked} descent checks ran");
    assert!(
        rho_above_kappa_checked >= 1,
        "the rho > kappa regime must be exercised"
    );
    println!(
        "ACCEPTANCE 3 (descent on {descent_checked} traces, beta everywhere, \
         {rho_above_kappa_checked} rho>kappa): PASS"
    );
}

/// Converging configurations for the desk-scale critical-point check:
/// every run below reaches an interior (or declared boundary) critical point
/// at a linear rate.
fn convergence_matrix() -> Vec<Combo> {
    let mut combos = Vec::new();
    for kernel in KERNELS {
        for algo in [Algo::Alg1, Algo::Alg2] {
            combos.push(Combo {
                instance: "quadratic_dc",
                kernel,
                algo,
                x0: vec![5.0],
                lambda: 0.4,
                max_iter: 10_000,
            });
            combos.push(Combo {
                instance: "quadratic2d_dc",
                kernel,
                algo,
                x0: vec![3.0, 2.5],
                lambda: 0.3,
                max_iter: 10_000,
            });
        }
    }
    for algo in [Algo::Alg1, Algo::Alg2] {
        combos.push(Combo {
            instance: "absdiff_dc",
            kernel: Kernel::SquaredEuclidean,
            algo,
            x0: vec![0.9],
            lambda: 0.5,
            max_iter: 10_000,
        });
        combos.push(Combo {
            instance: "halfsq_dc",
            kernel: Kernel::SquaredEuclidean,
            algo,
            x0: vec![1.0],
            lambda: 0.4,
            max_iter: 10_000,
        });
        for kernel in [Kernel::SquaredEuclidean, Kernel::BoltzmannShannon] {
            combos.push(Combo {
                instance: "maxsum2d_dc",
                kernel,
                algo,
                x0: vec![2.0, 2.0],
                lambda: 0.4,
                max_iter: 10_000,
            });
        }
    }
    combos
}

#[test]
fn acceptance_4_critical_points_at_desk_scale() {
    let started = Instant::now();
    #[allow(clippy::type_complexity)]
    let grid_box: &[(&str, (Vec<f64>, Vec<f64>))] = &[
        ("quadratic_dc", (vec![0.0], vec![5.0])),
        ("quadratic2d_dc", (vec![0.0, 0.0], vec![3.0, 3.0])),
        ("halfsq_dc", (vec![0.0], vec![3.0])),
        ("maxsum2d_dc", (vec![0.0, 0.0], vec![3.0, 3.0])),
    ];
    let combos = convergence_matrix();
    for combo in &combos {
        let (problem, _pair, trace) = combo.execute();
        assert!(trace.termination.is_regular(), "{}", combo.id());
        let x_final = trace.final_x();
        let resid = criticality_residual(&problem, x_final, 200, 1.0, 0).unwrap();
        assert!(
            resid <= 1e-6,
            "{}: final criticality residual {resid:e} at {x_final:?}",
            combo.id()
        );
        // where a minimizer is declared, the grid oracle must agree with the
        // final iterate to within two grid cells
        if problem.known_minimizer.is_some() {
            let (lo, hi) = grid_box
                .iter()
                .find(|(n, _)| *n == combo.instance)
                .map(|(_, b)| b.clone())
                .unwrap();
            let resolution = 401;
            let (x_grid, _) = brute_force_min(&problem, &lo, &hi, resolution).unwrap();
            let cell = (0..lo.len())
                .map(|i| (hi[i] - lo[i]) / ((resolution - 1) as f64))
                .fold(0.0f64, f64::max);
            let gap = x_final
                .iter()
                .zip(&x_grid)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(
                gap <= 2.0 * cell + 1e-12,
                "{}: final {x_final:?} vs grid {x_grid:?} (cell {cell})",
                combo.id()
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0);
    println!(
        "ACCEPTANCE 4 (criticality residual + grid oracle on {} runs): PASS in {elapsed:?}",
        combos.len()
    );
}

#[test]
fn acceptance_5_fejer_and_full_sequence_convergence() {
    // gamma = 2, L = 1, so gamma > L + 1/2: the contraction regime
    let (gamma, lipschitz) = (2.0, 1.0);
    let x_bar = [2.0];
    let starts = [0.5, 1.0, 3.0, 4.5, 7.0];
    let mut runs = 0;
    for kernel in [Kernel::SquaredEuclidean, Kernel::BoltzmannShannon] {
        for algo in [Algo::Alg1, Algo::Alg2] {
            for x0 in starts {
                let combo = Combo {
                    instance: "quadratic_dc",
                    kernel,
                    algo,
                    x0: vec![x0],
                    lambda: 0.4,
                    max_iter: 10_000,
                };
                let (problem, pair, trace) = combo.execute();
                let gap = (trace.final_x()[0] - x_bar[0]).abs();
                assert!(
                    gap <= 1e-6,
                    "{} from {x0}: |x_K - x_bar| = {gap:e}",
                    combo.id()
                );
                let cert =
                    fejer_certificate(&problem, &trace, &pair, &x_bar, gamma, lipschitz, 0)
                        .unwrap();
                assert!(
                    cert.min_slack >= -1e-9,
                    "{} from {x0}: fejer slack {:e}",
                    combo.id(),
                    cert.min_slack
                );
                runs += 1;
            }
        }
    }
    assert_eq!(runs, 20);
    println!("ACCEPTANCE 5 (Fejér + full-sequence convergence, {runs} runs): PASS");
}

#[test]
fn acceptance_6_negative_controls() {
    // (a) rho > kappa violated (rho = 0 <= kappa = 1) with a large step:
    // the objective oscillates and the monotone certificate says so
    let combo = Combo {
        instance: "absdiff_dc",
        kernel: Kernel::SquaredEuclidean,
        algo: Algo::Alg1,
        x0: vec![0.9],
        lambda: 3.0,
        max_iter: 60,
    };
    let (_, _, trace) = combo.execute();
    // the expanding oscillation may drift onto a dyadic float that is
    // exactly critical, so both regular terminations are legitimate
    assert!(trace.termination.is_regular());
    assert!(trace.len() >= 10, "oscillation must actually unfold");
    let mono = monotone_certificate(&trace);
    assert!(!mono.passed, "non-monotone trace must be reported");
    assert!(mono.min_slack < -1e-3, "oscillation is genuine: {:e}", mono.min_slack);
    let beta = beta_certificate(&trace);
    assert!(beta.passed, "beta stays nonnegative even here: {:e}", beta.min_slack);

    // (b) an overstated strong-convexity modulus is caught, not masked
    let good = Combo {
        instance: "quadratic_dc",
        kernel: Kernel::SquaredEuclidean,
        algo: Algo::Alg2,
        x0: vec![5.0],
        lambda: 0.4,
        max_iter: 200,
    };
    let (_, _, trace) = good.execute();
    let honest = descent_certificate_alg2(&trace, 1.0).unwrap();
    assert!(honest.passed);
    let overstated = descent_certificate_alg2(&trace, 10.0).unwrap();
    assert!(!overstated.passed);
    assert!(overstated.min_slack < 0.0);
    println!("ACCEPTANCE 6 (negative controls report instead of masking): PASS");
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> (String, std::path::PathBuf) {
    let trace = dir.join(format!("{name}.csv"));
    let report = dir.join(format!("{name}.txt"));
    let cfg_path = dir.join(format!("{name}.cfg"));
    std::fs::write(
        &cfg_path,
        format!(
            "{body}trace = {}\nreport = {}\n",
            trace.display(),
            report.display()
        ),
    )
    .unwrap();
    (cfg_path.display().to_string(), trace)
}

#[test]
fn acceptance_7_cli_determinism() {
    // the full CLI matrix twice with the same seed: byte-identical traces
    let matrix: &[(&str, &str)] = &[
        (
            "quad_alg2_euclid",
            "problem = quadratic_dc\ndistance = sq_euclidean\nalgorithm = alg2\nx0 = [5]\nlambda = 0.4\nseed = 42\ncertificates = [descent, beta, fejer]\n",
        ),
        (
            "quad_alg1_entropy",
            "problem = quadratic_dc\ndistance = boltzmann_shannon\nalgorithm = alg1\nx0 = [5]\nlambda = 0.4\nseed = 42\ncertificates = [descent, beta]\n",
        ),
        (
            "quad2d_alg2_soh",
            "problem = quadratic2d_dc\ndistance = second_order_homogeneous\ntheta = 1\nalgorithm = alg2\nx0 = [3, 2.5]\nlambda = 0.3\nseed = 42\n",
        ),
        (
            "quad2d_alg1_burg",
            "problem = quadratic2d_dc\ndistance = burg\nalgorithm = alg1\nx0 = [3, 2.5]\nlambda = 0.3\nseed = 42\n",
        ),
        (
            "absdiff_oscillating",
            "problem = absdiff_dc\ndistance = sq_euclidean\nalgorithm = alg1\nx0 = [0.9]\nlambda = 3\nmax_iter = 60\nseed = 42\ncertificates = [beta]\n",
        ),
        (
            "maxsum2d_alg2_entropy",
            "problem = maxsum2d_dc\ndistance = boltzmann_shannon\nalgorithm = alg2\nx0 = [2, 2]\nlambda = 0.4\nseed = 42\n",
        ),
    ];
    let bin = env!("CARGO_BIN_EXE_dcprox");
    for (name, body) in matrix {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let (cfg_a, trace_a) = write_cfg(dir_a.path(), name, body);
        let (cfg_b, trace_b) = write_cfg(dir_b.path(), name, body);
        for cfg in [&cfg_a, &cfg_b] {
            let out = std::process::Command::new(bin)
                .args(["run", cfg])
                .output()
                .unwrap();
            let code = out.status.code();
            assert!(
                code == Some(0) || code == Some(5),
                "{name}: unexpected exit {code:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
        }
        let bytes_a = std::fs::read(&trace_a).unwrap();
        let bytes_b = std::fs::read(&trace_b).unwrap();
        assert_eq!(bytes_a, bytes_b, "{name}: traces differ between identical runs");
        assert!(!bytes_a.is_empty());
    }
    println!(
        "ACCEPTANCE 7 (byte-identical traces across {} CLI configs): PASS",
        matrix.len()
    );
}
