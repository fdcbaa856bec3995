//! Batch front-end for the fuzzy fractional Darboux solvers.
//!
//! Three commands: `run` solves a configured problem and writes a solution
//! table plus a convergence report, `certify` evaluates contraction
//! constants without solving, and `oracles` cross-checks the numerical
//! kernels against independent references. All artifacts are deterministic
//! functions of the config and seed.

pub mod config;
pub mod output;

use std::fs;
use std::path::Path;

use fuzzy_ck::{
    contraction_constant, contraction_constants_coupled, domain_shrink, estimate_lipschitz,
    estimate_lipschitz_coupled, oracle_battery, picard_solve_coupled, picard_solve_single,
    LipschitzInfo, LipschitzSource,
};
use thiserror::Error;

use config::{BranchSpec, ProblemKind, RunConfig};
use output::{fmt_f64, lipschitz_line, render_certificate, render_report, JobHeader, ReportBody};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] fuzzy_ck::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Exit code for a clean run (possibly with `converged: no` in the report).
pub const EXIT_OK: i32 = 0;
/// Exit code for any error.
pub const EXIT_ERROR: i32 = 1;
/// Exit code of `certify` when some constant fails `Ξ < 1`.
pub const EXIT_NOT_CONTRACTION: i32 = 2;

/// Configs shipped inside the binary, addressable by bare name.
pub const BUNDLED_CONFIGS: &[(&str, &str)] = &[
    ("example_3_9", include_str!("../configs/example_3_9.toml")),
    ("example_4_4", include_str!("../configs/example_4_4.toml")),
];

/// Resolves a config argument: a bundled name first, then a file path.
pub fn load_config_text(arg: &str) -> Result<(String, String), CliError> {
    for (name, text) in BUNDLED_CONFIGS {
        if arg == *name {
            return Ok((name.to_string(), text.to_string()));
        }
    }
    let text = fs::read_to_string(arg).map_err(|e| {
        CliError::Config(format!(
            "`{arg}` is neither a bundled config name nor a readable file: {e}"
        ))
    })?;
    let name = Path::new(arg)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| arg.to_string());
    Ok((name, text))
}

/// Flag overrides applied on top of a parsed config.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub grid: Option<(usize, usize)>,
    pub levels: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub branch: Option<BranchSpec>,
    pub seed: Option<u64>,
}

pub fn apply_overrides(config: &mut RunConfig, overrides: &Overrides) {
    if let Some((n, m)) = overrides.grid {
        config.grid.n = n;
        config.grid.m = m;
    }
    if let Some(levels) = overrides.levels {
        config.grid.levels = levels;
    }
    if let Some(tol) = overrides.tol {
        config.solver.tol = tol;
    }
    if let Some(max_iter) = overrides.max_iter {
        config.solver.max_iter = max_iter;
    }
    if let Some(branch) = overrides.branch {
        config.solver.branch = branch;
    }
    if let Some(seed) = overrides.seed {
        config.solver.seed = seed;
    }
}

fn job_header<'a>(name: &'a str, config: &'a RunConfig) -> JobHeader<'a> {
    JobHeader {
        config_name: name,
        kind: match config.kind {
            ProblemKind::Single => "single",
            ProblemKind::Coupled => "coupled",
        },
        n: config.grid.n,
        m: config.grid.m,
        levels: config.grid.levels,
        branch: match config.solver.branch {
            BranchSpec::S1 => "s1",
            BranchSpec::S2 => "s2",
        },
        seed: config.solver.seed,
        tol: config.solver.tol,
        max_iter: config.solver.max_iter,
    }
}

/// Guaranteed-contraction subdomain for the report, when requested.
///
/// Coupled problems take the intersection of the bounds for the two
/// equations' orders, so the printed rectangle works for both.
fn shrink_pair(config: &RunConfig) -> Result<Option<(f64, f64)>, CliError> {
    let Some(spec) = &config.shrink else {
        return Ok(None);
    };
    let (a, b) = (config.domain.a, config.domain.b);
    let first = domain_shrink(spec.k, spec.m_bound, config.order()?, a, b)?;
    let pair = match config.kind {
        ProblemKind::Single => first,
        ProblemKind::Coupled => {
            let second = domain_shrink(spec.k, spec.m_bound, config.order2()?, a, b)?;
            (first.0.min(second.0), first.1.min(second.1))
        }
    };
    Ok(Some(pair))
}

/// Solves the configured problem and writes artifacts into `out_dir`.
///
/// Returns the exit code: 0 on completion even when the iteration did not
/// converge (the report carries the flag).
pub fn cmd_run(name: &str, config: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    fs::create_dir_all(out_dir)?;
    let options = config.solver_options();
    let header = job_header(name, config);
    let shrink = shrink_pair(config)?;

    match config.kind {
        ProblemKind::Single => {
            let problem = config.build_single()?;
            let report = picard_solve_single(&problem, &options)?;
            let body = ReportBody {
                iterations: report.iterations,
                converged: report.converged,
                fixed_point_residual: report.fixed_point_residual,
                residuals: report.residuals.clone(),
                xi: report
                    .xi_constant
                    .map(|v| vec![("xi", v)])
                    .unwrap_or_default(),
                lipschitz: vec![("lipschitz", lipschitz_line(report.lipschitz.as_ref()))],
                shrink,
            };
            fs::write(out_dir.join("solution.csv"), output::solution_csv(&report.solution))?;
            fs::write(out_dir.join("report.txt"), render_report(&header, &body))?;
            println!(
                "wrote solution.csv and report.txt ({})",
                if report.converged {
                    format!("converged in {} iterations", report.iterations)
                } else {
                    format!("no convergence within {} iterations", report.iterations)
                }
            );
        }
        ProblemKind::Coupled => {
            let problem = config.build_coupled()?;
            let report = picard_solve_coupled(&problem, &options)?;
            let xi = report
                .xi_constants
                .map(|(x1, x2, xs)| vec![("xi_1", x1), ("xi_2", x2), ("xi_star", xs)])
                .unwrap_or_default();
            let body = ReportBody {
                iterations: report.iterations,
                converged: report.converged,
                fixed_point_residual: report.fixed_point_residual,
                residuals: report.residuals.clone(),
                xi,
                lipschitz: vec![
                    ("lipschitz_u", lipschitz_line(report.lipschitz_u.as_ref())),
                    ("lipschitz_w", lipschitz_line(report.lipschitz_w.as_ref())),
                ],
                shrink,
            };
            fs::write(
                out_dir.join("solution_u.csv"),
                output::solution_csv(&report.solution_u),
            )?;
            fs::write(
                out_dir.join("solution_w.csv"),
                output::solution_csv(&report.solution_w),
            )?;
            fs::write(out_dir.join("report.txt"), render_report(&header, &body))?;
            println!(
                "wrote solution_u.csv, solution_w.csv and report.txt ({})",
                if report.converged {
                    format!("converged in {} iterations", report.iterations)
                } else {
                    format!("no convergence within {} iterations", report.iterations)
                }
            );
        }
    }
    Ok(EXIT_OK)
}

/// Evaluates the contraction constants and writes `certificate.txt`.
///
/// Exit 0 when every constant is below one, [`EXIT_NOT_CONTRACTION`]
/// otherwise.
pub fn cmd_certify(name: &str, config: &RunConfig, out_dir: &Path) -> Result<i32, CliError> {
    fs::create_dir_all(out_dir)?;
    let options = config.solver_options();
    let header = job_header(name, config);
    let (a, b) = (config.domain.a, config.domain.b);

    let (lipschitz, xi) = match config.kind {
        ProblemKind::Single => {
            let problem = config.build_single()?;
            let info = resolve_lipschitz(
                problem.rhs.lipschitz_hint(),
                || estimate_lipschitz(&problem.rhs, (a, b), options.lipschitz_samples, options.seed),
            )?;
            let xi = contraction_constant(info.value, a, b, problem.order)?;
            (
                vec![("lipschitz", lipschitz_line(Some(&info)))],
                vec![("xi", xi)],
            )
        }
        ProblemKind::Coupled => {
            let problem = config.build_coupled()?;
            let info_u = resolve_lipschitz(problem.rhs_f.lipschitz_hint(), || {
                estimate_lipschitz_coupled(
                    &problem.rhs_f,
                    (a, b),
                    options.lipschitz_samples,
                    options.seed,
                )
            })?;
            let info_w = resolve_lipschitz(problem.rhs_g.lipschitz_hint(), || {
                estimate_lipschitz_coupled(
                    &problem.rhs_g,
                    (a, b),
                    options.lipschitz_samples,
                    options.seed.wrapping_add(1),
                )
            })?;
            let (x1, x2, xs) = contraction_constants_coupled(
                info_u.value,
                info_w.value,
                a,
                b,
                problem.order_u,
                problem.order_w,
            )?;
            (
                vec![
                    ("lipschitz_u", lipschitz_line(Some(&info_u))),
                    ("lipschitz_w", lipschitz_line(Some(&info_w))),
                ],
                vec![("xi_1", x1), ("xi_2", x2), ("xi_star", xs)],
            )
        }
    };

    let text = render_certificate(&header, &lipschitz, &xi);
    fs::write(out_dir.join("certificate.txt"), &text)?;
    print!("{text}");
    let all_contractive = xi.iter().all(|(_, v)| *v < 1.0);
    Ok(if all_contractive {
        EXIT_OK
    } else {
        EXIT_NOT_CONTRACTION
    })
}

fn resolve_lipschitz(
    hint: Option<f64>,
    estimate: impl FnOnce() -> fuzzy_ck::Result<f64>,
) -> Result<LipschitzInfo, CliError> {
    match hint {
        Some(value) => Ok(LipschitzInfo {
            value,
            source: LipschitzSource::Hint,
        }),
        None => Ok(LipschitzInfo {
            value: estimate()?,
            source: LipschitzSource::Estimated,
        }),
    }
}

/// Runs the numerical cross-check battery and prints a pass/fail table.
pub fn cmd_oracles() -> Result<i32, CliError> {
    let reports = oracle_battery()?;
    println!(
        "{:<46} {:>24} {:>24} {:>13} {:>13}  status",
        "check", "computed", "reference", "error", "tol"
    );
    let mut all_passed = true;
    for r in &reports {
        let kind = if r.relative { "rel" } else { "abs" };
        let err = if r.relative { r.rel_err } else { r.abs_err };
        println!(
            "{:<46} {:>24} {:>24} {:>9.1e} {:>3} {:>9.1e} {:>3}  {}",
            r.name,
            fmt_f64(r.computed),
            fmt_f64(r.reference),
            err,
            kind,
            r.tolerance,
            kind,
            if r.passed { "PASS" } else { "FAIL" }
        );
        all_passed &= r.passed;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_ERROR })
}
