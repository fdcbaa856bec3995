//! Artifact writers: solution tables, convergence reports, certificates.
//!
//! Everything written here is a pure function of the solve outcome — no
//! timestamps, locales, or absolute paths — so identical inputs produce
//! byte-identical files.

use std::fmt::Write as _;

use fuzzy_ck::{FuzzyGridFn, Grid2, LevelDeck, LipschitzInfo, LipschitzSource};

use crate::CliError;

/// Decimal rendering with 17 significant digits; round-trips any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders a node function as CSV: one row per node per r-level, header
/// `x,y,r,lower,upper`, `\n` line endings, x outer / y middle / r inner.
pub fn solution_csv(f: &FuzzyGridFn) -> String {
    let grid = f.grid();
    let mut out = String::from("x,y,r,lower,upper\n");
    for i in 0..grid.n() {
        for j in 0..grid.m() {
            let deck = f.value(i, j);
            for k in 0..=deck.resolution() {
                let cut = deck.level(k);
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_f64(grid.x(i)),
                    fmt_f64(grid.y(j)),
                    fmt_f64(deck.r_value(k)),
                    fmt_f64(cut.lo()),
                    fmt_f64(cut.hi()),
                );
            }
        }
    }
    out
}

/// Reassembles a node function from [`solution_csv`] output.
///
/// The table must cover the same mesh it was written from; the caller
/// supplies the grid geometry (extents, node counts, scale parameters).
pub fn parse_solution_csv(text: &str, grid: &Grid2, levels: usize) -> Result<FuzzyGridFn, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some("x,y,r,lower,upper") => {}
        other => {
            return Err(CliError::Config(format!(
                "csv header: expected `x,y,r,lower,upper`, got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(CliError::Config(format!(
                "csv row {}: expected 5 fields, got {}",
                idx + 2,
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64, CliError> {
            s.parse::<f64>()
                .map_err(|e| CliError::Config(format!("csv row {}: {e}", idx + 2)))
        };
        rows.push((parse(fields[3])?, parse(fields[4])?));
    }
    let per_node = levels + 1;
    let expected = grid.n() * grid.m() * per_node;
    if rows.len() != expected {
        return Err(CliError::Config(format!(
            "csv body: expected {expected} rows for the configured mesh, got {}",
            rows.len()
        )));
    }
    let mut next = rows.into_iter();
    FuzzyGridFn::try_from_fn(grid, levels, |_, _| {
        let pairs: Vec<(f64, f64)> = next.by_ref().take(per_node).collect();
        LevelDeck::from_endpoints_with_repair(pairs, fuzzy_ck::NEST_BUDGET).map(|(d, _)| d)
    })
    .map_err(CliError::Core)
}

/// Common scalar block shared by reports and certificates.
pub struct JobHeader<'a> {
    pub config_name: &'a str,
    pub kind: &'a str,
    pub n: usize,
    pub m: usize,
    pub levels: usize,
    pub branch: &'a str,
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
}

impl JobHeader<'_> {
    fn render(&self, out: &mut String) {
        let _ = writeln!(out, "config: {}", self.config_name);
        let _ = writeln!(out, "kind: {}", self.kind);
        let _ = writeln!(out, "grid: n={} m={} levels={}", self.n, self.m, self.levels);
        let _ = writeln!(out, "branch: {}", self.branch);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "tol: {}", fmt_f64(self.tol));
        let _ = writeln!(out, "max_iter: {}", self.max_iter);
    }
}

pub fn lipschitz_line(info: Option<&LipschitzInfo>) -> String {
    match info {
        Some(l) => {
            let label = match l.source {
                LipschitzSource::Hint => "hint",
                LipschitzSource::Estimated => "estimated lower bound",
            };
            format!("{} ({label})", fmt_f64(l.value))
        }
        None => "unavailable".to_string(),
    }
}

/// Scalar facts of a finished solve, ready for rendering.
pub struct ReportBody {
    pub iterations: usize,
    pub converged: bool,
    pub fixed_point_residual: f64,
    pub residuals: Vec<f64>,
    /// `(label, value)` pairs: `xi` for single, `xi_1`/`xi_2`/`xi_star` for
    /// coupled solves.
    pub xi: Vec<(&'static str, f64)>,
    pub lipschitz: Vec<(&'static str, String)>,
    /// Guaranteed-contraction subdomain, when the config requested it.
    pub shrink: Option<(f64, f64)>,
}

pub fn render_report(header: &JobHeader, body: &ReportBody) -> String {
    let mut out = String::new();
    header.render(&mut out);
    let _ = writeln!(out, "iterations: {}", body.iterations);
    let _ = writeln!(
        out,
        "converged: {}",
        if body.converged { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "fixed_point_residual: {}",
        fmt_f64(body.fixed_point_residual)
    );
    for (label, value) in &body.lipschitz {
        let _ = writeln!(out, "{label}: {value}");
    }
    for (label, value) in &body.xi {
        let _ = writeln!(out, "{label}: {}", fmt_f64(*value));
    }
    let contraction = !body.xi.is_empty() && body.xi.iter().all(|(_, v)| *v < 1.0);
    let _ = writeln!(
        out,
        "contraction: {}",
        if contraction { "yes" } else { "no" }
    );
    match body.shrink {
        Some((s, t)) => {
            let _ = writeln!(out, "domain_shrink_s: {}", fmt_f64(s));
            let _ = writeln!(out, "domain_shrink_t: {}", fmt_f64(t));
        }
        None => {
            let _ = writeln!(out, "domain_shrink: not computed (no magnitude bound configured)");
        }
    }
    let _ = writeln!(out, "residual_history:");
    for (i, r) in body.residuals.iter().enumerate() {
        let _ = writeln!(out, "  {} {}", i + 1, fmt_f64(*r));
    }
    out
}

/// Certificate document: constants and the verdict, nothing else.
pub fn render_certificate(
    header: &JobHeader,
    lipschitz: &[(&'static str, String)],
    xi: &[(&'static str, f64)],
) -> String {
    let mut out = String::new();
    header.render(&mut out);
    for (label, value) in lipschitz {
        let _ = writeln!(out, "{label}: {value}");
    }
    for (label, value) in xi {
        let _ = writeln!(out, "{label}: {}", fmt_f64(*value));
    }
    let verdict = !xi.is_empty() && xi.iter().all(|(_, v)| *v < 1.0);
    let _ = writeln!(out, "contraction: {}", if verdict { "yes" } else { "no" });
    out
}
