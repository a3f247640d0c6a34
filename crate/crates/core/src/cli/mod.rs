//! Config-driven experiment runner behind the `cfier` binary.
//!
//! `run` solves one problem per requested size and reports iterations, error
//! and wall time; `convergence` adds empirical orders; `oracle_check` re-runs
//! the special functions against the bundled high-precision tables.

pub mod config;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::formulations::{build_system, exact_unknown, LinearSystem};
use crate::geometry::GridData;
use crate::impedance::Side;
use crate::postproc::{boundary_errors, far_field, far_field_error, write_far_field_csv, FarField};
use crate::solver::{gmres, SolveResult};
use crate::specfun::{bessel_j, bessel_y, green, hankel_h1, Wavenumber};

pub use config::{ExperimentConfig, RunSpec};
pub use report::{ErrorKind, ExperimentReport, ReportRow};

/// Exit status when every solve converged.
pub const EXIT_OK: i32 = 0;
/// Exit status for configuration, schema and i/o errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status when some GMRES run stopped at `maxit`.
pub const EXIT_MAXIT: i32 = 2;
/// Exit status when `oracle-check` finds a mismatch.
pub const EXIT_ORACLE: i32 = 3;

/// Reads `CFIER_THREADS` and sizes the worker pool accordingly.
pub fn configure_threads() -> Result<()> {
    match std::env::var("CFIER_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Error::Config(format!("CFIER_THREADS={v:?} is not a positive integer")))?;
            crate::par::set_threads(n);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

struct Solved {
    grid: GridData,
    system: LinearSystem,
    out: SolveResult,
}

fn solve(run: &RunSpec, tol: f64, maxit: usize) -> Result<Solved> {
    let grid = run.problem.grid()?;
    run.incidence.validate(&run.problem.geometry, &grid)?;
    let system = build_system(&run.problem, &grid, &run.incidence)?;
    let out = gmres(|v| system.matrix.apply(v), &system.rhs, tol, maxit)?;
    Ok(Solved { grid, system, out })
}

fn reference_far_field(run: &RunSpec, tol: f64) -> Result<FarField> {
    let mut fine = run.clone();
    fine.problem.n *= 2;
    let s = solve(&fine, tol, usize::MAX)?;
    if !s.out.converged {
        return Err(Error::Config("reference run did not converge".into()));
    }
    far_field(&fine.problem, &s.grid, &s.out.solution)
}

fn artifact(dir: &Path, stem: &str, what: &str, two_n: usize, ext: &str) -> PathBuf {
    dir.join(format!("{stem}_{what}_{two_n}.{ext}"))
}

/// Runs every size of `cfg`. `stem` names the per-run artifacts; `progress`
/// sees each row as it completes.
pub fn run_experiment(cfg: &ExperimentConfig, stem: &str, mut progress: impl FnMut(&ReportRow)) -> Result<ExperimentReport> {
    let runs = cfg.runs()?;
    let side = runs[0].problem.side;
    let error_kind = match (cfg.error.compute, side, cfg.problem.weighted) {
        (false, ..) => ErrorKind::None,
        (true, Side::Exterior, _) => ErrorKind::FarField,
        (true, Side::Interior, false) => ErrorKind::Boundary,
        (true, Side::Interior, true) => ErrorKind::WeightedBoundary,
    };
    let dir = cfg.outputs.dir.clone().unwrap_or_else(|| PathBuf::from("."));
    if cfg.outputs.history || cfg.outputs.far_field || cfg.outputs.dump_matrix {
        std::fs::create_dir_all(&dir)?;
    }
    let mut rows = Vec::with_capacity(runs.len());
    for run in &runs {
        let two_n = 2 * run.problem.n;
        let t0 = Instant::now();
        let s = solve(run, cfg.solver.tol, cfg.solver.maxit)?;
        let ff = if side == Side::Exterior { Some(far_field(&run.problem, &s.grid, &s.out.solution)?) } else { None };
        let seconds = if cfg.outputs.record_time { t0.elapsed().as_secs_f64() } else { 0.0 };
        let error = match error_kind {
            ErrorKind::None => None,
            ErrorKind::FarField => Some(far_field_error(ff.as_ref().unwrap(), &reference_far_field(run, cfg.error.reference_tol)?)?),
            _ => Some(boundary_errors(&s.out.solution, &exact_unknown(&run.problem, &s.grid, &run.incidence)?)?),
        };
        let mut history_path = None;
        if cfg.outputs.history {
            let p = artifact(&dir, stem, "history", two_n, "csv");
            report::write_history(&p, &s.out.history)?;
            history_path = Some(p);
        }
        if let (true, Some(ff)) = (cfg.outputs.far_field, &ff) {
            write_far_field_csv(&artifact(&dir, stem, "farfield", two_n, "csv"), ff)?;
        }
        if cfg.outputs.dump_matrix {
            s.system.matrix.dump(&artifact(&dir, stem, "matrix", two_n, "bin"))?;
        }
        let row = ReportRow {
            two_n,
            k: run.problem.k,
            iterations: s.out.iterations,
            converged: s.out.converged,
            residual: s.out.residual,
            error,
            seconds,
            history_path,
        };
        progress(&row);
        rows.push(row);
    }
    Ok(ExperimentReport { error_kind, rows })
}

/// One line of the oracle check.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleLine {
    pub table: &'static str,
    pub records: usize,
    pub worst: f64,
    pub tol: f64,
}

impl OracleLine {
    pub fn pass(&self) -> bool {
        self.worst <= self.tol
    }
}

const BESSELJ: &str = include_str!("../../data/golden/besselj.txt");
const BESSELY: &str = include_str!("../../data/golden/bessely.txt");
const HANKEL1: &str = include_str!("../../data/golden/hankel1.txt");
const POINT_SOURCE: &str = include_str!("../../data/golden/point_source.txt");

fn records(text: &str) -> Result<Vec<(u32, C64, C64)>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|s| s.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| Error::Io(format!("bad golden record {l:?}: {e}")))?;
            if v.len() != 5 {
                return Err(Error::Io(format!("bad golden record {l:?}")));
            }
            Ok((v[0] as u32, C64::new(v[1], v[2]), C64::new(v[3], v[4])))
        })
        .collect()
}

/// Compares `J`, `Y`, `H^(1)` and the Green's function with the bundled tables.
/// `J` and `Y` errors are relative to `hypot(|J|, |Y|)` at the same argument.
pub fn oracle_check() -> Result<Vec<OracleLine>> {
    let (j, y, h) = (records(BESSELJ)?, records(BESSELY)?, records(HANKEL1)?);
    let find = |t: &[(u32, C64, C64)], n: u32, z: C64| t.iter().find(|r| r.0 == n && r.1 == z).map(|r| r.2.norm());
    let scale = |n, z| Some(find(&j, n, z)?.hypot(find(&y, n, z)?));
    let mut lines = Vec::new();
    for (table, recs, f) in [("besselj", &j, bessel_j as fn(u32, C64) -> Result<C64>), ("bessely", &y, bessel_y)] {
        let mut worst = 0.0_f64;
        for &(n, z, want) in recs.iter() {
            let s = scale(n, z).ok_or_else(|| Error::Io(format!("{table}: no matching J/Y pair for order {n} at {z}")))?;
            worst = worst.max((f(n, z)? - want).norm() / s);
        }
        lines.push(OracleLine { table, records: recs.len(), worst, tol: 1e-12 });
    }
    let mut worst = 0.0_f64;
    for &(n, z, want) in &h {
        worst = worst.max((hankel_h1(n, z)? - want).norm() / want.norm());
    }
    lines.push(OracleLine { table: "hankel1", records: h.len(), worst, tol: 1e-11 });
    let v: Vec<f64> = POINT_SOURCE.split_whitespace().map(|s| s.parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|e| Error::Io(e.to_string()))?;
    let want = C64::new(v[0], v[1]);
    let got = green(Wavenumber::real(2.0)?, 32f64.sqrt())?;
    lines.push(OracleLine { table: "point_source", records: 1, worst: (got - want).norm() / want.norm(), tol: 1e-13 });
    Ok(lines)
}
