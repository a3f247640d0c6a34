//! Experiment reports and their CSV form.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::postproc::format_sci;

/// Which error functional a report column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Max nodal error against the exact trace.
    Boundary,
    /// Same, on `|x'|`-weighted traces.
    WeightedBoundary,
    /// Max far-field error against a refined run.
    FarField,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub two_n: usize,
    pub k: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub error: Option<f64>,
    pub seconds: f64,
    pub history_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub error_kind: ErrorKind,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    /// `log(e_prev / e) / log(2n / 2n_prev)` for every row after the first,
    /// i.e. `log2` of the error ratio when sizes double.
    pub fn eoc(&self) -> Result<Vec<Option<f64>>> {
        if self.rows.len() < 3 {
            return Err(Error::Config(format!("convergence needs at least 3 sizes, got {}", self.rows.len())));
        }
        let mut out = vec![None];
        for w in self.rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let (ea, eb) = match (a.error, b.error) {
                (Some(x), Some(y)) => (x, y),
                _ => return Err(Error::Config("convergence needs error values".into())),
            };
            out.push(Some((ea / eb).ln() / (b.two_n as f64 / a.two_n as f64).ln()));
        }
        Ok(out)
    }

    /// CSV text with header `2n,iters,error,seconds` and an optional `eoc` column.
    pub fn to_csv(&self, eoc: Option<&[Option<f64>]>) -> String {
        let mut s = String::from("2n,iters,error,seconds");
        if eoc.is_some() {
            s.push_str(",eoc");
        }
        s.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let err = r.error.map(format_sci).unwrap_or_else(|| "nan".into());
            s.push_str(&format!("{},{},{},{}", r.two_n, r.iterations, err, format_sci(r.seconds)));
            if let Some(e) = eoc {
                s.push(',');
                if let Some(v) = e[i] {
                    s.push_str(&format_sci(v));
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: &Path, eoc: Option<&[Option<f64>]>) -> Result<()> {
        let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        f.write_all(self.to_csv(eoc).as_bytes())?;
        Ok(())
    }
}

/// CSV `iteration,residual` of one GMRES run.
pub fn write_history(path: &Path, history: &[f64]) -> Result<()> {
    let mut s = String::from("iteration,residual\n");
    for (i, h) in history.iter().enumerate() {
        s.push_str(&format!("{i},{}\n", format_sci(*h)));
    }
    std::fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(errors: &[f64]) -> ExperimentReport {
        let rows = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| ReportRow {
                two_n: 32 << i,
                k: 2.0,
                iterations: 10,
                converged: true,
                residual: 1e-13,
                error: Some(e),
                seconds: 0.0,
                history_path: None,
            })
            .collect();
        ExperimentReport { error_kind: ErrorKind::Boundary, rows }
    }

    #[test]
    fn eoc_of_decades() {
        let eoc = report(&[1e-2, 1e-3, 1e-4]).eoc().unwrap();
        assert_eq!(eoc[0], None);
        for e in &eoc[1..] {
            assert!((e.unwrap() - 10f64.log2()).abs() < 1e-12);
        }
        assert!(report(&[1e-2, 1e-3]).eoc().is_err());
    }

    #[test]
    fn csv_layout() {
        let r = report(&[1e-2, 1e-3, 1e-4]);
        let csv = r.to_csv(Some(&r.eoc().unwrap()));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "2n,iters,error,seconds,eoc");
        assert_eq!(lines[1], "32,10,1.000000e-02,0.000000e+00,");
        assert_eq!(lines[2], "64,10,1.000000e-03,0.000000e+00,3.321928e+00");
    }
}
