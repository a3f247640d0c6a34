//! Experiment configuration files.
//!
//! A config is TOML with four blocks. Unknown keys anywhere are rejected.
//!
//! ```toml
//! [problem]
//! side = "interior"            # or "exterior"
//! k = 2.0                      # or a list paired with `sizes`
//! geometry = "square4"         # "lshape4x2", "circle:R" or { vertices = [[x, y], ...] }
//! p = 3
//! sizes = [32, 64, 128]        # values of 2n
//! weighted = false
//! kappa = [2.0, 1.0]           # optional, default k + i
//!
//! [problem.impedance]
//! kind = "constant"            # "piecewise", "transmission", "blended"
//! value = [0.0, 1.0]
//! times_k = true               # Z = i k
//!
//! [incidence]
//! kind = "point_source"        # or "plane_wave" with `direction`
//! source = [4.0, 4.0]
//!
//! [solver]
//! tol = 1e-12
//! maxit = 500
//!
//! [outputs]                    # optional
//! csv = "table1_square.csv"
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::formulations::{IncidenceSpec, ProblemSpec};
use crate::geometry::{CurveSpec, Point};
use crate::impedance::{ImpedanceSpec, Side};
use crate::specfun::Wavenumber;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub incidence: IncidenceConfig,
    pub solver: SolverConfig,
    #[serde(default)]
    pub error: ErrorConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub side: SideConfig,
    pub k: Wavenumbers,
    pub kappa: Option<[f64; 2]>,
    pub impedance: ImpedanceConfig,
    pub geometry: GeometryConfig,
    #[serde(default = "default_p")]
    pub p: u32,
    /// Node counts `2n`, one report row each.
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub weighted: bool,
}

fn default_p() -> u32 {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideConfig {
    Interior,
    Exterior,
}

/// One wavenumber for every size, or one per size.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Wavenumbers {
    One(f64),
    PerSize(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GeometryConfig {
    Named(String),
    Polygon {
        vertices: Vec<Point>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ImpedanceConfig {
    /// `Z = value`, times `k` when `times_k`.
    Constant {
        value: [f64; 2],
        #[serde(default)]
        times_k: bool,
    },
    /// One value per boundary segment.
    Piecewise {
        values: Vec<[f64; 2]>,
        #[serde(default)]
        times_k: bool,
    },
    /// `+2 N_kappa` outside, `-2 N_kappa` inside.
    Transmission,
    /// `-2 sum_j chi_j N_kappa_j chi_j`. Without `patches`, patch `j` is segment `j`.
    Blended {
        kappas: Vec<[f64; 2]>,
        patches: Option<Vec<Vec<usize>>>,
        overlap: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IncidenceConfig {
    PlaneWave { direction: Point },
    PointSource { source: Point },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub maxit: usize,
}

/// How errors are measured. Interior problems compare with the exact point-source
/// trace; exterior ones with the far field of a run at twice the nodes.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorConfig {
    #[serde(default = "yes")]
    pub compute: bool,
    #[serde(default = "default_reference_tol")]
    pub reference_tol: f64,
}

impl Default for ErrorConfig {
    fn default() -> Self {
        Self { compute: true, reference_tol: default_reference_tol() }
    }
}

fn yes() -> bool {
    true
}

fn default_reference_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Report CSV, relative to the working directory.
    pub csv: Option<PathBuf>,
    /// Directory for residual histories, far fields and matrix dumps.
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub history: bool,
    #[serde(default)]
    pub far_field: bool,
    #[serde(default)]
    pub dump_matrix: bool,
    /// When false the `seconds` column is written as zero, so reruns give identical files.
    #[serde(default = "yes")]
    pub record_time: bool,
}

/// One fully resolved run of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemSpec,
    pub incidence: IncidenceSpec,
}

fn c(v: [f64; 2]) -> C64 {
    C64::new(v[0], v[1])
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.runs()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn geometry(&self) -> Result<CurveSpec> {
        match &self.problem.geometry {
            GeometryConfig::Named(name) => match name.as_str() {
                "square4" => Ok(CurveSpec::square4()),
                "lshape4x2" => Ok(CurveSpec::lshape4x2()),
                other => match other.strip_prefix("circle:") {
                    Some(r) => CurveSpec::circle(r.trim().parse().map_err(|_| Error::Config(format!("bad circle radius in {other:?}")))?),
                    None => Err(Error::Config(format!("unknown geometry {other:?}"))),
                },
            },
            GeometryConfig::Polygon { vertices } => CurveSpec::polygon(vertices),
        }
    }

    fn impedance(&self, k: f64, kappa: Wavenumber, side: Side, segments: usize) -> Result<ImpedanceSpec> {
        let scale = |times_k: bool| if times_k { k } else { 1.0 };
        Ok(match &self.problem.impedance {
            ImpedanceConfig::Constant { value, times_k } => ImpedanceSpec::Constant(c(*value) * scale(*times_k)),
            ImpedanceConfig::Piecewise { values, times_k } => {
                if values.len() != segments {
                    return Err(Error::Config(format!("{} impedance values for {segments} boundary segments", values.len())));
                }
                ImpedanceSpec::PiecewiseConstant(values.iter().map(|v| c(*v) * scale(*times_k)).collect())
            }
            ImpedanceConfig::Transmission => ImpedanceSpec::Transmission { sign: if side == Side::Exterior { 1.0 } else { -1.0 }, kappa },
            ImpedanceConfig::Blended { kappas, patches, overlap } => {
                let patches = match patches {
                    Some(p) => p.clone(),
                    None if kappas.len() == segments => (0..segments).map(|j| vec![j]).collect(),
                    None => return Err(Error::Config(format!("{} blend wavenumbers for {segments} segments need explicit patches", kappas.len()))),
                };
                let kappas = kappas.iter().map(|v| Wavenumber::new(c(*v))).collect::<Result<_>>()?;
                ImpedanceSpec::Blended { patches, kappas, overlap: *overlap }
            }
        })
    }

    /// Resolves every requested size into a validated problem.
    pub fn runs(&self) -> Result<Vec<RunSpec>> {
        let pc = &self.problem;
        if pc.sizes.is_empty() {
            return Err(Error::Config("problem.sizes is empty".into()));
        }
        if let Some(&s) = pc.sizes.iter().find(|&&s| s == 0 || s % 2 != 0) {
            return Err(Error::Config(format!("size {s} is not a positive even node count")));
        }
        let ks = match &pc.k {
            Wavenumbers::One(k) => vec![*k; pc.sizes.len()],
            Wavenumbers::PerSize(ks) if ks.len() == pc.sizes.len() => ks.clone(),
            Wavenumbers::PerSize(ks) => return Err(Error::Config(format!("{} wavenumbers for {} sizes", ks.len(), pc.sizes.len()))),
        };
        if !(self.solver.tol > 0.0) || self.solver.maxit == 0 {
            return Err(Error::Config("solver.tol and solver.maxit must be positive".into()));
        }
        if !(self.error.reference_tol > 0.0) {
            return Err(Error::Config("error.reference_tol must be positive".into()));
        }
        let geometry = self.geometry()?;
        let side = match pc.side {
            SideConfig::Interior => Side::Interior,
            SideConfig::Exterior => Side::Exterior,
        };
        let incidence = match &self.incidence {
            IncidenceConfig::PlaneWave { direction } => IncidenceSpec::plane_wave(*direction)?,
            IncidenceConfig::PointSource { source } => IncidenceSpec::point_source(*source),
        };
        ks.iter()
            .zip(&pc.sizes)
            .map(|(&k, &size)| {
                let kappa = Wavenumber::new(pc.kappa.map(c).unwrap_or(C64::new(k, 1.0)))?;
                let problem = ProblemSpec {
                    side,
                    k,
                    kappa: Some(kappa.value()),
                    impedance: self.impedance(k, kappa, side, geometry.segment_count())?,
                    geometry: geometry.clone(),
                    p: pc.p,
                    n: size / 2,
                    weighted: pc.weighted,
                };
                problem.validate()?;
                Ok(RunSpec { problem, incidence })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[problem]
side = "interior"
k = 2.0
geometry = "square4"
sizes = [32, 64]
[problem.impedance]
kind = "constant"
value = [0.0, 1.0]
times_k = true
[incidence]
kind = "point_source"
source = [4.0, 4.0]
[solver]
tol = 1e-12
maxit = 100
"#;

    #[test]
    fn parses_and_resolves() {
        let cfg = ExperimentConfig::parse(BASE).unwrap();
        let runs = cfg.runs().unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[1].problem.n, 32);
        assert_eq!(runs[0].problem.impedance, ImpedanceSpec::Constant(C64::new(0.0, 2.0)));
        assert_eq!(runs[0].problem.kappa, Some(C64::new(2.0, 1.0)));
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::parse(&BASE.replace("sizes = [32, 64]", "sizes = []")).is_err());
        assert!(ExperimentConfig::parse(&BASE.replace("sizes = [32, 64]", "sizes = [33]")).is_err());
        assert!(ExperimentConfig::parse(&BASE.replace("maxit = 100", "maxit = 100\nrestart = 5")).is_err());
        assert!(ExperimentConfig::parse(&BASE.replace("k = 2.0", "k = [2.0]")).is_err());
        assert!(ExperimentConfig::parse(&BASE.replace("\"square4\"", "\"hexagon\"")).is_err());
        assert!(ExperimentConfig::parse(&BASE.replace("[0.0, 1.0]", "[1.0, 0.0]")).is_err());
    }

    #[test]
    fn polygon_and_circle_geometries() {
        let poly = BASE.replace("\"square4\"", "{ vertices = [[-1.0, -1.0], [1.0, -1.0], [0.0, 1.0]] }");
        assert_eq!(ExperimentConfig::parse(&poly).unwrap().geometry().unwrap().segment_count(), 3);
        let circ = BASE.replace("\"square4\"", "\"circle:1.5\"");
        assert!(ExperimentConfig::parse(&circ).unwrap().geometry().is_ok());
    }
}
