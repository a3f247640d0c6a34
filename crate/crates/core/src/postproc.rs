//! Far fields, near fields and error functionals.
//!
//! Everything here works with `|x'|`-weighted traces, so that nodes clustered
//! at corners never divide by a vanishing speed. With the exterior unit normal,
//! a radiating field outside the boundary is `DL_k(gamma_D u) - SL_k(gamma_N u)`
//! and a field inside is `SL_k(gamma_N u) - DL_k(gamma_D u)`.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};
use crate::formulations::{incident_traces, IncidenceSpec, ProblemSpec};
use crate::geometry::{GridData, Point};
use crate::impedance::{impedance_operator, Impedance, Side};
use crate::kernels::Variant;
use crate::operators::{Assembler, OperatorSpec};
use crate::par;
use crate::specfun::hankel_h1;

/// Number of far-field directions.
pub const FAR_FIELD_DIRECTIONS: usize = 1024;

const I: C64 = C64::new(0.0, 1.0);

/// Far-field amplitudes at equispaced angles.
#[derive(Debug, Clone, PartialEq)]
pub struct FarField {
    pub angles: Vec<f64>,
    pub values: Vec<C64>,
}

/// `|x'| gamma_D u` and `|x'| gamma_N u` at the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTraces {
    pub dirichlet: Vec<C64>,
    pub neumann: Vec<C64>,
}

fn weighted_impedance_image(z: &Impedance, asm: &mut Assembler, u: &[C64], ju: &[C64]) -> Result<Vec<C64>> {
    let jac = &asm.grid().jac;
    match z {
        Impedance::Diagonal(d) => Ok(d.iter().zip(ju).map(|(a, b)| a * b).collect()),
        Impedance::Dense(a) => Ok(a.apply(u)?.iter().zip(jac).map(|(a, b)| a * b).collect()),
        Impedance::Transmission { sign, kappa } => {
            // |x'| N_kappa u = (N^x_kappa - N^x_0 + N^x_0) u
            let mut n = asm.assemble(OperatorSpec::HypersingularDifference(Some(*kappa), None), Variant::Arc)?;
            n.add_scaled(C64::new(1.0, 0.0), &asm.assemble(OperatorSpec::LaplaceHypersingular, Variant::Arc)?)?;
            Ok(n.apply(u)?.into_iter().map(|v| 2.0 * sign * v).collect())
        }
    }
}

/// Both traces of the total field from a solved system. Interior problems need
/// the data `incidence` to recover the Neumann trace from the impedance condition.
pub fn recover_traces(problem: &ProblemSpec, grid: &GridData, solution: &[C64], incidence: Option<&IncidenceSpec>) -> Result<WeightedTraces> {
    check_len(grid.len(), solution.len())?;
    let mut asm = Assembler::new(grid);
    let z = impedance_operator(&problem.impedance, grid, &mut asm)?;
    let (u, ju): (Vec<C64>, Vec<C64>) = if problem.weighted {
        if !matches!(z, Impedance::Diagonal(_)) {
            return Err(Error::Config("weighted traces need a multiplicative impedance".into()));
        }
        (Vec::new(), solution.to_vec())
    } else {
        (solution.to_vec(), solution.iter().zip(&grid.jac).map(|(a, b)| a * b).collect())
    };
    let jzu = weighted_impedance_image(&z, &mut asm, &u, &ju)?;
    let neumann = match problem.side {
        // gamma_N u + Z gamma_D u = 0
        Side::Exterior => jzu.iter().map(|v| -v).collect(),
        // gamma_N u + Z gamma_D u = gamma_N u0 + Z gamma_D u0
        Side::Interior => {
            let inc = incidence.ok_or_else(|| Error::Config("interior traces need the boundary data".into()))?;
            let tr = incident_traces(problem.k, grid, inc)?;
            let jg: Vec<C64> = tr.dirichlet.iter().zip(&grid.jac).map(|(a, b)| a * b).collect();
            let jzg = weighted_impedance_image(&z, &mut asm, &tr.dirichlet, &jg)?;
            (0..grid.len()).map(|i| grid.jac[i] * tr.neumann[i] + jzg[i] - jzu[i]).collect()
        }
    };
    Ok(WeightedTraces { dirichlet: ju, neumann })
}

/// Far field of the radiating field `DL_k(gamma_D u) - SL_k(gamma_N u)`.
pub fn far_field_of_traces(k: f64, grid: &GridData, traces: &WeightedTraces) -> Result<FarField> {
    check_len(grid.len(), traces.dirichlet.len())?;
    check_len(grid.len(), traces.neumann.len())?;
    let pref = C64::from_polar(1.0, FRAC_PI_4) / (8.0 * PI * k).sqrt() * grid.h;
    let angles: Vec<f64> = (0..FAR_FIELD_DIRECTIONS).map(|l| TAU * l as f64 / FAR_FIELD_DIRECTIONS as f64).collect();
    let values = par::map(FAR_FIELD_DIRECTIONS, |l| {
        let (s, c) = angles[l].sin_cos();
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..grid.len() {
            let (x, n) = (grid.x[j], grid.normal[j]);
            let e = C64::from_polar(1.0, -k * (c * x[0] + s * x[1]));
            acc += e * (-traces.neumann[j] - I * k * (n[0] * c + n[1] * s) * traces.dirichlet[j]);
        }
        pref * acc
    });
    Ok(FarField { angles, values })
}

/// Far field of the scattered field of a solved exterior problem.
pub fn far_field(problem: &ProblemSpec, grid: &GridData, solution: &[C64]) -> Result<FarField> {
    if problem.side != Side::Exterior {
        return Err(Error::Config("far field requested for an interior problem".into()));
    }
    far_field_of_traces(problem.k, grid, &recover_traces(problem, grid, solution, None)?)
}

/// Trapezoidal representation formula at points off the boundary.
pub fn near_field(points: &[Point], k: f64, side: Side, grid: &GridData, traces: &WeightedTraces) -> Result<Vec<C64>> {
    check_len(grid.len(), traces.dirichlet.len())?;
    check_len(grid.len(), traces.neumann.len())?;
    let jmax = grid.jac.iter().cloned().fold(0.0, f64::max);
    let min_dist = 5.0 * grid.h * jmax;
    let sign = if side == Side::Exterior { 1.0 } else { -1.0 };
    let kc = C64::new(k, 0.0);
    let eval = |p: &Point| -> Result<C64> {
        let d = grid.x.iter().map(|x| (p[0] - x[0]).hypot(p[1] - x[1])).fold(f64::INFINITY, f64::min);
        if d < min_dist {
            return Err(Error::Domain(format!("point {p:?} is {d:e} from the boundary, closer than {min_dist:e}")));
        }
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..grid.len() {
            let rv = [p[0] - grid.x[j][0], p[1] - grid.x[j][1]];
            let r = rv[0].hypot(rv[1]);
            let g = 0.25 * I * hankel_h1(0, kc * r)?;
            let dg = 0.25 * I * k * hankel_h1(1, kc * r)? * (rv[0] * grid.normal[j][0] + rv[1] * grid.normal[j][1]) / r;
            acc += dg * traces.dirichlet[j] - g * traces.neumann[j];
        }
        Ok(sign * grid.h * acc)
    };
    par::map(points.len(), |i| eval(&points[i])).into_iter().collect()
}

/// `max_i |computed_i - exact_i|`.
pub fn boundary_errors(computed: &[C64], exact: &[C64]) -> Result<f64> {
    check_len(exact.len(), computed.len())?;
    Ok(computed.iter().zip(exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

pub fn far_field_error(computed: &FarField, reference: &FarField) -> Result<f64> {
    if computed.angles != reference.angles {
        return Err(Error::Config("far fields sampled at different directions".into()));
    }
    boundary_errors(&computed.values, &reference.values)
}

/// C-style `%.6e`: six decimals and a signed exponent of at least two digits.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.6e}");
    let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let e: i32 = exp.parse().unwrap_or(0);
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// CSV with header `angle,re,im`.
pub fn write_far_field_csv(path: &Path, ff: &FarField) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "angle,re,im")?;
    for (a, v) in ff.angles.iter().zip(&ff.values) {
        writeln!(f, "{},{},{}", format_sci(*a), format_sci(v.re), format_sci(v.im))?;
    }
    f.flush()?;
    Ok(())
}
