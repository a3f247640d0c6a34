//! Browser bindings for the `www/` demo page.
//!
//! Three operations: the graded corner nodes of a geometry, a plane-wave
//! scattering solve with its far field, and an interior solve against a
//! known point-source solution.

use cfier::formulations::{build_system, exact_unknown, IncidenceSpec, ProblemSpec};
use cfier::geometry::{build_grid, CurveSpec, SigmoidParams};
use cfier::impedance::{ImpedanceSpec, Side};
use cfier::postproc::{boundary_errors, far_field};
use cfier::solver::gmres;
use num_complex::Complex64 as C64;
use wasm_bindgen::prelude::*;

const MAXIT: usize = 500;

fn geometry(name: &str) -> Result<CurveSpec, JsError> {
    match name {
        "square" => Ok(CurveSpec::square4()),
        "lshape" => Ok(CurveSpec::lshape4x2()),
        "circle" => Ok(CurveSpec::circle(2.0)?),
        _ => Err(JsError::new(&format!("unknown geometry {name:?}"))),
    }
}

fn problem(side: Side, geo: &str, k: f64, two_n: usize) -> Result<ProblemSpec, JsError> {
    if two_n < 8 || two_n % 2 != 0 {
        return Err(JsError::new("the node count must be even and at least 8"));
    }
    Ok(ProblemSpec {
        side,
        k,
        kappa: None,
        impedance: ImpedanceSpec::Constant(C64::new(0.0, k)),
        geometry: geometry(geo)?,
        p: 3,
        n: two_n / 2,
        weighted: false,
    })
}

/// Node coordinates `[x0, y0, x1, y1, ...]` for `two_n` nodes and grading `p`.
#[wasm_bindgen]
pub fn graded_nodes(geo: &str, p: u32, two_n: usize) -> Result<Vec<f64>, JsError> {
    if two_n < 2 || two_n % 2 != 0 {
        return Err(JsError::new("the node count must be even"));
    }
    let g = build_grid(&geometry(geo)?, SigmoidParams::new(p)?, two_n / 2)?;
    Ok(g.x.iter().flat_map(|x| [x[0], x[1]]).collect())
}

/// Result of a scattering solve.
#[wasm_bindgen]
pub struct Scattering {
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
    far_abs: Vec<f64>,
}

#[wasm_bindgen]
impl Scattering {
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Relative GMRES residuals per iteration.
    #[wasm_bindgen(getter)]
    pub fn history(&self) -> Vec<f64> {
        self.history.clone()
    }

    /// `|u_inf|` at equispaced angles starting at 0.
    #[wasm_bindgen(getter)]
    pub fn far_field(&self) -> Vec<f64> {
        self.far_abs.clone()
    }
}

/// Sound-soft-like exterior impedance problem `Z = ik` for a plane wave
/// travelling at angle `theta`.
#[wasm_bindgen]
pub fn scatter(geo: &str, k: f64, two_n: usize, theta: f64, tol: f64) -> Result<Scattering, JsError> {
    let p = problem(Side::Exterior, geo, k, two_n)?;
    let g = p.grid()?;
    let inc = IncidenceSpec::plane_wave([theta.cos(), theta.sin()])?;
    let sys = build_system(&p, &g, &inc)?;
    let out = gmres(|v| sys.matrix.apply(v), &sys.rhs, tol, MAXIT)?;
    let ff = far_field(&p, &g, &out.solution)?;
    Ok(Scattering { iterations: out.iterations, converged: out.converged, history: out.history, far_abs: ff.values.iter().map(|v| v.norm()).collect() })
}

/// Interior problem with the field of a point source at `(4, 4)` as exact
/// solution. Returns `[iterations, max boundary error]`.
#[wasm_bindgen]
pub fn interior_error(geo: &str, k: f64, two_n: usize) -> Result<Vec<f64>, JsError> {
    let p = problem(Side::Interior, geo, k, two_n)?;
    let g = p.grid()?;
    let inc = IncidenceSpec::point_source([4.0, 4.0]);
    inc.validate(&p.geometry, &g)?;
    let sys = build_system(&p, &g, &inc)?;
    let out = gmres(|v| sys.matrix.apply(v), &sys.rhs, 1e-12, MAXIT)?;
    let err = boundary_errors(&out.solution, &exact_unknown(&p, &g, &inc)?)?;
    Ok(vec![out.iterations as f64, err])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_cluster_at_corners() {
        let xy = graded_nodes("square", 3, 64).unwrap();
        assert_eq!(xy.len(), 128);
        let near = xy.chunks(2).filter(|p| (p[0].abs() - 2.0).abs() < 0.2 && (p[1].abs() - 2.0).abs() < 0.2).count();
        assert!(near > 8, "{near}");
    }

    #[test]
    fn interior_solve_is_accurate() {
        let r = interior_error("square", 2.0, 256).unwrap();
        assert!(r[0] < 40.0 && r[1] < 1e-4, "{r:?}");
    }

    #[test]
    fn scattering_converges() {
        let s = scatter("lshape", 4.0, 96, 0.3, 1e-8).unwrap();
        assert!(s.converged && s.far_field().iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
