//! Regularized combined-field systems for exterior and interior impedance
//! problems, and their right-hand sides.
//!
//! With `sigma = +1` (exterior) or `-1` (interior) and a multiplicative or
//! explicit impedance `Z`, the unknown `gamma_D u` satisfies
//!
//! ```text
//! A = I - 2 S_kappa [(N_k - N_0) - (N_kappa - N_0)] - 2 K_kappa^2 - sigma K_k - M Z
//! M = sigma (S_kappa + S_k) + 2 S_kappa K_k^T
//! ```
//!
//! For a field with impedance data `f = gamma_N u + Z gamma_D u` the right-hand
//! side is `-M f`. Interior problems use it directly. Exterior scattering solves
//! for the total field, and there it reduces to `gamma_D u_inc + 2 S_kappa gamma_N u_inc`.
//! The weighted variants solve for `|x'| gamma_D u` and carry a left factor
//! `diag|x'|` on every single-layer product.
//!
//! For `Z = +-2 N_kappa` the Calderón identities `S N = -I/4 + K^2` and
//! `K^T N = N K` remove every standalone hypersingular operator:
//!
//! ```text
//! A = 2I - 2(S_kappa - S_k)(N_k - N_kappa) - 4K_kappa^2 - 2K_k^2
//!     - 4 sigma S_kappa K_k^T (N_kappa - N_k) - 4 sigma S_kappa (N_k - N_kappa) K_k - 4 sigma K_kappa^2 K_k
//! ```
//!
//! The data term `-M Z g` expands the same way; see `transmission_data_rhs`.

use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};
use crate::geometry::{build_grid, CurveSpec, GridData, Point, SigmoidParams};
use crate::impedance::{impedance_operator, Impedance, ImpedanceSpec, Side};
use crate::kernels::Variant;
use crate::operators::{Assembler, DenseOperator, OperatorKind, OperatorSpec};
use crate::specfun::{hankel_h1, Wavenumber};

const I: C64 = C64::new(0.0, 1.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Everything that defines one discrete boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub side: Side,
    /// Real wavenumber `k`.
    pub k: f64,
    /// Regularizing wavenumber; defaults to `k + i`.
    pub kappa: Option<C64>,
    pub impedance: ImpedanceSpec,
    pub geometry: CurveSpec,
    pub p: u32,
    /// Half the number of nodes.
    pub n: usize,
    /// Solve for `|x'| gamma_D u` instead of `gamma_D u`.
    pub weighted: bool,
}

impl ProblemSpec {
    pub fn wavenumber(&self) -> Result<Wavenumber> {
        Wavenumber::real(self.k)
    }

    pub fn kappa(&self) -> Result<Wavenumber> {
        let kap = Wavenumber::new(self.kappa.unwrap_or(C64::new(self.k, 1.0)))?;
        if !(kap.value().im > 0.0) {
            return Err(Error::Config(format!("regularizing wavenumber {} needs Im > 0", kap.value())));
        }
        Ok(kap)
    }

    pub fn validate(&self) -> Result<()> {
        self.wavenumber()?;
        self.kappa()?;
        self.impedance.validate(self.side)?;
        let multiplicative = matches!(self.impedance, ImpedanceSpec::Constant(_) | ImpedanceSpec::PiecewiseConstant(_));
        if matches!(self.impedance, ImpedanceSpec::PiecewiseConstant(_)) && !self.weighted {
            return Err(Error::Config("piecewise-constant impedance requires the weighted formulation".into()));
        }
        if self.weighted && !multiplicative {
            return Err(Error::Config("the weighted formulation needs a multiplicative impedance".into()));
        }
        if let ImpedanceSpec::Transmission { sign, kappa } = &self.impedance {
            if *sign != sigma(self.side) || kappa.value() != self.kappa()?.value() {
                return Err(Error::Config(format!(
                    "transmission impedance must be {}2 N_kappa with the regularizing wavenumber",
                    if self.side == Side::Exterior { "+" } else { "-" }
                )));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridData> {
        build_grid(&self.geometry, SigmoidParams::new(self.p)?, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IncidenceKind {
    /// `u_inc = e^{i k x.d}`, `|d| = 1`.
    PlaneWave { direction: Point },
    /// `u_0 = (i/4) H_0(k |x - x0|)`.
    PointSource { source: Point },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidenceSpec {
    pub kind: IncidenceKind,
    pub amplitude: C64,
}

impl IncidenceSpec {
    pub fn plane_wave(direction: Point) -> Result<Self> {
        let norm = direction[0].hypot(direction[1]);
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::Config(format!("plane-wave direction {direction:?} is not a unit vector")));
        }
        Ok(Self { kind: IncidenceKind::PlaneWave { direction }, amplitude: ONE })
    }

    pub fn point_source(source: Point) -> Self {
        Self { kind: IncidenceKind::PointSource { source }, amplitude: ONE }
    }

    pub fn validate(&self, geometry: &CurveSpec, grid: &GridData) -> Result<()> {
        if let IncidenceKind::PointSource { source } = self.kind {
            let on_boundary = grid.x.iter().any(|x| (x[0] - source[0]).hypot(x[1] - source[1]) == 0.0);
            if geometry.contains(source) || on_boundary {
                return Err(Error::Config(format!("point source {source:?} lies in the closed bounded domain")));
            }
        }
        Ok(())
    }

    /// Field value at a point.
    pub fn field(&self, k: f64, x: Point) -> Result<C64> {
        Ok(self.amplitude
            * match self.kind {
                IncidenceKind::PlaneWave { direction } => C64::from_polar(1.0, k * (x[0] * direction[0] + x[1] * direction[1])),
                IncidenceKind::PointSource { source } => {
                    let r = (x[0] - source[0]).hypot(x[1] - source[1]);
                    0.25 * I * hankel_h1(0, C64::new(k * r, 0.0))?
                }
            })
    }
}

/// Node samples of `gamma_D` and `gamma_N` (exterior unit normal) of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct Traces {
    pub dirichlet: Vec<C64>,
    pub neumann: Vec<C64>,
}

pub fn incident_traces(k: f64, grid: &GridData, inc: &IncidenceSpec) -> Result<Traces> {
    let m = grid.len();
    let mut dirichlet = Vec::with_capacity(m);
    let mut neumann = Vec::with_capacity(m);
    for (x, n) in grid.x.iter().zip(&grid.normal) {
        let (d, dn) = match inc.kind {
            IncidenceKind::PlaneWave { direction: d } => {
                let u = C64::from_polar(1.0, k * (x[0] * d[0] + x[1] * d[1]));
                (u, I * k * (n[0] * d[0] + n[1] * d[1]) * u)
            }
            IncidenceKind::PointSource { source } => {
                let rv = [x[0] - source[0], x[1] - source[1]];
                let r = rv[0].hypot(rv[1]);
                let z = C64::new(k * r, 0.0);
                let u = 0.25 * I * hankel_h1(0, z)?;
                (u, -0.25 * I * k * hankel_h1(1, z)? * (rv[0] * n[0] + rv[1] * n[1]) / r)
            }
        };
        dirichlet.push(inc.amplitude * d);
        neumann.push(inc.amplitude * dn);
    }
    Ok(Traces { dirichlet, neumann })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    Trace,
    WeightedTrace,
}

/// Which family of systems was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Multiplicative or explicit impedance.
    Direct,
    /// `Z = +-2 N_kappa` through the Calderón-recombined expansion.
    Transmission,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DenseOperator,
    pub rhs: Vec<C64>,
    pub unknown: Unknown,
    pub formulation: Formulation,
    pub side: Side,
}

fn sigma(side: Side) -> f64 {
    match side {
        Side::Exterior => 1.0,
        Side::Interior => -1.0,
    }
}

fn variant(weighted: bool) -> Variant {
    if weighted {
        Variant::Weighted
    } else {
        Variant::Arc
    }
}

fn scaled(v: &[C64], s: &[f64]) -> Vec<C64> {
    v.iter().zip(s).map(|(a, b)| a * b).collect()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    y.iter_mut().zip(x).for_each(|(b, a)| *b += alpha * a);
}

/// `A0` (everything but the impedance term) and `M`.
fn direct_blocks(p: &ProblemSpec, asm: &mut Assembler) -> Result<(DenseOperator, DenseOperator)> {
    let (k, kap) = (p.wavenumber()?, p.kappa()?);
    let var = variant(p.weighted);
    let s = sigma(p.side);
    let jac = asm.grid().jac.clone();
    let m = jac.len();
    let sw_kap = asm.assemble(OperatorSpec::SingleLayer(kap), Variant::Weighted)?;
    // (N_k - N_0) - (N_kappa - N_0), each difference assembled on its own.
    let mut nd = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), None), var)?;
    nd.add_scaled(-ONE, &asm.assemble(OperatorSpec::HypersingularDifference(Some(kap), None), var)?)?;
    let mut a = sw_kap.compose(&nd)?;
    drop(nd);
    a.scale(C64::new(-2.0, 0.0));
    if p.weighted {
        a.scale_rows(&jac)?;
    }
    let k_kap = asm.assemble(OperatorSpec::DoubleLayer(kap), var)?;
    a.add_scaled(C64::new(-2.0, 0.0), &k_kap.compose(&k_kap)?)?;
    drop(k_kap);
    a.add_scaled(C64::new(-s, 0.0), &asm.assemble(OperatorSpec::DoubleLayer(k), var)?)?;
    a.add_scaled(ONE, &DenseOperator::identity(m))?;

    let kt = asm.assemble(OperatorSpec::AdjointDoubleLayer(k), var)?;
    let mut mm = sw_kap.compose(&kt)?;
    drop(kt);
    mm.scale(C64::new(2.0, 0.0));
    mm.add_scaled(C64::new(s, 0.0), &asm.assemble(OperatorSpec::SingleLayer(kap), var)?)?;
    mm.add_scaled(C64::new(s, 0.0), &asm.assemble(OperatorSpec::SingleLayer(k), var)?)?;
    if p.weighted {
        mm.scale_rows(&jac)?;
    }
    Ok((a, mm))
}

fn subtract_impedance_term(a: &mut DenseOperator, mm: &DenseOperator, z: &Impedance) -> Result<()> {
    match z {
        Impedance::Diagonal(d) => {
            check_len(a.dim(), d.len())?;
            let m = a.dim();
            for (row_a, row_m) in a.data_mut().chunks_mut(m).zip(mm.data().chunks(m)) {
                for ((x, y), zz) in row_a.iter_mut().zip(row_m).zip(d) {
                    *x -= y * zz;
                }
            }
            Ok(())
        }
        Impedance::Dense(zm) => a.add_scaled(-ONE, &mm.compose(zm)?),
        Impedance::Transmission { .. } => Err(Error::Config("transmission impedance uses its own expansion".into())),
    }
}

fn transmission_matrix(p: &ProblemSpec, asm: &mut Assembler) -> Result<DenseOperator> {
    let (k, kap) = (p.wavenumber()?, p.kappa()?);
    let s = C64::new(sigma(p.side), 0.0);
    let m = asm.grid().len();
    let nd = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), Some(kap)), Variant::Arc)?;
    let sw_kap = asm.assemble(OperatorSpec::SingleLayer(kap), Variant::Weighted)?;
    let mut diff = sw_kap.clone();
    diff.add_scaled(-ONE, &asm.assemble(OperatorSpec::SingleLayer(k), Variant::Weighted)?)?;
    let mut a = diff.compose(&nd)?;
    drop(diff);
    a.scale(C64::new(-2.0, 0.0));
    let k_k = asm.assemble(OperatorSpec::DoubleLayer(k), Variant::Arc)?;
    let k_kap = asm.assemble(OperatorSpec::DoubleLayer(kap), Variant::Arc)?;
    let kap2 = k_kap.compose(&k_kap)?;
    drop(k_kap);
    a.add_scaled(C64::new(-4.0, 0.0), &kap2)?;
    a.add_scaled(C64::new(-2.0, 0.0), &k_k.compose(&k_k)?)?;
    a.add_scaled(-4.0 * s, &kap2.compose(&k_k)?)?;
    drop(kap2);
    // -4 sigma S_kappa K^T (N_kappa - N_k) = +4 sigma S^w_kappa K^{T,w}_k (N^x_k - N^x_kappa)
    let q = sw_kap.compose(&asm.assemble(OperatorSpec::AdjointDoubleLayer(k), Variant::Weighted)?)?;
    a.add_scaled(4.0 * s, &q.compose(&nd)?)?;
    drop(q);
    a.add_scaled(-4.0 * s, &sw_kap.compose(&nd)?.compose(&k_k)?)?;
    a.add_scaled(C64::new(2.0, 0.0), &DenseOperator::identity(m))?;
    Ok(a)
}

/// `-M f` with `f = gamma_N u + Z gamma_D u`, by products with vectors.
fn data_rhs(p: &ProblemSpec, asm: &mut Assembler, z: &Impedance, tr: &Traces) -> Result<Vec<C64>> {
    let (k, kap) = (p.wavenumber()?, p.kappa()?);
    let jac = asm.grid().jac.clone();
    let s = C64::new(sigma(p.side), 0.0);
    let mut f = tr.neumann.clone();
    axpy(ONE, &z.apply(&tr.dirichlet, asm)?, &mut f);
    let var = variant(p.weighted);
    let fin = if p.weighted { scaled(&f, &jac) } else { f };
    let kt = asm.assemble(OperatorSpec::AdjointDoubleLayer(k), var)?;
    let sw = asm.assemble(OperatorSpec::SingleLayer(kap), Variant::Weighted)?;
    let mut out = sw.apply(&kt.apply(&fin)?)?;
    out.iter_mut().for_each(|x| *x *= -2.0);
    axpy(-s, &asm.assemble(OperatorSpec::SingleLayer(kap), var)?.apply(&fin)?, &mut out);
    axpy(-s, &asm.assemble(OperatorSpec::SingleLayer(k), var)?.apply(&fin)?, &mut out);
    Ok(if p.weighted { scaled(&out, &jac) } else { out })
}

/// `gamma_D u_inc + 2 S_kappa gamma_N u_inc` for the total field of a scattering problem.
fn scattering_rhs(p: &ProblemSpec, asm: &mut Assembler, tr: &Traces) -> Result<Vec<C64>> {
    let kap = p.kappa()?;
    let jac = asm.grid().jac.clone();
    let sw = asm.assemble(OperatorSpec::SingleLayer(kap), Variant::Weighted)?;
    let mut rhs = tr.dirichlet.clone();
    axpy(C64::new(2.0, 0.0), &sw.apply(&scaled(&tr.neumann, &jac))?, &mut rhs);
    Ok(if p.weighted { scaled(&rhs, &jac) } else { rhs })
}

/// `-M (gamma_N u + 2 sigma N_kappa gamma_D u)`, with the `N_kappa` term
/// expanded into `B gamma_D u` (`c = -4 sigma`):
///
/// ```text
/// B = I - 2S_k(N_kappa - N_k) - 2K_k^2 - 2K_kappa^2
///     + c [S_kappa K_k^T (N_kappa - N_k) + S_kappa (N_k - N_kappa) K_k - K_k/4 + K_kappa^2 K_k]
/// ```
fn transmission_data_rhs(p: &ProblemSpec, asm: &mut Assembler, tr: &Traces) -> Result<Vec<C64>> {
    let (k, kap) = (p.wavenumber()?, p.kappa()?);
    let jac = asm.grid().jac.clone();
    let s = sigma(p.side);
    let c = C64::new(-4.0 * s, 0.0);
    let sw_kap = asm.assemble(OperatorSpec::SingleLayer(kap), Variant::Weighted)?;
    let sw_k = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Weighted)?;
    let ktw = asm.assemble(OperatorSpec::AdjointDoubleLayer(k), Variant::Weighted)?;
    let k_k = asm.assemble(OperatorSpec::DoubleLayer(k), Variant::Arc)?;
    let k_kap = asm.assemble(OperatorSpec::DoubleLayer(kap), Variant::Arc)?;
    let nd = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), Some(kap)), Variant::Arc)?;
    // -(sigma (S_k + S_kappa) + 2 S_kappa K^T) gamma_N u
    let jn = scaled(&tr.neumann, &jac);
    let mut rhs = sw_k.apply(&jn)?;
    axpy(ONE, &sw_kap.apply(&jn)?, &mut rhs);
    rhs.iter_mut().for_each(|x| *x *= -s);
    axpy(C64::new(-2.0, 0.0), &sw_kap.apply(&ktw.apply(&jn)?)?, &mut rhs);
    // B g, with nd = N_k - N_kappa
    let g = &tr.dirichlet;
    let w1 = nd.apply(g)?;
    let kg = k_k.apply(g)?;
    axpy(ONE, g, &mut rhs);
    axpy(C64::new(2.0, 0.0), &sw_k.apply(&w1)?, &mut rhs);
    axpy(C64::new(-2.0, 0.0), &k_k.apply(&kg)?, &mut rhs);
    axpy(C64::new(-2.0, 0.0), &k_kap.apply(&k_kap.apply(g)?)?, &mut rhs);
    axpy(-c, &sw_kap.apply(&ktw.apply(&w1)?)?, &mut rhs);
    axpy(c, &sw_kap.apply(&nd.apply(&kg)?)?, &mut rhs);
    axpy(-0.25 * c, &kg, &mut rhs);
    axpy(c, &k_kap.apply(&k_kap.apply(&kg)?)?, &mut rhs);
    Ok(rhs)
}

fn matrix_with(p: &ProblemSpec, asm: &mut Assembler, z: &Impedance) -> Result<DenseOperator> {
    let mut a = match z {
        Impedance::Transmission { .. } => transmission_matrix(p, asm)?,
        _ => {
            let (mut a, mm) = direct_blocks(p, asm)?;
            subtract_impedance_term(&mut a, &mm, z)?;
            a
        }
    };
    a.kind = OperatorKind::System;
    a.wavenumbers = vec![C64::new(p.k, 0.0), p.kappa()?.value()];
    a.variant = Some(variant(p.weighted));
    Ok(a)
}

/// Right-hand side for the data traces `tr`: scattering of an incident wave
/// outside, `-M f` inside.
fn rhs_from_traces(p: &ProblemSpec, asm: &mut Assembler, z: &Impedance, tr: &Traces) -> Result<Vec<C64>> {
    match (p.side, z) {
        (Side::Exterior, _) => scattering_rhs(p, asm, tr),
        (Side::Interior, Impedance::Transmission { .. }) => transmission_data_rhs(p, asm, tr),
        (Side::Interior, _) => data_rhs(p, asm, z, tr),
    }
}

fn rhs_with(p: &ProblemSpec, asm: &mut Assembler, z: &Impedance, inc: &IncidenceSpec) -> Result<Vec<C64>> {
    let grid = asm.grid();
    inc.validate(&p.geometry, grid)?;
    let tr = incident_traces(p.k, grid, inc)?;
    rhs_from_traces(p, asm, z, &tr)
}

/// The system matrix for `problem` on `grid`.
pub fn assemble_cfier(problem: &ProblemSpec, grid: &GridData) -> Result<DenseOperator> {
    problem.validate()?;
    let mut asm = Assembler::new(grid);
    let z = impedance_operator(&problem.impedance, grid, &mut asm)?;
    matrix_with(problem, &mut asm, &z)
}

/// The right-hand side for `problem` driven by `incidence`.
pub fn build_rhs(problem: &ProblemSpec, grid: &GridData, incidence: &IncidenceSpec) -> Result<Vec<C64>> {
    problem.validate()?;
    let mut asm = Assembler::new(grid);
    let z = impedance_operator(&problem.impedance, grid, &mut asm)?;
    rhs_with(problem, &mut asm, &z, incidence)
}

/// Matrix and right-hand side, sharing one operator cache.
pub fn build_system(problem: &ProblemSpec, grid: &GridData, incidence: &IncidenceSpec) -> Result<LinearSystem> {
    problem.validate()?;
    let mut asm = Assembler::new(grid);
    let z = impedance_operator(&problem.impedance, grid, &mut asm)?;
    let rhs = rhs_with(problem, &mut asm, &z, incidence)?;
    let matrix = matrix_with(problem, &mut asm, &z)?;
    Ok(LinearSystem {
        matrix,
        rhs,
        unknown: if problem.weighted { Unknown::WeightedTrace } else { Unknown::Trace },
        formulation: if matches!(z, Impedance::Transmission { .. }) { Formulation::Transmission } else { Formulation::Direct },
        side: problem.side,
    })
}

/// Node samples of the unknown when the solution is the point-source field itself.
pub fn exact_unknown(problem: &ProblemSpec, grid: &GridData, incidence: &IncidenceSpec) -> Result<Vec<C64>> {
    let d = incident_traces(problem.k, grid, incidence)?.dirichlet;
    Ok(if problem.weighted { scaled(&d, &grid.jac) } else { d })
}

/// `max |A x - b|` where `x` samples a point-source field and `b` is built from
/// its impedance data `gamma_N u + Z gamma_D u`. The source must lie outside
/// the domain for interior problems and inside it for exterior ones, where the
/// field is radiating.
pub fn manufactured_residual(problem: &ProblemSpec, incidence: &IncidenceSpec) -> Result<f64> {
    let IncidenceKind::PointSource { source } = incidence.kind else {
        return Err(Error::Config("manufactured residual needs a point source".into()));
    };
    problem.validate()?;
    let grid = problem.grid()?;
    match problem.side {
        Side::Interior => incidence.validate(&problem.geometry, &grid)?,
        Side::Exterior if !problem.geometry.contains(source) => {
            return Err(Error::Config(format!("exterior manufactured solution needs the source {source:?} inside the domain")));
        }
        Side::Exterior => {}
    }
    let mut asm = Assembler::new(&grid);
    let z = impedance_operator(&problem.impedance, &grid, &mut asm)?;
    let tr = incident_traces(problem.k, &grid, incidence)?;
    let b = match &z {
        Impedance::Transmission { .. } => transmission_data_rhs(problem, &mut asm, &tr)?,
        _ => data_rhs(problem, &mut asm, &z, &tr)?,
    };
    let a = matrix_with(problem, &mut asm, &z)?;
    let x = exact_unknown(problem, &grid, incidence)?;
    let ax = a.apply(&x)?;
    Ok(ax.iter().zip(&b).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(side: Side, impedance: ImpedanceSpec, n: usize) -> ProblemSpec {
        ProblemSpec { side, k: 2.0, kappa: None, impedance, geometry: CurveSpec::square4(), p: 3, n, weighted: false }
    }

    #[test]
    fn traces_of_plane_wave_at_origin() {
        let g = build_grid(&CurveSpec::circle(1.0).unwrap(), SigmoidParams::default(), 8).unwrap();
        let inc = IncidenceSpec::plane_wave([0.0, -1.0]).unwrap();
        let tr = incident_traces(2.0, &g, &inc).unwrap();
        for i in 0..g.len() {
            let u = C64::from_polar(1.0, -2.0 * g.x[i][1]);
            assert!((tr.dirichlet[i] - u).norm() < 1e-15);
            assert!((tr.neumann[i] - (-2.0 * I * g.normal[i][1]) * u).norm() < 1e-14);
        }
        assert!(IncidenceSpec::plane_wave([1.0, 1.0]).is_err());
    }

    #[test]
    fn invalid_problems_are_rejected() {
        assert!(problem(Side::Exterior, ImpedanceSpec::Constant(C64::new(0.0, 0.0)), 16).validate().is_err());
        let mut p = problem(Side::Exterior, ImpedanceSpec::PiecewiseConstant(vec![I; 4]), 16);
        assert!(p.validate().is_err());
        p.weighted = true;
        assert!(p.validate().is_ok());
        let mut q = problem(Side::Interior, ImpedanceSpec::Constant(I), 16);
        q.kappa = Some(C64::new(2.0, 0.0));
        assert!(q.validate().is_err());
        let r = problem(Side::Interior, ImpedanceSpec::Constant(I), 16);
        let inside = IncidenceSpec::point_source([0.5, 0.5]);
        assert!(build_rhs(&r, &r.grid().unwrap(), &inside).is_err());
    }

    #[test]
    fn zero_incidence_gives_zero_rhs() {
        let p = problem(Side::Exterior, ImpedanceSpec::Constant(C64::new(0.0, 2.0)), 16);
        let mut inc = IncidenceSpec::plane_wave([0.0, -1.0]).unwrap();
        inc.amplitude = C64::new(0.0, 0.0);
        let b = build_rhs(&p, &p.grid().unwrap(), &inc).unwrap();
        assert!(b.iter().all(|z| z.norm() == 0.0));
        let q = problem(Side::Interior, ImpedanceSpec::Constant(C64::new(0.0, 2.0)), 16);
        let mut src = IncidenceSpec::point_source([4.0, 4.0]);
        src.amplitude = C64::new(0.0, 0.0);
        assert_eq!(manufactured_residual(&q, &src).unwrap(), 0.0);
    }
}
