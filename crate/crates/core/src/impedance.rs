//! Impedance operators `Z`: constants, piecewise constants per boundary segment,
//! transmission operators `+-2 N_kappa`, and blends `-2 sum_j chi_j N_kappa_j chi_j`
//! over a smooth partition of unity.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geometry::GridData;
use crate::kernels::Variant;
use crate::operators::{Assembler, DenseOperator, OperatorKind, OperatorSpec};
use crate::specfun::Wavenumber;

/// Which side of the boundary the problem is posed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Exterior,
    Interior,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImpedanceSpec {
    Constant(C64),
    /// One value per boundary segment, in segment order.
    PiecewiseConstant(Vec<C64>),
    /// `sign * 2 N_kappa` with `sign = +1` (exterior) or `-1` (interior).
    Transmission { sign: f64, kappa: Wavenumber },
    /// `-2 sum_j chi_j N_kappa_j chi_j`; `patches[j]` lists contiguous segment
    /// indices. `overlap` is the collar half-width in parameter units
    /// (default: a quarter of the shortest patch).
    Blended { patches: Vec<Vec<usize>>, kappas: Vec<Wavenumber>, overlap: Option<f64> },
}

impl ImpedanceSpec {
    /// Checks the sign conditions that make the boundary value problem well posed.
    pub fn validate(&self, side: Side) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match self {
            ImpedanceSpec::Constant(z) => match side {
                Side::Exterior if !(z.im > 0.0) => bad(format!("exterior impedance {z} needs Im Z > 0")),
                Side::Interior if z.im == 0.0 || !z.im.is_finite() => bad(format!("interior impedance {z} needs Im Z != 0")),
                _ => Ok(()),
            },
            ImpedanceSpec::PiecewiseConstant(zs) => {
                if zs.is_empty() {
                    return bad("piecewise impedance needs at least one value".into());
                }
                let pos = zs.iter().all(|z| z.im >= 0.0) && zs.iter().any(|z| z.im > 0.0);
                let neg = zs.iter().all(|z| z.im <= 0.0) && zs.iter().any(|z| z.im < 0.0);
                match side {
                    Side::Exterior if !pos => bad("exterior piecewise impedance needs Im Z >= 0, positive somewhere".into()),
                    Side::Interior if !(pos || neg) => bad("interior piecewise impedance needs Im Z of one sign, nonzero somewhere".into()),
                    _ => Ok(()),
                }
            }
            ImpedanceSpec::Transmission { sign, kappa } => {
                if !(kappa.value().im > 0.0) {
                    return bad(format!("transmission impedance needs Im kappa > 0, got {}", kappa.value()));
                }
                match side {
                    Side::Exterior if *sign != 1.0 => bad("exterior transmission impedance is +2 N_kappa".into()),
                    Side::Interior if *sign != -1.0 => bad("interior transmission impedance is -2 N_kappa".into()),
                    _ => Ok(()),
                }
            }
            ImpedanceSpec::Blended { patches, kappas, .. } => {
                if side != Side::Interior {
                    return bad("blended impedance is only defined for interior problems".into());
                }
                if patches.is_empty() || patches.len() != kappas.len() {
                    return bad(format!("{} patches but {} wavenumbers", patches.len(), kappas.len()));
                }
                Ok(())
            }
        }
    }
}

/// Node samples of smooth cutoffs with `sum_j chi_j^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity {
    /// `chi[j][i] = chi_j(t_i)`.
    pub chi: Vec<Vec<f64>>,
    pub overlap: f64,
    intervals: Vec<(f64, f64)>,
}

/// `s(x) = b(x) / (b(x) + b(1 - x))` with `b(x) = exp(-1/x)` for `x > 0`.
fn smooth_step(x: f64) -> f64 {
    let b = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        b(x) / (b(x) + b(1.0 - x))
    }
}

impl PartitionOfUnity {
    fn raw(&self, j: usize, t: f64) -> f64 {
        let (a, len) = self.intervals[j];
        if len >= TAU - 1e-12 {
            return 1.0;
        }
        let d = self.overlap;
        let s = (t - a).rem_euclid(TAU);
        let u = if s < len + d { s } else { s - TAU };
        smooth_step((u + d) / (2.0 * d)) * smooth_step((len + d - u) / (2.0 * d))
    }

    /// Closed-form `chi_j(t)` at any parameter value.
    pub fn eval(&self, j: usize, t: f64) -> f64 {
        let total: f64 = (0..self.intervals.len()).map(|m| self.raw(m, t).powi(2)).sum();
        self.raw(j, t) / total.sqrt()
    }

    pub fn len(&self) -> usize {
        self.chi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chi.is_empty()
    }
}

/// Cutoffs that rise from 0 to 1 across a collar of half-width `overlap`
/// centered at each patch end, normalized so that squares sum to one.
pub fn build_partition(grid: &GridData, patches: &[Vec<usize>], overlap: Option<f64>) -> Result<PartitionOfUnity> {
    let nseg = grid.segment_count();
    let mut seen = vec![false; nseg];
    let mut intervals = Vec::with_capacity(patches.len());
    for p in patches {
        if p.is_empty() {
            return Err(Error::Config("empty patch".into()));
        }
        for (a, b) in p.iter().zip(p.iter().skip(1)) {
            if *b != (a + 1) % nseg {
                return Err(Error::Config(format!("patch {p:?} is not a contiguous run of segments")));
            }
        }
        for &s in p {
            if s >= nseg || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Config(format!("segment {s} is out of range or in two patches")));
            }
        }
        let start = grid.segment_interval(p[0]).0;
        let len: f64 = p.iter().map(|&s| {
            let (a, b) = grid.segment_interval(s);
            b - a
        }).sum();
        intervals.push((start, len));
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Config("patches do not cover every segment".into()));
    }
    let shortest = intervals.iter().map(|iv| iv.1).fold(f64::INFINITY, f64::min);
    let overlap = overlap.unwrap_or(0.25 * shortest);
    if !(overlap > 0.0) || (patches.len() > 1 && overlap > 0.5 * shortest) {
        return Err(Error::Config(format!("overlap {overlap} must lie in (0, {}]", 0.5 * shortest)));
    }
    let mut pu = PartitionOfUnity { chi: Vec::new(), overlap, intervals };
    let raw: Vec<Vec<f64>> = (0..patches.len()).map(|j| grid.t.iter().map(|&t| pu.raw(j, t)).collect()).collect();
    let norms: Vec<f64> = (0..grid.len()).map(|i| raw.iter().map(|r| r[i] * r[i]).sum::<f64>().sqrt()).collect();
    pu.chi = raw.into_iter().map(|r| r.iter().zip(&norms).map(|(x, n)| x / n).collect()).collect();
    Ok(pu)
}

/// A realized impedance acting on node samples of the Dirichlet trace.
#[derive(Debug, Clone)]
pub enum Impedance {
    /// Multiplication by node values.
    Diagonal(Vec<C64>),
    /// `sign * 2 N_kappa`, kept symbolic so that the formulation can expand it
    /// into differences of hypersingular operators.
    Transmission { sign: f64, kappa: Wavenumber },
    Dense(DenseOperator),
}

/// Physical hypersingular operator `N_kappa = diag(1/|x'|) (N^x_kappa - N^x_0 + N^x_0)`.
pub fn hypersingular(asm: &mut Assembler, kappa: Wavenumber, n0: &DenseOperator) -> Result<DenseOperator> {
    let mut n = asm.assemble(OperatorSpec::HypersingularDifference(Some(kappa), None), Variant::Arc)?;
    n.add_scaled(C64::new(1.0, 0.0), n0)?;
    let inv: Vec<f64> = asm.grid().jac.iter().map(|j| 1.0 / j).collect();
    n.scale_rows(&inv)?;
    Ok(n)
}

pub fn impedance_operator(spec: &ImpedanceSpec, grid: &GridData, asm: &mut Assembler) -> Result<Impedance> {
    match spec {
        ImpedanceSpec::Constant(z) => Ok(Impedance::Diagonal(vec![*z; grid.len()])),
        ImpedanceSpec::PiecewiseConstant(zs) => {
            if zs.len() != grid.segment_count() {
                return Err(Error::Config(format!("{} impedance values for {} segments", zs.len(), grid.segment_count())));
            }
            Ok(Impedance::Diagonal(grid.segment.iter().map(|&s| zs[s]).collect()))
        }
        ImpedanceSpec::Transmission { sign, kappa } => Ok(Impedance::Transmission { sign: *sign, kappa: *kappa }),
        ImpedanceSpec::Blended { patches, kappas, overlap } => {
            let pu = build_partition(grid, patches, *overlap)?;
            let n0 = asm.assemble(OperatorSpec::LaplaceHypersingular, Variant::Arc)?;
            let m = grid.len();
            let mut z = DenseOperator::zeros(m);
            for (chi, &kappa) in pu.chi.iter().zip(kappas) {
                let mut n = hypersingular(asm, kappa, &n0)?;
                n.scale_rows(chi)?;
                n.scale_cols(chi)?;
                z.add_scaled(C64::new(-2.0, 0.0), &n)?;
            }
            z.kind = OperatorKind::Impedance;
            Ok(Impedance::Dense(z))
        }
    }
}

impl Impedance {
    /// The impedance as an explicit matrix.
    pub fn to_dense(&self, asm: &mut Assembler) -> Result<DenseOperator> {
        let mut z = match self {
            Impedance::Diagonal(d) => DenseOperator::diag(d),
            Impedance::Dense(a) => a.clone(),
            Impedance::Transmission { sign, kappa } => {
                let n0 = asm.assemble(OperatorSpec::LaplaceHypersingular, Variant::Arc)?;
                let mut n = hypersingular(asm, *kappa, &n0)?;
                n.scale(C64::new(2.0 * sign, 0.0));
                n
            }
        };
        z.kind = OperatorKind::Impedance;
        Ok(z)
    }

    /// `Z v`.
    pub fn apply(&self, v: &[C64], asm: &mut Assembler) -> Result<Vec<C64>> {
        match self {
            Impedance::Diagonal(d) => {
                crate::error::check_len(d.len(), v.len())?;
                Ok(d.iter().zip(v).map(|(a, b)| a * b).collect())
            }
            Impedance::Dense(a) => a.apply(v),
            Impedance::Transmission { .. } => self.to_dense(asm)?.apply(v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, CurveSpec, SigmoidParams};

    fn square(n: usize) -> GridData {
        build_grid(&CurveSpec::square4(), SigmoidParams::default(), n).unwrap()
    }

    #[test]
    fn constant_and_piecewise() {
        let g = square(16);
        let mut asm = Assembler::new(&g);
        let k = 2.0;
        match impedance_operator(&ImpedanceSpec::Constant(C64::new(0.0, k)), &g, &mut asm).unwrap() {
            Impedance::Diagonal(d) => assert!(d.iter().all(|z| *z == C64::new(0.0, 2.0))),
            _ => panic!(),
        }
        let zs: Vec<C64> = (0..4).map(|j| C64::new(0.0, j as f64 * k)).collect();
        let spec = ImpedanceSpec::PiecewiseConstant(zs);
        spec.validate(Side::Exterior).unwrap();
        let Impedance::Diagonal(d) = impedance_operator(&spec, &g, &mut asm).unwrap() else { panic!() };
        let first = g.segment.iter().position(|&s| s == 0).unwrap();
        let last = g.segment.iter().position(|&s| s == 3).unwrap();
        assert_eq!(d[first], C64::new(0.0, 0.0));
        assert_eq!(d[last], C64::new(0.0, 3.0 * k));
    }

    #[test]
    fn validation() {
        let kap = Wavenumber::new(C64::new(2.0, 1.0)).unwrap();
        assert!(ImpedanceSpec::Constant(C64::new(1.0, 0.0)).validate(Side::Exterior).is_err());
        assert!(ImpedanceSpec::Constant(C64::new(0.0, -2.0)).validate(Side::Interior).is_ok());
        assert!(ImpedanceSpec::Transmission { sign: 1.0, kappa: kap }.validate(Side::Interior).is_err());
        assert!(ImpedanceSpec::Transmission { sign: -1.0, kappa: kap }.validate(Side::Interior).is_ok());
        let real = Wavenumber::real(2.0).unwrap();
        assert!(ImpedanceSpec::Transmission { sign: 1.0, kappa: real }.validate(Side::Exterior).is_err());
    }

    #[test]
    fn partition_squares_sum_to_one() {
        let g = square(64);
        let patches: Vec<Vec<usize>> = (0..4).map(|j| vec![j]).collect();
        let pu = build_partition(&g, &patches, None).unwrap();
        for i in 0..g.len() {
            let s: f64 = pu.chi.iter().map(|c| c[i] * c[i]).sum();
            assert!((s - 1.0).abs() < 1e-12);
            let nonzero: Vec<f64> = pu.chi.iter().map(|c| c[i]).filter(|&v| v > 0.0).collect();
            if nonzero.len() == 1 {
                assert_eq!(nonzero[0], 1.0);
            }
        }
        for k in 0..1000 {
            let t = k as f64 * TAU / 1000.0 + 1e-3;
            for j in 0..4 {
                let v = pu.eval(j, t);
                assert!((-1e-10..=1.0 + 1e-10).contains(&v));
            }
        }
        assert!(build_partition(&g, &patches, Some(10.0)).is_err());
        assert!(build_partition(&g, &[vec![0, 1], vec![3]], None).is_err());
        assert!(build_partition(&g, &[vec![0, 2], vec![1, 3]], None).is_err());
    }

    #[test]
    fn single_patch_blend_is_transmission() {
        let g = square(16);
        let mut asm = Assembler::new(&g);
        let kappa = Wavenumber::new(C64::new(3.0, 1.0)).unwrap();
        let blended = ImpedanceSpec::Blended { patches: vec![vec![0, 1, 2, 3]], kappas: vec![kappa], overlap: None };
        let a = impedance_operator(&blended, &g, &mut asm).unwrap().to_dense(&mut asm).unwrap();
        let b = Impedance::Transmission { sign: -1.0, kappa }.to_dense(&mut asm).unwrap();
        let d = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d <= 1e-10 * b.max_abs());
    }
}
