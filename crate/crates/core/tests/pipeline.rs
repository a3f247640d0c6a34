//! Assembly, solve and post-processing on small problems with known answers.

use std::f64::consts::{FRAC_PI_4, PI};

use cfier::formulations::{
    build_system, exact_unknown, incident_traces, manufactured_residual, IncidenceSpec, ProblemSpec,
};
use cfier::geometry::{build_grid, CurveSpec, GridData, SigmoidParams};
use cfier::impedance::{ImpedanceSpec, Side};
use cfier::kernels::Variant;
use cfier::operators::{Assembler, DenseOperator, OperatorSpec};
use cfier::postproc::{boundary_errors, far_field, far_field_of_traces, near_field, recover_traces, WeightedTraces};
use cfier::solver::gmres;
use cfier::specfun::Wavenumber;
use num_complex::Complex64 as C64;

const I: C64 = C64::new(0.0, 1.0);

fn problem(side: Side, impedance: ImpedanceSpec, geometry: CurveSpec, n: usize) -> ProblemSpec {
    ProblemSpec { side, k: 2.0, kappa: None, impedance, geometry, p: 3, n, weighted: false }
}

fn circle() -> CurveSpec {
    CurveSpec::circle(1.0).unwrap()
}

fn solve(p: &ProblemSpec, inc: &IncidenceSpec) -> (GridData, Vec<C64>, usize) {
    let g = p.grid().unwrap();
    let sys = build_system(p, &g, inc).unwrap();
    let out = gmres(|v| sys.matrix.apply(v), &sys.rhs, 1e-12, 400).unwrap();
    assert!(out.converged);
    (g, out.solution, out.iterations)
}

fn weighted_traces(g: &GridData, k: f64, inc: &IncidenceSpec) -> WeightedTraces {
    let tr = incident_traces(k, g, inc).unwrap();
    let w = |v: &[C64]| v.iter().zip(&g.jac).map(|(a, b)| a * b).collect();
    WeightedTraces { dirichlet: w(&tr.dirichlet), neumann: w(&tr.neumann) }
}

#[test]
fn point_source_far_field_normalization() {
    let g = build_grid(&circle(), SigmoidParams::default(), 64).unwrap();
    let tr = weighted_traces(&g, 2.0, &IncidenceSpec::point_source([0.0, 0.0]));
    let ff = far_field_of_traces(2.0, &g, &tr).unwrap();
    let want = C64::from_polar(1.0, FRAC_PI_4) / (16.0 * PI).sqrt();
    assert!(ff.values.iter().all(|v| (v - want).norm() < 1e-8));
}

#[test]
fn manufactured_residual_converges_spectrally_on_circle() {
    // At 2n = 64 the residual is already at rounding level, so compare coarser grids.
    let src = IncidenceSpec::point_source([3.0, 1.0]);
    let r = |n| manufactured_residual(&problem(Side::Interior, ImpedanceSpec::Constant(-I), circle(), n), &src).unwrap();
    let (a, b) = (r(6), r(12));
    assert!(b * 8.0 <= a, "{a:e} {b:e}");
}

#[test]
fn manufactured_residual_decreases_on_square() {
    let src = IncidenceSpec::point_source([4.0, 4.0]);
    let r = |n| manufactured_residual(&problem(Side::Interior, ImpedanceSpec::Constant(2.0 * I), CurveSpec::square4(), n), &src).unwrap();
    let (a, b) = (r(32), r(64));
    assert!(b < a, "{a:e} {b:e}");
}

#[test]
fn interior_solution_reproduces_point_source() {
    let src = IncidenceSpec::point_source([4.0, 4.0]);
    let p = problem(Side::Interior, ImpedanceSpec::Constant(2.0 * I), CurveSpec::square4(), 128);
    let (g, x, _) = solve(&p, &src);
    let exact = exact_unknown(&p, &g, &src).unwrap();
    assert!(boundary_errors(&x, &exact).unwrap() < 1e-4);
    let tr = recover_traces(&p, &g, &x, Some(&src)).unwrap();
    let u = near_field(&[[0.5, 0.5]], 2.0, Side::Interior, &g, &tr).unwrap()[0];
    assert!((u - src.field(2.0, [0.5, 0.5]).unwrap()).norm() < 1e-6);
}

#[test]
fn weighted_and_unweighted_agree_on_circle() {
    let inc = IncidenceSpec::plane_wave([0.0, -1.0]).unwrap();
    let mut p = problem(Side::Exterior, ImpedanceSpec::Constant(2.0 * I), circle(), 32);
    let (_, x, _) = solve(&p, &inc);
    p.weighted = true;
    let (_, xw, _) = solve(&p, &inc);
    assert!(boundary_errors(&x, &xw).unwrap() < 1e-10);
}

/// `A e_m` for the direct system with `Z = 2 sigma N_kappa` realized through
/// the circle eigenvalues of `N_kappa`.
fn direct_with_fourier_impedance(side: Side, g: &GridData, m: i32, n_kappa: C64) -> Vec<C64> {
    let (k, kap) = (Wavenumber::real(2.0).unwrap(), Wavenumber::new(C64::new(2.0, 1.0)).unwrap());
    let s = if side == Side::Exterior { 1.0 } else { -1.0 };
    let mut asm = Assembler::new(g);
    let a = |asm: &mut Assembler, spec| asm.assemble(spec, Variant::Arc).unwrap();
    let e: Vec<C64> = g.t.iter().map(|&t| C64::from_polar(1.0, m as f64 * t)).collect();
    let sw = a(&mut asm, OperatorSpec::SingleLayer(kap));
    let mut nd = a(&mut asm, OperatorSpec::HypersingularDifference(Some(k), None));
    nd.add_scaled(-C64::new(1.0, 0.0), &a(&mut asm, OperatorSpec::HypersingularDifference(Some(kap), None))).unwrap();
    let kk = a(&mut asm, OperatorSpec::DoubleLayer(kap));
    let kt = a(&mut asm, OperatorSpec::AdjointDoubleLayer(k));
    let mut mm = a(&mut asm, OperatorSpec::SingleLayer(kap));
    mm.add_scaled(C64::new(1.0, 0.0), &a(&mut asm, OperatorSpec::SingleLayer(k))).unwrap();
    mm.scale(C64::new(s, 0.0));
    mm.add_scaled(C64::new(2.0, 0.0), &sw.compose(&kt).unwrap()).unwrap();
    let mut sys = sw.compose(&nd).unwrap();
    sys.scale(C64::new(-2.0, 0.0));
    sys.add_scaled(C64::new(-2.0, 0.0), &kk.compose(&kk).unwrap()).unwrap();
    sys.add_scaled(C64::new(-s, 0.0), &a(&mut asm, OperatorSpec::DoubleLayer(k))).unwrap();
    sys.add_scaled(C64::new(1.0, 0.0), &DenseOperator::identity(g.len())).unwrap();
    let z = 2.0 * s * n_kappa;
    sys.apply(&e).unwrap().iter().zip(mm.apply(&e).unwrap()).map(|(x, y)| x - z * y).collect()
}

#[test]
fn transmission_expansion_matches_fourier_composition() {
    let golden = std::fs::read_to_string(format!("{}/data/golden/circle_k2p1i.txt", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let ndiff: Vec<(i32, C64)> = golden
        .lines()
        .filter_map(|l| {
            let v: Vec<&str> = l.split_whitespace().collect();
            (v[0] == "NDIFF0").then(|| (v[1].parse().unwrap(), C64::new(v[2].parse().unwrap(), v[3].parse().unwrap())))
        })
        .collect();
    for side in [Side::Exterior, Side::Interior] {
        let sign = if side == Side::Exterior { 1.0 } else { -1.0 };
        let kap = Wavenumber::new(C64::new(2.0, 1.0)).unwrap();
        let p = problem(side, ImpedanceSpec::Transmission { sign, kappa: kap }, circle(), 64);
        let g = p.grid().unwrap();
        let sys = build_system(&p, &g, &IncidenceSpec::point_source([3.0, 0.0])).unwrap();
        for &(m, lam) in &ndiff {
            let n_kappa = lam - 0.5 * (m as f64).abs();
            let e: Vec<C64> = g.t.iter().map(|&t| C64::from_polar(1.0, m as f64 * t)).collect();
            let got = sys.matrix.apply(&e).unwrap();
            let want = direct_with_fourier_impedance(side, &g, m, n_kappa);
            let err = got.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-8, "{side:?} m = {m}: {err:e}");
        }
    }
}

#[test]
fn blended_single_patch_matches_transmission() {
    let kap = Wavenumber::new(C64::new(2.0, 1.0)).unwrap();
    // Two different discretizations of one operator; both are spectrally exact on the circle.
    let src = IncidenceSpec::point_source([3.0, 1.0]);
    let t = problem(Side::Interior, ImpedanceSpec::Transmission { sign: -1.0, kappa: kap }, circle(), 32);
    let b = problem(Side::Interior, ImpedanceSpec::Blended { patches: vec![vec![0]], kappas: vec![kap], overlap: None }, circle(), 32);
    let (_, xt, _) = solve(&t, &src);
    let (_, xb, _) = solve(&b, &src);
    assert!(boundary_errors(&xt, &xb).unwrap() < 1e-8);
}

#[test]
fn square_far_field_is_mirror_symmetric() {
    let p = problem(Side::Exterior, ImpedanceSpec::Constant(2.0 * I), CurveSpec::square4(), 128);
    let (g, x, _) = solve(&p, &IncidenceSpec::plane_wave([0.0, -1.0]).unwrap());
    let ff = far_field(&p, &g, &x).unwrap();
    let l = ff.values.len();
    let scale = ff.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // theta -> pi - theta
    let asym = (0..l).map(|i| (ff.values[i] - ff.values[(l / 2 + l - i) % l]).norm()).fold(0.0, f64::max);
    assert!(asym <= 1e-8 * scale, "{asym:e}");
}

#[test]
fn scattered_field_decays_like_far_field() {
    let p = problem(Side::Exterior, ImpedanceSpec::Constant(2.0 * I), CurveSpec::square4(), 64);
    let (g, x, _) = solve(&p, &IncidenceSpec::plane_wave([0.0, -1.0]).unwrap());
    let ff = far_field(&p, &g, &x).unwrap();
    let tr = recover_traces(&p, &g, &x, None).unwrap();
    let r = 200.0 * PI;
    for l in [0, 100, 256, 700] {
        let (s, c) = ff.angles[l].sin_cos();
        let u = near_field(&[[r * c, r * s]], 2.0, Side::Exterior, &g, &tr).unwrap()[0];
        let (a, b) = (u.norm() * r.sqrt(), ff.values[l].norm());
        assert!((a - b).abs() <= 0.02 * b, "{a} {b}");
    }
}
