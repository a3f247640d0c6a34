//! Nyström operators on the unit circle against Bessel-product eigenvalues, and
//! structural identities on the square.

use cfier::geometry::{build_grid, CurveSpec, GridData, SigmoidParams};
use cfier::kernels::Variant;
use cfier::operators::{Assembler, DenseOperator, OperatorSpec};
use cfier::specfun::Wavenumber;
use num_complex::Complex64 as C64;

fn circle(n: usize) -> GridData {
    build_grid(&CurveSpec::circle(1.0).unwrap(), SigmoidParams::default(), n).unwrap()
}

fn square(n: usize) -> GridData {
    build_grid(&CurveSpec::square4(), SigmoidParams::default(), n).unwrap()
}

fn eigenvalues(file: &str, name: &str) -> Vec<(i32, C64)> {
    let path = format!("{}/data/golden/{file}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter_map(|l| {
            let v: Vec<&str> = l.split_whitespace().collect();
            (v[0] == name).then(|| (v[1].parse().unwrap(), C64::new(v[2].parse().unwrap(), v[3].parse().unwrap())))
        })
        .collect()
}

fn mode(g: &GridData, m: i32) -> Vec<C64> {
    g.t.iter().map(|&t| C64::from_polar(1.0, m as f64 * t)).collect()
}

/// Largest relative deviation of `A e_m` from `lambda_m e_m`.
fn worst_eigen_error(a: &DenseOperator, g: &GridData, eig: &[(i32, C64)]) -> f64 {
    eig.iter()
        .map(|&(m, lam)| {
            let v = mode(g, m);
            let av = a.apply(&v).unwrap();
            av.iter().zip(&v).map(|(x, y)| (x - lam * y).norm()).fold(0.0, f64::max) / lam.norm()
        })
        .fold(0.0, f64::max)
}

fn check_circle(k: C64, file: &str) {
    let g = circle(64);
    let k = Wavenumber::new(k).unwrap();
    let mut asm = Assembler::new(&g);
    let cases = [
        (OperatorSpec::SingleLayer(k), "S"),
        (OperatorSpec::DoubleLayer(k), "K"),
        (OperatorSpec::AdjointDoubleLayer(k), "KT"),
        (OperatorSpec::HypersingularDifference(Some(k), None), "NDIFF0"),
    ];
    for (spec, name) in cases {
        let a = asm.assemble(spec, Variant::Arc).unwrap();
        let err = worst_eigen_error(&a, &g, &eigenvalues(file, name));
        assert!(err <= 1e-8, "{name}: {err:e}");
    }
}

#[test]
fn circle_eigenvalues_real_wavenumber() {
    check_circle(C64::new(2.0, 0.0), "circle_k2.txt");
}

#[test]
fn circle_eigenvalues_complex_wavenumber() {
    check_circle(C64::new(2.0, 1.0), "circle_k2p1i.txt");
}

#[test]
fn laplace_hypersingular_on_circle() {
    let g = circle(32);
    let n0 = Assembler::new(&g).assemble(OperatorSpec::LaplaceHypersingular, Variant::Arc).unwrap();
    let eig: Vec<(i32, C64)> = (-10..=10).filter(|&m| m != 0).map(|m| (m, C64::new(-0.5 * (m as f64).abs(), 0.0))).collect();
    assert!(worst_eigen_error(&n0, &g, &eig) < 1e-12);
    let one = n0.apply(&vec![C64::new(1.0, 0.0); g.len()]).unwrap();
    assert!(one.iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn calderon_identity_on_circle() {
    let g = circle(64);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    let s = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Weighted).unwrap();
    let kk = asm.assemble(OperatorSpec::DoubleLayer(k), Variant::Arc).unwrap();
    let mut n = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), None), Variant::Arc).unwrap();
    n.add_scaled(C64::new(1.0, 0.0), &asm.assemble(OperatorSpec::LaplaceHypersingular, Variant::Arc).unwrap()).unwrap();
    let mut r = s.compose(&n).unwrap();
    r.add_scaled(C64::new(-1.0, 0.0), &kk.compose(&kk).unwrap()).unwrap();
    r.add_scaled(C64::new(0.25, 0.0), &DenseOperator::identity(g.len())).unwrap();
    for m in -20..=20 {
        let v = mode(&g, m);
        let e = r.apply(&v).unwrap().iter().fold(0.0f64, |a, z| a.max(z.norm()));
        assert!(e <= 1e-8, "m = {m}: {e:e}");
    }
}

#[test]
fn weighted_variants_coincide_on_unit_speed_circle() {
    let g = circle(16);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    for spec in [
        OperatorSpec::SingleLayer(k),
        OperatorSpec::DoubleLayer(k),
        OperatorSpec::AdjointDoubleLayer(k),
        OperatorSpec::HypersingularDifference(Some(k), None),
    ] {
        let a = asm.assemble(spec, Variant::Arc).unwrap();
        let b = asm.assemble(spec, Variant::Weighted).unwrap();
        let d = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d <= 1e-12 * a.max_abs(), "{spec:?}: {d:e}");
    }
}

#[test]
fn weighted_single_layer_matches_arc_version() {
    let g = circle(16);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    let sx = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Arc).unwrap();
    let sw = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Weighted).unwrap();
    let psi: Vec<C64> = g.t.iter().map(|&t| C64::new(t.cos().exp(), (2.0 * t).sin())).collect();
    let wpsi: Vec<C64> = psi.iter().zip(&g.jac).map(|(p, j)| p * j).collect();
    let (a, b) = (sx.apply(&psi).unwrap(), sw.apply(&wpsi).unwrap());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12));
}

#[test]
fn adjoint_is_transpose_of_fully_weighted_double_layer() {
    let g = square(32);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    let mut kw = asm.assemble(OperatorSpec::DoubleLayer(k), Variant::Arc).unwrap();
    // Undo the corner row-sum correction, which only the double layer carries.
    let m = g.len();
    let defect = asm.double_layer_defect().to_vec();
    for (i, d) in defect.iter().enumerate() {
        kw.data_mut()[i * m + i] += d;
    }
    kw.scale_rows(&g.jac).unwrap();
    let kt = asm.assemble(OperatorSpec::AdjointDoubleLayer(k), Variant::Arc).unwrap();
    let t = kw.transpose();
    let d = kt.data().iter().zip(t.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(d <= 1e-12 * kt.max_abs());
}

#[test]
fn zero_density_maps_to_zero_and_equal_wavenumbers_cancel() {
    let g = square(16);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    let zero = vec![C64::new(0.0, 0.0); g.len()];
    for spec in [OperatorSpec::SingleLayer(k), OperatorSpec::DoubleLayer(k), OperatorSpec::LaplaceHypersingular] {
        let a = asm.assemble(spec, Variant::Arc).unwrap();
        assert!(a.apply(&zero).unwrap().iter().all(|z| *z == zero[0]));
    }
    let d = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), Some(k)), Variant::Arc).unwrap();
    assert_eq!(d.max_abs(), 0.0);
}

#[test]
fn constant_density_sees_only_normal_part() {
    let g = circle(32);
    let k = Wavenumber::real(2.0).unwrap();
    let mut asm = Assembler::new(&g);
    let nd = asm.assemble(OperatorSpec::HypersingularDifference(Some(k), None), Variant::Arc).unwrap();
    let s = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Arc).unwrap();
    let m = g.len();
    let one = vec![C64::new(1.0, 0.0); m];
    let got = nd.apply(&one).unwrap();
    for i in 0..m {
        let want: C64 = (0..m)
            .map(|j| {
                let nn = g.normal[i][0] * g.normal[j][0] + g.normal[i][1] * g.normal[j][1];
                4.0 * nn * g.jac[i] * s.get(i, j)
            })
            .sum();
        assert!((got[i] - want).norm() < 1e-10);
    }
}

#[test]
fn single_layer_self_converges_on_square() {
    let k = Wavenumber::real(2.0).unwrap();
    // Weighted pairing <g, S f> of the image with a smooth test function.
    let pairing = |n: usize| -> C64 {
        let g = square(n);
        let s = Assembler::new(&g).assemble(OperatorSpec::SingleLayer(k), Variant::Arc).unwrap();
        let f: Vec<C64> = g.x.iter().map(|p| C64::new((0.3 * p[0]).cos(), 0.2 * p[1])).collect();
        let sf = s.apply(&f).unwrap();
        (0..g.len()).map(|i| g.h * g.jac[i] * (0.5 * g.x[i][1]).sin() * sf[i]).sum()
    };
    let v: Vec<C64> = [16, 32, 64, 128].iter().map(|&n| pairing(n)).collect();
    let (e1, e2) = ((v[0] - v[3]).norm(), (v[1] - v[3]).norm());
    assert!(e2 * 4.0 <= e1, "{e1:e} {e2:e}");
}

#[test]
fn double_layer_reproduces_green_identity_on_square() {
    use cfier::formulations::{incident_traces, IncidenceSpec};
    // S gamma_N u - K gamma_D u = u/2 for a field radiated from outside.
    let err = |n: usize| -> f64 {
        let g = square(n);
        let tr = incident_traces(2.0, &g, &IncidenceSpec::point_source([4.0, 4.0])).unwrap();
        let k = Wavenumber::real(2.0).unwrap();
        let mut asm = Assembler::new(&g);
        let sg = asm.assemble(OperatorSpec::SingleLayer(k), Variant::Arc).unwrap().apply(&tr.neumann).unwrap();
        let kg = asm.assemble(OperatorSpec::DoubleLayer(k), Variant::Arc).unwrap().apply(&tr.dirichlet).unwrap();
        (0..g.len()).map(|i| (sg[i] - kg[i] - 0.5 * tr.dirichlet[i]).norm()).fold(0.0, f64::max)
    };
    let (a, b) = (err(32), err(64));
    assert!(b < 1e-5 && 4.0 * b <= a, "{a:e} {b:e}");
}

#[test]
fn laplace_row_sums_are_exact_on_circle() {
    let g = circle(32);
    let mut asm = Assembler::new(&g);
    assert!(asm.double_layer_defect().iter().all(|d| d.abs() < 1e-13));
}
