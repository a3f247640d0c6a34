//! Agreement with the arbitrary-precision tables in `data/golden`.

use cfier::specfun::{bessel_j, bessel_y, green, hankel_h1, Wavenumber};
use num_complex::Complex64 as C64;

struct Record {
    order: u32,
    z: C64,
    f: C64,
}

fn load(name: &str) -> Vec<Record> {
    let path = format!("{}/data/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|s| s.parse().unwrap()).collect();
            Record { order: v[0] as u32, z: C64::new(v[1], v[2]), f: C64::new(v[3], v[4]) }
        })
        .collect()
}

/// `J` and `Y` are compared against `|H1|`-scale, the natural size of the pair:
/// near a real zero of `J` a pointwise relative error is meaningless.
fn scale(order: u32, z: C64) -> f64 {
    let j = load_one("besselj.txt", order, z);
    let y = load_one("bessely.txt", order, z);
    j.norm().hypot(y.norm())
}

fn load_one(name: &str, order: u32, z: C64) -> C64 {
    load(name).into_iter().find(|r| r.order == order && r.z == z).unwrap().f
}

#[test]
fn besselj_table() {
    let mut worst = 0.0_f64;
    for r in load("besselj.txt") {
        let v = bessel_j(r.order, r.z).unwrap();
        let err = (v - r.f).norm() / scale(r.order, r.z);
        worst = worst.max(err);
        assert!(err <= 1e-12, "J_{}({}) = {v}, oracle {}, rel {err:.2e}", r.order, r.z, r.f);
    }
    eprintln!("worst J error {worst:.2e}");
}

#[test]
fn bessely_table() {
    let mut worst = 0.0_f64;
    for r in load("bessely.txt") {
        let v = bessel_y(r.order, r.z).unwrap();
        let err = (v - r.f).norm() / scale(r.order, r.z);
        worst = worst.max(err);
        assert!(err <= 1e-12, "Y_{}({}) = {v}, oracle {}, rel {err:.2e}", r.order, r.z, r.f);
    }
    eprintln!("worst Y error {worst:.2e}");
}

#[test]
fn hankel_table() {
    let mut worst = 0.0_f64;
    for r in load("hankel1.txt") {
        let v = hankel_h1(r.order, r.z).unwrap();
        let err = (v - r.f).norm() / r.f.norm();
        worst = worst.max(err);
        assert!(err <= 1e-11, "H_{}({}) = {v}, oracle {}, rel {err:.2e}", r.order, r.z, r.f);
    }
    eprintln!("worst H error {worst:.2e}");
}

#[test]
fn j0_at_two_plus_i() {
    let z = C64::new(2.0, 1.0);
    // The table holds (2 + i) r for r = 1.
    let f = load_one("besselj.txt", 0, z);
    assert!((bessel_j(0, z).unwrap() - f).norm() <= 1e-12 * f.norm());
}

#[test]
fn point_source_value() {
    let path = format!("{}/data/golden/point_source.txt", env!("CARGO_MANIFEST_DIR"));
    let v: Vec<f64> = std::fs::read_to_string(path)
        .unwrap()
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    let g = green(Wavenumber::real(2.0).unwrap(), 32f64.sqrt()).unwrap();
    assert!((g - C64::new(v[0], v[1])).norm() < 1e-14);
}

#[test]
fn hankel_modulus_decreases_on_real_axis() {
    let m: Vec<f64> = (1..=10).map(|x| hankel_h1(0, C64::new(x as f64, 0.0)).unwrap().norm()).collect();
    assert!(m.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn wronskian() {
    // J0 Y0' - J0' Y0 = -J0 Y1 + J1 Y0 = 2/(pi z)
    for i in 0..100 {
        let r = 10f64.powf(-2.0 + 5.5 * i as f64 / 99.0);
        let z = C64::new(r, 0.5);
        let (j0, j1) = (bessel_j(0, z).unwrap(), bessel_j(1, z).unwrap());
        let (y0, y1) = (bessel_y(0, z).unwrap(), bessel_y(1, z).unwrap());
        let w = j1 * y0 - j0 * y1;
        let expect = 2.0 / (std::f64::consts::PI * z);
        assert!((w - expect).norm() <= 1e-10 * expect.norm(), "z = {z}: {w} vs {expect}");
    }
}

#[test]
fn green_difference_bounded_near_zero() {
    let k1 = Wavenumber::real(2.0).unwrap();
    let k2 = Wavenumber::new(C64::new(2.0, 1.0)).unwrap();
    // G_k1 - G_k2 -> (1/2pi) ln(k2/k1) as r -> 0
    let limit = (k2.value() / k1.value()).ln() / (2.0 * std::f64::consts::PI);
    for &r in &[1e-2, 1e-4, 1e-6] {
        let d = green(k1, r).unwrap() - green(k2, r).unwrap();
        assert!(d.norm() < 1.0);
        assert!((d - limit).norm() < 10.0 * r);
    }
}

#[test]
fn imaginary_part_of_green_for_real_k() {
    for &r in &[0.3, 1.0, 7.5, 40.0] {
        let k = Wavenumber::real(1.7).unwrap();
        let g = green(k, r).unwrap();
        let j = bessel_j(0, C64::new(1.7 * r, 0.0)).unwrap();
        assert!((g.im - j.re / 4.0).abs() < 1e-15);
    }
}
