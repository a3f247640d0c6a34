//! Bessel and Hankel functions of order 0 and 1 for complex arguments, and the
//! outgoing Helmholtz Green's function in the plane.
//!
//! Evaluation strategy, after reduction to the quadrant `Re z > 0, Im z >= 0`:
//!
//! * `|z| < 20`: ascending series for `J` and `Y`, summed in double-double
//!   arithmetic once `|z| > 5` so that the alternating terms cancel cleanly.
//! * `|z| >= 20`: Hankel's asymptotic expansion, truncated at its smallest term.
//! * `H^(1)` for `2 <= |z| < 20` uses Steed's continued fraction for the
//!   modified function `K` (`H_0(z) = -2i/pi K_0(-iz)`, `H_1(z) = -2/pi K_1(-iz)`),
//!   which keeps full relative accuracy where `J + iY` would cancel.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest modulus accepted by the public functions.
pub const MAX_ABS: f64 = 1.0e4;
/// Largest imaginary part accepted by the public functions.
pub const MAX_IMAG: f64 = 64.0;

const SERIES_DD: f64 = 5.0;
const ASYMPTOTIC: f64 = 20.0;
const CF_MIN: f64 = 2.0;

const I: C64 = C64::new(0.0, 1.0);

/// A wavenumber `k` with `Re k > 0` and `Im k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(C64);

impl Wavenumber {
    pub fn new(k: C64) -> Result<Self> {
        if !(k.re.is_finite() && k.im.is_finite()) || k.re <= 0.0 || k.im < 0.0 {
            return Err(Error::Domain(format!(
                "wavenumber {k} must satisfy Re k > 0 and Im k >= 0"
            )));
        }
        Ok(Self(k))
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::new(C64::new(k, 0.0))
    }

    pub fn value(self) -> C64 {
        self.0
    }
}

fn check_order(order: u32) -> Result<()> {
    if order > 1 {
        return Err(Error::Domain(format!("order {order} not in {{0, 1}}")));
    }
    Ok(())
}

fn check_envelope(z: C64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > MAX_ABS || z.im.abs() > MAX_IMAG {
        return Err(Error::Domain(format!(
            "argument {z} outside |z| <= {MAX_ABS}, |Im z| <= {MAX_IMAG}"
        )));
    }
    Ok(())
}

fn check_right_half(z: C64) -> Result<()> {
    if z == C64::new(0.0, 0.0) {
        return Err(Error::Singular("Y and H are singular at z = 0".into()));
    }
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("argument {z} must have Re z > 0")));
    }
    Ok(())
}

/// Bessel function of the first kind `J_order(z)`, `order` in {0, 1}.
pub fn bessel_j(order: u32, z: C64) -> Result<C64> {
    check_order(order)?;
    check_envelope(z)?;
    // J_0 is even and J_1 odd; both are real on the real axis.
    let (w, sign) = if z.re < 0.0 { (-z, if order == 1 { -1.0 } else { 1.0 }) } else { (z, 1.0) };
    let (w, conj) = if w.im < 0.0 { (w.conj(), true) } else { (w, false) };
    let (j0, j1) = bessel_j01(w);
    let v = if order == 0 { j0 } else { j1 } * sign;
    Ok(if conj { v.conj() } else { v })
}

/// Bessel function of the second kind `Y_order(z)`, `order` in {0, 1}, `Re z > 0`.
pub fn bessel_y(order: u32, z: C64) -> Result<C64> {
    check_order(order)?;
    check_envelope(z)?;
    check_right_half(z)?;
    let (w, conj) = if z.im < 0.0 { (z.conj(), true) } else { (z, false) };
    let (y0, y1) = bessel_y01(w);
    let v = if order == 0 { y0 } else { y1 };
    Ok(if conj { v.conj() } else { v })
}

/// Hankel function of the first kind `H^(1)_order(z)`, `order` in {0, 1}, `Re z > 0`.
pub fn hankel_h1(order: u32, z: C64) -> Result<C64> {
    check_order(order)?;
    check_envelope(z)?;
    check_right_half(z)?;
    if z.im >= 0.0 {
        let c = cylinder(z);
        return Ok(if order == 0 { c.h0 } else { c.h1 });
    }
    // H1(z) = conj(H2(conj z)) and H2 = 2J - H1; in the upper half plane H1 is the
    // small solution, so the subtraction is benign.
    let w = z.conj();
    let c = cylinder(w);
    let v = if order == 0 { 2.0 * c.j0 - c.h0 } else { 2.0 * c.j1 - c.h1 };
    Ok(v.conj())
}

/// Outgoing Green's function `(i/4) H^(1)_0(k r)`.
pub fn green(k: Wavenumber, r: f64) -> Result<C64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Singular(format!("Green's function at r = {r}")));
    }
    Ok(0.25 * I * hankel_h1(0, k.value() * r)?)
}

/// Values shared by all kernels at one argument `z = k r`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cylinder {
    pub j0: C64,
    pub j1: C64,
    pub h0: C64,
    pub h1: C64,
    /// `H_1(z) + 2i/(pi z)`, computed without cancellation for small `|z|`.
    pub h1reg: C64,
}

/// All cylinder functions needed by the kernels. Requires `Re z > 0`, `Im z >= 0`.
pub(crate) fn cylinder(z: C64) -> Cylinder {
    let r = z.norm();
    if r < CF_MIN {
        let s = series(z);
        return s.cylinder(z);
    }
    if r >= ASYMPTOTIC {
        let a = asymptotic(z);
        return Cylinder {
            j0: a.j0,
            j1: a.j1,
            h0: a.h0,
            h1: a.h1,
            h1reg: a.h1 + 2.0 * I / (PI * z),
        };
    }
    let (h0, h1) = hankel_cf(z);
    let (j0, j1) = if z.im == 0.0 {
        (C64::new(h0.re, 0.0), C64::new(h1.re, 0.0))
    } else {
        bessel_j01(z)
    };
    Cylinder { j0, j1, h0, h1, h1reg: h1 + 2.0 * I / (PI * z) }
}

fn bessel_j01(z: C64) -> (C64, C64) {
    let r = z.norm();
    if r <= SERIES_DD {
        let s = series(z);
        (s.j0, s.j1)
    } else if r < ASYMPTOTIC {
        let s = series_dd(z);
        (s.j0, s.j1)
    } else {
        let a = asymptotic(z);
        (a.j0, a.j1)
    }
}

fn bessel_y01(z: C64) -> (C64, C64) {
    let r = z.norm();
    let s = if r <= SERIES_DD {
        series(z)
    } else if r < ASYMPTOTIC {
        series_dd(z)
    } else {
        let a = asymptotic(z);
        return (a.y0, a.y1);
    };
    (s.y0(z), s.y1reg(z) - FRAC_2_PI / z)
}

/// Pieces of the ascending series:
/// `J0 = sum t_k`, `S0 = sum_{k>=1} H_k t_k`, `J1 = (z/2) sum u_k`,
/// `S1 = sum (H_k + H_{k+1}) u_k`, with `t_k = (-z^2/4)^k / (k!)^2`,
/// `u_k = (-z^2/4)^k / (k! (k+1)!)` and `H_k` the harmonic numbers.
#[derive(Debug, Clone, Copy)]
struct Series {
    j0: C64,
    j1: C64,
    s0: C64,
    s1: C64,
}

impl Series {
    fn log_term(z: C64) -> C64 {
        (0.5 * z).ln() + EULER_GAMMA
    }

    fn y0(&self, z: C64) -> C64 {
        FRAC_2_PI * (Self::log_term(z) * self.j0 - self.s0)
    }

    /// `Y_1(z) + 2/(pi z)`.
    fn y1reg(&self, z: C64) -> C64 {
        FRAC_2_PI * Self::log_term(z) * self.j1 - 0.5 * z * self.s1 / PI
    }

    fn cylinder(&self, z: C64) -> Cylinder {
        if z == C64::new(0.0, 0.0) {
            let inf = C64::new(f64::NAN, f64::NAN);
            return Cylinder { j0: self.j0, j1: self.j1, h0: inf, h1: inf, h1reg: C64::new(0.0, 0.0) };
        }
        let y1reg = self.y1reg(z);
        let h1reg = self.j1 + I * y1reg;
        Cylinder {
            j0: self.j0,
            j1: self.j1,
            h0: self.j0 + I * self.y0(z),
            h1: h1reg - 2.0 * I / (PI * z),
            h1reg,
        }
    }
}

fn series(z: C64) -> Series {
    let mw = -0.25 * z * z;
    let mut t = C64::new(1.0, 0.0);
    let mut u = C64::new(1.0, 0.0);
    let mut j0 = t;
    let mut su = u;
    let mut s0 = C64::new(0.0, 0.0);
    let mut hk = 0.0;
    let mut s1 = C64::new(1.0, 0.0); // (H_0 + H_1) u_0
    let mut k = 1.0_f64;
    loop {
        t *= mw / (k * k);
        u *= mw / (k * (k + 1.0));
        hk += 1.0 / k;
        let hk1 = hk + 1.0 / (k + 1.0);
        j0 += t;
        s0 += hk * t;
        su += u;
        s1 += (hk + hk1) * u;
        if t.norm() < 1e-17 * j0.norm().max(1e-300) && u.norm() < 1e-17 && k > 2.0 {
            break;
        }
        if k > 200.0 {
            break;
        }
        k += 1.0;
    }
    Series { j0, j1: 0.5 * z * su, s0, s1 }
}

fn series_dd(z: C64) -> Series {
    use dd::{CDd, Dd};
    let x = z.re;
    let y = z.im;
    // -z^2/4 = (y^2 - x^2)/4 - i xy/2, formed without rounding.
    let mw = CDd {
        re: (Dd::prod(y, y) - Dd::prod(x, x)).scale(0.25),
        im: Dd::prod(x, y).scale(-0.5),
    };
    let one = CDd::real(1.0);
    let mut t = one;
    let mut u = one;
    let mut j0 = one;
    let mut su = one;
    let mut s0 = CDd::real(0.0);
    let mut s1 = one;
    let mut hk = Dd::from(0.0);
    let mut tmax = 1.0_f64;
    let mut k = 1.0_f64;
    loop {
        t = (t * mw).div(k * k);
        u = (u * mw).div(k * (k + 1.0));
        hk = hk + Dd::from(1.0).div(k);
        let hk1 = hk + Dd::from(1.0).div(k + 1.0);
        j0 = j0 + t;
        s0 = s0 + t.scale_dd(hk);
        su = su + u;
        s1 = s1 + u.scale_dd(hk + hk1);
        let tn = t.norm();
        tmax = tmax.max(tn);
        if k > 2.0 * z.norm() && tn < 1e-34 * tmax {
            break;
        }
        if k > 400.0 {
            break;
        }
        k += 1.0;
    }
    Series {
        j0: j0.to_c64(),
        j1: 0.5 * z * su.to_c64(),
        s0: s0.to_c64(),
        s1: s1.to_c64(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Asymptotic {
    j0: C64,
    j1: C64,
    y0: C64,
    y1: C64,
    h0: C64,
    h1: C64,
}

/// Hankel's expansion `H^(1)_nu(z) = sqrt(2/(pi z)) e^{i chi} (P + iQ)`,
/// `chi = z - (nu/2 + 1/4) pi`. Valid for `|z| >= 20`, `Re z > 0`, `Im z >= 0`.
fn asymptotic(z: C64) -> Asymptotic {
    let (p0, q0) = pq(0.0, z);
    let (p1, q1) = pq(4.0, z);
    let amp = (FRAC_2_PI / z).sqrt();
    let (s, c) = (z.sin(), z.cos());
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // cos/sin of z - pi/4 and z - 3pi/4 from the exactly represented z.
    let c0 = r * (c + s);
    let s0 = r * (s - c);
    let c1 = r * (s - c);
    let s1 = -r * (s + c);
    // e^{i chi} must be formed directly: cos + i sin cancels when Im z is large.
    let eiz = (I * z).exp();
    let e0 = eiz * C64::from_polar(1.0, -0.25 * PI);
    let e1 = eiz * C64::from_polar(1.0, -0.75 * PI);
    Asymptotic {
        j0: amp * (p0 * c0 - q0 * s0),
        y0: amp * (p0 * s0 + q0 * c0),
        j1: amp * (p1 * c1 - q1 * s1),
        y1: amp * (p1 * s1 + q1 * c1),
        h0: amp * e0 * (p0 + I * q0),
        h1: amp * e1 * (p1 + I * q1),
    }
}

/// `P` and `Q` of Hankel's expansion for `mu = 4 nu^2`.
fn pq(mu: f64, z: C64) -> (C64, C64) {
    let zi = z.inv();
    let mut p = C64::new(1.0, 0.0);
    let mut q = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (8.0 * kf) * zi;
        let size = term.norm();
        if size > last || size < 1e-18 {
            break;
        }
        last = size;
        // i^k splits the terms between P (even k) and Q (odd k).
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

/// Steed's continued fraction for `K_0(x)`, `K_1(x)` with `x = -iz`, giving
/// `H_0^(1)(z)` and `H_1^(1)(z)`. Accurate for `|z| >= 2`, `Im z >= 0`.
fn hankel_cf(z: C64) -> (C64, C64) {
    let x = -I * z;
    let one = C64::new(1.0, 0.0);
    let mut b = 2.0 * (one + x);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = C64::new(0.0, 0.0);
    let mut q2 = one;
    let a1 = 0.25;
    let mut q = C64::new(a1, 0.0);
    let mut c = C64::new(a1, 0.0);
    let mut a = -a1;
    let mut s = one + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -c * a / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + a * d);
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < 1e-17 * s.norm() {
            break;
        }
    }
    // e^{-x} = e^{iz}
    let k0 = (FRAC_PI_2 / x).sqrt() * (I * z).exp() / s;
    let k1 = k0 * (x + 0.5 - a1 * h) / x;
    (-I * FRAC_2_PI * k0, -FRAC_2_PI * k1)
}

/// Minimal double-double arithmetic (about 32 significant digits), enough to
/// sum the ascending Bessel series where the terms cancel by up to `e^20`.
mod dd {
    use num_complex::Complex64 as C64;
    use std::ops::{Add, Mul, Neg, Sub};

    #[derive(Debug, Clone, Copy)]
    pub struct Dd {
        hi: f64,
        lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn split(a: f64) -> (f64, f64) {
        let t = 134_217_729.0 * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let (ah, al) = split(a);
        let (bh, bl) = split(b);
        (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
    }

    impl From<f64> for Dd {
        fn from(x: f64) -> Self {
            Dd { hi: x, lo: 0.0 }
        }
    }

    impl Dd {
        /// Exact product of two doubles.
        pub fn prod(a: f64, b: f64) -> Dd {
            let (p, e) = two_prod(a, b);
            quick_two_sum(p, e)
        }

        /// Multiplication by a power of two (exact).
        pub fn scale(self, s: f64) -> Dd {
            Dd { hi: self.hi * s, lo: self.lo * s }
        }

        pub fn div(self, b: f64) -> Dd {
            let q1 = self.hi / b;
            let (p, e) = two_prod(q1, b);
            let (s, f) = two_sum(self.hi, -p);
            let r = (s + (f - e + self.lo)) / b;
            quick_two_sum(q1, r)
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }
    }

    impl Add for Dd {
        type Output = Dd;
        fn add(self, b: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, b.hi);
            let (t, f) = two_sum(self.lo, b.lo);
            let r = quick_two_sum(s, e + t);
            quick_two_sum(r.hi, r.lo + f)
        }
    }

    impl Neg for Dd {
        type Output = Dd;
        fn neg(self) -> Dd {
            Dd { hi: -self.hi, lo: -self.lo }
        }
    }

    impl Sub for Dd {
        type Output = Dd;
        fn sub(self, b: Dd) -> Dd {
            self + (-b)
        }
    }

    impl Mul for Dd {
        type Output = Dd;
        fn mul(self, b: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, b.hi);
            quick_two_sum(p, e + (self.hi * b.lo + self.lo * b.hi))
        }
    }

    #[derive(Debug, Clone, Copy)]
    pub struct CDd {
        pub re: Dd,
        pub im: Dd,
    }

    impl CDd {
        pub fn real(x: f64) -> Self {
            CDd { re: Dd::from(x), im: Dd::from(0.0) }
        }

        pub fn div(self, b: f64) -> Self {
            CDd { re: self.re.div(b), im: self.im.div(b) }
        }

        pub fn scale_dd(self, s: Dd) -> Self {
            CDd { re: self.re * s, im: self.im * s }
        }

        pub fn norm(self) -> f64 {
            self.re.hi.hypot(self.im.hi)
        }

        pub fn to_c64(self) -> C64 {
            C64::new(self.re.to_f64(), self.im.to_f64())
        }
    }

    impl Add for CDd {
        type Output = CDd;
        fn add(self, b: CDd) -> CDd {
            CDd { re: self.re + b.re, im: self.im + b.im }
        }
    }

    impl Mul for CDd {
        type Output = CDd;
        fn mul(self, b: CDd) -> CDd {
            CDd {
                re: self.re * b.re - self.im * b.im,
                im: self.re * b.im + self.im * b.re,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel_j(1, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(hankel_h1(0, c(0.0, 0.0)), Err(Error::Singular(_))));
    }

    #[test]
    fn j0_of_one() {
        let v = bessel_j(0, c(1.0, 0.0)).unwrap();
        assert!((v.re - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn h0_of_one() {
        let v = hankel_h1(0, c(1.0, 0.0)).unwrap();
        assert!((v - c(0.765_197_686_557_966_6, 0.088_256_964_215_676_96)).norm() < 1e-15);
    }

    #[test]
    fn regimes_agree_at_switch_radii() {
        for &r in &[CF_MIN, SERIES_DD, ASYMPTOTIC] {
            for &th in &[0.0, 0.3, 1.2] {
                let z = C64::from_polar(r, th);
                let below = C64::from_polar(r * (1.0 - 1e-12), th);
                for order in 0..2 {
                    let a = hankel_h1(order, z).unwrap();
                    let b = hankel_h1(order, below).unwrap();
                    assert!((a - b).norm() < 1e-10 * a.norm(), "H r={r} th={th}");
                    let a = bessel_j(order, z).unwrap();
                    let b = bessel_j(order, below).unwrap();
                    let s = a.norm() + bessel_y(order, z).unwrap().norm();
                    assert!((a - b).norm() < 1e-10 * s, "J r={r} th={th}");
                }
            }
        }
    }

    #[test]
    fn symmetries() {
        let z = c(3.0, 1.5);
        assert!((bessel_j(0, -z).unwrap() - bessel_j(0, z).unwrap()).norm() < 1e-15);
        assert!((bessel_j(1, -z).unwrap() + bessel_j(1, z).unwrap()).norm() < 1e-15);
        assert!((bessel_j(0, z.conj()).unwrap() - bessel_j(0, z).unwrap().conj()).norm() < 1e-15);
        let lower = hankel_h1(0, z.conj()).unwrap();
        let direct = bessel_j(0, z.conj()).unwrap() + I * bessel_y(0, z.conj()).unwrap();
        assert!((lower - direct).norm() < 1e-12 * lower.norm());
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(bessel_j(0, c(2.0e4, 0.0)).is_err());
        assert!(bessel_j(0, c(1.0, 65.0)).is_err());
        assert!(bessel_j(2, c(1.0, 0.0)).is_err());
        assert!(hankel_h1(0, c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn wavenumber_invariants() {
        assert!(Wavenumber::new(c(2.0, 1.0)).is_ok());
        assert!(Wavenumber::new(c(0.0, 1.0)).is_err());
        assert!(Wavenumber::new(c(1.0, -0.1)).is_err());
        assert!(Wavenumber::new(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn green_is_singular_at_zero() {
        let k = Wavenumber::real(1.0).unwrap();
        assert!(green(k, 0.0).is_err());
        let g = green(k, 1.0).unwrap();
        let expect = 0.25 * I * c(0.765_197_686_557_966_6, 0.088_256_964_215_676_96);
        assert!((g - expect).norm() < 1e-15);
    }
}
