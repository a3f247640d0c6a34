//! Spectral tools on the shifted periodic grid `t_i = h/2 + i h`, `h = pi/n`.
//!
//! On this grid `cos(n t_i) = 0` for every node, so the highest interpolation
//! mode is `sin(n t)`. Its derivative `n cos(n t)` vanishes at the nodes, which is
//! why differentiation simply drops the Nyquist coefficient.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Error, Result};

/// Uniform periodic grid with `2n` nodes offset by half a step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigGrid {
    n: usize,
}

impl TrigGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Config("trigonometric grid needs n >= 1".into()));
        }
        Ok(Self { n })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn len(self) -> usize {
        2 * self.n
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn h(self) -> f64 {
        PI / self.n as f64
    }

    pub fn node(self, i: usize) -> f64 {
        self.h() * (i as f64 + 0.5)
    }

    pub fn nodes(self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }
}

/// Weights of the logarithmic quadrature rule for one target parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LogWeightRow {
    pub t: f64,
    pub weights: Vec<f64>,
}

/// `R_i(t)` such that `int ln(4 sin^2((t - tau)/2)) f(tau) dtau ~ sum_i R_i(t) f(t_i)`.
pub fn log_weights(grid: TrigGrid, t: f64) -> LogWeightRow {
    let n = grid.n();
    let nf = n as f64;
    let weights = (0..grid.len())
        .map(|i| {
            let d = t - grid.node(i);
            let s: f64 = (1..n).map(|m| (m as f64 * d).cos() / m as f64).sum();
            -2.0 * PI / nf * s - PI / (nf * nf) * (nf * d).cos()
        })
        .collect();
    LogWeightRow { t, weights }
}

/// `R(d h)` for `d = 0..2n`; the weight matrix is `R_j(t_i) = R((i - j) h)`.
pub fn log_weight_circulant(grid: TrigGrid) -> Vec<f64> {
    let n = grid.n();
    let m2 = 2 * n;
    let nf = n as f64;
    let cos: Vec<f64> = (0..m2).map(|k| (PI * k as f64 / nf).cos()).collect();
    (0..m2)
        .map(|d| {
            let s: f64 = (1..n).map(|m| cos[(m * d) % m2] / m as f64).sum();
            let nyq = if d % 2 == 0 { 1.0 } else { -1.0 };
            -2.0 * PI / nf * s - PI / (nf * nf) * nyq
        })
        .collect()
}

/// Trapezoidal rule `(pi/n) sum f(t_i)`.
pub fn trapezoid(grid: TrigGrid, f: &[C64]) -> Result<C64> {
    check_len(grid.len(), f.len())?;
    Ok(grid.h() * f.iter().sum::<C64>())
}

/// Node values of the derivative of the trigonometric interpolant.
pub fn trig_differentiate(grid: TrigGrid, f: &[C64]) -> Result<Vec<C64>> {
    check_len(grid.len(), f.len())?;
    let d = Differentiator::new(grid.n());
    let mut out = f.to_vec();
    d.apply(&mut out);
    Ok(out)
}

/// Value at an arbitrary `t` of the trigonometric interpolant of the node samples.
pub fn trig_interpolate(grid: TrigGrid, f: &[C64], t: f64) -> Result<C64> {
    check_len(grid.len(), f.len())?;
    let n = grid.n() as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (i, &fi) in f.iter().enumerate() {
        let d = (t - grid.node(i)).rem_euclid(TAU);
        let d = if d > PI { d - TAU } else { d };
        if d.abs() < 1e-15 {
            return Ok(fi);
        }
        acc += fi * ((n * d).sin() / (d * 0.5).tan());
    }
    Ok(acc / (2.0 * n))
}

/// Lagrange basis `L_i(t) = sin(n(t - t_i)) cot((t - t_i)/2) / (2n)`.
pub fn lagrange_basis(grid: TrigGrid, i: usize, t: f64) -> f64 {
    let n = grid.n() as f64;
    let d = (t - grid.node(i)).rem_euclid(TAU);
    let d = if d > PI { d - TAU } else { d };
    if d.abs() < 1e-15 {
        return 1.0;
    }
    (n * d).sin() / (d * 0.5).tan() / (2.0 * n)
}

/// Reusable FFT plans for spectral differentiation of length-`2n` vectors.
#[derive(Clone)]
pub struct Differentiator {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Differentiator {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(2 * n), inv: planner.plan_fft_inverse(2 * n) }
    }

    /// Replace node samples by node samples of the interpolant's derivative.
    pub fn apply(&self, buf: &mut [C64]) {
        let m = 2 * self.n;
        debug_assert_eq!(buf.len(), m);
        self.fwd.process(buf);
        let scale = 1.0 / m as f64;
        for (k, c) in buf.iter_mut().enumerate() {
            let freq = if k < self.n {
                k as f64
            } else if k == self.n {
                0.0
            } else {
                k as f64 - m as f64
            };
            *c *= C64::new(0.0, freq * scale);
        }
        self.inv.process(buf);
    }

    /// Apply a real even Fourier multiplier `sym(|m|)`; `sym(n)` acts on the
    /// Nyquist mode.
    pub fn apply_multiplier(&self, buf: &mut [C64], sym: impl Fn(usize) -> f64) {
        let m = 2 * self.n;
        self.fwd.process(buf);
        let scale = 1.0 / m as f64;
        for (k, c) in buf.iter_mut().enumerate() {
            let freq = if k <= self.n { k } else { m - k };
            *c *= sym(freq) * scale;
        }
        self.inv.process(buf);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(grid: TrigGrid, f: impl Fn(f64) -> f64) -> Vec<C64> {
        grid.nodes().into_iter().map(|t| C64::new(f(t), 0.0)).collect()
    }

    #[test]
    fn weights_sum_to_zero() {
        let g = TrigGrid::new(16).unwrap();
        for &t in &[0.0, 0.37, 2.0, g.node(3)] {
            let s: f64 = log_weights(g, t).weights.iter().sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn weights_integrate_cosine() {
        for n in [2, 5, 16] {
            let g = TrigGrid::new(n).unwrap();
            for &t in &[0.1, 1.3, 4.0] {
                let r = log_weights(g, t);
                let s: f64 = r.weights.iter().zip(g.nodes()).map(|(w, ti)| w * ti.cos()).sum();
                assert!((s + TAU * t.cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weights_integrate_shifted_modes() {
        // int ln(4 sin^2((t - s)/2)) cos(m s + a) ds = -(2 pi / m) cos(m t + a)
        let (n, a) = (8, 0.3);
        let g = TrigGrid::new(n).unwrap();
        for &t in &[0.2, 1.7, 5.0] {
            let r = log_weights(g, t);
            for m in 1..n {
                let s: f64 = r.weights.iter().zip(g.nodes()).map(|(w, ti)| w * (m as f64 * ti + a).cos()).sum();
                assert!((s + TAU / m as f64 * (m as f64 * t + a).cos()).abs() < 1e-12, "m = {m}");
            }
            // At m = n the shifted nodes only see the sin(n s) part of the mode.
            let s: f64 = r.weights.iter().zip(g.nodes()).map(|(w, ti)| w * (n as f64 * ti + a).cos()).sum();
            let want = TAU / n as f64 * a.sin() * (n as f64 * t).sin();
            assert!((s - want).abs() < 1e-12, "{s} vs {want}");
        }
    }

    #[test]
    fn circulant_matches_rows() {
        let g = TrigGrid::new(12).unwrap();
        let c = log_weight_circulant(g);
        for i in [0, 5, 23] {
            let row = log_weights(g, g.node(i));
            for j in 0..g.len() {
                let d = (i + g.len() - j) % g.len();
                assert!((row.weights[j] - c[d]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn trapezoid_basics() {
        let g = TrigGrid::new(8).unwrap();
        let one = vec![C64::new(1.0, 0.0); 16];
        assert!((trapezoid(g, &one).unwrap() - TAU).norm() < 1e-14);
        for m in 1..16 {
            let f: Vec<C64> = g.nodes().iter().map(|&t| C64::from_polar(1.0, m as f64 * t)).collect();
            assert!(trapezoid(g, &f).unwrap().norm() < 1e-13);
        }
        // e^{i 2n t} on the shifted grid aliases to e^{i n h} = -1 at every node.
        let f: Vec<C64> = g.nodes().iter().map(|&t| C64::from_polar(1.0, 16.0 * t)).collect();
        assert!((trapezoid(g, &f).unwrap() + TAU).norm() < 1e-12);
        assert!(trapezoid(g, &one[..3]).is_err());
    }

    #[test]
    fn differentiation() {
        let g = TrigGrid::new(16).unwrap();
        let d = trig_differentiate(g, &samples(g, f64::sin)).unwrap();
        for (v, t) in d.iter().zip(g.nodes()) {
            assert!((v - t.cos()).norm() < 1e-13);
        }
        let d = trig_differentiate(g, &samples(g, |_| 3.0)).unwrap();
        assert!(d.iter().all(|v| v.norm() < 1e-13));
        let d = trig_differentiate(g, &samples(g, |t| (15.0 * t).sin())).unwrap();
        for (v, t) in d.iter().zip(g.nodes()) {
            assert!((v - 15.0 * (15.0 * t).cos()).norm() < 1e-11);
        }
        assert!(trig_differentiate(g, &[C64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn interpolation() {
        let g = TrigGrid::new(8).unwrap();
        let f = samples(g, |t| (2.0 * t).cos());
        for i in 0..16 {
            assert_eq!(trig_interpolate(g, &f, g.node(i)).unwrap(), f[i]);
        }
        for k in 0..50 {
            let t = 0.123 * k as f64;
            assert!((trig_interpolate(g, &f, t).unwrap().re - (2.0 * t).cos()).abs() < 1e-12);
        }
    }
}
