//! Logarithmic splittings `I(t, tau) = I1(t, tau) ln(4 sin^2((t - tau)/2)) + I2(t, tau)`
//! of the parametrized boundary kernels.
//!
//! Three Jacobian-free base kernels are split, with `r = x(t) - x(tau)`:
//!
//! * single layer `G_k(|r|)`,
//! * double layer `d G_k / d n(tau)`, whose transpose is the adjoint double layer,
//! * tangential part of the Maue form `d/dt (G_k - G_0)`, which is weakly singular.
//!
//! The parametrized operators multiply these by `|x'(t)|` and/or `|x'(tau)|`
//! according to [`Variant`]. The hypersingular operator only appears as
//! differences `N_k1 - N_k2`, realized as a normal part acting on the density and
//! a tangential part acting on its derivative.

use std::f64::consts::{FRAC_1_PI, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geometry::GridData;
use crate::par::{self, SharedMut};
use crate::quadrature::{log_weight_circulant, TrigGrid};
use crate::specfun::{cylinder, Wavenumber, EULER_GAMMA};

const I: C64 = C64::new(0.0, 1.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Which Jacobian factors a parametrized operator carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Acts on samples of the trace itself (`S^x`, `K^x`, `K^{x,T}`, `N^x`).
    Arc,
    /// Acts on weighted traces `|x'| u` (`S^{x,w}`, `K^{x,w}`, `K^{x,T,w}`, `N^{x,w}`).
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    SingleLayer,
    DoubleLayer,
    AdjointDoubleLayer,
}

/// `ln(4 sin^2((t_i - t_j)/2))` for `i != j`.
#[inline]
pub fn log_factor(grid: &GridData, i: usize, j: usize) -> f64 {
    let d = (i as f64 - j as f64) * grid.h;
    2.0 * (2.0 * (0.5 * d).sin().abs()).ln()
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Split and direct values of the three base kernels for one off-diagonal pair,
/// in both orders.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairKernels {
    /// `(I1, full kernel)`, symmetric in the pair.
    pub s: (C64, C64),
    pub kb_ij: (C64, C64),
    pub kb_ji: (C64, C64),
    pub nt_ij: (C64, C64),
    pub nt_ji: (C64, C64),
}

pub(crate) fn pair_kernels(g: &GridData, k: C64, i: usize, j: usize) -> PairKernels {
    let rv = g.chord(i, j);
    let r = rv[0].hypot(rv[1]);
    let c = cylinder(k * r);
    let ik4 = 0.25 * I * k;
    let k4pi = k * (0.25 * FRAC_1_PI);
    let s = (-c.j0 * (0.25 * FRAC_1_PI), 0.25 * I * c.h0);
    let (pj, pi) = if g.same_edge(i, j) {
        (0.0, 0.0)
    } else {
        (dot(rv, g.normal[j]) / r, -dot(rv, g.normal[i]) / r)
    };
    let (qi, qj) = (dot(rv, g.dx[i]) / r, -dot(rv, g.dx[j]) / r);
    PairKernels {
        s,
        kb_ij: (-k4pi * c.j1 * pj, ik4 * c.h1 * pj),
        kb_ji: (-k4pi * c.j1 * pi, ik4 * c.h1 * pi),
        nt_ij: (k4pi * c.j1 * qi, -ik4 * c.h1reg * qi),
        nt_ji: (k4pi * c.j1 * qj, -ik4 * c.h1reg * qj),
    }
}

/// Diagonal limits `(I1, I2)` of the single layer at node `i`.
pub(crate) fn single_layer_diagonal(g: &GridData, k: C64, i: usize) -> (C64, C64) {
    let i2 = 0.25 * I - EULER_GAMMA / (2.0 * PI) - (k * g.jac[i] * 0.5).ln() / (2.0 * PI);
    (C64::new(-0.25 * FRAC_1_PI, 0.0), i2)
}

/// Diagonal limit of the double-layer base kernel: `x'' . n / (4 pi |x'|^2)`.
pub(crate) fn double_layer_diagonal(g: &GridData, i: usize) -> f64 {
    if g.straight[g.segment[i]] {
        return 0.0;
    }
    dot(g.ddx[i], g.normal[i]) / (4.0 * PI * g.jac[i] * g.jac[i])
}

/// Trapezoidal row sums `h sum_j dG_0/dn(x_j) |x'_j|` of the Laplace double layer.
/// The exact integral is `-1/2` at every point where the boundary is smooth;
/// next to a corner the rule misses it by an amount that does not shrink with `h`.
pub fn laplace_double_layer_row_sums(g: &GridData) -> Vec<f64> {
    par::map(g.len(), |i| {
        let mut acc = double_layer_diagonal(g, i) * g.jac[i];
        for j in (0..g.len()).filter(|&j| j != i && !g.same_edge(i, j)) {
            let r = g.chord(i, j);
            acc += dot(r, g.normal[j]) / dot(r, r) * g.jac[j] / (2.0 * PI);
        }
        g.h * acc
    })
}

/// Evaluator for the split of one parametrized kernel.
#[derive(Debug, Clone, Copy)]
pub struct KernelSplit<'g> {
    grid: &'g GridData,
    kind: KernelKind,
    k: Wavenumber,
    variant: Variant,
}

pub fn split_single_layer(k: Wavenumber, grid: &GridData, variant: Variant) -> KernelSplit<'_> {
    KernelSplit { grid, kind: KernelKind::SingleLayer, k, variant }
}

pub fn split_double_layer(k: Wavenumber, grid: &GridData, variant: Variant) -> KernelSplit<'_> {
    KernelSplit { grid, kind: KernelKind::DoubleLayer, k, variant }
}

pub fn split_adjoint_double_layer(k: Wavenumber, grid: &GridData, variant: Variant) -> KernelSplit<'_> {
    KernelSplit { grid, kind: KernelKind::AdjointDoubleLayer, k, variant }
}

impl<'g> KernelSplit<'g> {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn wavenumber(&self) -> Wavenumber {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    fn jacobian(&self, i: usize, j: usize) -> f64 {
        let g = self.grid;
        match (self.kind, self.variant) {
            (KernelKind::SingleLayer, Variant::Arc) => g.jac[j],
            (KernelKind::SingleLayer, Variant::Weighted) => 1.0,
            (KernelKind::DoubleLayer, Variant::Arc) => g.jac[j],
            (KernelKind::DoubleLayer, Variant::Weighted) => g.jac[i],
            (KernelKind::AdjointDoubleLayer, Variant::Arc) => g.jac[i] * g.jac[j],
            (KernelKind::AdjointDoubleLayer, Variant::Weighted) => g.jac[i],
        }
    }

    /// `(I1, I2)` at the node pair `(t_i, t_j)`, including `i == j`.
    pub fn split(&self, i: usize, j: usize) -> (C64, C64) {
        let g = self.grid;
        let k = self.k.value();
        let (i1, i2) = if i == j {
            match self.kind {
                KernelKind::SingleLayer => single_layer_diagonal(g, k, i),
                _ => (ZERO, C64::new(double_layer_diagonal(g, i), 0.0)),
            }
        } else {
            let p = pair_kernels(g, k, i, j);
            let (a, full) = match self.kind {
                KernelKind::SingleLayer => p.s,
                KernelKind::DoubleLayer => p.kb_ij,
                KernelKind::AdjointDoubleLayer => p.kb_ji,
            };
            (a, full - a * log_factor(g, i, j))
        };
        let w = self.jacobian(i, j);
        (i1 * w, i2 * w)
    }

    /// `I1 ln(4 sin^2) + I2` off the diagonal.
    pub fn reconstruct(&self, i: usize, j: usize) -> C64 {
        let (a, b) = self.split(i, j);
        a * log_factor(self.grid, i, j) + b
    }

    /// Kernel evaluated straight from its definition, without splitting.
    pub fn direct(&self, i: usize, j: usize) -> Result<C64> {
        if i == j {
            return Err(Error::Singular(format!("kernel on the diagonal at node {i}")));
        }
        let g = self.grid;
        let k = self.k.value();
        let (x, y) = (g.x[i], g.x[j]);
        let rv = [x[0] - y[0], x[1] - y[1]];
        let r = rv[0].hypot(rv[1]);
        let h = |order| crate::specfun::hankel_h1(order, k * r);
        let v = match self.kind {
            KernelKind::SingleLayer => 0.25 * I * h(0)?,
            KernelKind::DoubleLayer => 0.25 * I * k * h(1)? * dot(rv, g.normal[j]) / r,
            KernelKind::AdjointDoubleLayer => -0.25 * I * k * h(1)? * dot(rv, g.normal[i]) / r,
        };
        Ok(v * self.jacobian(i, j))
    }
}

/// Split of `N_k1 - N_k2` in Maue form. `None` stands for the Laplace case `k = 0`.
///
/// The normal part `k1^2 G_k1 n(t).n(tau) - k2^2 G_k2 n(t).n(tau)` acts on the
/// density; the tangential part `d/dt (G_k1 - G_k2)` acts on its parameter
/// derivative (of `phi` for [`Variant::Arc`], of `phi/|x'|` for [`Variant::Weighted`]).
#[derive(Debug, Clone, Copy)]
pub struct HypersingularSplit<'g> {
    grid: &'g GridData,
    k1: Option<Wavenumber>,
    k2: Option<Wavenumber>,
    variant: Variant,
}

pub fn split_hypersingular_difference(
    k1: Option<Wavenumber>,
    k2: Option<Wavenumber>,
    grid: &GridData,
    variant: Variant,
) -> HypersingularSplit<'_> {
    HypersingularSplit { grid, k1, k2, variant }
}

impl<'g> HypersingularSplit<'g> {
    pub fn is_zero(&self) -> bool {
        self.k1.map(|k| k.value()) == self.k2.map(|k| k.value())
    }

    fn terms(&self) -> [(Option<Wavenumber>, f64); 2] {
        [(self.k1, 1.0), (self.k2, -1.0)]
    }

    /// `(I1, I2)` of the normal part.
    pub fn normal(&self, i: usize, j: usize) -> (C64, C64) {
        if self.is_zero() {
            return (ZERO, ZERO);
        }
        let g = self.grid;
        let nn = dot(g.normal[i], g.normal[j]);
        let mut acc = (ZERO, ZERO);
        for (k, sign) in self.terms() {
            let Some(k) = k else { continue };
            let k = k.value();
            let (a, b) = if i == j {
                single_layer_diagonal(g, k, i)
            } else {
                let (a, full) = pair_kernels(g, k, i, j).s;
                (a, full - a * log_factor(g, i, j))
            };
            let c = sign * k * k * nn;
            acc.0 += c * a;
            acc.1 += c * b;
        }
        let w = match self.variant {
            Variant::Arc => g.jac[i] * g.jac[j],
            Variant::Weighted => g.jac[i],
        };
        (acc.0 * w, acc.1 * w)
    }

    /// `(I1, I2)` of the tangential part.
    pub fn tangential(&self, i: usize, j: usize) -> (C64, C64) {
        if self.is_zero() || i == j {
            return (ZERO, ZERO);
        }
        let g = self.grid;
        let mut acc = (ZERO, ZERO);
        for (k, sign) in self.terms() {
            let Some(k) = k else { continue };
            let (a, full) = pair_kernels(g, k.value(), i, j).nt_ij;
            acc.0 += sign * a;
            acc.1 += sign * (full - a * log_factor(g, i, j));
        }
        acc
    }

    /// Direct normal-part kernel off the diagonal.
    pub fn normal_direct(&self, i: usize, j: usize) -> Result<C64> {
        let mut v = ZERO;
        for (k, sign) in self.terms() {
            let Some(k) = k else { continue };
            let s = split_single_layer(k, self.grid, Variant::Weighted).direct(i, j)?;
            v += sign * k.value() * k.value() * s;
        }
        let g = self.grid;
        let w = match self.variant {
            Variant::Arc => g.jac[i] * g.jac[j],
            Variant::Weighted => g.jac[i],
        };
        Ok(v * dot(g.normal[i], g.normal[j]) * w)
    }

    /// Direct tangential-part kernel off the diagonal.
    pub fn tangential_direct(&self, i: usize, j: usize) -> Result<C64> {
        if i == j {
            return Err(Error::Singular(format!("kernel on the diagonal at node {i}")));
        }
        let g = self.grid;
        let (x, y) = (g.x[i], g.x[j]);
        let rv = [x[0] - y[0], x[1] - y[1]];
        let r = rv[0].hypot(rv[1]);
        let q = dot(rv, g.dx[i]) / r;
        let mut v = ZERO;
        for (k, sign) in self.terms() {
            let k = k.map_or(ZERO, |k| k.value());
            // d/dt G_k = -(ik/4) H_1(kr) q / r, and d/dt G_0 = -q / (2 pi r^2).
            let d = if k == ZERO {
                C64::new(-q / (2.0 * PI * r), 0.0)
            } else {
                -0.25 * I * k * crate::specfun::hankel_h1(1, k * r)? * q
            };
            v += sign * d;
        }
        Ok(v)
    }
}

/// Assembled Jacobian-free base matrices for one wavenumber, row-major `2n x 2n`:
/// `A_ij = R((i - j) h) I1 + h I2`.
#[derive(Debug, Clone)]
pub struct BaseBlocks {
    pub k: C64,
    pub dim: usize,
    /// Single layer `G_k`.
    pub sw: Vec<C64>,
    /// Double layer `dG_k/dn(tau)`; the adjoint double layer is its transpose.
    pub kb: Vec<C64>,
    /// Tangential Maue kernel `d/dt (G_k - G_0)`.
    pub nt: Vec<C64>,
}

/// Quadrature weights `R(d h)`, `d = 0..2n`.
pub fn log_weight_table(grid: &GridData) -> Vec<f64> {
    log_weight_circulant(TrigGrid::new(grid.n).expect("grid has n >= 1"))
}

/// Fills all three base matrices in one pass over the node pairs `i < j`.
pub fn base_blocks(grid: &GridData, k: Wavenumber, weights: &[f64]) -> BaseBlocks {
    let k = k.value();
    let m = grid.len();
    let h = grid.h;
    let ltab: Vec<f64> = (0..m).map(|d| if d == 0 { 0.0 } else { log_factor(grid, d, 0) }).collect();
    let mut sw = vec![ZERO; m * m];
    let mut kb = vec![ZERO; m * m];
    let mut nt = vec![ZERO; m * m];
    let (ps, pk, pn) = (SharedMut(sw.as_mut_ptr()), SharedMut(kb.as_mut_ptr()), SharedMut(nt.as_mut_ptr()));
    par::for_each(m, move |i| {
        let (a, b) = single_layer_diagonal(grid, k, i);
        let diag = i * m + i;
        // SAFETY: worker `i` writes row `i` at columns `j >= i` and column `i`
        // at rows `j > i`; these index sets are disjoint across workers.
        unsafe {
            ps.write(diag, weights[0] * a + h * b);
            pk.write(diag, C64::new(h * double_layer_diagonal(grid, i), 0.0));
            pn.write(diag, ZERO);
        }
        for j in i + 1..m {
            let d = j - i;
            let (l, w) = (ltab[d], weights[d]);
            let p = pair_kernels(grid, k, i, j);
            let entry = |(a, full): (C64, C64)| w * a + h * (full - a * l);
            let s = entry(p.s);
            unsafe {
                ps.write(i * m + j, s);
                ps.write(j * m + i, s);
                pk.write(i * m + j, entry(p.kb_ij));
                pk.write(j * m + i, entry(p.kb_ji));
                pn.write(i * m + j, entry(p.nt_ij));
                pn.write(j * m + i, entry(p.nt_ji));
            }
        }
    });
    BaseBlocks { k, dim: m, sw, kb, nt }
}
