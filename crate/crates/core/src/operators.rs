//! Dense `2n x 2n` matrices for the parametrized boundary operators, and the
//! matrix algebra used to compose them.
//!
//! Matrix entries follow the Nyström rule `A_ij = R((i - j) h) I1(t_i, t_j) + h I2(t_i, t_j)`
//! applied to the splits of [`crate::kernels`].

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{check_len, Error, Result};
use crate::geometry::GridData;
use crate::kernels::{base_blocks, laplace_double_layer_row_sums, log_weight_table, BaseBlocks, Variant};
use crate::par;
use crate::quadrature::Differentiator;
use crate::specfun::Wavenumber;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// What a matrix discretizes; stored in dumps as a numeric tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    General,
    Identity,
    Diagonal,
    SingleLayer,
    DoubleLayer,
    AdjointDoubleLayer,
    HypersingularDifference,
    LaplaceHypersingular,
    Impedance,
    System,
}

impl OperatorKind {
    pub fn tag(self) -> u64 {
        self as u64
    }

    pub fn from_tag(tag: u64) -> Result<Self> {
        use OperatorKind::*;
        [General, Identity, Diagonal, SingleLayer, DoubleLayer, AdjointDoubleLayer, HypersingularDifference, LaplaceHypersingular, Impedance, System]
            .get(tag as usize)
            .copied()
            .ok_or_else(|| Error::Io(format!("unknown operator tag {tag}")))
    }
}

/// Row-major complex square matrix with a description tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<C64>,
    pub kind: OperatorKind,
    pub wavenumbers: Vec<C64>,
    pub variant: Option<Variant>,
}

impl DenseOperator {
    pub fn from_data(dim: usize, data: Vec<C64>, kind: OperatorKind) -> Result<Self> {
        check_len(dim * dim, data.len())?;
        Ok(Self { dim, data, kind, wavenumbers: Vec::new(), variant: None })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim], kind: OperatorKind::General, wavenumbers: Vec::new(), variant: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut a = Self::zeros(dim);
        for i in 0..dim {
            a.data[i * dim + i] = ONE;
        }
        a.kind = OperatorKind::Identity;
        a
    }

    /// Multiplication by node samples.
    pub fn diag(values: &[C64]) -> Self {
        let dim = values.len();
        let mut a = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            a.data[i * dim + i] = v;
        }
        a.kind = OperatorKind::Diagonal;
        a
    }

    fn tagged(mut self, kind: OperatorKind, wavenumbers: Vec<C64>, variant: Option<Variant>) -> Self {
        self.kind = kind;
        self.wavenumbers = wavenumbers;
        self.variant = variant;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `A v`.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_len(self.dim, v.len())?;
        let mut out = vec![ZERO; self.dim];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    pub(crate) fn apply_into(&self, v: &[C64], out: &mut [C64]) {
        let m = self.dim;
        const ROWS: usize = 64;
        par::for_each_chunk(out, ROWS, |b, chunk| {
            for (r, o) in chunk.iter_mut().enumerate() {
                let i = b * ROWS + r;
                let row = &self.data[i * m..(i + 1) * m];
                let mut acc = ZERO;
                for (a, x) in row.iter().zip(v) {
                    acc += a * x;
                }
                *o = acc;
            }
        });
    }

    /// `A B`.
    pub fn compose(&self, other: &DenseOperator) -> Result<DenseOperator> {
        check_len(self.dim, other.dim)?;
        let m = self.dim;
        let mut c = DenseOperator::zeros(m);
        const BLOCK: usize = 128;
        let (a, b) = (&self.data, &other.data);
        par::for_each_chunk(&mut c.data, BLOCK * m, |blk, out| {
            let r0 = blk * BLOCK;
            let rows = out.len() / m;
            // SAFETY: row-major slices with the strides below stay in bounds;
            // C64 is layout-compatible with [f64; 2].
            unsafe {
                matrixmultiply::zgemm(
                    matrixmultiply::CGemmOption::Standard,
                    matrixmultiply::CGemmOption::Standard,
                    rows,
                    m,
                    m,
                    [1.0, 0.0],
                    a.as_ptr().add(r0 * m) as *const [f64; 2],
                    m as isize,
                    1,
                    b.as_ptr() as *const [f64; 2],
                    m as isize,
                    1,
                    [0.0, 0.0],
                    out.as_mut_ptr() as *mut [f64; 2],
                    m as isize,
                    1,
                );
            }
        });
        Ok(c)
    }

    /// `alpha A + B`.
    pub fn axpy(alpha: C64, a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
        check_len(a.dim, b.dim)?;
        let data = a.data.iter().zip(&b.data).map(|(x, y)| alpha * x + y).collect();
        Ok(DenseOperator { dim: a.dim, data, kind: OperatorKind::General, wavenumbers: Vec::new(), variant: None })
    }

    /// `self += alpha other`.
    pub fn add_scaled(&mut self, alpha: C64, other: &DenseOperator) -> Result<()> {
        check_len(self.dim, other.dim)?;
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += alpha * y;
        }
        self.kind = OperatorKind::General;
        Ok(())
    }

    pub fn scale(&mut self, alpha: C64) {
        self.data.iter_mut().for_each(|x| *x *= alpha);
    }

    pub fn transpose(&self) -> DenseOperator {
        let m = self.dim;
        let mut t = DenseOperator::zeros(m);
        for i in 0..m {
            for j in 0..m {
                t.data[j * m + i] = self.data[i * m + j];
            }
        }
        t.kind = self.kind;
        t
    }

    /// `diag(d) A`.
    pub fn scale_rows(&mut self, d: &[f64]) -> Result<()> {
        check_len(self.dim, d.len())?;
        let m = self.dim;
        for (row, &s) in self.data.chunks_mut(m).zip(d) {
            row.iter_mut().for_each(|x| *x *= s);
        }
        Ok(())
    }

    /// `A diag(d)`.
    pub fn scale_cols(&mut self, d: &[f64]) -> Result<()> {
        check_len(self.dim, d.len())?;
        for row in self.data.chunks_mut(self.dim) {
            row.iter_mut().zip(d).for_each(|(x, s)| *x *= s);
        }
        Ok(())
    }

    /// `diag(d) A` for complex `d`.
    pub fn scale_rows_complex(&mut self, d: &[C64]) -> Result<()> {
        check_len(self.dim, d.len())?;
        let m = self.dim;
        for (row, &s) in self.data.chunks_mut(m).zip(d) {
            row.iter_mut().for_each(|x| *x *= s);
        }
        Ok(())
    }

    /// `A D` with `D` the spectral differentiation matrix. Since `D` is real and
    /// antisymmetric, each row of `A D` is minus the derivative of that row.
    pub fn right_differentiate(&mut self, diff: &Differentiator) {
        let m = self.dim;
        par::for_each_chunk(&mut self.data, m, |_, row| {
            diff.apply(row);
            row.iter_mut().for_each(|x| *x = -*x);
        });
    }

    /// Binary dump: `u64` dimension, `u64` kind tag, then row-major `(re, im)`
    /// pairs, all little-endian.
    pub fn dump(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::with_capacity(16 + 16 * self.data.len());
        buf.extend_from_slice(&(self.dim as u64).to_le_bytes());
        buf.extend_from_slice(&self.kind.tag().to_le_bytes());
        for z in &self.data {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        std::fs::File::create(path)?.write_all(&buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        let word = |k: usize| -> Result<[u8; 8]> {
            buf.get(8 * k..8 * k + 8)
                .and_then(|s| s.try_into().ok())
                .ok_or_else(|| Error::Io("truncated matrix dump".into()))
        };
        let dim = u64::from_le_bytes(word(0)?) as usize;
        let kind = OperatorKind::from_tag(u64::from_le_bytes(word(1)?))?;
        let count = dim.checked_mul(dim).ok_or_else(|| Error::Io("matrix dump dimension overflows".into()))?;
        if buf.len() != 16 + 16 * count {
            return Err(Error::Io(format!("matrix dump has {} bytes, expected {}", buf.len(), 16 + 16 * count)));
        }
        let data = (0..count)
            .map(|e| Ok(C64::new(f64::from_le_bytes(word(2 + 2 * e)?), f64::from_le_bytes(word(3 + 2 * e)?))))
            .collect::<Result<Vec<_>>>()?;
        DenseOperator::from_data(dim, data, kind)
    }
}

/// The operators that can be assembled on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorSpec {
    SingleLayer(Wavenumber),
    DoubleLayer(Wavenumber),
    AdjointDoubleLayer(Wavenumber),
    /// `N_k1 - N_k2`; `None` is the Laplace wavenumber `0`.
    HypersingularDifference(Option<Wavenumber>, Option<Wavenumber>),
    /// The Laplace hypersingular operator `N_0`.
    LaplaceHypersingular,
}

/// Assembles operators on one grid, caching the base matrices per wavenumber.
pub struct Assembler<'g> {
    grid: &'g GridData,
    weights: Vec<f64>,
    diff: Differentiator,
    cache: Vec<BaseBlocks>,
    row_defect: Option<Vec<f64>>,
}

impl<'g> Assembler<'g> {
    pub fn new(grid: &'g GridData) -> Self {
        Self { grid, weights: log_weight_table(grid), diff: Differentiator::new(grid.n), cache: Vec::new(), row_defect: None }
    }

    pub fn grid(&self) -> &'g GridData {
        self.grid
    }

    pub fn differentiator(&self) -> &Differentiator {
        &self.diff
    }

    fn base(&mut self, k: Wavenumber) -> &BaseBlocks {
        let pos = match self.cache.iter().position(|b| b.k == k.value()) {
            Some(p) => p,
            None => {
                self.cache.push(base_blocks(self.grid, k, &self.weights));
                self.cache.len() - 1
            }
        };
        &self.cache[pos]
    }

    /// Deviation of the discrete Laplace double-layer row sums from `-1/2`.
    pub fn double_layer_defect(&mut self) -> &[f64] {
        let g = self.grid;
        self.row_defect.get_or_insert_with(|| laplace_double_layer_row_sums(g).into_iter().map(|s| s + 0.5).collect())
    }

    /// Drops cached base matrices to release memory.
    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    pub fn assemble(&mut self, spec: OperatorSpec, variant: Variant) -> Result<DenseOperator> {
        let m = self.grid.len();
        let jac = self.grid.jac.clone();
        let op = match spec {
            OperatorSpec::SingleLayer(k) => {
                let mut a = DenseOperator::from_data(m, self.base(k).sw.clone(), OperatorKind::SingleLayer)?;
                if variant == Variant::Arc {
                    a.scale_cols(&jac)?;
                }
                a.tagged(OperatorKind::SingleLayer, vec![k.value()], Some(variant))
            }
            OperatorSpec::DoubleLayer(k) => {
                let mut a = DenseOperator::from_data(m, self.base(k).kb.clone(), OperatorKind::DoubleLayer)?;
                match variant {
                    Variant::Arc => a.scale_cols(&jac)?,
                    Variant::Weighted => a.scale_rows(&jac)?,
                }
                // Singularity subtraction against the Laplace kernel: replaces the
                // discrete row sum of the leading corner singularity by its exact value.
                // Commutes with the |x'| similarity, so both variants take the same diagonal.
                let defect = self.double_layer_defect().to_vec();
                for (i, d) in defect.iter().enumerate() {
                    a.data_mut()[i * m + i] -= d;
                }
                a.tagged(OperatorKind::DoubleLayer, vec![k.value()], Some(variant))
            }
            OperatorSpec::AdjointDoubleLayer(k) => {
                let kb = DenseOperator::from_data(m, self.base(k).kb.clone(), OperatorKind::DoubleLayer)?;
                let mut a = kb.transpose();
                a.scale_rows(&jac)?;
                if variant == Variant::Arc {
                    a.scale_cols(&jac)?;
                }
                a.tagged(OperatorKind::AdjointDoubleLayer, vec![k.value()], Some(variant))
            }
            OperatorSpec::HypersingularDifference(k1, k2) => {
                let mut a = self.hypersingular_difference(k1, k2)?;
                if variant == Variant::Weighted {
                    let inv: Vec<f64> = jac.iter().map(|j| 1.0 / j).collect();
                    a.scale_cols(&inv)?;
                }
                let ks = [k1, k2].iter().map(|k| k.map_or(ZERO, |k| k.value())).collect();
                a.tagged(OperatorKind::HypersingularDifference, ks, Some(variant))
            }
            OperatorSpec::LaplaceHypersingular => {
                let mut a = self.laplace_hypersingular();
                if variant == Variant::Weighted {
                    let inv: Vec<f64> = jac.iter().map(|j| 1.0 / j).collect();
                    a.scale_cols(&inv)?;
                }
                a.tagged(OperatorKind::LaplaceHypersingular, vec![ZERO], Some(variant))
            }
        };
        Ok(op)
    }

    /// `N^x_k1 - N^x_k2 = diag|x'| (k1^2 nn G_k1 - k2^2 nn G_k2) diag|x'| + (T_k1 - T_k2) D`.
    fn hypersingular_difference(&mut self, k1: Option<Wavenumber>, k2: Option<Wavenumber>) -> Result<DenseOperator> {
        let g = self.grid;
        let m = g.len();
        let mut normal = vec![ZERO; m * m];
        let mut tangential = vec![ZERO; m * m];
        if k1.map(|k| k.value()) == k2.map(|k| k.value()) {
            return DenseOperator::from_data(m, normal, OperatorKind::HypersingularDifference);
        }
        for (k, sign) in [(k1, 1.0), (k2, -1.0)] {
            let Some(k) = k else { continue };
            let kv = k.value();
            let b = self.base(k);
            let c = sign * kv * kv;
            par::for_each_chunk(&mut normal, m, |i, row| {
                let ni = g.normal[i];
                for (j, x) in row.iter_mut().enumerate() {
                    let nn = ni[0] * g.normal[j][0] + ni[1] * g.normal[j][1];
                    *x += c * nn * g.jac[i] * g.jac[j] * b.sw[i * m + j];
                }
            });
            tangential.iter_mut().zip(&b.nt).for_each(|(x, y)| *x += sign * y);
        }
        let mut t = DenseOperator::from_data(m, tangential, OperatorKind::General)?;
        t.right_differentiate(&self.diff);
        let mut a = DenseOperator::from_data(m, normal, OperatorKind::HypersingularDifference)?;
        a.add_scaled(ONE, &t)?;
        Ok(a)
    }

    /// `N^x_0 = T_0 + h Q_0 D`: `T_0` is the circulant with symbol `-|m|/2`
    /// (the cotangent part, exact in Fourier space) and `Q_0` the smooth rest
    /// `-(x(t) - x(tau)).x'(t) / (2 pi r^2) + cot((t - tau)/2) / (4 pi)`.
    fn laplace_hypersingular(&mut self) -> DenseOperator {
        let g = self.grid;
        let m = g.len();
        let n = g.n;
        let mut col = vec![ZERO; m];
        col[0] = ONE;
        self.diff.apply_multiplier(&mut col, |f| -0.5 * f.min(n) as f64);
        let mut q = vec![ZERO; m * m];
        par::for_each_chunk(&mut q, m, |i, row| {
            for (j, x) in row.iter_mut().enumerate() {
                let v = if i == j {
                    let (d1, d2) = (g.dx[i], g.ddx[i]);
                    -(d1[0] * d2[0] + d1[1] * d2[1]) / (4.0 * PI * g.jac[i] * g.jac[i])
                } else {
                    let rv = g.chord(i, j);
                    let r2 = rv[0] * rv[0] + rv[1] * rv[1];
                    let qv = rv[0] * g.dx[i][0] + rv[1] * g.dx[i][1];
                    let half = 0.5 * (i as f64 - j as f64) * g.h;
                    -qv / (2.0 * PI * r2) + 1.0 / (4.0 * PI * half.tan())
                };
                *x = C64::new(g.h * v, 0.0);
            }
        });
        let mut a = DenseOperator::from_data(m, q, OperatorKind::LaplaceHypersingular).expect("square");
        a.right_differentiate(&self.diff);
        for i in 0..m {
            for j in 0..m {
                a.data[i * m + j] += col[(i + m - j) % m];
            }
        }
        a
    }
}

/// One-shot assembly without caching.
pub fn assemble(spec: OperatorSpec, grid: &GridData, variant: Variant) -> Result<DenseOperator> {
    Assembler::new(grid).assemble(spec, variant)
}
