//! Unrestarted complex GMRES.
//!
//! Arnoldi with modified Gram-Schmidt plus one reorthogonalization pass,
//! Givens rotations for the least-squares problem, zero initial guess.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Outcome of one GMRES run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub solution: Vec<C64>,
    pub iterations: usize,
    /// Relative least-squares residuals, starting with `1` before the first step.
    pub history: Vec<f64>,
    /// Last entry of `history`.
    pub residual: f64,
    pub converged: bool,
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Rotation `(c, s)` with `c` real that zeroes `b` in `(a, b)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// Solves `A x = b` to relative residual `tol` with at most `maxit` steps
/// (capped at the dimension).
pub fn gmres<F>(mut apply: F, b: &[C64], tol: f64, maxit: usize) -> Result<SolveResult>
where
    F: FnMut(&[C64]) -> Result<Vec<C64>>,
{
    if !(tol > 0.0) {
        return Err(Error::Config(format!("GMRES tolerance {tol} must be positive")));
    }
    let m = b.len();
    let beta = norm(b);
    if !beta.is_finite() {
        return Err(Error::Domain("right-hand side is not finite".into()));
    }
    if beta == 0.0 {
        return Ok(SolveResult { solution: vec![C64::new(0.0, 0.0); m], iterations: 0, history: vec![0.0], residual: 0.0, converged: true });
    }
    let maxit = maxit.min(m);
    let mut basis: Vec<Vec<C64>> = vec![b.iter().map(|z| z / beta).collect()];
    // Columns of the rotated Hessenberg matrix.
    let mut r: Vec<Vec<C64>> = Vec::with_capacity(maxit);
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(maxit);
    let mut g = vec![C64::new(beta, 0.0)];
    let mut history = vec![1.0];
    let mut converged = false;

    for j in 0..maxit {
        let mut w = apply(&basis[j])?;
        crate::error::check_len(m, w.len())?;
        let wnorm0 = norm(&w);
        let mut h = vec![C64::new(0.0, 0.0); j + 2];
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = dot(q, &w);
                h[i] += c;
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let hn = norm(&w);
        h[j + 1] = C64::new(hn, 0.0);
        if !hn.is_finite() || h.iter().any(|z| !z.is_finite()) {
            return Err(Error::Breakdown(j + 1));
        }
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (a, bb) = (h[i], h[i + 1]);
            h[i] = c * a + s * bb;
            h[i + 1] = -s.conj() * a + c * bb;
        }
        let (c, s) = givens(h[j], h[j + 1]);
        h[j] = c * h[j] + s * h[j + 1];
        h[j + 1] = C64::new(0.0, 0.0);
        rot.push((c, s));
        let gj = g[j];
        g[j] = c * gj;
        g.push(-s.conj() * gj);
        h.truncate(j + 1);
        if h[j].norm() == 0.0 {
            return Err(Error::Breakdown(j + 1));
        }
        r.push(h);
        let res = g[j + 1].norm() / beta;
        history.push(res);
        let happy = hn <= 1e-14 * wnorm0.max(f64::MIN_POSITIVE);
        if res <= tol || happy {
            converged = true;
            break;
        }
        basis.push(w.iter().map(|z| z / hn).collect());
    }

    let k = r.len();
    let mut y = vec![C64::new(0.0, 0.0); k];
    for i in (0..k).rev() {
        let mut acc = g[i];
        for l in i + 1..k {
            acc -= r[l][i] * y[l];
        }
        y[i] = acc / r[i][i];
    }
    let mut x = vec![C64::new(0.0, 0.0); m];
    for (yi, q) in y.iter().zip(&basis) {
        x.iter_mut().zip(q).for_each(|(a, b)| *a += yi * b);
    }
    let residual = *history.last().unwrap_or(&1.0);
    Ok(SolveResult { solution: x, iterations: k, history, residual, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_in_one_step() {
        let b: Vec<C64> = (0..10).map(|i| C64::new(i as f64, 1.0)).collect();
        let out = gmres(|v| Ok(v.to_vec()), &b, 1e-12, 10).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(out.converged);
        assert!(out.solution.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-14));
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let out = gmres(|v| Ok(v.to_vec()), &[C64::new(0.0, 0.0); 4], 1e-12, 4).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.solution.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn non_convergence_is_flagged() {
        // Cyclic shift: GMRES stagnates until the last step.
        let n = 8;
        let shift = |v: &[C64]| -> Result<Vec<C64>> { Ok((0..v.len()).map(|i| v[(i + 1) % v.len()]).collect()) };
        let mut b = vec![C64::new(0.0, 0.0); n];
        b[0] = C64::new(1.0, 0.0);
        let out = gmres(shift, &b, 1e-12, 3).unwrap();
        assert!(!out.converged);
        assert_eq!(out.iterations, 3);
        assert!(out.history.iter().all(|&h| (h - 1.0).abs() < 1e-14));
    }
}
