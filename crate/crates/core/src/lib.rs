//! Regularized combined-field integral equation solvers for two-dimensional
//! Helmholtz impedance problems on domains with corners.

pub mod cli;
pub mod error;
pub mod formulations;
pub mod geometry;
pub mod impedance;
pub mod kernels;
pub mod operators;
mod par;
pub mod postproc;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
