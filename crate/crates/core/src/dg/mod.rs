//! DG-rings, semi-free DG-modules and derived functors.

pub mod algebra;
pub mod module;
pub mod resolve;
pub mod derived;
pub mod dualizing;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::complexes::ComplexError;

pub use algebra::{DGAlgebra, Presentation};
pub use module::DGModule;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("{0}")]
    Invalid(String),
    #[error("element {index} is a unit or has degree zero")]
    UnitElement { index: usize },
    #[error("square-zero extension needs a positive shift")]
    ZeroShift,
    #[error("Leibniz rule fails: {0}")]
    Leibniz(String),
    #[error("resource bound {bound} exhausted: {what}")]
    BoundExhausted { bound: i64, what: String },
    #[error("no dualizing constructor for this presentation")]
    NoDualizingConstructor,
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("not a system of parameters: {len} elements, quotient of dimension {dimension}")]
    NotSystemOfParameters { dimension: usize, len: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
