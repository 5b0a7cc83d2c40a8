//! Exact polynomial arithmetic, module Gröbner bases and finitely presented graded modules.

pub mod groebner;
pub mod ideal;
pub mod module;
pub mod parse;
pub mod poly;
pub mod scalar;

use std::sync::Arc;

use thiserror::Error;

pub use groebner::{Groebner, ModCtx, ModVec, Term};
pub use module::{PresentedModule, SubModule};
pub use poly::{Mono, MonoOrder, Poly, PolyRing};
pub use scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("generator {index} is not homogeneous: {poly}")]
    Inhomogeneous { index: usize, poly: String },
    #[error("defining ideal does not give a finite-dimensional quotient")]
    NotArtinian,
    #[error("entry ({row}, {col}) has degree inconsistent with the twists")]
    TwistMismatch { row: usize, col: usize },
    #[error("boundary generator {index} is not in the span of the cycles")]
    NotContained { index: usize },
    #[error("monomial order mismatch between basis and input")]
    OrderMismatch,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// Graded base ring `k[x]/J`; `J` is empty or has finite-dimensional quotient.
#[derive(Debug)]
pub struct BaseRing {
    pub ring: Arc<PolyRing>,
    ideal: Vec<Poly>,
    ideal_gb: Groebner,
}

impl PartialEq for BaseRing {
    fn eq(&self, o: &Self) -> bool {
        self.ring == o.ring && self.ideal == o.ideal
    }
}

impl BaseRing {
    pub fn polynomial(ring: Arc<PolyRing>) -> Arc<BaseRing> {
        let ctx = ModCtx::new(ring.clone(), vec![0], false);
        let ideal_gb = Groebner::new(ctx, Vec::new());
        Arc::new(BaseRing { ring, ideal: Vec::new(), ideal_gb })
    }

    /// Quotient by an ideal that must be homogeneous and of finite colength.
    pub fn quotient(ring: Arc<PolyRing>, ideal: Vec<Poly>) -> Result<Arc<BaseRing>, AlgebraError> {
        let ideal: Vec<Poly> = ideal.into_iter().filter(|p| !p.is_zero()).collect();
        for (index, p) in ideal.iter().enumerate() {
            if !p.is_homogeneous() {
                return Err(AlgebraError::Inhomogeneous { index, poly: p.to_string() });
            }
        }
        let ctx = ModCtx::new(ring.clone(), vec![0], false);
        let gens = ideal.iter().map(|p| ModVec::from_poly(&ctx, 0, p)).collect();
        let ideal_gb = Groebner::new(ctx, gens);
        if !ideal.is_empty() {
            let n = ring.nvars();
            let pure = (0..n).all(|v| {
                ideal_gb.basis().iter().any(|g| {
                    let m = &g.lead().unwrap().mono;
                    m.iter().enumerate().all(|(i, &e)| if i == v { e > 0 } else { e == 0 })
                })
            });
            if !pure {
                return Err(AlgebraError::NotArtinian);
            }
        }
        Ok(Arc::new(BaseRing { ring, ideal, ideal_gb }))
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_artinian(&self) -> bool {
        !self.ideal.is_empty()
    }

    pub fn defining_ideal(&self) -> &[Poly] {
        &self.ideal
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(&self.ring, i)
    }

    pub fn vars(&self) -> Vec<Poly> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    pub fn one(&self) -> Poly {
        Poly::one(&self.ring)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(&self.ring)
    }

    /// Canonical representative modulo the defining ideal.
    pub fn reduce(&self, p: &Poly) -> Poly {
        if self.ideal.is_empty() || p.is_zero() {
            return p.clone();
        }
        let v = ModVec::from_poly(self.ideal_gb.ctx(), 0, p);
        self.ideal_gb.reduce(&v).to_poly(&self.ring, 0)
    }

    /// Largest degree with a nonzero piece, for an Artinian base.
    pub fn top_degree(&self) -> Option<i64> {
        if !self.is_artinian() {
            return None;
        }
        let n = self.nvars();
        let mut bound = 0;
        for v in 0..n {
            let e = self
                .ideal_gb
                .basis()
                .iter()
                .filter_map(|g| {
                    let m = &g.lead().unwrap().mono;
                    m.iter().enumerate().all(|(i, &e)| i == v || e == 0).then_some(m[v] as i64)
                })
                .min()
                .unwrap_or(1);
            bound += (e - 1) * self.ring.weights[v] as i64;
        }
        (0..=bound).rev().find(|&t| module::quotient_dimension(&self.ideal_gb, t) > 0)
    }

    /// Sum of all variable weights: the twist of the canonical module of the ambient ring.
    pub fn canonical_twist(&self) -> i64 {
        self.ring.weights.iter().map(|&w| w as i64).sum()
    }

    pub fn parse(&self, s: &str) -> Result<Poly, AlgebraError> {
        parse::parse_poly(&self.ring, s)
    }
}
