//! Exact derived commutative algebra over Koszul and square-zero DG-rings.

pub mod algebra;
pub mod cm;
pub mod complexes;
pub mod dg;
pub mod fixtures;
pub mod local;
pub mod oracle;
pub mod report;
pub mod session;

pub use algebra::{AlgebraError, BaseRing, Field, MonoOrder, Poly, PolyRing, PresentedModule, Scalar};
