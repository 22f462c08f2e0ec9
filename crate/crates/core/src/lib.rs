//! Exact-arithmetic toolkit for generalized syzygy bundles on projective
//! varieties: truncated Chern-class calculus, cohomology dimension chasing,
//! membership and embedding predicates, moduli-space dimension counts, and
//! the recursive twist-and-take-syzygies construction.

pub mod arith;
pub mod cohom;
pub mod error;
pub mod ring;
pub mod sheaf;
pub mod moduli;
pub mod syzygy;
pub mod tower;

pub use cohom::{CohomologyTable, DimEntry, Prov, SesProblem};
pub use error::{Error, Result};
pub use ring::{ChernPolynomial, GradedClass, RingSpec};
pub use sheaf::{BundleFacts, SheafContext, SheafExpr, VarietySpec};
