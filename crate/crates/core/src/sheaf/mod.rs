//! Variety catalog, sheaf expressions, and the fact resolver.

pub mod expr;
pub mod input;
pub mod resolve;
pub mod variety;

pub use expr::SheafExpr;
pub use input::load_str;
pub use resolve::{assert_global_generation, resolve_facts, BundleFacts, Flag, OpaqueBundle, Resolver, SheafContext};
pub use variety::{Omega, VarietySpec};
