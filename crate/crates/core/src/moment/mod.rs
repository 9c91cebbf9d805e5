//! Symbolic moment engine: ordering rewriters, coherent-state expectations
//! and the closed-form observables built on them.

pub mod expect;
pub mod fission;
pub mod formulas;
pub mod word;

pub use expect::{expect, MomentSpec, ModeKind, ParamPoly, RationalInX};
pub use word::{normal_order, antinormal_order, Letter, OpPolynomial, OpWord};
