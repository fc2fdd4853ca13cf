//! Finite-dimensional atomic JBW-algebras (Euclidean Jordan algebras) and the
//! order isomorphisms of their effect algebras `[0, e]`.

// `!(r <= tol)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod harness;
pub mod io;
pub mod iso;
pub mod matrix;
pub mod order;
pub mod quaternion;
pub mod spectral;
pub mod tolerance;

pub use algebra::{
    AlgebraDescriptor, Block, DivisionRing, Element, ElementClass, FactorDescriptor, HermBlock,
    SpinBlock,
};
pub use error::{Error, Result};
pub use quaternion::Quaternion;
