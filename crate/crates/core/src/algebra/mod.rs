//! Atomic algebras as explicit direct sums of type I factors, and the
//! Jordan-algebraic primitives on their elements.

mod descriptor;
mod element;
mod random;

pub use descriptor::{AlgebraDescriptor, DivisionRing, FactorDescriptor};
pub use element::{hermitian_tolerance, Block, Element, HermBlock, SpinBlock};
pub use random::{
    random_element, random_general, random_unit_vector, random_with, ElementClass, INTERIOR_SHIFT,
    INVERTIBLE_EFFECT_FLOOR,
};
