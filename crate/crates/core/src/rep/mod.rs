//! Representations of `T ⋉ U` in torus-eigenbasis form, and the tensor
//! operations on them.

pub mod morphism;
pub mod object;
pub mod ops;
pub mod random;

pub use morphism::Morphism;
pub use object::{BasisVector, RepObject};
pub use ops::*;
pub use random::{random_abelian_object, random_object};
