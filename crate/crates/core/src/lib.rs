//! Exact calculator for representations of `T ⋉ U` with their weight filtrations,
//! extension classes, and blended extensions.

pub mod axioms;
pub mod error;
pub mod group;
pub mod io;
pub mod lie;
pub mod mt;
pub mod panachage;
pub mod linalg;
pub mod ext;
pub mod rep;
pub mod suites;

pub use error::{Error, Result};
