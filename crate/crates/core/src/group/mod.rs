//! The group `T ⋉ U`: torus weight functional plus a graded nilpotent Lie algebra.

pub mod free_lie;
pub mod presentation;

pub use free_lie::{free_graded_lie, necklace_count, Letter};
pub use presentation::{bracket_table, validate_presentation, BracketTable, FreeStructure, Generator, GroupPresentation, IntTerms};
