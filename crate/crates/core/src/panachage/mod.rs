//! Compatible pairs of extensions, blended extensions, and the large-`u` criteria.

mod blend;
mod equivalence;
mod search;
mod theorem;

pub use blend::{attached_unique, blend, AttachedVerdict, BlendOutcome, BlendedDiagram, CompatiblePair, DiagramCheck};
pub use equivalence::{apply_automorphisms, pair_equivalent, AutTriple, EquivVerdict};
pub use search::{counterexample_search, Certificate, FoundInstance, SearchBounds, SearchOutcome, SearchPattern};
pub use theorem::{is_totally_nonsplit, theorem3_verify, Theorem3Report};

pub use crate::lie::{is_large_u, is_large_u_p};
