//! Extension classes through Chevalley-Eilenberg cohomology.

pub mod classes;
pub mod complex;
pub mod nilpotent;
pub mod yoneda;

pub use classes::*;
pub use complex::CeComplex;
pub use nilpotent::{exp_minus_one_over, nilpotent_exp, nilpotent_log};
pub use yoneda::{yoneda_compose, ExtBetween, YonedaClass};
