//! Free-boson realization: currents as normal-ordered exponentials and the
//! exchange relations they satisfy.

pub mod catalog;
pub mod checks;
pub mod current;
pub mod lambert;
pub mod zeromode;

pub use catalog::{catalog, lookup, Relation};
pub use current::{mode_commutator, Algebra, BosonFamily, Current};
pub use lambert::Lambert;
