//! Numerical certification of the elliptic algebra of type A2(2): q-series and
//! theta brackets, the 9x9 dynamical R-matrix, a boson contraction engine for
//! exponential currents, the 3-dimensional evaluation representation, and the
//! theta identities behind the half-current relations.

pub mod bosonope;
pub mod config;
pub mod context;
pub mod error;
pub mod evalrep;
pub mod identities;
pub mod qseries;
pub mod registry;
pub mod report;
pub mod rmatrix;
pub mod series;
pub mod structfuncs;

pub use context::Ctx;
pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use report::CheckReport;
