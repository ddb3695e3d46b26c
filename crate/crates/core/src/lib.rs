//! Exact census of real algebraic numbers of fixed degree and bounded height,
//! together with numerical evaluators of their limiting counting density.

pub mod census;
pub mod density;
pub mod error;
pub mod farey;
pub mod gaps;
pub mod lattice;
pub mod poly;
pub mod qmc;
pub mod rational;
pub mod report;
pub mod roots;

pub use error::{Error, Result};
pub use poly::{IntPoly, PrimePolyCertificate};
pub use rational::{ExtRational, HalfOpenInterval};
