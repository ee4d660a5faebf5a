//! Obstructions to concordance with the Hopf link for 2-component links of
//! linking number one.
//!
//! The pipeline runs from a planar diagram to a verdict:
//!
//! * [`linkdiagram`] parses PD codes and produces Wirtinger presentations;
//! * [`foxcalc`] turns presentations into Alexander matrices and polynomials;
//! * [`homology`] builds the chain complexes of finite abelian covers through
//!   the regular representation and reads off `H_1` with Smith normal form;
//! * [`forms`] handles linking forms, metabolisers and characters vanishing
//!   on them;
//! * [`signatures`] computes Levine–Tristram signatures and torus-averaged
//!   signatures of Hermitian matrices over `C[Z^r]`;
//! * [`obstruction`] combines everything through the satellite signature
//!   formula.

pub mod algebra;
pub mod cli;
pub mod foxcalc;
pub mod forms;
pub mod homology;
pub mod linkdiagram;
pub mod obstruction;
pub mod signatures;

mod error;
mod json;

pub use error::{exit, Error};
