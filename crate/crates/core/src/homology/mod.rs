//! Homology of finite abelian covers of link and knot complements, computed
//! from the Wirtinger 2-complex through the regular representation and
//! Smith normal form.

mod cover;
mod formulas;
mod snf;

use thiserror::Error;

use crate::algebra::{AlgebraError, Element};
use crate::foxcalc::FoxError;
use crate::linkdiagram::DiagramError;

pub use cover::{
    cover_chain_complex, homology_of_cover, lift_chain, lift_class_of_curve, relative_homology, CoverComplex,
    CoverHomology, HomologyClass, TorsionGenerator,
};
pub use formulas::{verify_knot_cover_formula, verify_link_cover_formula, HomologySummary, VerificationReport};
pub use snf::{smith_normal_form, smith_normal_form_tracked, SNFResult, Track};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Fox(#[from] FoxError),
    #[error("map has source rank {map} but the diagram has {components} components")]
    RankMismatch { map: usize, components: usize },
    #[error("invariant factor {0} does not fit in 64 bits")]
    TooLarge(String),
    #[error("homology was computed without transforms; cycles cannot be projected")]
    NoTransforms,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("curve maps to {image:?} under φ, not to the identity")]
    NotInKernel { image: Element },
    #[error("expected a 2-component link, found {0} components")]
    NotTwoComponents(usize),
    #[error("linking number {0} is not ±1")]
    LinkingNumber(i64),
    #[error("character product {numeric} disagrees with determinant {exact}")]
    Inconsistent { exact: String, numeric: String },
}
