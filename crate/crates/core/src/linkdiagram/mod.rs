//! Oriented link diagrams in PD form, their components and linking numbers,
//! and Wirtinger presentations of the link group.

mod pd;
mod wirtinger;

use thiserror::Error;

pub use pd::{parse_pd, Components, Crossing, PDCode, Sign};
pub use wirtinger::{
    invert_word, reduce_word, wirtinger, wirtinger_with_order, GroupPresentation, MeridianMap, Wirtinger, Word,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("malformed diagram{}: {reason}", crossing.map(|c| format!(" (crossing {c})")).unwrap_or_default())]
    Malformed { crossing: Option<usize>, reason: String },
    #[error("linking number needs two distinct components, got {0} twice")]
    SameComponent(usize),
    #[error("component {index} does not exist (diagram has {count})")]
    NoSuchComponent { index: usize, count: usize },
    #[error("{0:?} is not a permutation of the components")]
    BadComponentOrder(Vec<usize>),
    #[error("expected a {expected}-component diagram, found {found}")]
    ComponentCount { expected: usize, found: usize },
}
