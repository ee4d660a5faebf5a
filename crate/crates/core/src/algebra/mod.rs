//! Exact algebra: integer Laurent polynomials, finite abelian groups and
//! their characters, the regular representation, integer matrices.

mod gcd;
pub mod group;
mod laurent;
mod matrix;
mod parse;
mod regrep;

use thiserror::Error;

pub use gcd::{integer_content, laurent_gcd, laurent_gcd_all};
pub use group::{
    admissible_maps, enumerate_characters, frac, is_prime, prime_power, Character, Element, FinAbGroup, GroupMap,
    DEFAULT_GROUP_BOUND,
};
pub use laurent::{Exponents, LaurentPoly};
pub use matrix::{IntMatrix, LaurentMatrix};
pub use parse::parse_laurent;
pub use regrep::{apply_rep_to_matrix, character_product, eval_at_character, regular_representation, to_group_ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("variable count mismatch: {0} vs {1}")]
    VariableMismatch(usize, usize),
    #[error("group of order {size} exceeds the configured bound {bound}")]
    BoundExceeded { size: u64, bound: u64 },
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}
