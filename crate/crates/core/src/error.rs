use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::forms::FormError;
use crate::foxcalc::FoxError;
use crate::homology::HomologyError;
use crate::linkdiagram::DiagramError;
use crate::obstruction::ObstructionError;
use crate::signatures::SignatureError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fox(#[from] FoxError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Obstruction(#[from] ObstructionError),
    #[error("{0}")]
    Input(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const DEGENERATE: i32 = 2;
    pub const BOUND: i32 = 3;
    pub const INCONSISTENT: i32 = 4;
    pub const MISSING_INPUT: i32 = 5;
}

fn algebra_code(e: &AlgebraError) -> i32 {
    match e {
        AlgebraError::BoundExceeded { .. } => exit::BOUND,
        _ => exit::PARSE,
    }
}

fn diagram_code(_: &DiagramError) -> i32 {
    exit::PARSE
}

fn fox_code(e: &FoxError) -> i32 {
    match e {
        FoxError::Diagram(d) => diagram_code(d),
        FoxError::Degenerate | FoxError::NotUnitAtOne(_) => exit::DEGENERATE,
        FoxError::TooLarge { .. } => exit::BOUND,
    }
}

fn homology_code(e: &HomologyError) -> i32 {
    match e {
        HomologyError::Algebra(a) => algebra_code(a),
        HomologyError::Diagram(d) => diagram_code(d),
        HomologyError::Fox(f) => fox_code(f),
        HomologyError::RankMismatch { .. } => exit::PARSE,
        HomologyError::TooLarge(_) => exit::BOUND,
        HomologyError::NoTransforms | HomologyError::NotACycle | HomologyError::Inconsistent { .. } => {
            exit::INCONSISTENT
        }
        HomologyError::NotInKernel { .. } | HomologyError::NotTwoComponents(_) | HomologyError::LinkingNumber(_) => {
            exit::DEGENERATE
        }
    }
}

fn form_code(e: &FormError) -> i32 {
    match e {
        FormError::Algebra(a) => algebra_code(a),
        FormError::Singular(_) => exit::DEGENERATE,
        _ => exit::PARSE,
    }
}

fn signature_code(e: &SignatureError) -> i32 {
    match e {
        SignatureError::SingularAtOmega { .. } => exit::DEGENERATE,
        SignatureError::RankTooLarge { .. } => exit::BOUND,
        _ => exit::PARSE,
    }
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Diagram(e) => diagram_code(e),
            Error::Algebra(e) => algebra_code(e),
            Error::Fox(e) => fox_code(e),
            Error::Homology(e) => homology_code(e),
            Error::Form(e) => form_code(e),
            Error::Signature(e) => signature_code(e),
            Error::Obstruction(e) => match e {
                ObstructionError::Diagram(d) => diagram_code(d),
                ObstructionError::Algebra(a) => algebra_code(a),
                ObstructionError::Homology(h) => homology_code(h),
                ObstructionError::Form(f) => form_code(f),
                ObstructionError::Signature(s) => signature_code(s),
                ObstructionError::BadBase { .. } => exit::DEGENERATE,
                ObstructionError::FormRequired { .. } => exit::MISSING_INPUT,
                ObstructionError::NoSuchGenerator(_)
                | ObstructionError::NotNullHomologous(_)
                | ObstructionError::CharacterShape { .. }
                | ObstructionError::Input(_) => exit::PARSE,
            },
            Error::Input(_) | Error::Io { .. } => exit::PARSE,
            Error::MissingInput(_) => exit::MISSING_INPUT,
        }
    }
}
