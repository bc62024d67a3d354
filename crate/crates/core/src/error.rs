//! Crate-wide error type.

use thiserror::Error;

use crate::arith::ArithError;
use crate::cubic::CubicError;
use crate::eisenstein::EisError;
use crate::magnus::MagnusError;
use crate::milnor::MilnorError;
use crate::redei::RedeiError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Eisenstein(#[from] EisError),
    #[error(transparent)]
    Magnus(#[from] MagnusError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Redei(#[from] RedeiError),
    #[error(transparent)]
    Cubic(#[from] CubicError),
}

fn arith_kind(e: &ArithError) -> &'static str {
    match e {
        ArithError::InvalidModulus(_) => "InvalidModulus",
        ArithError::NonResidue { .. } => "NonResidue",
        ArithError::NotAdmissible(_) => "NotAdmissible",
        ArithError::BoundExceeded { .. } => "BoundExceeded",
    }
}

fn eis_kind(e: &EisError) -> &'static str {
    match e {
        EisError::NotPrime(_) => "NotPrime",
        EisError::NotNineAdmissible { .. } => "NotNineAdmissible",
        EisError::Ramified => "Ramified",
        EisError::DividesArgument => "DividesArgument",
        EisError::NotACube => "NotACube",
        EisError::Parse(_) => "Parse",
    }
}

fn magnus_kind(e: &MagnusError) -> &'static str {
    match e {
        MagnusError::IndexOutOfRange { .. } => "IndexOutOfRange",
        MagnusError::Parse(_) => "Parse",
        MagnusError::InvalidModulus(_) => "InvalidModulus",
        MagnusError::EmptyIndex => "EmptyIndex",
    }
}

impl Error {
    /// Name of the innermost error variant, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Arith(e) => arith_kind(e),
            Error::Eisenstein(e) => eis_kind(e),
            Error::Magnus(e) => magnus_kind(e),
            Error::Milnor(e) => match e {
                MilnorError::Magnus(m) => magnus_kind(m),
                MilnorError::IndexNotInS(_) => "IndexNotInS",
                MilnorError::LengthOutOfRange { .. } => "LengthOutOfRange",
                MilnorError::UnitIndeterminacy => "UnitIndeterminacy",
                MilnorError::AssumptionViolated(_) => "AssumptionViolated",
                MilnorError::HypothesisViolated(_) => "HypothesisViolated",
                MilnorError::InvalidPresentation(_) => "InvalidPresentation",
            },
            Error::Redei(e) => match e {
                RedeiError::Arith(a) => arith_kind(a),
                RedeiError::NotAdmissible(_) => "NotAdmissible",
                RedeiError::DistinctnessViolated => "DistinctnessViolated",
                RedeiError::Degenerate(_) => "Degenerate",
            },
            Error::Cubic(e) => match e {
                CubicError::Eis(x) => eis_kind(x),
                CubicError::ContextMismatch => "ContextMismatch",
                CubicError::NotAdmissible(_) => "NotAdmissible",
                CubicError::BoundExceeded { .. } => "BoundExceeded",
                CubicError::NoWitness => "NoWitness",
                CubicError::NotCoprimeToThree => "NotCoprimeToThree",
                CubicError::ThetaVanishes => "ThetaVanishes",
                CubicError::Degenerate(_) => "Degenerate",
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
