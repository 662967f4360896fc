//! Exit codes and their mapping from library errors.

use std::fmt::Display;

use quasiorbit::Error;

pub const PARSE: u8 = 2;
pub const INVARIANCE: u8 = 3;
pub const HYPOTHESIS: u8 = 4;
pub const BUDGET: u8 = 5;
pub const INTERNAL: u8 = 1;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Display) -> Self {
        Self { code, message: message.to_string() }
    }

    pub fn parse(message: impl Display) -> Self {
        Self::new(PARSE, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::ZeroOutsideDisc { .. }
            | Error::ZeroMultiplicity
            | Error::ZerosTooClose { .. }
            | Error::DegreeCap { .. }
            | Error::ConstantTheta
            | Error::DegenerateGram { .. }
            | Error::AmbientMismatch
            | Error::DimensionMismatch { .. }
            | Error::NotAChain { .. }
            | Error::InvalidSchedule(_) => PARSE,
            Error::NotInvariant { .. } => INVARIANCE,
            Error::HypothesisViolated(_)
            | Error::NotInSubspace { .. }
            | Error::NotADivisor { .. }
            | Error::DivisibilityFailure { .. }
            | Error::PreconditionViolated(_)
            | Error::ModelTooLong { .. }
            | Error::TruncationTooSmall(_)
            | Error::IllConditioned { .. } => HYPOTHESIS,
            Error::OutsideDisc { .. } | Error::SingularResolvent { .. } | Error::NotAnnihilated { .. } => INTERNAL,
        };
        Self::new(code, e)
    }
}

pub type CliResult<T> = Result<T, CliError>;
