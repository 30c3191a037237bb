use thiserror::Error;

use crate::exactmath::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational {0:?} (expected P or P/Q)")]
    ParseRational(String),
    #[error("cannot parse polynomial: {0}")]
    ParsePoly(String),
    #[error("no value assigned to variable {0}")]
    MissingVariable(Var),
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("value is not a root of the polynomial")]
    NotARoot,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("denominator vanishes identically after reduction")]
    DenominatorVanishes,
    #[error("denominator guard fails: the parameters are degenerate")]
    DegenerateParameters,
    #[error("c = {0} is excluded by the birational map (c must differ from 1 and 2)")]
    ExceptionalC(String),
    #[error("c = 0 is excluded for the seventh-case inverse map")]
    ZeroC,
    #[error("point does not satisfy the defining equation of its variety")]
    NotOnVariety,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is exceptional")]
    ExceptionalPoint,
    #[error("case {0} has no inverse map (only cases 7 and 8 do)")]
    UnsupportedCase(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
