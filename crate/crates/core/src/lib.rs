//! Exact arithmetic and symbolic verification for the two cubic equations
//! of a rational perfect cuboid, their reducibility cases, and the two
//! elliptic curves that parametrize cases 7 and 8.

pub mod coeffs;
pub mod cuboidcheck;
pub mod curves;
pub mod error;
pub mod exactmath;
pub mod reducibility;

pub use coeffs::{coefficients, CoefficientSet, ParamPoint};
pub use cuboidcheck::{check_candidate, CuboidReport, Verdict};
pub use curves::{search, search_parallel, CurveId, SearchResult};
pub use error::{Error, Result};
pub use exactmath::{MultiPoly, Rational, RationalFunction};
pub use reducibility::{classify_cases, CaseId, CurvePoint};
