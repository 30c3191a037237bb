//! Exact arithmetic kernel: rationals, sparse multivariate polynomials,
//! rational functions, and reduction modulo a quartic curve relation.

pub mod poly;
pub mod quotient;
pub mod ratfunc;
pub mod rational;
pub mod univariate;

pub use poly::{Assignment, Monomial, MultiPoly, Var};
pub use quotient::{reduce_mod_curve, CurveReducedExpr};
pub use ratfunc::RationalFunction;
pub use rational::{rationals_up_to_height, Rational};
pub use univariate::{
    deflate, discriminant, quartic_discriminant, rational_roots, squarefree_factorization, UniPoly,
};

pub(crate) use poly::poly;
