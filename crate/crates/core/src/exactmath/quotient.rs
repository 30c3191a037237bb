//! Arithmetic in `Q(c)[y] / (y^2 - P(c))` for the two quartic curve models.
//!
//! Every element is stored as `a0(c) + a1(c) * y`. Products fold `y^2` back
//! into `P(c)`, and inverses rationalize through the conjugate
//! `a0 - a1 * y`, so the y-degree never exceeds one.

use std::fmt;

use serde::{Serialize, Serializer};

use super::poly::{Assignment, MultiPoly, Var};
use super::ratfunc::RationalFunction;
use super::rational::Rational;
use crate::curves::CurveId;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct CurveReducedExpr {
    a0: RationalFunction,
    a1: RationalFunction,
    curve: CurveId,
}

impl CurveReducedExpr {
    pub fn new(a0: RationalFunction, a1: RationalFunction, curve: CurveId) -> Self {
        CurveReducedExpr { a0, a1, curve }
    }

    pub fn from_rf(a0: RationalFunction, curve: CurveId) -> Self {
        Self::new(a0, RationalFunction::zero(), curve)
    }

    pub fn constant(r: Rational, curve: CurveId) -> Self {
        Self::from_rf(RationalFunction::constant(r), curve)
    }

    pub fn y(curve: CurveId) -> Self {
        Self::new(RationalFunction::zero(), RationalFunction::one(), curve)
    }

    pub fn a0(&self) -> &RationalFunction {
        &self.a0
    }

    pub fn a1(&self) -> &RationalFunction {
        &self.a1
    }

    pub fn curve(&self) -> CurveId {
        self.curve
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a1.is_zero()
    }

    fn quartic(&self) -> RationalFunction {
        RationalFunction::from_poly(self.curve.quartic().clone())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.curve, other.curve, "mixing elements of different curves");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        Self::new(self.a0.add(&other.a0), self.a1.add(&other.a1), self.curve)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        Self::new(self.a0.sub(&other.a0), self.a1.sub(&other.a1), self.curve)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.a0.neg(), self.a1.neg(), self.curve)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.quartic();
        let a0 = self
            .a0
            .mul(&other.a0)
            .add(&self.a1.mul(&other.a1).mul(&p));
        let a1 = self.a0.mul(&other.a1).add(&self.a1.mul(&other.a0));
        Self::new(a0, a1, self.curve)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.a0.scale(k), self.a1.scale(k), self.curve)
    }

    /// `(a0 - a1 y) / (a0^2 - a1^2 P)`.
    pub fn inv(&self) -> Result<Self> {
        let norm = self
            .a0
            .mul(&self.a0)
            .sub(&self.a1.mul(&self.a1).mul(&self.quartic()));
        if norm.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let inv = norm.recip()?;
        Ok(Self::new(
            self.a0.mul(&inv),
            self.a1.neg().mul(&inv),
            self.curve,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::constant(Rational::one(), self.curve);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Value at a concrete point `(y, c)` of the curve.
    pub fn eval(&self, y: &Rational, c: &Rational) -> Result<Rational> {
        let at = Assignment::new().with(Var::C, c.clone());
        Ok(self.a0.eval(&at)? + self.a1.eval(&at)? * y)
    }
}

/// Splits a polynomial in `c, y` into `(a0, a1)` with `y^2 -> P(c)`.
pub fn reduce_poly(p: &MultiPoly, curve: CurveId) -> (MultiPoly, MultiPoly) {
    let quartic = curve.quartic();
    let mut powers = vec![MultiPoly::one()];
    let mut a0 = MultiPoly::zero();
    let mut a1 = MultiPoly::zero();
    for (k, coeff) in p.coefficients_in(Var::Y).into_iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let half = k / 2;
        while powers.len() <= half {
            let next = powers.last().unwrap() * quartic;
            powers.push(next);
        }
        let t = &coeff * &powers[half];
        if k % 2 == 0 {
            a0 = &a0 + &t;
        } else {
            a1 = &a1 + &t;
        }
    }
    (a0, a1)
}

/// Canonical `a0(c) + a1(c) y` form of a rational function in `c, y`.
pub fn reduce_mod_curve(e: &RationalFunction, curve: CurveId) -> Result<CurveReducedExpr> {
    let (n0, n1) = reduce_poly(e.num(), curve);
    let (d0, d1) = reduce_poly(e.den(), curve);
    let num = CurveReducedExpr::new(n0.into(), n1.into(), curve);
    let den = CurveReducedExpr::new(d0.into(), d1.into(), curve);
    num.div(&den)
}

impl fmt::Display for CurveReducedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a0.is_zero(), self.a1.is_zero()) {
            (_, true) => write!(f, "{}", self.a0),
            (true, false) => write!(f, "({})*y", self.a1),
            (false, false) => write!(f, "{} + ({})*y", self.a0, self.a1),
        }
    }
}

impl fmt::Debug for CurveReducedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveReducedExpr[{:?}]({self})", self.curve)
    }
}

impl Serialize for CurveReducedExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
