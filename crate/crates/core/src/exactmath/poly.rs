//! Sparse multivariate polynomials over Q.
//!
//! The variable universe is fixed to the five indeterminates the cuboid
//! formulas use, so any two polynomials are always compatible. Terms live in
//! a `BTreeMap` keyed by exponent vector under graded lexicographic order,
//! which makes equality structural and printing deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::rational::Rational;
use crate::error::{Error, Result};

pub const NUM_VARS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    B,
    C,
    X,
    D,
    Y,
}

impl Var {
    pub const ALL: [Var; NUM_VARS] = [Var::B, Var::C, Var::X, Var::D, Var::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Var::B => 'b',
            Var::C => 'c',
            Var::X => 'x',
            Var::D => 'd',
            Var::Y => 'y',
        }
    }

    pub fn from_name(ch: char) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == ch)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Exponent vector indexed by [`Var::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial([u16; NUM_VARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NUM_VARS]);

    pub fn var(v: Var, exp: u16) -> Self {
        let mut e = [0; NUM_VARS];
        e[v.index()] = exp;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; NUM_VARS]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(e))
    }

    fn with_exp(&self, v: Var, exp: u16) -> Monomial {
        let mut e = self.0;
        e[v.index()] = exp;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Values for some subset of the variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment([Option<Rational>; NUM_VARS]);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: Rational) -> Self {
        self.0[v.index()] = Some(value);
        self
    }

    pub fn get(&self, v: Var) -> Option<&Rational> {
        self.0[v.index()].as_ref()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        Self::term(r, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(coef: Rational, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(mono, coef);
        }
        MultiPoly { terms }
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_dense(v: Var, coeffs: &[Rational]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial::var(v, i as u16), c.clone()))
            .collect();
        MultiPoly { terms }
    }

    /// Parses expressions such as `-7*c^4 + 40*c^3 - (b*c - 1)^2 / 2`.
    pub fn parse(s: &str) -> Result<Self> {
        Parser::new(s).parse_all()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Variables that occur with a positive exponent, in universe order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|&v| self.terms.keys().any(|m| m.exp(v) > 0))
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn degree_in(&self, v: Var) -> Option<usize> {
        self.terms.keys().map(|m| usize::from(m.exp(v))).max()
    }

    /// Leading term under graded lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    fn add_term(&mut self, mono: Monomial, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.with_exp(v, e - 1), c * Rational::from_int(i64::from(e)));
            }
        }
        out
    }

    /// Coefficients with respect to `v`: `self = Σ coeffs[k] * v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let Some(deg) = self.degree_in(v) else {
            return Vec::new();
        };
        let mut out = vec![MultiPoly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let k = usize::from(m.exp(v));
            out[k].terms.insert(m.with_exp(v, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(v: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero();
        for (k, p) in coeffs.iter().enumerate() {
            let shift = Monomial::var(v, k as u16);
            for (m, c) in &p.terms {
                out.add_term(m.mul(&shift), c.clone());
            }
        }
        out
    }

    /// Dense ascending coefficients in `v`. Fails if any other variable occurs.
    pub fn to_dense(&self, v: Var) -> Result<Vec<Rational>> {
        if self.variables().iter().any(|&w| w != v) {
            return Err(Error::NotUnivariate);
        }
        let deg = self.degree_in(v).unwrap_or(0);
        let mut out = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            out[usize::from(m.exp(v))] = c.clone();
        }
        Ok(out)
    }

    /// The single variable of a non-constant univariate polynomial.
    pub fn univariate_var(&self) -> Result<Var> {
        match self.variables().as_slice() {
            [v] => Ok(*v),
            [] if self.is_zero() => Err(Error::ZeroPolynomial),
            _ => Err(Error::NotUnivariate),
        }
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Rational> {
        let value = self.eval_terms(assignment)?;
        debug_assert_eq!(value, self.eval_horner(assignment)?);
        Ok(value)
    }

    fn eval_terms(&self, assignment: &Assignment) -> Result<Rational> {
        let mut vals: [Option<&Rational>; NUM_VARS] = [None; NUM_VARS];
        for v in self.variables() {
            vals[v.index()] = Some(assignment.get(v).ok_or(Error::MissingVariable(v))?);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &vals[i].expect("checked above").pow(i32::from(e));
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    fn eval_horner(&self, assignment: &Assignment) -> Result<Rational> {
        let Some(&v) = self.variables().first() else {
            return Ok(self.as_constant().expect("no variables"));
        };
        let x = assignment.get(v).ok_or(Error::MissingVariable(v))?;
        let mut acc = Rational::zero();
        for coeff in self.coefficients_in(v).iter().rev() {
            acc = acc * x + coeff.eval_horner(assignment)?;
        }
        Ok(acc)
    }

    /// Replaces `v` by `value` (any polynomial) via Horner's scheme in `v`.
    pub fn substitute(&self, v: Var, value: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for coeff in self.coefficients_in(v).iter().rev() {
            acc = &(&acc * value) + coeff;
        }
        acc
    }

    /// Replaces `v` by a constant.
    pub fn substitute_value(&self, v: Var, value: &Rational) -> MultiPoly {
        self.substitute(v, &MultiPoly::constant(value.clone()))
    }

    /// Sparse pseudo-remainder of `self` by `divisor` with respect to `v`.
    ///
    /// The result `r` satisfies `l^k * self = q * divisor + r` for the leading
    /// coefficient `l` of `divisor` in `v` and some `k >= 0`, with
    /// `deg_v r < deg_v divisor`.
    pub fn pseudo_remainder(&self, divisor: &MultiPoly, v: Var) -> Result<MultiPoly> {
        let dg = divisor.degree_in(v).ok_or(Error::ZeroPolynomial)?;
        let g = divisor.coefficients_in(v);
        let lc = &g[dg];
        let mut r = self.clone();
        while let Some(dr) = r.degree_in(v) {
            if dr < dg || r.is_zero() {
                break;
            }
            let lr = r.coefficients_in(v).swap_remove(dr);
            let shift = MultiPoly::term(Rational::one(), Monomial::var(v, (dr - dg) as u16));
            r = &(&r * lc) - &(&(&lr * &shift) * divisor);
        }
        Ok(r)
    }

    /// `self / divisor` when the division is exact.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (dm, dc) = divisor.leading_term()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut r = self.clone();
        let mut q = MultiPoly::zero();
        while let Some((rm, rc)) = r.leading_term() {
            let m = rm.div(&dm)?;
            let k = rc / &dc;
            let t = MultiPoly::term(k.clone(), m);
            r = &r - &(&t * divisor);
            q.add_term(m, k);
        }
        Some(q)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts = Vec::new();
            if !mag.is_one() || m.is_one() {
                parts.push(mag.to_string());
            }
            for v in Var::ALL {
                match m.exp(v) {
                    0 => {}
                    1 => parts.push(v.to_string()),
                    e => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for MultiPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MultiPoly::parse(s)
    }
}

impl From<Rational> for MultiPoly {
    fn from(r: Rational) -> Self {
        MultiPoly::constant(r)
    }
}

impl<'b> Add<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'b MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'b> Sub<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'b MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<'b> Mul<&'b MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'b MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &'a MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::ParsePoly(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, ch: char) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<MultiPoly> {
        let p = self.expr()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected character"));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let d = self
                    .unary()?
                    .as_constant()
                    .filter(|d| !d.is_zero())
                    .ok_or_else(|| self.err("divisor must be a nonzero constant"))?;
                acc = acc.scale(&d.recip()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = digits.parse().map_err(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(ch) if ch.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: Rational = digits.parse()?;
                Ok(MultiPoly::constant(n))
            }
            Some(ch) => match Var::from_name(ch) {
                Some(v) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(v))
                }
                None => Err(self.err("unknown symbol")),
            },
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a polynomial literal that is known to be well formed.
pub(crate) fn poly(s: &str) -> MultiPoly {
    MultiPoly::parse(s).unwrap_or_else(|e| panic!("bad polynomial literal: {e}"))
}
