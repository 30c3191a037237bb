//! Quotients of sparse polynomials.
//!
//! Univariate rational functions are kept fully reduced (gcd cancelled,
//! monic denominator). Multivariate ones are only content-normalized, with
//! exact-division cancellation where it is cheap to detect, so equality is
//! always decided by cross-multiplication.

use std::fmt;

use serde::{Serialize, Serializer};

use super::poly::{Assignment, MultiPoly, Var};
use super::rational::Rational;
use super::univariate::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFunction {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(r: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(r))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        vs.extend(self.den.variables());
        vs.sort();
        vs.dedup();
        vs
    }

    fn canonical(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut vars = num.variables();
        vars.extend(den.variables());
        vars.sort();
        vars.dedup();
        let (num, den) = match vars.as_slice() {
            [v] => {
                let un = UniPoly::from_multi(&num, *v).expect("univariate");
                let ud = UniPoly::from_multi(&den, *v).expect("univariate");
                let g = un.gcd(&ud);
                let (un, ud) = if g.degree().unwrap_or(0) > 0 {
                    (un.div_exact(&g).unwrap(), ud.div_exact(&g).unwrap())
                } else {
                    (un, ud)
                };
                (un.to_multi(*v), ud.to_multi(*v))
            }
            [] => (num, den),
            _ => match num.div_exact(&den) {
                Some(q) if den.as_constant().is_none() => (q, MultiPoly::one()),
                _ => (num, den),
            },
        };
        let lc = den.leading_coefficient().expect("nonzero").recip().unwrap();
        RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::canonical(&self.num + &other.num, self.den.clone());
        }
        if other.den.as_constant().is_none() {
            if let Some(k) = self.den.div_exact(&other.den) {
                return Self::canonical(&self.num + &(&other.num * &k), self.den.clone());
            }
        }
        if self.den.as_constant().is_none() {
            if let Some(k) = other.den.div_exact(&self.den) {
                return Self::canonical(&(&self.num * &k) + &other.num, other.den.clone());
            }
        }
        Self::canonical(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::canonical(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::canonical(self.num.scale(k), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Self::canonical(base.num.pow(k), base.den.pow(k)))
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<Rational> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    /// Replaces `v` by `value`, clearing the inner denominators by
    /// homogenization.
    pub fn substitute(&self, v: Var, value: &RationalFunction) -> Result<Self> {
        let (hn, dn) = homogenize(&self.num, v, value);
        let (hd, dd) = homogenize(&self.den, v, value);
        let q = &value.den;
        let (num, den) = if dn >= dd {
            (hn, &hd * &q.pow((dn - dd) as u32))
        } else {
            (&hn * &q.pow((dd - dn) as u32), hd)
        };
        if den.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        Ok(Self::canonical(num, den))
    }
}

/// `q^n * f(p/q)` where `value = p/q` and `n = deg_v f`.
fn homogenize(f: &MultiPoly, v: Var, value: &RationalFunction) -> (MultiPoly, usize) {
    let coeffs = f.coefficients_in(v);
    let n = coeffs.len().saturating_sub(1);
    let (p, q) = (&value.num, &value.den);
    let mut acc = MultiPoly::zero();
    let mut q_pow = MultiPoly::one();
    // Horner from the top: acc = acc * p + f_k * q^(n-k)
    for (i, fk) in coeffs.iter().rev().enumerate() {
        if i > 0 {
            q_pow = &q_pow * q;
        }
        acc = &(&acc * p) + &(fk * &q_pow);
    }
    (acc, n)
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl From<MultiPoly> for RationalFunction {
    fn from(p: MultiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|d| d.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::poly::poly;

    fn rf(n: &str, d: &str) -> RationalFunction {
        RationalFunction::new(poly(n), poly(d)).unwrap()
    }

    #[test]
    fn univariate_is_reduced() {
        let f = rf("c^2 - 1", "2*c - 2");
        assert_eq!(f.num(), &poly("1/2*c + 1/2"));
        assert_eq!(f.den(), &MultiPoly::one());
        assert_eq!(f.to_string(), "1/2*c + 1/2");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(poly("b"), MultiPoly::zero()).unwrap_err(),
            Error::ZeroDenominator
        );
        assert!(RationalFunction::zero().recip().is_err());
    }

    #[test]
    fn multivariate_arithmetic() {
        let h = "b^2*c^2 + 2*b^2 - 3*b^2*c + c - b*c^2 + 2*b";
        let a = rf("b*c", h);
        let b = rf("1", "b*c - 1 - b");
        let sum = a.add(&b);
        // (bc - 1 - b) divides h, so the sum stays over h
        assert_eq!(sum.den(), &poly(h));
        assert_eq!(sum, rf("b*c + b*c - c - 2*b", h));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.mul(&a.recip().unwrap()), RationalFunction::one());
    }

    #[test]
    fn substitution_homogenizes() {
        let f = rf("b^2 + c", "b - 1");
        let value = rf("c", "c + 1");
        let got = f.substitute(Var::B, &value).unwrap();
        // (c^2/(c+1)^2 + c) / (c/(c+1) - 1) = -(c^2 + c(c+1)^2)/(c+1)
        assert_eq!(got, rf("-(c^2 + c*(c+1)^2)", "c + 1"));
        let at = Assignment::new().with(Var::C, Rational::new(3, 5));
        let direct = {
            let bv = value.eval(&at).unwrap();
            f.eval(&at.clone().with(Var::B, bv)).unwrap()
        };
        assert_eq!(got.eval(&at).unwrap(), direct);
    }

    #[test]
    fn eval_reports_pole() {
        let f = rf("1", "c - 2");
        let at = Assignment::new().with(Var::C, Rational::from_int(2));
        assert_eq!(f.eval(&at), Err(Error::ZeroDenominator));
    }
}
