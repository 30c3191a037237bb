//! Dense univariate polynomials over Q and the root/discriminant operations
//! built on them.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{MultiPoly, Var};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Ascending coefficients, no trailing zeros. The zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(r: Rational) -> Self {
        Self::new(vec![r])
    }

    /// `x - root`
    pub fn linear_factor(root: &Rational) -> Self {
        Self::new(vec![-root, Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn from_multi(p: &MultiPoly, v: Var) -> Result<Self> {
        Ok(Self::new(p.to_dense(v)?))
    }

    pub fn to_multi(&self, v: Var) -> MultiPoly {
        MultiPoly::from_dense(v, &self.coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            Some(lc) => self.scale(&lc.recip().expect("nonzero leading coefficient")),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_int(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lc = divisor.lc().unwrap().recip().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(dn) = self.degree().filter(|&dn| dn >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![Rational::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let q = &rem[k + dd] * &inv_lc;
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&q * d);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `self / gcd(self, self')`.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_exact(&g).expect("gcd divides")
    }

    /// Synthetic division by `x - root`; fails unless the remainder is zero.
    pub fn deflate(&self, root: &Rational) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut acc = Rational::zero();
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        for c in self.coeffs.iter().rev() {
            acc = acc * root + c;
            out.push(acc.clone());
        }
        let remainder = out.pop().expect("nonempty");
        if !remainder.is_zero() {
            return Err(Error::NotARoot);
        }
        out.reverse();
        Ok(Self::new(out))
    }

    /// Scalar multiple with coprime integer coefficients and positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() {
            for c in &mut ints {
                *c /= &content;
            }
        }
        if ints.last().is_some_and(|c| c.is_negative()) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        ints
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({})", self.to_multi(Var::X))
    }
}

/// Yun's square-free factorization: `p = lc * Π f_i^i` with monic,
/// pairwise coprime, square-free `f_i` (`factors[i - 1] = f_i`).
pub fn squarefree_factorization(p: &UniPoly) -> (Rational, Vec<UniPoly>) {
    let Some(lc) = p.lc().cloned() else {
        return (Rational::zero(), Vec::new());
    };
    let p = p.monic();
    let mut factors = Vec::new();
    if p.degree() == Some(0) {
        return (lc, factors);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let mut c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative());
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative());
        factors.push(a);
    }
    (lc, factors)
}

/// `Res(a, b)` by the Euclidean recurrence
/// `Res(a, b) = (-1)^(deg a * deg b) * lc(b)^(deg a - deg r) * Res(b, r)`, `r = a mod b`.
pub fn resultant(a: &UniPoly, b: &UniPoly) -> Rational {
    let (Some(mut m), Some(mut n)) = (a.degree(), b.degree()) else {
        return Rational::zero();
    };
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut acc = Rational::one();
    loop {
        if n == 0 {
            return acc * b.lc().unwrap().pow(m as i32);
        }
        let r = a.div_rem(&b).1;
        let Some(k) = r.degree() else {
            return Rational::zero();
        };
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc = acc * b.lc().unwrap().pow((m - k) as i32);
        a = b;
        b = r;
        m = n;
        n = k;
    }
}

/// Discriminant `(-1)^(n(n-1)/2) Res(p, p') / lc(p)`.
pub fn discriminant(p: &UniPoly) -> Result<Rational> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    let res = resultant(p, &p.derivative());
    let sign = if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        Rational::from_int(-1)
    } else {
        Rational::one()
    };
    Ok(sign * res / p.lc().unwrap())
}

/// Discriminant of a quartic given as a univariate [`MultiPoly`].
pub fn quartic_discriminant(p: &MultiPoly) -> Result<Rational> {
    let v = p.univariate_var()?;
    let u = UniPoly::from_multi(p, v)?;
    match u.degree() {
        Some(4) => discriminant(&u),
        d => Err(Error::WrongDegree {
            expected: 4,
            found: d.unwrap_or(0),
        }),
    }
}

/// All rational roots of a univariate polynomial with their multiplicities,
/// in ascending order.
pub fn rational_roots(p: &MultiPoly) -> Result<Vec<(Rational, usize)>> {
    let v = p.univariate_var()?;
    let u = UniPoly::from_multi(p, v)?;
    if u.degree() == Some(0) {
        return Ok(Vec::new());
    }
    Ok(rational_roots_uni(&u))
}

/// `p = (var - root) * q`; returns `q`.
pub fn deflate(p: &MultiPoly, root: &Rational) -> Result<MultiPoly> {
    let v = p.univariate_var()?;
    Ok(UniPoly::from_multi(p, v)?.deflate(root)?.to_multi(v))
}

pub fn rational_roots_uni(p: &UniPoly) -> Vec<(Rational, usize)> {
    let mut roots = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let f = UniPoly::new(
        p.primitive_integer()
            .into_iter()
            .map(Rational::from_bigint)
            .collect(),
    );
    // Roots of the square-free part s with lead L are z / L for the integer
    // roots z of the monic integer polynomial g(z) = L^(n-1) s(z / L).
    let s = UniPoly::new(
        f.squarefree_part()
            .primitive_integer()
            .into_iter()
            .map(Rational::from_bigint)
            .collect(),
    );
    let lead = s.lc().expect("nonzero").numer().clone();
    let n = s.degree().expect("nonzero");
    let g: Vec<BigInt> = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.numer() * num_traits::pow(lead.clone(), n - i) / &lead)
        .collect();

    for z in integer_roots_monic(&g) {
        let r = Rational::checked_new(z, lead.clone()).expect("lead > 0");
        debug_assert!(f.eval(&r).is_zero());
        let mut mult = 0;
        let mut q = f.clone();
        while let Ok(next) = q.deflate(&r) {
            mult += 1;
            q = next;
        }
        roots.push((r, mult));
    }
    roots.sort();
    roots
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Positive multiple with integer coefficients; signs are unchanged.
fn positive_integer_multiple(p: &UniPoly) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Sturm sequence of a square-free polynomial.
fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].degree().unwrap_or(0) == 0 {
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&Rational::from_int(-1)));
    }
    seq
}

fn sign_changes(seq: &[Vec<BigInt>], x: &BigInt) -> usize {
    let signs: Vec<Sign> = seq
        .iter()
        .map(|q| eval_int(q, x).sign())
        .filter(|&s| s != Sign::NoSign)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Integer roots of a square-free monic integer polynomial (ascending
/// coefficients), by Sturm counting on integer intervals `(lo, hi]`.
fn integer_roots_monic(g: &[BigInt]) -> Vec<BigInt> {
    let bound = BigInt::one() + g.iter().map(|c| c.abs()).max().unwrap_or_default();
    let gq = UniPoly::new(g.iter().cloned().map(Rational::from_bigint).collect());
    let seq: Vec<Vec<BigInt>> = sturm_sequence(&gq)
        .iter()
        .map(positive_integer_multiple)
        .collect();
    let lo0 = -&bound;
    let mut out = Vec::new();
    let mut stack = vec![(lo0.clone(), sign_changes(&seq, &lo0), bound.clone(), sign_changes(&seq, &bound))];
    while let Some((lo, vlo, hi, vhi)) = stack.pop() {
        if vlo == vhi {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if eval_int(g, &hi).is_zero() {
                out.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let vmid = sign_changes(&seq, &mid);
        stack.push((lo, vlo, mid.clone(), vmid));
        stack.push((mid, vmid, hi, vhi));
    }
    out.sort();
    out
}
