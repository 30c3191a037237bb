//! The nine coefficient formulas `E_ij(b, c)`, the denominator guard, and
//! the biquadratic identity tying `E_11`, `E_01` and `E_10` together.
//!
//! Each formula is stored in factored form, a scalar times a product of
//! integer powers of small polynomials, exactly as the factors are printed.
//! Numeric evaluation multiplies factor values; the symbolic form multiplies
//! the factors out into a [`RationalFunction`]. The two routes are checked
//! against each other in the tests.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{poly, Assignment, MultiPoly, Rational, RationalFunction, Var};

/// Length of the space diagonal. The formulas are normalized to 1.
pub const SPACE_DIAGONAL: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamPoint {
    pub b: Rational,
    pub c: Rational,
}

impl ParamPoint {
    pub fn new(b: Rational, c: Rational) -> Self {
        ParamPoint { b, c }
    }

    pub fn from_ints(b: i64, c: i64) -> Self {
        Self::new(Rational::from_int(b), Rational::from_int(c))
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::new()
            .with(Var::B, self.b.clone())
            .with(Var::C, self.c.clone())
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(b, c) = ({}, {})", self.b, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coeff {
    E10,
    E20,
    E30,
    E01,
    E02,
    E03,
    E11,
    E21,
    E12,
}

impl Coeff {
    pub const ALL: [Coeff; 9] = [
        Coeff::E10,
        Coeff::E20,
        Coeff::E30,
        Coeff::E01,
        Coeff::E02,
        Coeff::E03,
        Coeff::E11,
        Coeff::E21,
        Coeff::E12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coeff::E10 => "E10",
            Coeff::E20 => "E20",
            Coeff::E30 => "E30",
            Coeff::E01 => "E01",
            Coeff::E02 => "E02",
            Coeff::E03 => "E03",
            Coeff::E11 => "E11",
            Coeff::E21 => "E21",
            Coeff::E12 => "E12",
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The nine coefficients, numeric (`T = Rational`) or symbolic
/// (`T = RationalFunction`).
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientSet<T> {
    pub E10: T,
    pub E20: T,
    pub E30: T,
    pub E01: T,
    pub E02: T,
    pub E03: T,
    pub E11: T,
    pub E21: T,
    pub E12: T,
}

impl<T> CoefficientSet<T> {
    pub fn get(&self, which: Coeff) -> &T {
        match which {
            Coeff::E10 => &self.E10,
            Coeff::E20 => &self.E20,
            Coeff::E30 => &self.E30,
            Coeff::E01 => &self.E01,
            Coeff::E02 => &self.E02,
            Coeff::E03 => &self.E03,
            Coeff::E11 => &self.E11,
            Coeff::E21 => &self.E21,
            Coeff::E12 => &self.E12,
        }
    }

    pub fn try_from_fn<F>(mut f: F) -> Result<Self>
    where
        F: FnMut(Coeff) -> Result<T>,
    {
        Ok(CoefficientSet {
            E10: f(Coeff::E10)?,
            E20: f(Coeff::E20)?,
            E30: f(Coeff::E30)?,
            E01: f(Coeff::E01)?,
            E02: f(Coeff::E02)?,
            E03: f(Coeff::E03)?,
            E11: f(Coeff::E11)?,
            E21: f(Coeff::E21)?,
            E12: f(Coeff::E12)?,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coeff, &T)> {
        Coeff::ALL.into_iter().map(move |k| (k, self.get(k)))
    }
}

/// `scalar * Π factor^exponent`
#[derive(Debug, Clone)]
pub struct FactoredFormula {
    pub scalar: Rational,
    pub factors: Vec<(MultiPoly, i32)>,
}

impl FactoredFormula {
    pub fn eval(&self, at: &Assignment) -> Result<Rational> {
        let mut acc = self.scalar.clone();
        for (f, e) in &self.factors {
            let v = f.eval(at)?;
            if *e < 0 && v.is_zero() {
                return Err(Error::DegenerateParameters);
            }
            acc = acc * v.pow(*e);
        }
        Ok(acc)
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let mut num = MultiPoly::constant(self.scalar.clone());
        let mut den = MultiPoly::one();
        for (f, e) in &self.factors {
            if *e >= 0 {
                num = &num * &f.pow(*e as u32);
            } else {
                den = &den * &f.pow(e.unsigned_abs());
            }
        }
        RationalFunction::new(num, den).expect("denominator factors are nonzero")
    }
}

/// The four denominator factors whose product must not vanish.
pub struct GuardFactors {
    pub g: MultiPoly,
    pub f1: MultiPoly,
    pub f2: MultiPoly,
    pub h: MultiPoly,
}

pub fn guard_factors() -> &'static GuardFactors {
    static CELL: OnceLock<GuardFactors> = OnceLock::new();
    CELL.get_or_init(|| GuardFactors {
        g: poly("b^2*c^4 - 6*b^2*c^3 + 13*b^2*c^2 - 12*b^2*c + 4*b^2 + c^2"),
        f1: poly("b*c - 1 - b"),
        f2: poly("b*c - c - 2*b"),
        h: poly("b^2*c^2 + 2*b^2 - 3*b^2*c + c - b*c^2 + 2*b"),
    })
}

/// Values of the four guard factors at `p`, in the order g, f1, f2, h.
pub fn guard_values(p: &ParamPoint) -> [Rational; 4] {
    let at = p.assignment();
    let gf = guard_factors();
    [&gf.g, &gf.f1, &gf.f2, &gf.h].map(|f| f.eval(&at).expect("b, c assigned"))
}

pub fn guard_nonvanishing(p: &ParamPoint) -> bool {
    guard_values(p).iter().all(|v| !v.is_zero())
}

/// Second factor of the `E_03` numerator.
pub fn e03_factor_a() -> &'static MultiPoly {
    static CELL: OnceLock<MultiPoly> = OnceLock::new();
    CELL.get_or_init(|| {
        poly("b^2*c^4 - 5*b^2*c^3 + 10*b^2*c^2 - 10*b^2*c + 4*b^2 + 2*b*c + 2*c^2 - b*c^3")
    })
}

/// Third factor of the `E_03` numerator.
pub fn e03_factor_b() -> &'static MultiPoly {
    static CELL: OnceLock<MultiPoly> = OnceLock::new();
    CELL.get_or_init(|| {
        poly(
            "2*b^2*c^4 - 12*b^2*c^3 + 26*b^2*c^2 - 24*b^2*c + 8*b^2 - c^4*b + 3*b*c^3 \
             - 6*b*c + 4*b + c^3 - 2*c^2 + 2*c",
        )
    })
}

fn build_formulas() -> Vec<FactoredFormula> {
    let gf = guard_factors();
    let (g, f1, f2, h) = (&gf.g, &gf.f1, &gf.f2, &gf.h);
    let half = Rational::new(1, 2);
    let f2_alt = poly("-c + b*c - 2*b");
    let ff = |scalar: Rational, factors: Vec<(MultiPoly, i32)>| FactoredFormula { scalar, factors };
    let minus_one = Rational::from_int(-1);

    let e10 = ff(
        minus_one.clone(),
        vec![(poly("b^2*c^2 + 2*b^2 - 3*b^2*c - c"), 1), (h.clone(), -1)],
    );
    let e20 = ff(
        half.clone(),
        vec![
            (poly("b"), 1),
            (poly("b*c^2 - 2*c - 2*b"), 1),
            (poly("2*b*c^2 - c^2 - 6*b*c + 2 + 4*b"), 1),
            (f1.clone(), -2),
            (f2.clone(), -2),
        ],
    );
    let e30 = ff(
        Rational::one(),
        vec![
            (poly("c"), 1),
            (poly("b^2"), 1),
            (poly("1 - c"), 1),
            (poly("c - 2"), 1),
            (poly("b*c^2 - 4*b*c + 2 + 4*b"), 1),
            (poly("2*b*c^2 - c^2 - 4*b*c + 2*b"), 1),
            (g.clone(), -1),
            (f1.clone(), -2),
            (f2_alt.clone(), -2),
        ],
    );
    let e01 = ff(
        minus_one.clone(),
        vec![(poly("b"), 1), (poly("c^2 + 2 - 2*c"), 1), (h.clone(), -1)],
    );
    let e02 = ff(
        half.clone(),
        vec![
            (
                poly(
                    "28*b^2*c^2 - 16*b^2*c - 2*c^2 - 4*b^2 - b^2*c^4 + 4*b^3*c^4 - 12*b^3*c^3 \
                     + 4*b*c^3 + 24*b^3*c - 8*b*c - 2*b^4*c^4 + 12*b^4*c^3 - 26*b^4*c^2 - 8*b^2*c^3 \
                     + 24*b^4*c - 16*b^3 - 8*b^4",
                ),
                1,
            ),
            (f1.clone(), -2),
            (f2.clone(), -2),
        ],
    );
    // The printed formula opens an extra parenthesis before its inverse
    // factor group; it is read as the same single inverse factor as in E30.
    let e03 = ff(
        half.clone(),
        vec![
            (poly("b"), 1),
            (e03_factor_a().clone(), 1),
            (e03_factor_b().clone(), 1),
            (g.clone(), -1),
            (f1.clone(), -2),
            (f2_alt, -2),
        ],
    );
    let e11 = ff(
        minus_one,
        vec![(poly("b"), 1), (poly("c^2 + 2 - 4*c"), 1), (h.clone(), -1)],
    );
    let e21 = ff(
        half,
        vec![
            (poly("b"), 1),
            (
                poly(
                    "5*c^6*b - 2*c^6*b^2 + 52*c^5*b^2 - 16*c^5*b - 2*c^7*b^2 + 2*b^4*c^8 \
                     + 142*b^4*c^6 - 26*b^4*c^7 - 426*b^4*c^5 - 61*b^3*c^6 + 100*b^3*c^5 + 14*c^7*b^3 \
                     - c^8*b^3 - 20*b*c^2 - 8*b^2*c^2 - 16*b^2*c - 128*b^2*c^4 - 200*b^3*c^3 \
                     + 244*b^3*c^2 + 32*b*c^3 - 112*b^3*c + 768*b^4*c^4 - 852*b^4*c^3 + 568*b^4*c^2 \
                     + 104*b^2*c^3 - 208*b^4*c + 8*c^4 - 4*c^3 + 16*b^3 + 32*b^4 - 2*c^5",
                ),
                1,
            ),
            (g.clone(), -1),
            (f1.clone(), -2),
            (f2.clone(), -2),
        ],
    );
    let e12 = ff(
        Rational::one(),
        vec![
            (
                poly(
                    "16*b^6 + 32*b^5 - 6*c^5*b^2 + 2*c^5*b - 62*b^5*c^6 + 62*b^6*c^6 \
                     - 180*b^6*c^5 + 18*b^5*c^7 - 12*b^6*c^7 - 2*b^5*c^8 + b^6*c^8 + 248*b^5*c^2 \
                     + 248*b^6*c^2 - 96*b^6*c + 321*b^6*c^4 - 180*b^5*c^3 - 144*b^5*c - 360*b^6*c^3 \
                     + b^4*c^8 + 8*b^4*c^6 - 6*b^4*c^7 + 18*b^4*c^5 + 7*b^3*c^6 + 90*b^5*c^5 \
                     - 14*b^3*c^5 - c^7*b^3 + 17*b^2*c^4 + 28*b^3*c^3 - 28*b^3*c^2 - 4*b*c^3 \
                     + 8*b^3*c - 57*b^4*c^4 + 36*b^4*c^3 + 32*b^4*c^2 - 12*b^2*c^3 - 48*b^4*c \
                     - c^4 + 16*b^4",
                ),
                1,
            ),
            (g.clone(), -1),
            (f1.clone(), -2),
            (f2.clone(), -2),
        ],
    );
    // order follows Coeff::ALL
    vec![e10, e20, e30, e01, e02, e03, e11, e21, e12]
}

pub fn formula(which: Coeff) -> &'static FactoredFormula {
    static CELL: OnceLock<Vec<FactoredFormula>> = OnceLock::new();
    let all = CELL.get_or_init(build_formulas);
    let idx = Coeff::ALL.iter().position(|&k| k == which).unwrap();
    &all[idx]
}

/// Exact numeric coefficients at `p`.
pub fn coefficients(p: &ParamPoint) -> Result<CoefficientSet<Rational>> {
    if !guard_nonvanishing(p) {
        return Err(Error::DegenerateParameters);
    }
    let at = p.assignment();
    CoefficientSet::try_from_fn(|k| formula(k).eval(&at))
}

/// The nine coefficients as rational functions of `b, c` (computed once).
pub fn symbolic_coefficients() -> &'static CoefficientSet<RationalFunction> {
    static CELL: OnceLock<CoefficientSet<RationalFunction>> = OnceLock::new();
    CELL.get_or_init(|| {
        CoefficientSet::try_from_fn(|k| Ok(formula(k).to_rational_function()))
            .expect("infallible")
    })
}

/// `(2 E11)^2 + (E01^2 + L^2 - E10^2)^2 - 8 E01^2 L^2` with `L = 1`.
pub fn biquadratic_residual(cs: &CoefficientSet<Rational>) -> Rational {
    let l2 = Rational::from_int(SPACE_DIAGONAL * SPACE_DIAGONAL);
    let two = Rational::from_int(2);
    let e01_sq = &cs.E01 * &cs.E01;
    let inner = &e01_sq + &l2 - &cs.E10 * &cs.E10;
    (&two * &cs.E11).pow(2) + &inner * &inner - Rational::from_int(8) * &e01_sq * &l2
}

/// The same residual over `Q(b, c)`.
pub fn biquadratic_residual_symbolic() -> RationalFunction {
    let cs = symbolic_coefficients();
    let l2 = RationalFunction::constant(Rational::from_int(SPACE_DIAGONAL * SPACE_DIAGONAL));
    let e01_sq = cs.E01.mul(&cs.E01);
    let inner = e01_sq.sub(&cs.E10.mul(&cs.E10)).add(&l2);
    let two_e11 = cs.E11.scale(&Rational::from_int(2));
    two_e11
        .mul(&two_e11)
        .add(&inner.mul(&inner))
        .sub(&e01_sq.mul(&l2).scale(&Rational::from_int(8)))
}

pub fn verify_biquadratic_identity() -> bool {
    biquadratic_residual_symbolic().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn guard_examples() {
        let unit = ParamPoint::from_ints(1, 1);
        assert_eq!(guard_values(&unit), [r("1"), r("-1"), r("-2"), r("2")]);
        assert!(guard_nonvanishing(&unit));
        assert!(!guard_nonvanishing(&ParamPoint::from_ints(1, 2)));
        assert!(!guard_nonvanishing(&ParamPoint::from_ints(0, 0)));
        assert_eq!(guard_values(&ParamPoint::from_ints(0, 0))[3], Rational::zero());
    }

    #[test]
    fn coefficients_at_unit_point() {
        let cs = coefficients(&ParamPoint::from_ints(1, 1)).unwrap();
        assert_eq!(cs.E11, r("1/2"));
        assert_eq!(cs.E01, r("-1/2"));
        assert_eq!(cs.E10, r("1/2"));
        assert_eq!(cs.E30, r("0"));
        assert_eq!(cs.E20, r("-3/8"));
        // (1/2) * (-3) * 1 / ((-1)^2 (-2)^2)
        assert_eq!(cs.E20, r("1/2") * r("-3") / (r("1") * r("4")));
    }

    #[test]
    fn degenerate_point_is_an_error() {
        assert_eq!(
            coefficients(&ParamPoint::from_ints(1, 2)),
            Err(Error::DegenerateParameters)
        );
    }

    #[test]
    fn symbolic_e11_matches_printed_form() {
        let e11 = &symbolic_coefficients().E11;
        let expect = RationalFunction::new(
            poly("-b*(c^2 + 2 - 4*c)"),
            poly("b^2*c^2 + 2*b^2 - 3*b^2*c + c - b*c^2 + 2*b"),
        )
        .unwrap();
        assert_eq!(e11, &expect);
    }

    #[test]
    fn e03_symbolic_agrees_with_numeric() {
        let p = ParamPoint::from_ints(1, 1);
        let numeric = coefficients(&p).unwrap();
        let sym = symbolic_coefficients();
        for (k, v) in sym.iter() {
            assert_eq!(&v.eval(&p.assignment()).unwrap(), numeric.get(k), "{k}");
        }
    }

    #[test]
    fn e10_is_one_when_b_vanishes() {
        for c in [1, 3, -5, 7] {
            let cs = coefficients(&ParamPoint::from_ints(0, c)).unwrap();
            assert_eq!(cs.E10, Rational::one());
        }
        let e10 = symbolic_coefficients().E10.clone();
        let at_b0 = e10
            .substitute(Var::B, &RationalFunction::zero())
            .unwrap();
        assert_eq!(at_b0, RationalFunction::one());
    }

    #[test]
    fn identity_numeric_spot_checks() {
        let cs = coefficients(&ParamPoint::from_ints(1, 1)).unwrap();
        // (2 * 1/2)^2 + (1/4 + 1 - 1/4)^2 - 8 * 1/4 = 0
        assert_eq!(biquadratic_residual(&cs), Rational::zero());
        let p = ParamPoint::from_ints(3, 5);
        assert!(guard_nonvanishing(&p));
        assert_eq!(biquadratic_residual(&coefficients(&p).unwrap()), Rational::zero());
    }

    #[test]
    fn identity_holds_symbolically() {
        assert!(verify_biquadratic_identity());
    }

    #[test]
    fn identity_detects_a_perturbed_coefficient() {
        let mut cs = coefficients(&ParamPoint::from_ints(3, 5)).unwrap();
        cs.E11 = &cs.E11 + &Rational::new(1, 1000);
        assert!(!biquadratic_residual(&cs).is_zero());
    }

    #[test]
    fn e30_vanishes_on_its_linear_factors() {
        for c in [0, 1, 2] {
            for b in [-3, -1, 1, 2, 5] {
                let p = ParamPoint::from_ints(b, c);
                if guard_nonvanishing(&p) {
                    assert!(coefficients(&p).unwrap().E30.is_zero(), "{p}");
                }
            }
        }
    }

    #[test]
    fn inverse_factors_are_guard_factors() {
        let gf = guard_factors();
        let allowed = [&gf.g, &gf.f1, &gf.f2, &gf.h];
        for k in Coeff::ALL {
            for (f, e) in &formula(k).factors {
                if *e < 0 {
                    let ok = allowed.iter().any(|a| *a == f || **a == -f);
                    assert!(ok, "{k}: {f}");
                }
            }
        }
        // h is the product of the two linear-in-c factors
        assert_eq!(&gf.f1 * &gf.f2, gf.h);
    }
}
