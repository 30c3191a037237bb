//! Reducibility cases of the cuboid cubics.
//!
//! Cases 1 to 6 are explicit conditions on `(b, c)`. Cases 7 and 8 come from
//! the two affine curves on which `E_03` vanishes; each is birational to one
//! of the quartic models in [`crate::curves`]. This module holds those maps,
//! the catalog of exceptional solutions and points, and the symbolic proofs
//! that the maps are mutually inverse and that the cubics factor.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::coeffs::{coefficients, formula, Coeff, ParamPoint};
use crate::cuboidcheck::build_cubics;
use crate::curves::{on_curve, CurveId};
use crate::error::{Error, Result};
use crate::exactmath::{
    poly, rational_roots, reduce_mod_curve, CurveReducedExpr, MultiPoly, Rational,
    RationalFunction, UniPoly, Var,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Case7,
    Case8,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
        CaseId::Case6,
        CaseId::Case7,
        CaseId::Case8,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<CaseId> {
        CaseId::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn curve(self) -> Option<CurveId> {
        match self {
            CaseId::Case7 => Some(CurveId::Curve7),
            CaseId::Case8 => Some(CurveId::Curve8),
            _ => None,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Whether `p` satisfies the condition of case 1..6, side constraint included.
pub fn satisfies_case(p: &ParamPoint, case: CaseId) -> bool {
    let (b, c) = (&p.b, &p.c);
    let r = Rational::from_int;
    match case {
        CaseId::Case1 => b.is_zero() && !c.is_zero(),
        CaseId::Case2 => c.is_zero() && !(b * &(r(1) + b)).is_zero(),
        CaseId::Case3 => c == &r(1) && b != &r(-1),
        CaseId::Case4 => c == &r(2) && b != &r(1),
        CaseId::Case5 => b * &(c - &r(2)).pow(2) == r(-2) && c != &r(2),
        CaseId::Case6 => {
            r(2) * b * (c - &r(1)).pow(2) == c * c && !(c * &(c - &r(1))).is_zero()
        }
        CaseId::Case7 => residual_21(p).is_zero(),
        CaseId::Case8 => residual_22(p).is_zero(),
    }
}

/// Every case among 1..6 whose condition holds at `p`.
pub fn classify_cases(p: &ParamPoint) -> BTreeSet<CaseId> {
    CaseId::ALL[..6]
        .iter()
        .copied()
        .filter(|&k| satisfies_case(p, k))
        .collect()
}

/// The affine curves in `(b, c)` of cases 7 and 8.
pub fn variety_poly(curve: CurveId) -> &'static MultiPoly {
    static V7: OnceLock<MultiPoly> = OnceLock::new();
    static V8: OnceLock<MultiPoly> = OnceLock::new();
    match curve {
        CurveId::Curve7 => V7.get_or_init(|| {
            poly("b^2*c^4 - 5*b^2*c^3 + 10*b^2*c^2 - 10*b^2*c + 4*b^2 - b*c^3 + 2*b*c + 2*c^2")
        }),
        CurveId::Curve8 => V8.get_or_init(|| {
            poly(
                "2*b^2*c^4 - 12*b^2*c^3 + 26*b^2*c^2 - 24*b^2*c + 8*b^2 - b*c^4 + 3*b*c^3 \
                 - 6*b*c + 4*b + c^3 - 2*c^2 + 2*c",
            )
        }),
    }
}

pub fn residual_21(p: &ParamPoint) -> Rational {
    variety_poly(CurveId::Curve7).eval(&p.assignment()).expect("b, c assigned")
}

pub fn residual_22(p: &ParamPoint) -> Rational {
    variety_poly(CurveId::Curve8).eval(&p.assignment()).expect("b, c assigned")
}

/// A rational point `(y, c)` with `y^2 = P(c)` on the designated curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurvePoint {
    y: Rational,
    c: Rational,
    curve: CurveId,
}

impl CurvePoint {
    pub fn new(y: Rational, c: Rational, curve: CurveId) -> Result<Self> {
        if !on_curve(&y, &c, curve) {
            return Err(Error::NotOnCurve);
        }
        Ok(CurvePoint { y, c, curve })
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn curve(&self) -> CurveId {
        self.curve
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(y, c) = ({}, {}) on curve {}", self.y, self.c, self.curve)
    }
}

fn check_map_c(c: &Rational) -> Result<()> {
    if c == &Rational::one() || c == &Rational::from_int(2) {
        return Err(Error::ExceptionalC(c.to_string()));
    }
    Ok(())
}

/// The `b` of the solution produced by a curve point (`c` must avoid 1, 2).
pub fn b_from_point(pt: &CurvePoint) -> Result<Rational> {
    let (y, c) = (&pt.y, &pt.c);
    check_map_c(c)?;
    let r = Rational::from_int;
    let c1 = c - &r(1);
    let c2 = c - &r(2);
    let top = c * c - r(2) + y;
    Ok(match pt.curve {
        CurveId::Curve7 => c * &top / (r(2) * &c1 * &c2 * (&c1 * &c1 + r(1))),
        CurveId::Curve8 => top / (r(4) * &c2 * &c1),
    })
}

/// The `y` of the curve point produced by a solution of case 7 or 8.
pub fn y_from_solution(p: &ParamPoint, case: CaseId) -> Result<Rational> {
    let curve = case.curve().ok_or(Error::UnsupportedCase(case.number()))?;
    if !variety_poly(curve).eval(&p.assignment())?.is_zero() {
        return Err(Error::NotOnVariety);
    }
    let (b, c) = (&p.b, &p.c);
    let r = Rational::from_int;
    match curve {
        CurveId::Curve7 => {
            if c.is_zero() {
                return Err(Error::ZeroC);
            }
            let lead = r(2) * c.pow(4) - r(10) * c.pow(3) + r(20) * c.pow(2) - r(20) * c + r(8);
            Ok((lead * b - c.pow(3) + r(2) * c) / c)
        }
        CurveId::Curve8 => {
            let lead = r(4) * c.pow(2) - r(12) * c + r(8);
            Ok(lead * b - c.pow(2) + r(2))
        }
    }
}

/// `b` as a rational function of `(c, y)`.
pub fn b_map_expr(curve: CurveId) -> RationalFunction {
    let (num, den) = match curve {
        CurveId::Curve7 => ("c*(c^2 + y - 2)", "2*(c - 1)*(c - 2)*((c - 1)^2 + 1)"),
        CurveId::Curve8 => ("c^2 + y - 2", "4*(c - 2)*(c - 1)"),
    };
    RationalFunction::new(poly(num), poly(den)).expect("nonzero denominator")
}

/// `y` as a rational function of `(b, c)`.
pub fn y_map_expr(curve: CurveId) -> RationalFunction {
    let (num, den) = match curve {
        CurveId::Curve7 => ("(2*c^4 - 10*c^3 + 20*c^2 - 20*c + 8)*b - c^3 + 2*c", "c"),
        CurveId::Curve8 => ("(4*c^2 - 12*c + 8)*b - c^2 + 2", "1"),
    };
    RationalFunction::new(poly(num), poly(den)).expect("nonzero denominator")
}

/// Exceptional solutions of the two varieties and exceptional points of the
/// two curves.
#[derive(Debug, Clone, Serialize)]
pub struct ExceptionalCatalog {
    pub solutions7: Vec<ParamPoint>,
    pub solutions8: Vec<ParamPoint>,
    pub points7: Vec<CurvePoint>,
    pub points8: Vec<CurvePoint>,
}

pub fn catalog() -> &'static ExceptionalCatalog {
    static CELL: OnceLock<ExceptionalCatalog> = OnceLock::new();
    CELL.get_or_init(|| {
        let pp = |b: Rational, c: i64| ParamPoint::new(b, Rational::from_int(c));
        let cp = |y: i64, c: i64, curve| {
            CurvePoint::new(Rational::from_int(y), Rational::from_int(c), curve)
                .expect("catalog point on curve")
        };
        let r = Rational::from_int;
        ExceptionalCatalog {
            solutions7: vec![pp(r(0), 0), pp(r(-2), 1), pp(r(2), 2)],
            solutions8: vec![pp(r(0), 0), pp(Rational::new(-1, 2), 0)],
            points7: vec![
                cp(1, 1, CurveId::Curve7),
                cp(-2, 2, CurveId::Curve7),
                cp(-1, 1, CurveId::Curve7),
                cp(2, 2, CurveId::Curve7),
            ],
            // exceptional by convention: they map onto exceptional solutions
            points8: vec![cp(-2, 0, CurveId::Curve8), cp(2, 0, CurveId::Curve8)],
        }
    })
}

pub trait Exceptional {
    fn is_exceptional(&self) -> bool;
}

impl Exceptional for ParamPoint {
    fn is_exceptional(&self) -> bool {
        let cat = catalog();
        cat.solutions7.contains(self) || cat.solutions8.contains(self)
    }
}

impl Exceptional for CurvePoint {
    fn is_exceptional(&self) -> bool {
        let cat = catalog();
        match self.curve {
            CurveId::Curve7 => cat.points7.contains(self),
            CurveId::Curve8 => cat.points8.contains(self),
        }
    }
}

pub fn is_exceptional<T: Exceptional>(x: &T) -> bool {
    x.is_exceptional()
}

/// Outcome of one symbolic identity check in the quotient ring.
#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
    /// `expression - expected`, reduced; zero iff the claim holds.
    pub residual: CurveReducedExpr,
}

impl Claim {
    fn new(name: impl Into<String>, actual: &CurveReducedExpr, expected: &CurveReducedExpr) -> Self {
        let residual = actual.sub(expected);
        Claim {
            name: name.into(),
            holds: residual.is_zero(),
            residual,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub curve: CurveId,
    pub claims: Vec<Claim>,
    pub holds: bool,
}

/// Both composition identities for the birational pair of `curve`.
pub fn verify_bijection_symbolic(curve: CurveId) -> Result<BijectionReport> {
    check_bijection(curve, &b_map_expr(curve))
}

/// [`verify_bijection_symbolic`] for an arbitrary candidate `b(c, y)`.
pub fn check_bijection(curve: CurveId, b_expr: &RationalFunction) -> Result<BijectionReport> {
    let zero = CurveReducedExpr::constant(Rational::zero(), curve);
    let on_variety = RationalFunction::from_poly(variety_poly(curve).clone())
        .substitute(Var::B, b_expr)?;
    let on_variety = reduce_mod_curve(&on_variety, curve)?;
    let composed = y_map_expr(curve).substitute(Var::B, b_expr)?;
    let composed = reduce_mod_curve(&composed, curve)?;
    let claims = vec![
        Claim::new("variety(b(y, c), c) = 0", &on_variety, &zero),
        Claim::new("y(b(y, c), c) = y", &composed, &CurveReducedExpr::y(curve)),
    ];
    let holds = claims.iter().all(|c| c.holds);
    Ok(BijectionReport {
        curve,
        claims,
        holds,
    })
}

/// The inverse map lands on the curve: with `y = N(b, c) / D(c)`, the
/// pseudo-remainder of `N^2 - D^2 P(c)` by the variety polynomial in `b`
/// vanishes. Returns that remainder.
pub fn inverse_map_remainder(curve: CurveId) -> Result<MultiPoly> {
    let y = y_map_expr(curve);
    let quartic = curve.quartic();
    let lhs = &(y.num() * y.num()) - &(&(y.den() * y.den()) * quartic);
    lhs.pseudo_remainder(variety_poly(curve), Var::B)
}

pub fn verify_inverse_map(curve: CurveId) -> Result<bool> {
    Ok(inverse_map_remainder(curve)?.is_zero())
}

/// `b(y(b, c), c) - b` as a rational function of `b, c`; zero iff the map
/// from the variety to the curve is undone by the map back.
pub fn left_inverse_residual(curve: CurveId) -> Result<RationalFunction> {
    let back = b_map_expr(curve).substitute(Var::Y, &y_map_expr(curve))?;
    Ok(back.sub(&RationalFunction::from_poly(MultiPoly::var(Var::B))))
}

/// One entry of the exceptional map table.
#[derive(Debug, Clone, Serialize)]
pub struct MapCheck {
    pub map: String,
    pub from: String,
    pub to: String,
    pub holds: bool,
}

/// Applies the maps to every catalog entry where they are defined and
/// checks that the image is again a catalog entry of the matching curve.
pub fn catalog_round_trips() -> Vec<MapCheck> {
    let cat = catalog();
    let mut out = Vec::new();
    let sets = [
        (CaseId::Case7, &cat.solutions7, &cat.points7),
        (CaseId::Case8, &cat.solutions8, &cat.points8),
    ];
    for (case, solutions, points) in sets {
        for s in solutions {
            if let Ok(y) = y_from_solution(s, case) {
                let image = CurvePoint::new(y.clone(), s.c.clone(), case.curve().unwrap());
                out.push(MapCheck {
                    map: format!("y_from_solution/{case}"),
                    from: format!("({}, {})", s.b, s.c),
                    to: format!("({}, {})", y, s.c),
                    holds: image.is_ok_and(|pt| points.contains(&pt)),
                });
            }
        }
        for pt in points {
            if let Ok(b) = b_from_point(pt) {
                let image = ParamPoint::new(b.clone(), pt.c.clone());
                out.push(MapCheck {
                    map: format!("b_from_point/{case}"),
                    from: format!("({}, {})", pt.y, pt.c),
                    to: format!("({}, {})", b, pt.c),
                    holds: solutions.contains(&image),
                });
            }
        }
    }
    out
}

/// `E_k(b(c, y), c)` in the quotient ring, factor by factor.
pub fn coefficient_on_curve(
    which: Coeff,
    curve: CurveId,
    b_expr: &RationalFunction,
) -> Result<CurveReducedExpr> {
    let f = formula(which);
    let mut acc = CurveReducedExpr::constant(f.scalar.clone(), curve);
    for (factor, e) in &f.factors {
        let sub = RationalFunction::from_poly(factor.clone()).substitute(Var::B, b_expr)?;
        let reduced = reduce_mod_curve(&sub, curve)?;
        acc = acc.mul(&reduced.pow(*e)?);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct CofactorCoefficient {
    pub cofactor: String,
    pub degree: u32,
    pub coefficient: CurveReducedExpr,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub case: u8,
    pub claims: Vec<Claim>,
    pub residual_is_zero: bool,
    pub cofactor_coefficients: Vec<CofactorCoefficient>,
}

/// The root of `P(x)` that the factorization theorem of each case predicts.
pub fn predicted_x_root(curve: CurveId) -> Rational {
    match curve {
        CurveId::Curve7 => Rational::from_int(-1),
        CurveId::Curve8 => Rational::one(),
    }
}

pub fn prove_factorization(case: CaseId) -> Result<ProofReport> {
    let curve = case.curve().ok_or(Error::UnsupportedCase(case.number()))?;
    prove_factorization_at(curve, &predicted_x_root(curve))
}

/// Substitutes `b(c, y)` into `P` and `Q`, reduces on the curve, and checks
/// `P(x_root) = 0` and `E_03 = 0`. Also returns the deflated quadratic
/// cofactors `P(x) / (x - x_root)` and `Q(d) / d`.
pub fn prove_factorization_at(curve: CurveId, x_root: &Rational) -> Result<ProofReport> {
    let b_expr = b_map_expr(curve);
    let get = |k| coefficient_on_curve(k, curve, &b_expr);
    let (e10, e20, e30) = (get(Coeff::E10)?, get(Coeff::E20)?, get(Coeff::E30)?);
    let (e01, e02, e03) = (get(Coeff::E01)?, get(Coeff::E02)?, get(Coeff::E03)?);

    let k = |v: &Rational| CurveReducedExpr::constant(v.clone(), curve);
    let r = x_root;
    // P(r) = r^3 - E10 r^2 + E20 r - E30
    let p_at_root = k(&r.pow(3))
        .sub(&e10.scale(&r.pow(2)))
        .add(&e20.scale(r))
        .sub(&e30);
    let zero = k(&Rational::zero());
    let claims = vec![
        Claim::new(format!("P({r}) = 0"), &p_at_root, &zero),
        Claim::new("E03 = 0", &e03, &zero),
    ];
    let residual_is_zero = claims.iter().all(|c| c.holds);

    // x^2 + (r - E10) x + (r^2 - r E10 + E20)
    let p1 = k(r).sub(&e10);
    let p0 = k(&r.pow(2)).sub(&e10.scale(r)).add(&e20);
    let p_name = format!("P{}.2", curve.number());
    let q_name = format!("Q{}.2", curve.number());
    let one = k(&Rational::one());
    let cc = |cofactor: &str, degree, coefficient| CofactorCoefficient {
        cofactor: cofactor.to_string(),
        degree,
        coefficient,
    };
    let cofactor_coefficients = vec![
        cc(&p_name, 2, one.clone()),
        cc(&p_name, 1, p1),
        cc(&p_name, 0, p0),
        cc(&q_name, 2, one),
        cc(&q_name, 1, e01.neg()),
        cc(&q_name, 0, e02),
    ];
    Ok(ProofReport {
        case: curve.number(),
        claims,
        residual_is_zero,
        cofactor_coefficients,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitReport {
    pub point: CurvePoint,
    pub b: Rational,
    pub x_roots: Vec<(Rational, usize)>,
    pub d_roots: Vec<(Rational, usize)>,
    pub p_cofactor_discriminant: Rational,
    pub q_cofactor_discriminant: Rational,
    pub p_splits: bool,
    pub q_splits: bool,
}

fn quadratic_discriminant(q: &UniPoly) -> Rational {
    let cs = q.coeffs();
    &cs[1] * &cs[1] - Rational::from_int(4) * &cs[2] * &cs[0]
}

/// Whether the quadratic cofactors of a non-exceptional point split over Q.
pub fn split_report(pt: &CurvePoint) -> Result<SplitReport> {
    if pt.is_exceptional() {
        return Err(Error::ExceptionalPoint);
    }
    let b = b_from_point(pt)?;
    let param = ParamPoint::new(b.clone(), pt.c.clone());
    let cubics = build_cubics(&param)?;
    let p = UniPoly::from_multi(&cubics.p, Var::X)?;
    let q = UniPoly::from_multi(&cubics.q, Var::D)?;
    let p2 = p.deflate(&predicted_x_root(pt.curve))?;
    let q2 = q.deflate(&Rational::zero())?;
    let pd = quadratic_discriminant(&p2);
    let qd = quadratic_discriminant(&q2);
    Ok(SplitReport {
        point: pt.clone(),
        b,
        x_roots: rational_roots(&cubics.p)?,
        d_roots: rational_roots(&cubics.q)?,
        p_splits: pd.exact_sqrt().is_some(),
        q_splits: qd.exact_sqrt().is_some(),
        p_cofactor_discriminant: pd,
        q_cofactor_discriminant: qd,
    })
}

/// Numeric coefficients at the solution produced by `pt`, if defined.
pub fn coefficients_at_point(pt: &CurvePoint) -> Result<crate::coeffs::CoefficientSet<Rational>> {
    let b = b_from_point(pt)?;
    coefficients(&ParamPoint::new(b, pt.c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{e03_factor_a, e03_factor_b};
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pp(b: &str, c: &str) -> ParamPoint {
        ParamPoint::new(r(b), r(c))
    }

    fn cp(y: &str, c: &str, curve: CurveId) -> CurvePoint {
        CurvePoint::new(r(y), r(c), curve).unwrap()
    }

    #[test]
    fn classification_examples() {
        use CaseId::*;
        assert_eq!(classify_cases(&pp("0", "5")), BTreeSet::from([Case1]));
        assert_eq!(classify_cases(&pp("-1/2", "0")), BTreeSet::from([Case2, Case5]));
        assert_eq!(classify_cases(&pp("2", "2")), BTreeSet::from([Case4, Case6]));
        // b (c - 2)^2 = -2 holds here as well
        assert_eq!(classify_cases(&pp("-2", "1")), BTreeSet::from([Case3, Case5]));
        assert!(classify_cases(&pp("1", "3")).is_empty());
        // side constraints
        assert!(classify_cases(&pp("0", "0")).is_empty());
        assert!(!satisfies_case(&pp("-1", "1"), Case3));
        assert!(!satisfies_case(&pp("1", "2"), Case4));
    }

    #[test]
    fn varieties_are_the_e03_factors() {
        assert_eq!(variety_poly(CurveId::Curve7), e03_factor_a());
        assert_eq!(variety_poly(CurveId::Curve8), e03_factor_b());
    }

    #[test]
    fn residual_examples() {
        assert!(residual_21(&pp("-2", "1")).is_zero());
        assert!(residual_21(&pp("2", "2")).is_zero());
        assert!(residual_22(&pp("-1/2", "0")).is_zero());
        assert!(residual_22(&pp("0", "0")).is_zero());
        assert!(!residual_21(&pp("1", "1")).is_zero());
    }

    #[test]
    fn curve_point_invariant() {
        assert_eq!(
            CurvePoint::new(r("1"), r("0"), CurveId::Curve7),
            Err(Error::NotOnCurve)
        );
    }

    #[test]
    fn forward_maps() {
        assert_eq!(b_from_point(&cp("2", "0", CurveId::Curve8)).unwrap(), r("0"));
        assert_eq!(b_from_point(&cp("-2", "0", CurveId::Curve8)).unwrap(), r("-1/2"));
        assert_eq!(
            b_from_point(&cp("1", "1", CurveId::Curve7)),
            Err(Error::ExceptionalC("1".into()))
        );
        assert!(b_from_point(&cp("2", "2", CurveId::Curve7)).is_err());
    }

    #[test]
    fn inverse_maps() {
        use CaseId::*;
        assert_eq!(y_from_solution(&pp("-2", "1"), Case7).unwrap(), r("1"));
        assert_eq!(y_from_solution(&pp("2", "2"), Case7).unwrap(), r("-2"));
        assert_eq!(y_from_solution(&pp("-1/2", "0"), Case8).unwrap(), r("-2"));
        assert_eq!(y_from_solution(&pp("0", "0"), Case8).unwrap(), r("2"));
        assert_eq!(y_from_solution(&pp("0", "0"), Case7), Err(Error::ZeroC));
        assert_eq!(y_from_solution(&pp("1", "1"), Case7), Err(Error::NotOnVariety));
        assert_eq!(y_from_solution(&pp("1", "1"), Case3), Err(Error::UnsupportedCase(3)));
    }

    #[test]
    fn numeric_maps_agree_with_symbolic_forms() {
        // points off the curve still exercise the formulas
        for curve in CurveId::ALL {
            for (y, c) in [("3", "5"), ("-1/3", "7/2"), ("0", "-4")] {
                let (y, c) = (r(y), r(c));
                let direct = {
                    let rr = Rational::from_int;
                    let (c1, c2) = (&c - &rr(1), &c - &rr(2));
                    let top = &c * &c - rr(2) + &y;
                    match curve {
                        CurveId::Curve7 => &c * &top / (rr(2) * &c1 * &c2 * (&c1 * &c1 + rr(1))),
                        CurveId::Curve8 => top / (rr(4) * &c2 * &c1),
                    }
                };
                let at = crate::exactmath::Assignment::new()
                    .with(Var::C, c.clone())
                    .with(Var::Y, y.clone());
                assert_eq!(b_map_expr(curve).eval(&at).unwrap(), direct);
            }
        }
    }

    #[test]
    fn catalog_membership() {
        assert!(pp("-2", "1").is_exceptional());
        assert!(pp("0", "0").is_exceptional());
        assert!(!pp("1", "1").is_exceptional());
        assert!(cp("2", "0", CurveId::Curve8).is_exceptional());
        assert!(cp("1", "1", CurveId::Curve7).is_exceptional());
        let cat = catalog();
        for s in &cat.solutions7 {
            assert!(residual_21(s).is_zero());
        }
        for s in &cat.solutions8 {
            assert!(residual_22(s).is_zero());
        }
    }

    #[test]
    fn catalog_solutions_are_covered_by_known_cases() {
        use CaseId::*;
        assert!(classify_cases(&pp("-2", "1")).contains(&Case3));
        assert!(classify_cases(&pp("2", "2")).contains(&Case4));
        assert!(classify_cases(&pp("-1/2", "0")).contains(&Case2));
        // the origin fails the denominator guard
        assert!(!crate::coeffs::guard_nonvanishing(&pp("0", "0")));
    }

    #[test]
    fn bijections_hold() {
        for curve in CurveId::ALL {
            let rep = verify_bijection_symbolic(curve).unwrap();
            assert!(rep.holds, "{curve}: {:?}", rep.claims);
        }
    }

    #[test]
    fn flipped_sign_of_y_is_caught() {
        let mutated = RationalFunction::new(poly("c^2 - y - 2"), poly("4*(c - 2)*(c - 1)")).unwrap();
        let rep = check_bijection(CurveId::Curve8, &mutated).unwrap();
        assert!(!rep.holds);
        // y -> -y preserves the curve, so only the composition sees it
        assert!(rep.claims[0].holds);
        assert!(!rep.claims[1].holds);
    }

    #[test]
    fn maps_compose_to_identity_on_the_variety() {
        for curve in CurveId::ALL {
            assert!(left_inverse_residual(curve).unwrap().is_zero());
        }
    }

    #[test]
    fn catalog_maps_close_up() {
        let checks = catalog_round_trips();
        // curve 7: two solutions map forward, its points all have c in {1, 2};
        // curve 8: two each way
        assert_eq!(checks.len(), 6);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }

    #[test]
    fn inverse_maps_land_on_curves() {
        for curve in CurveId::ALL {
            assert!(verify_inverse_map(curve).unwrap());
        }
    }

    #[test]
    fn factorization_theorems() {
        for case in [CaseId::Case7, CaseId::Case8] {
            let rep = prove_factorization(case).unwrap();
            assert!(rep.residual_is_zero, "{case}: {:?}", rep.claims);
            assert_eq!(rep.claims.len(), 2);
            assert_eq!(rep.cofactor_coefficients.len(), 6);
        }
    }

    #[test]
    fn factorization_mutation_is_caught() {
        let rep = prove_factorization_at(CurveId::Curve7, &Rational::one()).unwrap();
        assert!(!rep.residual_is_zero);
        assert!(!rep.claims[0].holds);
        assert!(rep.claims[1].holds);
        let rep = prove_factorization_at(CurveId::Curve8, &Rational::from_int(-1)).unwrap();
        assert!(!rep.claims[0].holds);
    }

    #[test]
    fn cofactor_times_linear_factor_gives_back_p() {
        for curve in CurveId::ALL {
            let rep = prove_factorization_at(curve, &predicted_x_root(curve)).unwrap();
            let b = b_map_expr(curve);
            let e = |k| coefficient_on_curve(k, curve, &b).unwrap();
            let r = predicted_x_root(curve);
            let cf = &rep.cofactor_coefficients;
            let (p1, p0) = (&cf[1].coefficient, &cf[2].coefficient);
            // (x - r)(x^2 + p1 x + p0) = x^3 + (p1 - r) x^2 + (p0 - r p1) x - r p0
            let k = CurveReducedExpr::constant(r.clone(), curve);
            assert_eq!(p1.sub(&k), e(Coeff::E10).neg());
            assert_eq!(p0.sub(&p1.scale(&r)), e(Coeff::E20));
            assert_eq!(p0.scale(&r), e(Coeff::E30));
            // d (d^2 - E01 d + E02) = Q when E03 = 0
            assert_eq!(cf[4].coefficient, e(Coeff::E01).neg());
            assert_eq!(cf[5].coefficient, e(Coeff::E02));
        }
    }

    #[test]
    fn split_report_preconditions() {
        assert_eq!(
            split_report(&cp("2", "0", CurveId::Curve8)).unwrap_err(),
            Error::ExceptionalPoint
        );
        assert_eq!(
            split_report(&cp("1", "1", CurveId::Curve7)).unwrap_err(),
            Error::ExceptionalPoint
        );
    }

    fn sample_param(case: CaseId) -> impl Strategy<Value = ParamPoint> {
        (-40i64..=40, 1i64..=15).prop_filter_map("side condition or guard", move |(p, q)| {
            let pt = crate::cuboidcheck::case_point(case, &Rational::new(p, q))?;
            crate::coeffs::guard_nonvanishing(&pt).then_some(pt)
        })
    }

    fn arb_case_point() -> impl Strategy<Value = (CaseId, ParamPoint)> {
        (0usize..6).prop_flat_map(|i| {
            let k = CaseId::ALL[i];
            sample_param(k).prop_map(move |p| (k, p))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn six_cases_are_reducible((case, pt) in arb_case_point()) {
            prop_assert!(classify_cases(&pt).contains(&case));
            let rep = crate::cuboidcheck::check_candidate(&pt);
            prop_assert!(rep.p_reducible && rep.q_reducible, "{case} at {pt}: {rep:?}");
            prop_assert_ne!(rep.verdict, crate::cuboidcheck::Verdict::PerfectCuboid);
        }

        #[test]
        fn b_map_is_defined_off_exceptional_c(y in -50i64..50, p in -50i64..50, q in 1i64..20) {
            // evaluate the map formulas directly; the point need not be on the curve
            let c = Rational::new(p, q);
            prop_assume!(check_map_c(&c).is_ok());
            for curve in CurveId::ALL {
                let at = crate::exactmath::Assignment::new()
                    .with(Var::C, c.clone())
                    .with(Var::Y, Rational::from_int(y));
                prop_assert!(b_map_expr(curve).eval(&at).is_ok());
            }
        }
    }

    #[test]
    fn proof_report_json_shape() {
        let rep = prove_factorization(CaseId::Case8).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["case", "claims", "residual_is_zero", "cofactor_coefficients"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["case"], 8);
    }
}
