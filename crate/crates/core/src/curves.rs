//! The two quartic curve models `y^2 = P7(c)` and `y^2 = P8(c)`, their
//! discriminants, and exhaustive rational point search by naive height.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{e03_factor_a, e03_factor_b};
use crate::exactmath::univariate::squarefree_factorization;
use crate::exactmath::{
    poly, quartic_discriminant, Assignment, MultiPoly, Rational, UniPoly, Var,
};
use crate::reducibility::{is_exceptional, CurvePoint};

/// Discriminant shared by both quartics: `-2^20`.
pub const QUARTIC_DISCRIMINANT: i64 = -1_048_576;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveId {
    Curve7,
    Curve8,
}

impl CurveId {
    pub const ALL: [CurveId; 2] = [CurveId::Curve7, CurveId::Curve8];

    pub fn number(self) -> u8 {
        match self {
            CurveId::Curve7 => 7,
            CurveId::Curve8 => 8,
        }
    }

    pub fn from_number(n: u8) -> Option<CurveId> {
        match n {
            7 => Some(CurveId::Curve7),
            8 => Some(CurveId::Curve8),
            _ => None,
        }
    }

    /// The defining quartic in `c`.
    pub fn quartic(self) -> &'static MultiPoly {
        static P7: OnceLock<MultiPoly> = OnceLock::new();
        static P8: OnceLock<MultiPoly> = OnceLock::new();
        match self {
            CurveId::Curve7 => P7.get_or_init(|| poly("-7*c^4 + 40*c^3 - 84*c^2 + 80*c - 28")),
            CurveId::Curve8 => P8.get_or_init(|| poly("c^4 - 8*c^3 + 12*c^2 - 16*c + 4")),
        }
    }

    /// The affine curve in `(b, c)` that is birational to this quartic.
    pub fn variety(self) -> &'static MultiPoly {
        match self {
            CurveId::Curve7 => e03_factor_a(),
            CurveId::Curve8 => e03_factor_b(),
        }
    }

    fn integer_coeffs(self) -> [i64; 5] {
        match self {
            CurveId::Curve7 => [-28, 80, -84, 40, -7],
            CurveId::Curve8 => [4, -16, 12, -8, 1],
        }
    }

    pub fn eval_quartic(self, c: &Rational) -> Rational {
        self.quartic()
            .eval(&Assignment::new().with(Var::C, c.clone()))
            .expect("c assigned")
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone)]
pub struct QuarticCurve {
    pub curve_id: CurveId,
    pub quartic: MultiPoly,
    pub discriminant: Rational,
}

impl QuarticCurve {
    /// Both curves, built once; construction asserts the discriminant.
    pub fn get(curve: CurveId) -> &'static QuarticCurve {
        static CELL: OnceLock<[QuarticCurve; 2]> = OnceLock::new();
        let all = CELL.get_or_init(|| CurveId::ALL.map(QuarticCurve::build));
        &all[curve as usize]
    }

    fn build(curve: CurveId) -> QuarticCurve {
        let quartic = curve.quartic().clone();
        let discriminant = quartic_discriminant(&quartic).expect("degree 4");
        assert_eq!(
            discriminant,
            Rational::from_int(QUARTIC_DISCRIMINANT),
            "curve {curve} is degenerate"
        );
        QuarticCurve {
            curve_id: curve,
            quartic,
            discriminant,
        }
    }
}

/// The discriminant of a variety polynomial as a quadratic in `b`, split as
/// `square_factor^2 * quartic`.
#[derive(Debug, Clone)]
pub struct DiscriminantInB {
    pub discriminant: MultiPoly,
    pub square_factor: MultiPoly,
    pub quartic: MultiPoly,
}

/// Transcribed closed forms of the two discriminants.
pub fn expected_discriminant_in_b(curve: CurveId) -> MultiPoly {
    match curve {
        CurveId::Curve7 => poly("-(7*c^4 - 40*c^3 + 84*c^2 - 80*c + 28)*c^2"),
        CurveId::Curve8 => poly("(c^4 - 8*c^3 + 12*c^2 - 16*c + 4)*(c - 1)^2*(c - 2)^2"),
    }
}

pub fn discriminant_in_b(curve: CurveId) -> DiscriminantInB {
    let coeffs = curve.variety().coefficients_in(Var::B);
    assert_eq!(coeffs.len(), 3, "variety is quadratic in b");
    let (c0, c1, c2) = (&coeffs[0], &coeffs[1], &coeffs[2]);
    let discriminant = &(c1 * c1) - &(&(c2 * c0) * &MultiPoly::constant(Rational::from_int(4)));

    let u = UniPoly::from_multi(&discriminant, Var::C).expect("univariate in c");
    let (_, factors) = squarefree_factorization(&u);
    let mut square = UniPoly::constant(Rational::one());
    for (i, f) in factors.iter().enumerate() {
        let multiplicity = i as u32 + 1;
        square = square.mul(&f.pow(multiplicity / 2));
    }
    let quartic = u.div_exact(&square.mul(&square)).expect("square divides");
    DiscriminantInB {
        discriminant,
        square_factor: square.to_multi(Var::C),
        quartic: quartic.to_multi(Var::C),
    }
}

/// Checks the computed discriminant and its square-free part against the
/// closed forms.
pub fn verify_discriminant_in_b(curve: CurveId) -> bool {
    let d = discriminant_in_b(curve);
    d.discriminant == expected_discriminant_in_b(curve) && &d.quartic == curve.quartic()
}

pub fn on_curve(y: &Rational, c: &Rational, curve: CurveId) -> bool {
    y * y == curve.eval_quartic(c)
}

/// The quartics are negative at the excluded `c` values, so no real point
/// lies above them: `P7(0) = -28`, `P8(1) = -7`, `P8(2) = -28`.
pub fn no_point_guards() -> bool {
    let neg = |curve: CurveId, c: i64| curve.eval_quartic(&Rational::from_int(c)).is_negative();
    neg(CurveId::Curve7, 0) && neg(CurveId::Curve8, 1) && neg(CurveId::Curve8, 2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundPoint {
    pub point: CurvePoint,
    pub height: u64,
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub curve: CurveId,
    pub height_bound: u64,
    pub points: Vec<FoundPoint>,
    pub cells_scanned: u64,
}

/// One CSV row of a search result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRow {
    pub curve: u8,
    pub c_num: String,
    pub c_den: String,
    pub y_num: String,
    pub y_den: String,
    pub height: u64,
    pub exceptional: bool,
}

impl SearchResult {
    pub fn rows(&self) -> Vec<SearchRow> {
        self.points
            .iter()
            .map(|p| SearchRow {
                curve: self.curve.number(),
                c_num: p.point.c().numer().to_string(),
                c_den: p.point.c().denom().to_string(),
                y_num: p.point.y().numer().to_string(),
                y_den: p.point.y().denom().to_string(),
                height: p.height,
                exceptional: p.exceptional,
            })
            .collect()
    }

    pub fn non_exceptional(&self) -> impl Iterator<Item = &FoundPoint> {
        self.points.iter().filter(|p| !p.exceptional)
    }
}

/// `q^4 P(p/q)` when it is a perfect square: returns `sqrt`.
fn square_root_at(curve: CurveId, p: i64, q: i64) -> Option<BigInt> {
    let a = curve.integer_coeffs();
    if let Some(v) = homogeneous_i128(&a, p, q) {
        if v < 0 {
            return None;
        }
        let s = (v as u128).sqrt();
        return (s * s == v as u128).then(|| BigInt::from(s));
    }
    let (p, q) = (BigInt::from(p), BigInt::from(q));
    let mut v = BigInt::from(0);
    for (i, &ai) in a.iter().enumerate() {
        v += BigInt::from(ai) * p.pow(i as u32) * q.pow(4 - i as u32);
    }
    crate::exactmath::rational::exact_isqrt(&v)
}

fn homogeneous_i128(a: &[i64; 5], p: i64, q: i64) -> Option<i128> {
    let (p, q) = (i128::from(p), i128::from(q));
    let mut acc: i128 = 0;
    for (i, &ai) in a.iter().enumerate() {
        let mut t = i128::from(ai);
        for _ in 0..i {
            t = t.checked_mul(p)?;
        }
        for _ in i..4 {
            t = t.checked_mul(q)?;
        }
        acc = acc.checked_add(t)?;
    }
    Some(acc)
}

fn scan_band(curve: CurveId, bound: i64, qs: std::ops::RangeInclusive<i64>) -> (Vec<FoundPoint>, u64) {
    let mut out = Vec::new();
    let mut cells = 0u64;
    for q in qs {
        for p in -bound..=bound {
            if p.gcd(&q) != 1 {
                continue;
            }
            cells += 1;
            let Some(s) = square_root_at(curve, p, q) else {
                continue;
            };
            let c = Rational::new(p, q);
            let q2 = BigInt::from(q) * BigInt::from(q);
            let y = Rational::checked_new(s, q2).expect("q > 0");
            let height = p.unsigned_abs().max(q as u64);
            let mut ys = vec![y.clone()];
            if !y.is_zero() {
                ys.push(-y);
            }
            for y in ys {
                let point = CurvePoint::new(y, c.clone(), curve).expect("verified square");
                let exceptional = is_exceptional(&point);
                out.push(FoundPoint {
                    point,
                    height,
                    exceptional,
                });
            }
        }
    }
    (out, cells)
}

/// All rational points with `c = p/q`, `max(|p|, q) <= height_bound`, single-threaded.
pub fn search(curve: CurveId, height_bound: u64) -> SearchResult {
    search_parallel(curve, height_bound, 1)
}

/// Same result as [`search`], computed over `jobs` workers on contiguous
/// bands of denominators.
pub fn search_parallel(curve: CurveId, height_bound: u64, jobs: usize) -> SearchResult {
    let bound = i64::try_from(height_bound).expect("height bound fits in i64");
    let jobs = jobs.max(1);
    let bands = band_ranges(bound, jobs * 4);
    let parts: Vec<(Vec<FoundPoint>, u64)> = if jobs == 1 {
        bands.into_iter().map(|r| scan_band(curve, bound, r)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            bands
                .into_par_iter()
                .map(|r| scan_band(curve, bound, r))
                .collect()
        })
    };
    let mut points = Vec::new();
    let mut cells_scanned = 0;
    for (pts, cells) in parts {
        points.extend(pts);
        cells_scanned += cells;
    }
    points.sort_by(|a, b| {
        (a.height, a.point.c(), a.point.y()).cmp(&(b.height, b.point.c(), b.point.y()))
    });
    SearchResult {
        curve,
        height_bound,
        points,
        cells_scanned,
    }
}

/// Splits `1..=bound` into at most `n` contiguous nonempty ranges.
pub(crate) fn band_ranges(bound: i64, n: usize) -> Vec<std::ops::RangeInclusive<i64>> {
    if bound < 1 {
        return Vec::new();
    }
    let n = (n as i64).clamp(1, bound);
    let size = (bound + n - 1) / n;
    (0..n)
        .map(|i| (1 + i * size)..=((i + 1) * size).min(bound))
        .filter(|r| !r.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn pts(res: &SearchResult) -> BTreeSet<(Rational, Rational)> {
        res.points
            .iter()
            .map(|p| (p.point.y().clone(), p.point.c().clone()))
            .collect()
    }

    fn set(v: &[(i64, i64)]) -> BTreeSet<(Rational, Rational)> {
        v.iter()
            .map(|&(y, c)| (Rational::from_int(y), Rational::from_int(c)))
            .collect()
    }

    #[test]
    fn discriminants_are_minus_two_to_the_twenty() {
        for curve in CurveId::ALL {
            assert_eq!(
                QuarticCurve::get(curve).discriminant,
                Rational::from_int(-(1 << 20))
            );
        }
    }

    #[test]
    fn discriminant_in_b_matches_closed_forms() {
        let d7 = discriminant_in_b(CurveId::Curve7);
        assert_eq!(d7.discriminant, expected_discriminant_in_b(CurveId::Curve7));
        assert_eq!(d7.square_factor, poly("c"));
        assert_eq!(&d7.quartic, CurveId::Curve7.quartic());
        let d8 = discriminant_in_b(CurveId::Curve8);
        assert_eq!(d8.discriminant, expected_discriminant_in_b(CurveId::Curve8));
        assert_eq!(d8.square_factor, poly("(c - 1)*(c - 2)"));
        assert_eq!(&d8.quartic, CurveId::Curve8.quartic());
        assert!(verify_discriminant_in_b(CurveId::Curve7));
        assert!(verify_discriminant_in_b(CurveId::Curve8));
        // explicit quotients
        assert_eq!(
            d7.discriminant.div_exact(&poly("c^2")).as_ref(),
            Some(CurveId::Curve7.quartic())
        );
        assert_eq!(
            d8.discriminant.div_exact(&poly("(c-1)^2*(c-2)^2")).as_ref(),
            Some(CurveId::Curve8.quartic())
        );
    }

    #[test]
    fn membership() {
        let r = Rational::from_int;
        assert!(on_curve(&r(1), &r(1), CurveId::Curve7));
        assert!(on_curve(&r(2), &r(0), CurveId::Curve8));
        assert!(!on_curve(&r(1), &r(0), CurveId::Curve7));
    }

    #[test]
    fn guards() {
        let r = Rational::from_int;
        assert_eq!(CurveId::Curve7.eval_quartic(&r(0)), r(-28));
        assert_eq!(CurveId::Curve8.eval_quartic(&r(1)), r(-7));
        assert_eq!(CurveId::Curve8.eval_quartic(&r(2)), r(-28));
        assert!(no_point_guards());
    }

    #[test]
    fn small_searches() {
        let s7 = search(CurveId::Curve7, 2);
        assert_eq!(pts(&s7), set(&[(1, 1), (-1, 1), (2, 2), (-2, 2)]));
        assert!(s7.points.iter().all(|p| p.exceptional));
        // 0, ±1, ±2, ±1/2
        assert_eq!(s7.cells_scanned, 7);
        let s8 = search(CurveId::Curve8, 2);
        assert_eq!(pts(&s8), set(&[(2, 0), (-2, 0)]));
        assert_eq!(pts(&search(CurveId::Curve8, 1)), set(&[(2, 0), (-2, 0)]));
    }

    #[test]
    fn sorted_by_height_then_c_then_y() {
        let s7 = search(CurveId::Curve7, 4);
        let ys: Vec<String> = s7
            .points
            .iter()
            .map(|p| format!("{},{}", p.point.y(), p.point.c()))
            .collect();
        assert_eq!(ys, ["-1,1", "1,1", "-2,2", "2,2"]);
    }

    #[test]
    fn bands_cover_range() {
        for bound in 1..30 {
            for n in 1..12 {
                let all: Vec<i64> = band_ranges(bound, n).into_iter().flatten().collect();
                assert_eq!(all, (1..=bound).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn parallel_matches_serial() {
        for curve in CurveId::ALL {
            let a = search(curve, 25);
            let b = search_parallel(curve, 25, 8);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn i128_and_bigint_paths_agree() {
        for curve in CurveId::ALL {
            let a = curve.integer_coeffs();
            for (p, q) in [(3, 7), (-11, 5), (0, 1), (12, 13)] {
                let fast = homogeneous_i128(&a, p, q).unwrap();
                let slow = curve.eval_quartic(&Rational::new(p, q)) * Rational::from_int(q).pow(4);
                assert_eq!(Rational::from_bigint(BigInt::from(fast)), slow);
            }
        }
    }
}
