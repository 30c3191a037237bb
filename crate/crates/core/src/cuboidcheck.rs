//! The cubics for the edges `x_i` and face diagonals `d_i`, the three
//! auxiliary multisymmetric equations, and the full candidate pipeline.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{coefficients, CoefficientSet, ParamPoint};
use crate::curves::search;
use crate::error::Result;
use crate::exactmath::{rational_roots, rationals_up_to_height, MultiPoly, Rational, Var};
use crate::reducibility::{b_from_point, satisfies_case, CaseId};

/// `P(x) = x^3 - E10 x^2 + E20 x - E30` and `Q(d) = d^3 - E01 d^2 + E02 d - E03`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubicPair {
    pub p: MultiPoly,
    pub q: MultiPoly,
}

fn monic_cubic(v: Var, e1: &Rational, e2: &Rational, e3: &Rational) -> MultiPoly {
    let t = MultiPoly::var(v);
    let k = |r: &Rational| MultiPoly::constant(r.clone());
    &(&(&t.pow(3) - &(&k(e1) * &t.pow(2))) + &(&k(e2) * &t)) - &k(e3)
}

impl CubicPair {
    pub fn from_coefficients(cs: &CoefficientSet<Rational>) -> Self {
        CubicPair {
            p: monic_cubic(Var::X, &cs.E10, &cs.E20, &cs.E30),
            q: monic_cubic(Var::D, &cs.E01, &cs.E02, &cs.E03),
        }
    }
}

pub fn build_cubics(p: &ParamPoint) -> Result<CubicPair> {
    Ok(CubicPair::from_coefficients(&coefficients(p)?))
}

/// Left minus right side of the three auxiliary equations, in the order
/// `E21`, `E11`, `E12`.
pub fn aux_residuals(
    x: &[Rational; 3],
    d: &[Rational; 3],
    e21: &Rational,
    e11: &Rational,
    e12: &Rational,
) -> [Rational; 3] {
    let [x1, x2, x3] = x;
    let [d1, d2, d3] = d;
    let r21 = x1 * x2 * d3 + x2 * x3 * d1 + x3 * x1 * d2 - e21;
    let r11 = x1 * d2 + d1 * x2 + x2 * d3 + d2 * x3 + x3 * d1 + d3 * x1 - e11;
    let r12 = x1 * d2 * d3 + x2 * d3 * d1 + x3 * d1 * d2 - e12;
    [r21, r11, r12]
}

/// Positive edges with unit space diagonal, and `d_i^2 = x_j^2 + x_k^2`.
pub fn validate_geometry(x: &[Rational; 3], d: &[Rational; 3]) -> bool {
    if !x.iter().chain(d).all(Rational::is_positive) {
        return false;
    }
    let sq: Vec<Rational> = x.iter().map(|v| v * v).collect();
    if sq.iter().cloned().sum::<Rational>() != Rational::from_int(crate::coeffs::SPACE_DIAGONAL) {
        return false;
    }
    (0..3).all(|i| &d[i] * &d[i] == &sq[(i + 1) % 3] + &sq[(i + 2) % 3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    PerfectCuboid,
    ReducibleButNotCuboid,
    Irreducible,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuboidReport {
    pub param: ParamPoint,
    /// Rational roots with multiplicity, ascending.
    pub x_roots: Vec<Rational>,
    pub d_roots: Vec<Rational>,
    pub p_reducible: bool,
    pub q_reducible: bool,
    /// Present only when both cubics split completely; taken at the chosen
    /// pairing of `d` against sorted `x`.
    pub aux_residuals: Option<[Rational; 3]>,
    pub positivity: bool,
    pub geometry_ok: bool,
    pub verdict: Verdict,
}

fn expand(roots: Vec<(Rational, usize)>) -> Vec<Rational> {
    roots
        .into_iter()
        .flat_map(|(r, m)| std::iter::repeat_n(r, m))
        .collect()
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn check_candidate(param: &ParamPoint) -> CuboidReport {
    let degenerate = || CuboidReport {
        param: param.clone(),
        x_roots: Vec::new(),
        d_roots: Vec::new(),
        p_reducible: false,
        q_reducible: false,
        aux_residuals: None,
        positivity: false,
        geometry_ok: false,
        verdict: Verdict::Degenerate,
    };
    let cs = match coefficients(param) {
        Ok(cs) => cs,
        Err(_) => return degenerate(),
    };
    let cubics = CubicPair::from_coefficients(&cs);
    let x_roots = expand(rational_roots(&cubics.p).expect("monic cubic"));
    let d_roots = expand(rational_roots(&cubics.q).expect("monic cubic"));
    let p_reducible = !x_roots.is_empty();
    let q_reducible = !d_roots.is_empty();
    let positivity = x_roots.len() == 3
        && d_roots.len() == 3
        && x_roots.iter().chain(&d_roots).all(Rational::is_positive);

    let mut aux = None;
    let mut geometry_ok = false;
    let mut aux_ok = false;
    if x_roots.len() == 3 && d_roots.len() == 3 {
        let x: [Rational; 3] = x_roots.clone().try_into().expect("three roots");
        let mut chosen = None;
        for perm in PERMUTATIONS {
            let d = perm.map(|i| d_roots[i].clone());
            let res = aux_residuals(&x, &d, &cs.E21, &cs.E11, &cs.E12);
            let zero = res.iter().all(Rational::is_zero);
            let geo = zero && validate_geometry(&x, &d);
            let rank = match (zero, geo) {
                (true, true) => 2,
                (true, false) => 1,
                _ => 0,
            };
            if chosen.as_ref().is_none_or(|(r, _, _)| rank > *r) {
                chosen = Some((rank, res, geo));
            }
        }
        let (rank, res, geo) = chosen.expect("six pairings tried");
        aux_ok = rank > 0;
        geometry_ok = geo;
        aux = Some(res);
    }

    let verdict = if positivity && aux_ok && geometry_ok {
        Verdict::PerfectCuboid
    } else if p_reducible || q_reducible {
        Verdict::ReducibleButNotCuboid
    } else {
        Verdict::Irreducible
    };
    CuboidReport {
        param: param.clone(),
        x_roots,
        d_roots,
        p_reducible,
        q_reducible,
        aux_residuals: aux,
        positivity,
        geometry_ok,
        verdict,
    }
}

/// The point of case 1..6 with free parameter `t`, when the side condition
/// holds. Cases 1..4 fix one coordinate; 5 and 6 solve for `b` given `c = t`.
pub fn case_point(case: CaseId, t: &Rational) -> Option<ParamPoint> {
    let r = Rational::from_int;
    let p = match case {
        CaseId::Case1 => ParamPoint::new(r(0), t.clone()),
        CaseId::Case2 => ParamPoint::new(t.clone(), r(0)),
        CaseId::Case3 => ParamPoint::new(t.clone(), r(1)),
        CaseId::Case4 => ParamPoint::new(t.clone(), r(2)),
        CaseId::Case5 => {
            let s = (t - &r(2)).pow(2);
            ParamPoint::new(r(-2) * s.recip().ok()?, t.clone())
        }
        CaseId::Case6 => {
            let s = r(2) * (t - &r(1)).pow(2);
            ParamPoint::new(t * t * s.recip().ok()?, t.clone())
        }
        CaseId::Case7 | CaseId::Case8 => return None,
    };
    satisfies_case(&p, case).then_some(p)
}

/// Parameter points scanned for a grid of height `h`, optionally limited to
/// one case. Cases 7 and 8 use the images of curve points up to height `h`.
pub fn scan_points(h: u64, case: Option<CaseId>) -> Vec<ParamPoint> {
    let ts = rationals_up_to_height(h);
    let mut pts: Vec<ParamPoint> = match case {
        None => ts
            .iter()
            .flat_map(|c| ts.iter().map(move |b| ParamPoint::new(b.clone(), c.clone())))
            .collect(),
        Some(k @ (CaseId::Case7 | CaseId::Case8)) => {
            let curve = k.curve().expect("curve case");
            search(curve, h)
                .points
                .iter()
                .filter_map(|fp| b_from_point(&fp.point).ok().map(|b| ParamPoint::new(b, fp.point.c().clone())))
                .collect()
        }
        Some(k) => ts.iter().filter_map(|t| case_point(k, t)).collect(),
    };
    let mut seen = std::collections::BTreeSet::new();
    pts.retain(|p| seen.insert(p.clone()));
    pts
}

/// Runs [`check_candidate`] over `points` on `jobs` workers; the output order
/// matches the input order.
pub fn scan(points: &[ParamPoint], jobs: usize) -> Vec<CuboidReport> {
    let jobs = jobs.max(1);
    if jobs == 1 {
        return points.iter().map(check_candidate).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    pool.install(|| points.par_iter().map(check_candidate).collect())
}

/// One CSV row of a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub b: String,
    pub c: String,
    pub verdict: String,
    pub p_reducible: bool,
    pub q_reducible: bool,
    pub x_roots: String,
    pub d_roots: String,
    pub positivity: bool,
    pub geometry_ok: bool,
}

impl From<&CuboidReport> for ScanRow {
    fn from(r: &CuboidReport) -> Self {
        let join = |v: &[Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        ScanRow {
            b: r.param.b.to_string(),
            c: r.param.c.to_string(),
            verdict: format!("{:?}", r.verdict),
            p_reducible: r.p_reducible,
            q_reducible: r.q_reducible,
            x_roots: join(&r.x_roots),
            d_roots: join(&r.d_roots),
            positivity: r.positivity,
            geometry_ok: r.geometry_ok,
        }
    }
}
