use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use cuboid_core::coeffs::{coefficients, guard_values, CoefficientSet, ParamPoint};
use cuboid_core::cuboidcheck::{check_candidate, scan, scan_points, CuboidReport, ScanRow, Verdict};
use cuboid_core::curves::{
    discriminant_in_b, expected_discriminant_in_b, no_point_guards, search_parallel, CurveId,
    QuarticCurve, SearchRow, QUARTIC_DISCRIMINANT,
};
use cuboid_core::exactmath::Rational;
use cuboid_core::reducibility::{
    catalog_round_trips, check_bijection, classify_cases, left_inverse_residual, prove_factorization,
    b_map_expr, residual_21, residual_22, verify_inverse_map, CaseId,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "cuboid", version, about = "Exact checks for the cubic cuboid equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the nine coefficients at (b, c)
    Coeffs(PointArgs),
    /// List the reducibility cases 1..6 that hold at (b, c)
    Classify(PointArgs),
    /// Enumerate rational points of a quartic curve up to a height bound
    CurveSearch(SearchArgs),
    /// Run symbolic verifications
    Verify(VerifyArgs),
    /// Full candidate report at (b, c)
    Check(PointArgs),
    /// Candidate reports over a grid of parameter points
    Scan(ScanArgs),
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    b: Rational,
    #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
    c: Rational,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(7..=8))]
    curve: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    height: u64,
    #[arg(long, env = "CUBOID_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    jobs: u64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyArgs {
    #[arg(long)]
    all: bool,
    #[arg(long)]
    identity17: bool,
    #[arg(long, value_parser = ["2.1", "2.2", "2.3", "2.4", "3.1", "3.2", "4.1", "5.1"])]
    theorem: Option<String>,
    #[arg(long)]
    discriminants: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1000))]
    grid: u64,
    #[arg(long = "case", value_parser = clap::value_parser!(u8).range(1..=8))]
    case: Option<u8>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, env = "CUBOID_JOBS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=1024))]
    jobs: u64,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Serialize, Deserialize)]
pub struct CoeffsOutput {
    pub schema_version: u32,
    pub b: Rational,
    pub c: Rational,
    pub degenerate: bool,
    pub vanishing_guards: Vec<String>,
    pub coefficients: Option<CoefficientSet<Rational>>,
}

#[derive(Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub schema_version: u32,
    pub b: Rational,
    pub c: Rational,
    pub cases: Vec<u8>,
    pub residual_21: Rational,
    pub residual_22: Rational,
}

#[derive(Serialize, Deserialize)]
pub struct SearchOutput {
    pub schema_version: u32,
    pub curve: u8,
    pub height_bound: u64,
    pub cells_scanned: u64,
    pub points: Vec<SearchRow>,
}

#[derive(Serialize, Deserialize)]
pub struct CheckOutput {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: CuboidReport,
}

const GUARD_NAMES: [&str; 4] = [
    "g = b^2 (c^2 - 3c + 2)^2 + c^2",
    "f1 = bc - 1 - b",
    "f2 = bc - c - 2b",
    "h = b^2 c^2 + 2b^2 - 3b^2 c + c - bc^2 + 2b",
];

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run_coeffs(a: PointArgs) -> ExitCode {
    let p = ParamPoint::new(a.b.clone(), a.c.clone());
    let vanishing: Vec<String> = guard_values(&p)
        .iter()
        .zip(GUARD_NAMES)
        .filter(|(v, _)| v.is_zero())
        .map(|(_, n)| n.to_string())
        .collect();
    let cs = coefficients(&p).ok();
    if a.json {
        print_json(&CoeffsOutput {
            schema_version: SCHEMA_VERSION,
            b: a.b,
            c: a.c,
            degenerate: cs.is_none(),
            vanishing_guards: vanishing,
            coefficients: cs,
        });
        return ExitCode::SUCCESS;
    }
    match cs {
        Some(cs) => {
            for (k, v) in cs.iter() {
                println!("{} = {}", k.name(), v);
            }
        }
        None => {
            println!("degenerate parameters {p}");
            for n in vanishing {
                println!("  vanishing guard factor: {n}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn run_classify(a: PointArgs) -> ExitCode {
    let p = ParamPoint::new(a.b.clone(), a.c.clone());
    let cases: Vec<u8> = classify_cases(&p).iter().map(|k| k.number()).collect();
    let out = ClassifyOutput {
        schema_version: SCHEMA_VERSION,
        residual_21: residual_21(&p),
        residual_22: residual_22(&p),
        b: a.b,
        c: a.c,
        cases,
    };
    if a.json {
        print_json(&out);
    } else {
        let list: Vec<String> = out.cases.iter().map(|k| k.to_string()).collect();
        println!("cases: {}", if list.is_empty() { "none".into() } else { list.join(" ") });
        println!("residual (case 7 variety): {}", out.residual_21);
        println!("residual (case 8 variety): {}", out.residual_22);
    }
    ExitCode::SUCCESS
}

fn write_csv<T: Serialize>(path: &PathBuf, rows: &[T]) -> Result<(), String> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

fn run_search(a: SearchArgs) -> ExitCode {
    let curve = CurveId::from_number(a.curve).expect("validated by clap");
    let res = search_parallel(curve, a.height, a.jobs as usize);
    let rows = res.rows();
    if let Some(path) = &a.csv {
        if let Err(e) = write_csv(path, &rows) {
            eprintln!("error: cannot write csv: {e}");
            return ExitCode::from(2);
        }
    }
    if a.json {
        print_json(&SearchOutput {
            schema_version: SCHEMA_VERSION,
            curve: a.curve,
            height_bound: a.height,
            cells_scanned: res.cells_scanned,
            points: rows,
        });
        return ExitCode::SUCCESS;
    }
    println!(
        "curve {}: height <= {}, {} values of c scanned, {} points",
        a.curve,
        a.height,
        res.cells_scanned,
        res.points.len()
    );
    for p in &res.points {
        let tag = if p.exceptional { "exceptional" } else { "NON-EXCEPTIONAL" };
        println!("  y = {}, c = {}  (height {}, {tag})", p.point.y(), p.point.c(), p.height);
    }
    ExitCode::SUCCESS
}

struct Outcome {
    failed: bool,
}

impl Outcome {
    fn record(&mut self, ok: bool, what: &str) {
        println!("{} {what}", if ok { "PASS" } else { "FAIL" });
        self.failed |= !ok;
    }
}

fn verify_discriminants(o: &mut Outcome) {
    for curve in CurveId::ALL {
        let q = QuarticCurve::get(curve);
        o.record(
            q.discriminant == Rational::from_int(QUARTIC_DISCRIMINANT),
            &format!("discriminant of P{} = {}", curve.number(), q.discriminant),
        );
        let d = discriminant_in_b(curve);
        o.record(
            d.discriminant == expected_discriminant_in_b(curve),
            &format!("discriminant in b of variety {} = {}", curve.number(), d.discriminant),
        );
        o.record(
            &d.quartic == curve.quartic(),
            &format!("square-free quartic part = P{}", curve.number()),
        );
    }
    o.record(no_point_guards(), "P7(0) < 0, P8(1) < 0, P8(2) < 0");
}

fn verify_theorem(o: &mut Outcome, t: &str) {
    let curve = |n| CurveId::from_number(n).expect("7 or 8");
    match t {
        "2.1" | "2.2" => {
            let c = curve(if t == "2.1" { 7 } else { 8 });
            let rep = check_bijection(c, &b_map_expr(c)).expect("symbolic reduction");
            let claim = &rep.claims[0];
            o.record(claim.holds, &format!("theorem {t}: {} on curve {}", claim.name, c.number()));
        }
        "2.3" | "2.4" => {
            let c = curve(if t == "2.3" { 7 } else { 8 });
            let ok = verify_inverse_map(c).expect("pseudo-remainder");
            o.record(ok, &format!("theorem {t}: y(b, c)^2 = P{}(c) on the variety", c.number()));
        }
        "3.1" | "3.2" => {
            let c = curve(if t == "3.1" { 7 } else { 8 });
            let rep = check_bijection(c, &b_map_expr(c)).expect("symbolic reduction");
            for claim in &rep.claims {
                o.record(claim.holds, &format!("theorem {t}: {} on curve {}", claim.name, c.number()));
            }
            let left = left_inverse_residual(c).expect("substitution").is_zero();
            o.record(left, &format!("theorem {t}: b(y(b, c), c) = b"));
            for m in catalog_round_trips()
                .into_iter()
                .filter(|m| m.map.ends_with(&c.number().to_string()))
            {
                o.record(m.holds, &format!("theorem {t}: {} maps {} to {}", m.map, m.from, m.to));
            }
        }
        "4.1" | "5.1" => {
            let case = if t == "4.1" { CaseId::Case7 } else { CaseId::Case8 };
            let rep = prove_factorization(case).expect("symbolic reduction");
            for claim in &rep.claims {
                o.record(claim.holds, &format!("theorem {t}: {} on curve {}", claim.name, rep.case));
            }
            for cf in &rep.cofactor_coefficients {
                let v = if cf.cofactor.starts_with('Q') { "d" } else { "x" };
                println!("     {} [{v}^{}] = {}", cf.cofactor, cf.degree, cf.coefficient);
            }
        }
        _ => unreachable!("validated by clap"),
    }
}

fn run_verify(a: VerifyArgs) -> ExitCode {
    let mut o = Outcome { failed: false };
    if a.all || a.discriminants {
        verify_discriminants(&mut o);
    }
    if a.all || a.identity17 {
        o.record(
            cuboid_core::coeffs::verify_biquadratic_identity(),
            "identity (2 E11)^2 + (E01^2 + 1 - E10^2)^2 - 8 E01^2 = 0 in Q(b, c)",
        );
    }
    if a.all {
        for t in ["2.1", "2.2", "2.3", "2.4", "3.1", "3.2", "4.1", "5.1"] {
            verify_theorem(&mut o, t);
        }
    } else if let Some(t) = &a.theorem {
        verify_theorem(&mut o, t);
    }
    if o.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_check(a: PointArgs) -> ExitCode {
    let p = ParamPoint::new(a.b, a.c);
    let report = check_candidate(&p);
    if a.json {
        print_json(&CheckOutput {
            schema_version: SCHEMA_VERSION,
            report,
        });
        return ExitCode::SUCCESS;
    }
    print_report(&report);
    ExitCode::SUCCESS
}

fn join(v: &[Rational]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

fn print_report(r: &CuboidReport) {
    println!("{}", r.param);
    println!("verdict: {:?}", r.verdict);
    if r.verdict == Verdict::Degenerate {
        return;
    }
    println!("x roots: {}", join(&r.x_roots));
    println!("d roots: {}", join(&r.d_roots));
    println!("P reducible: {}, Q reducible: {}", r.p_reducible, r.q_reducible);
    if let Some(res) = &r.aux_residuals {
        println!("aux residuals: {}", join(res));
    }
    println!("positivity: {}, geometry: {}", r.positivity, r.geometry_ok);
}

fn run_scan(a: ScanArgs) -> ExitCode {
    let case = a.case.map(|k| CaseId::from_number(k).expect("validated by clap"));
    let points = scan_points(a.grid, case);
    let reports = scan(&points, a.jobs as usize);
    let rows: Vec<ScanRow> = reports.iter().map(ScanRow::from).collect();
    if let Some(path) = &a.csv {
        if let Err(e) = write_csv(path, &rows) {
            eprintln!("error: cannot write csv: {e}");
            return ExitCode::from(2);
        }
    }
    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    for r in &rows {
        println!("b = {}, c = {}: {}", r.b, r.c, r.verdict);
    }
    println!(
        "{} points: {} degenerate, {} irreducible, {} reducible, {} perfect cuboid",
        reports.len(),
        count(Verdict::Degenerate),
        count(Verdict::Irreducible),
        count(Verdict::ReducibleButNotCuboid),
        count(Verdict::PerfectCuboid),
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Coeffs(a) => run_coeffs(a),
        Command::Classify(a) => run_classify(a),
        Command::CurveSearch(a) => run_search(a),
        Command::Verify(a) => run_verify(a),
        Command::Check(a) => run_check(a),
        Command::Scan(a) => run_scan(a),
    }
}
