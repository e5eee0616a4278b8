//! The `stackyring` command line.
//!
//! Every command prints one JSON document. Exit code 0 means success, 1 a
//! validation or computation failure, 2 a usage error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational};
use crate::chowring::{module_decomposition_report, orbifold_ring, BaseRing, BaseVec};
use crate::document::{small, BaseDocument, Diagnostic, FanDocument, HistogramEntry, LoadedFan, RingDocument};
use crate::error::Error;
use crate::inertia::inertia_components;
use crate::lattice::{gale_dual, gerbe_group, verify_gale_exactness, FgAbGroup};
use crate::resolution::{check_support_function, fiber_dimension_check, validate_subdivision, Subdivision};

pub const DEFAULT_HMAX: u64 = 16;

#[derive(Debug, Parser)]
#[command(name = "stackyring", version, about = "Orbifold Chow rings of toric stack bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a fan document and report every problem found.
    Validate { fan: PathBuf },
    /// Gale dual of the map to N and the exactness checks.
    Gale { fan: PathBuf },
    /// Box elements with their cones and ages.
    Box { fan: PathBuf },
    /// Components of the r-th inertia stack.
    Inertia {
        fan: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Per-sector dimensions and degree histograms.
    Sectors {
        fan: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// The full orbifold Chow ring.
    Ring {
        fan: PathBuf,
        #[arg(long)]
        base: Option<PathBuf>,
        /// Write the ring document here and print only a summary.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also verify unit, commutativity, associativity and grading.
        #[arg(long)]
        check: bool,
    },
    /// Ring of a gerbe over the base, banded by the given cyclic factors.
    Gerbe {
        #[arg(long, value_delimiter = ',', required = true)]
        torsion: Vec<i64>,
        #[arg(long)]
        base: Option<PathBuf>,
        /// Twist class as a linear combination of base labels, e.g. `-H`.
        #[arg(long, allow_hyphen_values = true)]
        line_bundle_class: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a refinement: smoothness, a support function and fiber dimensions.
    ResolveCheck {
        coarse: PathBuf,
        refined: PathBuf,
        /// Values of the support function on the new rays.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Option<Vec<i64>>,
        #[arg(long)]
        base: Option<PathBuf>,
    },
}

/// Exit code and the text printed on stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Invalid(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let d = match &e {
            Error::InvalidDocument { pointer, message } => Diagnostic {
                kind: e.kind().into(),
                pointer: pointer.clone(),
                message: message.clone(),
            },
            _ => Diagnostic {
                kind: e.kind().into(),
                pointer: String::new(),
                message: e.to_string(),
            },
        };
        Failure::Invalid(json!({ "error": d }))
    }
}

type CmdResult = std::result::Result<Value, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_fan(path: &Path) -> std::result::Result<LoadedFan, Failure> {
    Ok(FanDocument::parse(&read(path)?)?.load()?)
}

fn load_base(path: Option<&Path>, m: usize) -> std::result::Result<BaseRing, Failure> {
    match path {
        None => Ok(BaseRing::point().with_zero_twists(m)),
        Some(p) => Ok(BaseDocument::parse(&read(p)?)?.to_ring(m)?),
    }
}

fn group_json(g: &FgAbGroup) -> Value {
    json!({ "rank": g.rank(), "torsion": small(g.torsion()), "display": g.to_string() })
}

fn rationals(xs: &[BigRational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

/// Parses `c₁*L₁ + c₂*L₂ ...` over the base labels; a bare number multiplies
/// the unit.
pub fn parse_linear_expression(expr: &str, base: &BaseRing) -> Result<BaseVec, String> {
    let mut out = base.zero();
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty expression".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > start && !s[..i].ends_with(['*', '^']) {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-BigRational::one(), &term[1..]),
            Some(b'+') => (BigRational::one(), &term[1..]),
            _ => (BigRational::one(), term),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in {expr:?}"));
        }
        let (coeff, label) = match body.split_once('*') {
            Some((c, l)) => (parse_rational(c).ok_or_else(|| format!("bad coefficient {c:?}"))?, l),
            None => match parse_rational(body) {
                Some(c) => (c, base.label(0)),
                None => (BigRational::one(), body),
            },
        };
        let k = base.index_of(label).ok_or_else(|| format!("unknown base label {label:?}"))?;
        out[k] += sign * coeff;
    }
    Ok(out)
}

fn validate(path: &Path) -> CmdResult {
    let doc = FanDocument::parse(&read(path)?)?;
    let problems = doc.diagnose();
    if !problems.is_empty() {
        return Err(Failure::Invalid(json!({ "valid": false, "errors": problems })));
    }
    let loaded = doc.load()?;
    let fan = loaded.fan.fan();
    Ok(json!({
        "valid": true,
        "dimension": fan.dim(),
        "rays": fan.n_rays(),
        "max_cones": fan.max_cones().len(),
        "extra": loaded.fan.extra().len(),
        "complete": fan.is_complete(),
        "group": group_json(loaded.fan.group()),
    }))
}

fn gale(path: &Path) -> CmdResult {
    let loaded = load_fan(path)?;
    let beta = loaded.fan.beta();
    let g = gale_dual(&beta)?;
    let report = verify_gale_exactness(&beta, &g)?;
    let columns: Vec<Vec<i64>> = g.beta_vee.image_generators().iter().map(|c| small(c)).collect();
    Ok(json!({
        "dg": group_json(&g.dg),
        "beta_vee": columns,
        "gerbe_group": group_json(&gerbe_group(&beta)?),
        "exact": report.is_exact(),
        "exactness": report,
    }))
}

fn box_elements(path: &Path) -> CmdResult {
    let loaded = load_fan(path)?;
    let items: Vec<Value> = loaded
        .fan
        .box_elements()
        .iter()
        .map(|b| {
            json!({
                "value": small(&loaded.to_input(&b.value)),
                "cone": b.cone.rays(),
                "coefficients": rationals(&b.coeffs),
                "age": format_rational(&b.age),
            })
        })
        .collect();
    Ok(json!({ "count": items.len(), "box": items }))
}

fn inertia(path: &Path, order: usize) -> CmdResult {
    if order == 0 {
        return Err(Failure::Usage("--order must be positive".into()));
    }
    let loaded = load_fan(path)?;
    let comps = inertia_components(&loaded.fan, order)?;
    let items: Vec<Value> = comps
        .iter()
        .map(|c| {
            let tuple: Vec<Vec<i64>> = c.tuple.iter().map(|b| small(&loaded.to_input(&b.value))).collect();
            json!({
                "tuple": tuple,
                "joint_cone": c.joint_cone.rays(),
                "total_age": format_rational(&c.total_age),
                "quotient": {
                    "dimension": c.quotient.fan().dim(),
                    "rays": c.quotient.n_rays(),
                    "group": group_json(c.quotient.group()),
                },
            })
        })
        .collect();
    Ok(json!({ "order": order, "count": items.len(), "components": items }))
}

fn histogram(h: &std::collections::BTreeMap<BigRational, usize>) -> Vec<HistogramEntry> {
    crate::document::histogram_entries(h)
}

fn sectors(path: &Path, base: Option<&Path>) -> CmdResult {
    let loaded = load_fan(path)?;
    let base = load_base(base, loaded.fan.m())?;
    let ring = orbifold_ring(&loaded.fan, &base)?;
    let report = module_decomposition_report(&ring)?;
    let items: Vec<Value> = report
        .sectors
        .iter()
        .map(|s| {
            json!({
                "sector": s.sector,
                "value": small(&loaded.to_input(&s.element.value)),
                "cone": s.element.cone.rays(),
                "age": format_rational(&s.element.age),
                "dimension": s.dimension,
                "histogram": histogram(&s.histogram),
                "quotient_histogram": histogram(&s.quotient_histogram),
                "consistent": s.consistent(),
            })
        })
        .collect();
    Ok(json!({
        "dimension": report.ring_dimension,
        "total": report.total_dimension(),
        "consistent": report.is_consistent(),
        "sectors": items,
    }))
}

fn emit_ring(ring: &crate::chowring::OrbifoldRing, loaded: &LoadedFan, out: Option<&Path>, check: bool) -> CmdResult {
    let doc = RingDocument::from_ring(ring, &|v: &[BigInt]| loaded.to_input(v));
    let structure = check.then(|| ring.verify());
    if let Some(s) = &structure {
        if !s.holds() {
            return Err(Failure::Invalid(json!({ "error": {
                "kind": "StructureViolation",
                "pointer": "",
                "message": "structure constants fail the ring axioms",
            }, "structure": s })));
        }
    }
    match out {
        None => {
            let mut v = serde_json::to_value(&doc).expect("ring document serializes");
            if let Some(s) = structure {
                v["structure"] = json!(s);
            }
            Ok(v)
        }
        Some(p) => {
            let text = serde_json::to_string_pretty(&doc).expect("ring document serializes");
            std::fs::write(p, text + "\n").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            let mut v = json!({
                "dimension": doc.dimension,
                "histogram": doc.histogram,
                "sectors": doc.sectors.len(),
                "written": p.display().to_string(),
            });
            if let Some(s) = structure {
                v["structure"] = json!(s);
            }
            Ok(v)
        }
    }
}

fn ring(path: &Path, base: Option<&Path>, out: Option<&Path>, check: bool) -> CmdResult {
    let loaded = load_fan(path)?;
    let base = load_base(base, loaded.fan.m())?;
    let ring = orbifold_ring(&loaded.fan, &base)?;
    emit_ring(&ring, &loaded, out, check)
}

fn gerbe(torsion: &[i64], base: Option<&Path>, class: Option<&str>, out: Option<&Path>) -> CmdResult {
    if torsion.iter().any(|&q| q < 1) {
        return Err(Failure::Usage("torsion orders must be positive".into()));
    }
    let doc = FanDocument {
        group: crate::document::GroupDocument {
            rank: 0,
            torsion: torsion.to_vec(),
        },
        rays: Vec::new(),
        cones: Vec::new(),
        extra: vec![vec![1; torsion.len()]],
    };
    let loaded = doc.load()?;
    let mut base = load_base(base, 1)?;
    if let Some(expr) = class {
        let c = parse_linear_expression(expr, &base).map_err(|m| {
            Failure::Invalid(json!({ "error": { "kind": "InvalidExpression", "pointer": "", "message": m } }))
        })?;
        base = base.with_twists(vec![c])?;
    }
    let ring = orbifold_ring(&loaded.fan, &base)?;
    emit_ring(&ring, &loaded, out, false)
}

fn resolve_check(coarse: &Path, refined: &Path, h: Option<&[i64]>, base: Option<&Path>, hmax: u64) -> CmdResult {
    let c = load_fan(coarse)?;
    let r = load_fan(refined)?;
    let sub = Subdivision::from_fans(c.fan, r.fan);
    let issues: Vec<String> = validate_subdivision(&sub).iter().map(ToString::to_string).collect();
    if !issues.is_empty() {
        return Err(Failure::Invalid(json!({ "valid": false, "issues": issues })));
    }
    let values = h.map(|v| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    let cert = check_support_function(&sub, values.as_deref(), hmax)?;
    let base = load_base(base, sub.coarse.m())?;
    let dims = fiber_dimension_check(&sub, &base)?;
    let body = json!({
        "valid": dims.equal(),
        "issues": issues,
        "support_function": {
            "h": small(&cert.h),
            "walls_checked": cert.walls_checked,
            "searched": h.is_none(),
            "hmax": hmax,
        },
        "dimensions": dims,
    });
    if dims.equal() {
        Ok(body)
    } else {
        Err(Failure::Invalid(body))
    }
}

fn dispatch(cmd: Command, hmax: u64) -> CmdResult {
    match cmd {
        Command::Validate { fan } => validate(&fan),
        Command::Gale { fan } => gale(&fan),
        Command::Box { fan } => box_elements(&fan),
        Command::Inertia { fan, order } => inertia(&fan, order),
        Command::Sectors { fan, base } => sectors(&fan, base.as_deref()),
        Command::Ring { fan, base, out, check } => ring(&fan, base.as_deref(), out.as_deref(), check),
        Command::Gerbe {
            torsion,
            base,
            line_bundle_class,
            out,
        } => gerbe(&torsion, base.as_deref(), line_bundle_class.as_deref(), out.as_deref()),
        Command::ResolveCheck { coarse, refined, h, base } => {
            resolve_check(&coarse, &refined, h.as_deref(), base.as_deref(), hmax)
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

/// Parses `STACKYRING_HMAX`; `None` means unset.
pub fn parse_hmax(value: Option<&str>) -> Result<u64, String> {
    match value {
        None => Ok(DEFAULT_HMAX),
        Some(s) => match s.trim().parse::<u64>() {
            Ok(h) if h > 0 => Ok(h),
            _ => Err(format!("STACKYRING_HMAX must be a positive integer, got {s:?}")),
        },
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, hmax: u64) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command, hmax) {
        Ok(v) => Outcome {
            code: 0,
            stdout: pretty(&v),
            stderr: String::new(),
        },
        Err(Failure::Invalid(v)) => Outcome {
            code: 1,
            stdout: pretty(&v),
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_traits::Zero;

    #[test]
    fn linear_expressions() {
        let base = BaseRing::projective_space(2);
        assert_eq!(parse_linear_expression("-H", &base).unwrap(), vec![rat(0, 1), rat(-1, 1), rat(0, 1)]);
        assert_eq!(
            parse_linear_expression("2 + 3/2*H - H^2", &base).unwrap(),
            vec![rat(2, 1), rat(3, 2), rat(-1, 1)]
        );
        assert!(parse_linear_expression("K", &base).is_err());
        assert!(parse_linear_expression("H+", &base).is_err());
        assert!(BigRational::zero() == parse_linear_expression("H-H", &base).unwrap()[1]);
    }

    #[test]
    fn hmax_parsing() {
        assert_eq!(parse_hmax(None), Ok(16));
        assert_eq!(parse_hmax(Some("5")), Ok(5));
        assert!(parse_hmax(Some("0")).is_err());
        assert!(parse_hmax(Some("x")).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["stackyring"], 16).code, 2);
        assert_eq!(run(["stackyring", "frobnicate"], 16).code, 2);
        assert_eq!(run(["stackyring", "box", "/nonexistent.json"], 16).code, 2);
        assert_eq!(run(["stackyring", "--help"], 16).code, 0);
    }
}
