//! Command-line front end. Every verb reads a JSON document and writes one;
//! the exit status is 0 on success, 1 on invalid input and 2 when a
//! capability bound is hit or a verdict is undecided.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::error::{bail, Error, Result};
use crate::factor::{FactorOptions, DEFAULT_DEGREE_BOUND};
use crate::field::Field;
use crate::json;
use crate::liecore::dq_lower_bound_check;
use crate::oscillator::{
    build_double_extension, census, classify_nilpotent, decide_isometric, local_criteria, lorentz_data,
    lorentz_frequencies, lorentz_key, phi_ts_isometry, verify_iso_witness, verify_structure, witt1_certify,
    IsoDecision, OscillatorData, TsIsometry, Witt1Verdict,
};
use crate::random;
use crate::skewcanon::{canonical_pair_with, spectral_form};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Oscillator data to the full quadratic Lie algebra.
    Construct,
    /// Series, nilpotency, locality and Witt index report.
    Analyze,
    /// Canonical pair certificate, or verification of a supplied one.
    Canon,
    /// Spectral normal form on an anisotropic-definite space.
    Spectral,
    /// Witness verification or isometric isomorphism decision.
    Iso,
    /// Block classification of a nilpotent skew map.
    ClassifyNilpotent,
    /// Normalized frequency key and form class.
    Lorentz,
    /// Exhaustive enumeration of skew maps over a prime field.
    Census,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "quadlie", version, about = "Exact computations with quadratic Lie algebras and oscillator double extensions")]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    /// `Q` or `Fp:<p>`; overrides the field declared in the input.
    #[arg(long)]
    pub field: Option<String>,
    /// Input document; standard input when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Largest polynomial degree handed to the factorizer over Q.
    #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
    pub mod_degree_bound: usize,
    /// Lifts the census size caps.
    #[arg(long)]
    pub unsafe_size: bool,
}

/// Exit status and output document of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub document: Value,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Validation(_) => "validation",
        Error::Dimension(_) => "dimension",
        Error::Precondition(_) => "precondition",
        Error::Domain(_) => "domain",
        Error::Contract(_) => "contract",
        Error::Degenerate(_) => "degenerate",
        Error::Singular(_) => "singular",
        Error::Capability(_) => "capability",
        Error::Internal(_) => "internal",
    }
}

pub fn error_document(e: &Error) -> Outcome {
    let status = if e.is_capability() { EXIT_UNDECIDED } else { EXIT_INVALID };
    Outcome {
        status,
        document: json::document(None, "error", json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })),
    }
}

fn read_input(cmd: &Command) -> Result<Value> {
    let text = match &cmd.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Validation(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Validation(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("input is not valid JSON: {e}")))
}

fn field_of(cmd: &Command, doc: Option<&Value>) -> Result<Field> {
    if let Some(f) = &cmd.field {
        return f.parse();
    }
    match doc {
        Some(d) if d.get("field").is_some() => json::parse_field(d),
        _ => bail!(Validation, "no field given: pass --field or declare \"field\" in the input"),
    }
}

fn data_input(cmd: &Command) -> Result<(Field, OscillatorData)> {
    let doc = read_input(cmd)?;
    let field = field_of(cmd, Some(&doc))?;
    Ok((field, json::parse_oscillator(Some(field), &doc)?))
}

/// Runs one command; input and output paths are resolved by the caller.
pub fn run(cmd: &Command) -> Outcome {
    match dispatch(cmd) {
        Ok((status, field, kind, body)) => Outcome { status, document: json::document(field, kind, body) },
        Err(e) => error_document(&e),
    }
}

type Dispatched = (i32, Option<Field>, &'static str, Value);

fn dispatch(cmd: &Command) -> Result<Dispatched> {
    let opts = FactorOptions { seed: cmd.seed, degree_bound: cmd.mod_degree_bound };
    match cmd.verb {
        Verb::Construct => {
            let (field, data) = if cmd.input.is_none() && cmd.dim.is_some() {
                let field = field_of(cmd, None)?;
                let mut rng = random::rng(cmd.seed);
                (field, random::random_oscillator(field, cmd.dim.unwrap(), &mut rng))
            } else {
                data_input(cmd)?
            };
            let q = build_double_extension(&data)?;
            let body = json!({
                "data": json::oscillator(&data),
                "dim": q.dim(),
                "algebra": json::lie_algebra(&q.algebra),
                "form": json::matrix(q.form.gram()),
                "quadratic_dimension": q.algebra.quadratic_dimension(),
            });
            Ok((EXIT_OK, Some(field), "quadratic-lie-algebra", body))
        }
        Verb::Analyze => {
            let (field, data) = data_input(cmd)?;
            let q = build_double_extension(&data)?;
            let abelian = q.algebra.is_abelian();
            let structure = verify_structure(&data)?;
            let local = local_criteria(&data)?;
            let witt = witt1_certify(&data)?;
            let bound = if abelian { Value::Null } else {
                let b = dq_lower_bound_check(&q)?;
                json!({ "r": b.r, "bound": b.bound, "dq": b.dq, "holds": b.holds })
            };
            let body = json!({
                "dim": q.dim(),
                "abelian": abelian,
                "solvable": q.algebra.is_solvable(),
                "structure": json::structure_report(&structure),
                "local": json::local_report(&local),
                "witt_index_one": json::witt1_report(&witt),
                "dq_bound": bound,
                "isotropy": json::isotropy_report(&data.space().isotropy_report()?),
            });
            let status = if matches!(witt.verdict, Witt1Verdict::Undecided(_)) { EXIT_UNDECIDED } else { EXIT_OK };
            Ok((status, Some(field), "analysis", body))
        }
        Verb::Canon => {
            let doc = read_input(cmd)?;
            let field = field_of(cmd, Some(&doc))?;
            let data = json::parse_oscillator(Some(field), &doc)?;
            if let Some(cert) = doc.get("certificate") {
                let cp = json::parse_canonical_pair(field, cert)?;
                let valid = cp.basis_change.rows() == data.dim() && cp.verify(data.skew());
                let status = if valid { EXIT_OK } else { EXIT_INVALID };
                return Ok((status, Some(field), "certificate-check", json!({ "valid": valid })));
            }
            let cp = canonical_pair_with(data.skew(), &opts)?;
            let mut body = json::canonical_pair(&cp);
            body["key"] = json::canonical_key(&cp.key()?);
            Ok((EXIT_OK, Some(field), "canonical-pair", body))
        }
        Verb::Spectral => {
            let (field, data) = data_input(cmd)?;
            Ok((EXIT_OK, Some(field), "spectral-form", json::spectral_form(&spectral_form(data.skew())?)))
        }
        Verb::Iso => {
            let doc = read_input(cmd)?;
            let field = field_of(cmd, Some(&doc))?;
            let left = json::parse_oscillator(Some(field), doc.get("left").unwrap_or(&Value::Null))?;
            let right = json::parse_oscillator(Some(field), doc.get("right").unwrap_or(&Value::Null))?;
            if let Some(w) = doc.get("witness") {
                let w = json::parse_witness(field, w)?;
                let v = verify_iso_witness(&left, &right, &w)?;
                return Ok((EXIT_OK, Some(field), "witness-check", json::iso_verdict(&v)));
            }
            let d = decide_isometric(&left, &right)?;
            let status = if matches!(d, IsoDecision::Undecided(_)) { EXIT_UNDECIDED } else { EXIT_OK };
            Ok((status, Some(field), "iso-decision", json::iso_decision(&d)))
        }
        Verb::ClassifyNilpotent => {
            let (field, data) = data_input(cmd)?;
            Ok((EXIT_OK, Some(field), "nilpotent-class", json::nilpotent_class(&classify_nilpotent(&data)?)))
        }
        Verb::Lorentz => lorentz(cmd),
        Verb::Census => {
            let field = field_of(cmd, None)?;
            let Some(dim) = cmd.dim else { bail!(Validation, "census needs --dim") };
            Ok((EXIT_OK, Some(field), "census", json::census(&census(field, dim, cmd.unsafe_size)?)))
        }
    }
}

/// Input: `{"lam": [...], "s": ..., "t": ...}` or oscillator data, with an
/// optional `"compare"` object of the same shape.
fn lorentz(cmd: &Command) -> Result<Dispatched> {
    let doc = read_input(cmd)?;
    let field = field_of(cmd, Some(&doc))?;
    if field != Field::Rational {
        bail!(Domain, "frequency keys are defined over Q");
    }
    let side = |v: &Value| -> Result<(Vec<crate::Elem>, crate::Elem, crate::Elem)> {
        let lam = match v.get("lam") {
            Some(l) => json::parse_vector(field, l)?,
            None => match lorentz_frequencies(&json::parse_oscillator(Some(field), v)?)? {
                Some(l) => l,
                None => bail!(Domain, "data is not in the definite semisimple regime"),
            },
        };
        let t = match v.get("t") {
            Some(t) => json::parse_elem(field, t)?,
            None => field.zero(),
        };
        let s = match v.get("s") {
            Some(s) => json::parse_elem(field, s)?,
            None => field.one(),
        };
        Ok((lam, t, s))
    };
    let (lam, t, s) = side(&doc)?;
    let key = lorentz_key(&lam, &s)?;
    let mut body = json!({ "key": json::lorentz_key(&key) });
    let mut status = EXIT_OK;
    if let Some(other) = doc.get("compare") {
        let (lam2, t2, s2) = side(other)?;
        let key2 = lorentz_key(&lam2, &s2)?;
        body["compare"] = json::lorentz_key(&key2);
        body["same_tuple"] = json!(key.lam == key2.lam);
        if lam == lam2 {
            let r = phi_ts_isometry(&lorentz_data(&lam)?, (&t, &s), (&t2, &s2))?;
            if matches!(r, TsIsometry::Undecided(_)) {
                status = EXIT_UNDECIDED;
            }
            body["form_isometry"] = json::ts_isometry(&r);
        }
    }
    Ok((status, Some(field), "lorentz-key", body))
}

/// Parses arguments, runs the verb and writes the document.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cmd = match Command::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = run(&cmd);
    let text = json::to_string(&outcome.document);
    match &cmd.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    if outcome.status == EXIT_INVALID {
        if let Some(m) = outcome.document.get("error").and_then(|e| e.get("message")) {
            eprintln!("error: {}", m.as_str().unwrap_or_default());
        }
    }
    outcome.status
}
