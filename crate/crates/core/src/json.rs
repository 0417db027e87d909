//! JSON encodings of the library types.
//!
//! Scalars are strings (`"a/b"` over Q, residues over F_p); matrices are
//! row-major nested arrays; polynomials list coefficients by ascending
//! degree. The field is declared once per document. Object keys come out
//! sorted, so equal inputs give byte-identical documents.

use serde_json::{json, Map, Value};

use crate::error::{bail, Result};
use crate::field::{Elem, Field, SquareClass};
use crate::linalg::Subspace;
use crate::liecore::{LieAlgebra, QuadraticLieAlgebra};
use crate::matrix::Matrix;
use crate::oscillator::{
    Census, IdealCount, IsoDecision, IsoVerdict, IsoWitness, LocalReport, LorentzKey, NilpotentClass, OscillatorData,
    StructureReport, TsIsometry, Witt1Report, Witt1Verdict,
};
use crate::poly::Poly;
use crate::quadspace::{IsotropyReport, OrthogonalSpace};
use crate::skewcanon::{BlockKind, CanonicalBlock, CanonicalKey, CanonicalPair, OddForm, ResidualPart, SpectralForm};
use crate::VERSION;

pub fn elem(x: &Elem) -> Value {
    Value::String(x.to_string())
}

pub fn vector(v: &[Elem]) -> Value {
    Value::Array(v.iter().map(elem).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| vector(r)).collect())
}

pub fn poly(p: &Poly) -> Value {
    vector(p.coeffs())
}

pub fn square_class(c: &SquareClass) -> Value {
    Value::String(c.to_string())
}

/// Echelon basis vectors as rows.
pub fn subspace(s: &Subspace) -> Value {
    json!({ "dim": s.dim(), "basis": s.basis().iter().map(|v| vector(v)).collect::<Vec<_>>() })
}

/// Wraps a payload with the version and field header.
pub fn document(field: Option<Field>, kind: &str, body: Value) -> Value {
    let mut m = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    m.insert("version".into(), json!(VERSION));
    m.insert("kind".into(), json!(kind));
    if let Some(f) = field {
        m.insert("field".into(), json!(f.to_string()));
    }
    Value::Object(m)
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    match v.get(key) {
        Some(x) => Ok(x),
        None => bail!(Validation, "missing field {key:?}"),
    }
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    match v {
        Value::String(s) => Ok(s),
        _ => bail!(Validation, "{what} must be a string"),
    }
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    match v.as_u64() {
        Some(n) => Ok(n as usize),
        None => bail!(Validation, "{what} must be a nonnegative integer"),
    }
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    match v {
        Value::Array(a) => Ok(a),
        _ => bail!(Validation, "{what} must be an array"),
    }
}

pub fn parse_field(v: &Value) -> Result<Field> {
    as_str(get(v, "field")?, "field")?.parse()
}

pub fn parse_elem(field: Field, v: &Value) -> Result<Elem> {
    match v {
        Value::String(s) => field.parse_elem(s),
        Value::Number(n) => field.parse_elem(&n.to_string()),
        _ => bail!(Validation, "scalar must be a string or an integer"),
    }
}

pub fn parse_vector(field: Field, v: &Value) -> Result<Vec<Elem>> {
    as_array(v, "vector")?.iter().map(|x| parse_elem(field, x)).collect()
}

pub fn parse_matrix(field: Field, v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|r| parse_vector(field, r))
        .collect::<Result<Vec<_>>>()?;
    if rows.is_empty() {
        bail!(Validation, "matrix must have at least one row");
    }
    Matrix::from_rows(field, &rows)
}

pub fn parse_poly(field: Field, v: &Value) -> Result<Poly> {
    Ok(Poly::new(field, parse_vector(field, v)?))
}

pub fn orthogonal_space(s: &OrthogonalSpace) -> Value {
    json!({ "field": s.field().to_string(), "gram": matrix(s.gram()) })
}

pub fn isotropy_report(r: &IsotropyReport) -> Value {
    json!({
        "verdict": r.verdict,
        "witness": r.witness.as_ref().map(|w| vector(w)),
        "witt_index": r.witt_index,
        "anisotropic_dim": r.anisotropic_dim,
        "signature": r.signature,
        "diagonal": vector(&r.diagonal),
    })
}

pub fn oscillator(d: &OscillatorData) -> Value {
    json!({ "field": d.field().to_string(), "gram": matrix(d.gram()), "delta": matrix(d.delta()) })
}

/// Reads `{"gram", "delta"}`; the field comes from `field` or the object.
pub fn parse_oscillator(field: Option<Field>, v: &Value) -> Result<OscillatorData> {
    let field = match field {
        Some(f) => f,
        None => parse_field(v)?,
    };
    OscillatorData::new(parse_matrix(field, get(v, "gram")?)?, parse_matrix(field, get(v, "delta")?)?)
}

pub fn lie_algebra(l: &LieAlgebra) -> Value {
    let brackets: Vec<Value> = l
        .brackets()
        .iter()
        .map(|(i, j, v)| json!({ "i": i, "j": j, "v": vector(v) }))
        .collect();
    json!({ "dim": l.dim(), "brackets": brackets })
}

pub fn parse_lie_algebra(field: Field, v: &Value) -> Result<LieAlgebra> {
    let dim = as_usize(get(v, "dim")?, "dim")?;
    let mut brackets = Vec::new();
    for b in as_array(get(v, "brackets")?, "brackets")? {
        brackets.push((
            as_usize(get(b, "i")?, "i")?,
            as_usize(get(b, "j")?, "j")?,
            parse_vector(field, get(b, "v")?)?,
        ));
    }
    LieAlgebra::new(field, dim, &brackets)
}

pub fn quadratic_algebra(q: &QuadraticLieAlgebra) -> Value {
    json!({ "algebra": lie_algebra(&q.algebra), "form": matrix(q.form.gram()) })
}

pub fn parse_quadratic_algebra(field: Field, v: &Value) -> Result<QuadraticLieAlgebra> {
    let l = parse_lie_algebra(field, get(v, "algebra")?)?;
    QuadraticLieAlgebra::new(l, OrthogonalSpace::new(parse_matrix(field, get(v, "form")?)?)?)
}

fn odd_form_name(f: OddForm) -> &'static str {
    match f {
        OddForm::Raw => "raw",
        OddForm::Standard => "standard",
    }
}

pub fn block(b: &CanonicalBlock) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(b.kind_name()));
    m.insert("size".into(), json!(b.size()));
    m.insert("factor".into(), poly(&b.factor()));
    m.insert("mu_class".into(), b.mu_class().map(square_class).unwrap_or(Value::Null));
    match &b.kind {
        BlockKind::Paired { eigenvalue, .. } => {
            m.insert("eigenvalue".into(), elem(eigenvalue));
        }
        BlockKind::ZeroEven { .. } => {}
        BlockKind::ZeroOdd { mu, form, .. } => {
            m.insert("mu".into(), elem(mu));
            m.insert("form".into(), json!(odd_form_name(*form)));
        }
        BlockKind::Spectral { mu, scale } => {
            m.insert("mu".into(), elem(mu));
            m.insert("scale".into(), elem(scale));
        }
    }
    Value::Object(m)
}

pub fn parse_block(field: Field, v: &Value) -> Result<CanonicalBlock> {
    let kind = as_str(get(v, "kind")?, "kind")?;
    let size = as_usize(get(v, "size")?, "size")?;
    let block = match kind {
        "paired" | "zero_even" if size % 2 == 1 || size == 0 => bail!(Validation, "paired blocks have even size"),
        "paired" => {
            let l = parse_elem(field, get(v, "eigenvalue")?)?;
            if l.is_zero() {
                bail!(Validation, "paired blocks need a nonzero eigenvalue");
            }
            CanonicalBlock::paired(&l, size / 2)
        }
        "zero_even" => CanonicalBlock::zero_even(field, size / 2),
        "zero_odd" => {
            if size % 2 == 0 {
                bail!(Validation, "odd zero blocks have odd size");
            }
            let form = match as_str(get(v, "form")?, "form")? {
                "raw" => OddForm::Raw,
                "standard" => OddForm::Standard,
                other => bail!(Validation, "unknown odd block form {other:?}"),
            };
            let mu = parse_elem(field, get(v, "mu")?)?;
            if mu.is_zero() {
                bail!(Validation, "odd blocks need a nonzero scalar");
            }
            CanonicalBlock::zero_odd((size - 1) / 2, &mu, form)?
        }
        "definite_semisimple" => {
            if size != 2 {
                bail!(Validation, "definite semisimple blocks have size 2");
            }
            CanonicalBlock::spectral(&parse_elem(field, get(v, "mu")?)?, &parse_elem(field, get(v, "scale")?)?)
        }
        other => bail!(Validation, "unknown block kind {other:?}"),
    };
    Ok(block)
}

pub fn residual_part(r: &ResidualPart) -> Value {
    json!({
        "factor": poly(&r.factor),
        "partner": r.partner.as_ref().map(poly),
        "multiplicity": r.multiplicity,
        "dim": r.dim,
        "spectral": r.spectral.as_ref().map(|bs| bs.iter().map(block).collect::<Vec<_>>()),
        "a": matrix(&r.a),
        "b": matrix(&r.b),
    })
}

fn parse_residual(field: Field, v: &Value) -> Result<ResidualPart> {
    let partner = match get(v, "partner")? {
        Value::Null => None,
        p => Some(parse_poly(field, p)?),
    };
    let spectral = match get(v, "spectral")? {
        Value::Null => None,
        s => Some(as_array(s, "spectral")?.iter().map(|b| parse_block(field, b)).collect::<Result<Vec<_>>>()?),
    };
    Ok(ResidualPart {
        factor: parse_poly(field, get(v, "factor")?)?,
        partner,
        multiplicity: as_usize(get(v, "multiplicity")?, "multiplicity")?,
        dim: as_usize(get(v, "dim")?, "dim")?,
        spectral,
        a: parse_matrix(field, get(v, "a")?)?,
        b: parse_matrix(field, get(v, "b")?)?,
    })
}

pub fn canonical_pair(cp: &CanonicalPair) -> Value {
    json!({
        "blocks": cp.blocks.iter().map(block).collect::<Vec<_>>(),
        "basis_change": matrix(&cp.basis_change),
        "residual": cp.residual.iter().map(residual_part).collect::<Vec<_>>(),
    })
}

pub fn parse_canonical_pair(field: Field, v: &Value) -> Result<CanonicalPair> {
    let blocks = as_array(get(v, "blocks")?, "blocks")?
        .iter()
        .map(|b| parse_block(field, b))
        .collect::<Result<Vec<_>>>()?;
    let residual = as_array(get(v, "residual")?, "residual")?
        .iter()
        .map(|r| parse_residual(field, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(CanonicalPair { blocks, basis_change: parse_matrix(field, get(v, "basis_change")?)?, residual })
}

pub fn canonical_key(k: &CanonicalKey) -> Value {
    json!({
        "blocks": k.blocks.iter().map(|b| json!({ "kind": b.kind, "size": b.size, "factor": poly(&b.factor) })).collect::<Vec<_>>(),
        "odd_forms": k.odd_forms.iter().map(|o| json!({
            "n": o.n,
            "multiplicity": o.multiplicity,
            "discriminant": square_class(&o.discriminant),
            "signature": o.signature,
        })).collect::<Vec<_>>(),
        "residual": k.residual.iter().map(|(f, p, d)| json!({
            "factor": poly(f),
            "partner": p.as_ref().map(poly),
            "dim": d,
        })).collect::<Vec<_>>(),
    })
}

pub fn spectral_form(s: &SpectralForm) -> Value {
    json!({
        "a": matrix(&s.a),
        "b": matrix(&s.b),
        "basis_change": matrix(&s.basis_change),
        "zero_dim": s.zero_dim,
        "mus": vector(&s.mus),
        "residual": s.residual.iter().map(|(p, d)| json!({ "factor": poly(p), "dim": d })).collect::<Vec<_>>(),
    })
}

pub fn structure_report(r: &StructureReport) -> Value {
    let series = |s: &[Subspace]| s.iter().map(|x| x.dim()).collect::<Vec<_>>();
    json!({
        "lower_central_dims": series(&r.lower_central),
        "upper_central_dims": series(&r.upper_central),
        "derived_dims": series(&r.derived),
        "lower_central": r.lower_central.iter().map(subspace).collect::<Vec<_>>(),
        "upper_central": r.upper_central.iter().map(subspace).collect::<Vec<_>>(),
        "nilpotent": r.nilpotent,
        "nilpotency_index": r.nilpotency_index,
        "minimal_polynomial": poly(&r.minimal_polynomial),
        "heisenberg_basis": r.heisenberg_basis.as_ref().map(matrix),
        "quadratic_dimension": r.quadratic_dimension,
        "formulas_hold": r.is_consistent(),
        "mismatches": r.mismatches,
    })
}

pub fn nilpotent_class(c: &NilpotentClass) -> Value {
    json!({
        "k": c.k,
        "blocks": c.blocks.iter().map(block).collect::<Vec<_>>(),
        "basis_change": matrix(&c.basis_change),
        "key": canonical_key(&c.key),
        "sizes_admissible": c.sizes_admissible,
        "stated_bounds": c.stated_bounds,
        "chain_bounds": c.chain_bounds,
    })
}

pub fn local_report(r: &LocalReport) -> Value {
    json!({
        "local": r.local,
        "one_dim_ideals": match r.one_dim_ideals {
            IdealCount::Finite(n) => json!(n),
            IdealCount::Infinite => json!("infinite"),
        },
        "split": r.split,
        "centre_dim_one": r.centre_dim_one,
        "invertible": r.invertible,
        "dq_two": r.dq_two,
        "quadratic_dimension": r.quadratic_dimension,
        "forms_span": r.forms_span,
        "criteria_agree": r.agree(),
    })
}

pub fn witness(w: &IsoWitness) -> Value {
    json!({ "f": matrix(&w.f), "z": vector(&w.z), "lambda": elem(&w.lambda), "mu": elem(&w.mu), "nu": elem(&w.nu) })
}

pub fn parse_witness(field: Field, v: &Value) -> Result<IsoWitness> {
    Ok(IsoWitness {
        f: parse_matrix(field, get(v, "f")?)?,
        z: parse_vector(field, get(v, "z")?)?,
        lambda: parse_elem(field, get(v, "lambda")?)?,
        mu: parse_elem(field, get(v, "mu")?)?,
        nu: parse_elem(field, get(v, "nu")?)?,
    })
}

pub fn iso_verdict(v: &IsoVerdict) -> Value {
    match v {
        IsoVerdict::IsometricIsomorphism => json!({ "verdict": "isometric-isomorphism" }),
        IsoVerdict::Isomorphism => json!({ "verdict": "isomorphism" }),
        IsoVerdict::Invalid(r) => json!({ "verdict": "invalid", "reason": r }),
    }
}

pub fn iso_decision(d: &IsoDecision) -> Value {
    match d {
        IsoDecision::Yes(w) => json!({ "decision": "yes", "witness": witness(w) }),
        IsoDecision::No { kind, detail } => json!({ "decision": "no", "invariant": kind, "detail": detail }),
        IsoDecision::Undecided(r) => json!({ "decision": "undecided", "reason": r }),
    }
}

pub fn lorentz_key(k: &LorentzKey) -> Value {
    json!({
        "lam": vector(&k.lam),
        "form_params": k.form_params.as_ref().map(|(t, s)| vector(&[t.clone(), s.clone()])),
    })
}

pub fn ts_isometry(t: &TsIsometry) -> Value {
    match t {
        TsIsometry::Witness { map, nu, scale } => {
            json!({ "verdict": "isometric", "map": matrix(map), "nu": elem(nu), "scale": elem(scale) })
        }
        TsIsometry::ClassLevel { ratio } => json!({ "verdict": "class-level", "ratio": elem(ratio) }),
        TsIsometry::No(r) => json!({ "verdict": "no", "reason": r }),
        TsIsometry::Undecided(r) => json!({ "verdict": "undecided", "reason": r }),
    }
}

pub fn witt1_report(r: &Witt1Report) -> Value {
    let (verdict, reason) = match &r.verdict {
        Witt1Verdict::Certified => ("certified", None),
        Witt1Verdict::NotCertified(s) => ("not-certified", Some(s)),
        Witt1Verdict::Undecided(s) => ("undecided", Some(s)),
    };
    json!({
        "verdict": verdict,
        "reason": reason,
        "formula_level_only": r.formula_level_only,
        "invertible": r.invertible,
        "anisotropic": r.anisotropic,
        "semisimple": r.semisimple,
        "even_factors": r.even_factors,
        "witt_index": r.witt_index,
    })
}

pub fn census(c: &Census) -> Value {
    json!({
        "dim": c.dim,
        "total": c.total,
        "buckets": c.buckets.iter().map(|b| json!({
            "form_discriminant": square_class(&b.form_discriminant),
            "nilpotent": b.nilpotent,
            "key": canonical_key(&b.key),
            "count": b.count,
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewcanon;

    #[test]
    fn canonical_pair_round_trip() {
        let f = Field::Prime(5);
        let b = CanonicalBlock::zero_odd(1, &f.from_i64(2), OddForm::Raw).unwrap();
        let d = OscillatorData::new(b.b.clone(), b.a.clone()).unwrap();
        let cp = skewcanon::canonical_pair(d.skew()).unwrap();
        let v = canonical_pair(&cp);
        let back = parse_canonical_pair(f, &v).unwrap();
        assert_eq!(back, cp);
        assert!(back.verify(d.skew()));
        assert_eq!(to_string(&v), to_string(&canonical_pair(&back)));
    }

    #[test]
    fn oscillator_round_trip() {
        let f = Field::Rational;
        let d = OscillatorData::new(
            Matrix::diagonal(f, &[f.one(), f.from_ratio(1, 2)]),
            Matrix::from_rows(f, &[vec![f.zero(), f.from_ratio(-1, 2)], vec![f.one(), f.zero()]]).unwrap(),
        )
        .unwrap();
        let v = oscillator(&d);
        assert_eq!(v["gram"][1][1], json!("1/2"));
        assert_eq!(parse_oscillator(None, &v).unwrap(), d);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let f = Field::Prime(3);
        assert!(parse_matrix(f, &json!([["1", "2"], ["1"]])).is_err());
        assert!(parse_block(f, &json!({"kind": "zero_odd", "size": 4, "mu": "1", "form": "raw"})).is_err());
        assert!(parse_oscillator(Some(f), &json!({"gram": [["1"]]})).is_err());
    }
}
