//! JSON documents: ALGEBRA, ELEMENT, ISO and REPORT.
//!
//! Parsing walks a `serde_json::Value` so that schema errors carry a JSON
//! path (`$.engaged[0].J.u[1][0]`). Invariant violations keep the codes of
//! the modules that detect them. Floats are written in shortest round-trip
//! form, so `parse ∘ serialize` is the identity.

use serde_json::{json, Map, Value};

use crate::algebra::{
    AlgebraDescriptor, Block, DivisionRing, Element, FactorDescriptor, HermBlock, SpinBlock,
};
use crate::error::{Error, Result};
use crate::harness::SuiteReport;
use crate::iso::{
    CompositeOrderIso, EngagedPart, FactorJordanMap, FactorOrderIso, JordanIsomorphism, PhiParam,
    ScalarOrderIso,
};
use crate::matrix::QMat;
use crate::quaternion::Quaternion;

/// Collection of suite reports.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportDocument {
    pub passed: bool,
    pub reports: Vec<SuiteReport>,
}

impl ReportDocument {
    pub fn new(reports: Vec<SuiteReport>) -> Self {
        ReportDocument {
            passed: reports.iter().all(|r| r.passed),
            reports,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Algebra(AlgebraDescriptor),
    Element(Element),
    Iso(CompositeOrderIso),
    Report(ReportDocument),
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    obj.as_object()
        .ok_or_else(|| schema(path, "expected an object"))?
        .get(key)
        .ok_or_else(|| schema(path, format!("missing field \"{key}\"")))
}

fn num(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(path, "expected a number"))
}

fn uint(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("$", format!("invalid JSON: {e}")))
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

// ---- algebra ----

pub fn factor_to_value(f: &FactorDescriptor) -> Value {
    match *f {
        FactorDescriptor::Hermitian { n, ring } => {
            json!({"kind": "herm", "n": n, "ring": ring.symbol()})
        }
        FactorDescriptor::Spin { d } => json!({"kind": "spin", "d": d}),
    }
}

fn ring_from(v: &Value, path: &str) -> Result<DivisionRing> {
    match string(v, path)? {
        "R" => Ok(DivisionRing::Real),
        "C" => Ok(DivisionRing::Complex),
        "H" => Ok(DivisionRing::Quaternion),
        other => Err(schema(
            path,
            format!("unknown ring \"{other}\" (expected R, C or H)"),
        )),
    }
}

fn factor_from(v: &Value, path: &str) -> Result<FactorDescriptor> {
    match string(field(v, "kind", path)?, &format!("{path}.kind"))? {
        "herm" => FactorDescriptor::hermitian(
            uint(field(v, "n", path)?, &format!("{path}.n"))?,
            ring_from(field(v, "ring", path)?, &format!("{path}.ring"))?,
        ),
        "spin" => FactorDescriptor::spin(uint(field(v, "d", path)?, &format!("{path}.d"))?),
        other => Err(schema(
            &format!("{path}.kind"),
            format!("unknown factor kind \"{other}\""),
        )),
    }
}

pub fn algebra_to_value(d: &AlgebraDescriptor) -> Value {
    json!({"factors": d.factors().iter().map(factor_to_value).collect::<Vec<_>>()})
}

pub fn algebra_from_value(v: &Value, path: &str) -> Result<AlgebraDescriptor> {
    let list = arr(field(v, "factors", path)?, &format!("{path}.factors"))?;
    let factors = list
        .iter()
        .enumerate()
        .map(|(i, f)| factor_from(f, &format!("{path}.factors[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    AlgebraDescriptor::new(factors)
}

// ---- entries, matrices, blocks ----

fn entry_to_value(q: Quaternion, ring: DivisionRing) -> Value {
    match ring {
        DivisionRing::Real => json!(q.a),
        DivisionRing::Complex => json!([q.a, q.b]),
        DivisionRing::Quaternion => json!([q.a, q.b, q.c, q.d]),
    }
}

fn entry_from(v: &Value, ring: DivisionRing, path: &str) -> Result<Quaternion> {
    if let Some(x) = v.as_f64() {
        return Ok(Quaternion::real(x));
    }
    let parts = arr(v, path)?;
    if parts.len() != ring.dim() {
        return Err(schema(
            path,
            format!(
                "expected {} components for ring {}",
                ring.dim(),
                ring.symbol()
            ),
        ));
    }
    let mut c = [0.0; 4];
    for (k, p) in parts.iter().enumerate() {
        c[k] = num(p, &format!("{path}[{k}]"))?;
    }
    Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
}

fn matrix_to_value(m: &QMat, ring: DivisionRing) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| entry_to_value(m.get(i, j), ring))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn matrix_from(v: &Value, n: usize, ring: DivisionRing, path: &str) -> Result<QMat> {
    let rows = arr(v, path)?;
    if rows.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{path}: expected {n} rows, found {}",
            rows.len()
        )));
    }
    let mut m = QMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let cols = arr(row, &rp)?;
        if cols.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{rp}: expected {n} columns, found {}",
                cols.len()
            )));
        }
        for (j, e) in cols.iter().enumerate() {
            m.set(i, j, entry_from(e, ring, &format!("{rp}[{j}]"))?);
        }
    }
    Ok(m)
}

pub fn block_to_value(b: &Block) -> Value {
    match b {
        Block::Herm(h) => matrix_to_value(h.mat(), h.ring()),
        Block::Spin(s) => json!({"alpha": s.alpha, "v": s.v}),
    }
}

pub fn block_from_value(v: &Value, factor: &FactorDescriptor, path: &str) -> Result<Block> {
    match *factor {
        FactorDescriptor::Hermitian { n, ring } => {
            if v.is_object() {
                return Err(Error::ShapeMismatch(format!(
                    "{path}: expected a {n}x{n} matrix for {factor}"
                )));
            }
            Ok(Block::Herm(HermBlock::new(
                ring,
                matrix_from(v, n, ring, path)?,
            )?))
        }
        FactorDescriptor::Spin { d } => {
            if !v.is_object() {
                return Err(Error::ShapeMismatch(format!(
                    "{path}: expected {{\"alpha\", \"v\"}} for {factor}"
                )));
            }
            let alpha = num(field(v, "alpha", path)?, &format!("{path}.alpha"))?;
            let vp = format!("{path}.v");
            let comps = arr(field(v, "v", path)?, &vp)?
                .iter()
                .enumerate()
                .map(|(i, x)| num(x, &format!("{vp}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            if comps.len() != d {
                return Err(Error::ShapeMismatch(format!(
                    "{vp}: expected {d} components, found {}",
                    comps.len()
                )));
            }
            Ok(Block::Spin(SpinBlock::new(alpha, comps)?))
        }
    }
}

// ---- element ----

pub fn element_to_value(x: &Element) -> Value {
    json!({
        "algebra": algebra_to_value(&x.descriptor()),
        "blocks": x.blocks().iter().map(block_to_value).collect::<Vec<_>>(),
    })
}

pub fn element_from_value(v: &Value, path: &str) -> Result<Element> {
    let d = algebra_from_value(field(v, "algebra", path)?, &format!("{path}.algebra"))?;
    let bp = format!("{path}.blocks");
    let blocks = arr(field(v, "blocks", path)?, &bp)?;
    if blocks.len() != d.factor_count() {
        return Err(Error::ShapeMismatch(format!(
            "{bp}: algebra has {} factors, found {} blocks",
            d.factor_count(),
            blocks.len()
        )));
    }
    let blocks = blocks
        .iter()
        .zip(d.factors())
        .enumerate()
        .map(|(i, (b, f))| block_from_value(b, f, &format!("{bp}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Element::new(blocks)
}

// ---- isomorphisms ----

fn scalar_iso_to_value(s: &ScalarOrderIso) -> Value {
    match s {
        ScalarOrderIso::Phi(t) => json!({"kind": "phi", "t": t.t()}),
        ScalarOrderIso::Pwl(knots) => {
            json!({"kind": "pwl", "knots": knots.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>()})
        }
    }
}

fn scalar_iso_from(v: &Value, path: &str) -> Result<ScalarOrderIso> {
    match string(field(v, "kind", path)?, &format!("{path}.kind"))? {
        "phi" => ScalarOrderIso::phi(num(field(v, "t", path)?, &format!("{path}.t"))?),
        "pwl" => {
            let kp = format!("{path}.knots");
            let knots = arr(field(v, "knots", path)?, &kp)?
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let p = format!("{kp}[{i}]");
                    let pair = arr(k, &p)?;
                    if pair.len() != 2 {
                        return Err(schema(&p, "expected a pair [x, y]"));
                    }
                    Ok((
                        num(&pair[0], &format!("{p}[0]"))?,
                        num(&pair[1], &format!("{p}[1]"))?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            ScalarOrderIso::pwl(knots)
        }
        other => Err(schema(
            &format!("{path}.kind"),
            format!("unknown scalar isomorphism \"{other}\""),
        )),
    }
}

fn jordan_map_to_value(m: &FactorJordanMap) -> Value {
    match m {
        FactorJordanMap::Hermitian { u, ring, conjugate } => {
            json!({"u": matrix_to_value(u, *ring), "tau": if *conjugate { "conj" } else { "id" }})
        }
        FactorJordanMap::Spin { o } => json!({"O": o}),
    }
}

fn jordan_map_from(v: &Value, factor: &FactorDescriptor, path: &str) -> Result<FactorJordanMap> {
    let map = match *factor {
        FactorDescriptor::Hermitian { n, ring } => {
            let u = matrix_from(field(v, "u", path)?, n, ring, &format!("{path}.u"))?;
            let conjugate = match v.get("tau") {
                None => false,
                Some(t) => match string(t, &format!("{path}.tau"))? {
                    "id" => false,
                    "conj" => true,
                    other => {
                        return Err(schema(
                            &format!("{path}.tau"),
                            format!("unknown tau \"{other}\" (expected id or conj)"),
                        ))
                    }
                },
            };
            FactorJordanMap::Hermitian { u, ring, conjugate }
        }
        FactorDescriptor::Spin { d } => {
            let op = format!("{path}.O");
            let rows = arr(field(v, "O", path)?, &op)?;
            if rows.len() != d {
                return Err(Error::ShapeMismatch(format!(
                    "{op}: expected {d} rows, found {}",
                    rows.len()
                )));
            }
            let o = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let rp = format!("{op}[{i}]");
                    let r = arr(r, &rp)?;
                    if r.len() != d {
                        return Err(Error::ShapeMismatch(format!(
                            "{rp}: expected {d} columns, found {}",
                            r.len()
                        )));
                    }
                    r.iter()
                        .enumerate()
                        .map(|(j, x)| num(x, &format!("{rp}[{j}]")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            FactorJordanMap::Spin { o }
        }
    };
    map.validate()?;
    Ok(map)
}

pub fn iso_to_value(iso: &CompositeOrderIso) -> Value {
    let engaged: Vec<Value> = iso
        .engaged()
        .iter()
        .map(|p| {
            json!({
                "match": [p.source, p.target],
                "t": p.iso.t().t(),
                "z": block_to_value(p.iso.z().block(0)),
                "J": jordan_map_to_value(&p.iso.jordan().maps()[0]),
            })
        })
        .collect();
    let mut obj = Map::new();
    obj.insert("source".into(), algebra_to_value(iso.source()));
    if iso.target() != iso.source() {
        obj.insert("target".into(), algebra_to_value(iso.target()));
    }
    obj.insert("sigma".into(), json!(iso.sigma()));
    obj.insert(
        "scalar_isos".into(),
        Value::Array(iso.scalar_isos().iter().map(scalar_iso_to_value).collect()),
    );
    obj.insert("engaged".into(), Value::Array(engaged));
    Value::Object(obj)
}

pub fn iso_from_value(v: &Value, path: &str) -> Result<CompositeOrderIso> {
    let source = algebra_from_value(field(v, "source", path)?, &format!("{path}.source"))?;
    let target = match v.get("target") {
        Some(t) => algebra_from_value(t, &format!("{path}.target"))?,
        None => source.clone(),
    };
    let sp = format!("{path}.sigma");
    let sigma = arr(field(v, "sigma", path)?, &sp)?
        .iter()
        .enumerate()
        .map(|(i, x)| uint(x, &format!("{sp}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let ip = format!("{path}.scalar_isos");
    let scalar_isos = arr(field(v, "scalar_isos", path)?, &ip)?
        .iter()
        .enumerate()
        .map(|(i, s)| scalar_iso_from(s, &format!("{ip}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let ep = format!("{path}.engaged");
    let mut engaged = Vec::new();
    for (k, e) in arr(field(v, "engaged", path)?, &ep)?.iter().enumerate() {
        let p = format!("{ep}[{k}]");
        let mp = format!("{p}.match");
        let m = arr(field(e, "match", &p)?, &mp)?;
        if m.len() != 2 {
            return Err(schema(&mp, "expected [source index, target index]"));
        }
        let (s, t) = (
            uint(&m[0], &format!("{mp}[0]"))?,
            uint(&m[1], &format!("{mp}[1]"))?,
        );
        if s >= source.factor_count() || t >= target.factor_count() {
            return Err(schema(&mp, "factor index out of range"));
        }
        let (sf, tf) = (source.factors()[s], target.factors()[t]);
        if sf != tf {
            return Err(Error::ShapeMismatch(format!(
                "{mp}: {sf} is not matched with an equal factor ({tf})"
            )));
        }
        let phi = PhiParam::new(num(field(e, "t", &p)?, &format!("{p}.t"))?)?;
        let z = Element::new(vec![block_from_value(
            field(e, "z", &p)?,
            &tf,
            &format!("{p}.z"),
        )?])?;
        let j = JordanIsomorphism::single(jordan_map_from(
            field(e, "J", &p)?,
            &sf,
            &format!("{p}.J"),
        )?)?;
        engaged.push(EngagedPart {
            source: s,
            target: t,
            iso: FactorOrderIso::new(phi, z, j)?,
        });
    }
    CompositeOrderIso::new(source, target, sigma, scalar_isos, engaged)
}

// ---- reports ----

pub fn report_to_value(doc: &ReportDocument) -> Value {
    json!({"passed": doc.passed, "reports": doc.reports})
}

pub fn report_from_value(v: &Value, path: &str) -> Result<ReportDocument> {
    let reports: Vec<SuiteReport> = serde_json::from_value(field(v, "reports", path)?.clone())
        .map_err(|e| schema(&format!("{path}.reports"), e.to_string()))?;
    Ok(ReportDocument::new(reports))
}

// ---- documents ----

pub fn document_to_value(doc: &Document) -> Value {
    match doc {
        Document::Algebra(d) => algebra_to_value(d),
        Document::Element(x) => element_to_value(x),
        Document::Iso(i) => iso_to_value(i),
        Document::Report(r) => report_to_value(r),
    }
}

/// Detects the document kind from its top-level keys.
pub fn document_from_value(v: &Value) -> Result<Document> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema("$", "expected an object"))?;
    if obj.contains_key("reports") {
        Ok(Document::Report(report_from_value(v, "$")?))
    } else if obj.contains_key("sigma") || obj.contains_key("engaged") {
        Ok(Document::Iso(iso_from_value(v, "$")?))
    } else if obj.contains_key("blocks") {
        Ok(Document::Element(element_from_value(v, "$")?))
    } else if obj.contains_key("factors") {
        Ok(Document::Algebra(algebra_from_value(v, "$")?))
    } else {
        Err(schema(
            "$",
            "not an ALGEBRA, ELEMENT, ISO or REPORT document",
        ))
    }
}

pub fn parse_document(text: &str) -> Result<Document> {
    document_from_value(&parse_text(text)?)
}

pub fn serialize_document(doc: &Document) -> String {
    to_text(&document_to_value(doc))
}

pub fn parse_algebra(text: &str) -> Result<AlgebraDescriptor> {
    algebra_from_value(&parse_text(text)?, "$")
}

pub fn parse_element(text: &str) -> Result<Element> {
    element_from_value(&parse_text(text)?, "$")
}

pub fn parse_iso(text: &str) -> Result<CompositeOrderIso> {
    iso_from_value(&parse_text(text)?, "$")
}

pub fn serialize_algebra(d: &AlgebraDescriptor) -> String {
    to_text(&algebra_to_value(d))
}

pub fn serialize_element(x: &Element) -> String {
    to_text(&element_to_value(x))
}

pub fn serialize_iso(iso: &CompositeOrderIso) -> String {
    to_text(&iso_to_value(iso))
}

pub fn serialize_reports(doc: &ReportDocument) -> String {
    to_text(&report_to_value(doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_element, ElementClass};
    use crate::harness::random_composite_iso;
    use crate::harness::trial_rng;

    fn mixed() -> AlgebraDescriptor {
        AlgebraDescriptor::new(vec![
            FactorDescriptor::hermitian(1, DivisionRing::Real).unwrap(),
            FactorDescriptor::hermitian(2, DivisionRing::Complex).unwrap(),
            FactorDescriptor::hermitian(2, DivisionRing::Quaternion).unwrap(),
            FactorDescriptor::spin(3).unwrap(),
            FactorDescriptor::hermitian(1, DivisionRing::Real).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn unit_round_trip_is_byte_stable() {
        let d =
            AlgebraDescriptor::single(FactorDescriptor::hermitian(2, DivisionRing::Real).unwrap())
                .unwrap();
        let text = serialize_element(&Element::unit(&d));
        let back = parse_element(&text).unwrap();
        assert_eq!(back, Element::unit(&d));
        assert_eq!(serialize_element(&back), text);
    }

    #[test]
    fn algebra_schema() {
        let d = parse_algebra(
            r#"{"factors":[{"kind":"herm","n":3,"ring":"C"},{"kind":"spin","d":4}]}"#,
        )
        .unwrap();
        assert_eq!(d.to_string(), "Herm(3,C) + Spin(4)");
        assert_eq!(parse_algebra(&serialize_algebra(&d)).unwrap(), d);
        let err = parse_algebra(r#"{"factors":[{"kind":"herm","n":3,"ring":"O"}]}"#).unwrap_err();
        assert_eq!(
            err,
            Error::Schema {
                path: "$.factors[0].ring".into(),
                message: "unknown ring \"O\" (expected R, C or H)".into()
            }
        );
        assert_eq!(parse_algebra("{").unwrap_err().code(), "SCHEMA");
        assert_eq!(
            parse_algebra(r#"{"factors":[{"kind":"spin","d":1}]}"#)
                .unwrap_err()
                .code(),
            "INVALID_DESCRIPTOR"
        );
    }

    #[test]
    fn random_elements_round_trip_exactly() {
        let d = mixed();
        for seed in 0..20 {
            let x = random_element(&d, seed, ElementClass::General).unwrap();
            let text = serialize_element(&x);
            let back = parse_element(&text).unwrap();
            assert_eq!(back, x);
            assert_eq!(serialize_element(&back), text);
        }
    }

    #[test]
    fn element_errors() {
        let shape = r#"{"algebra":{"factors":[{"kind":"herm","n":2,"ring":"R"}]},"blocks":[[[1,0],[0,1],[0,0]]]}"#;
        assert_eq!(parse_element(shape).unwrap_err().code(), "SHAPE_MISMATCH");
        let asym = r#"{"algebra":{"factors":[{"kind":"herm","n":2,"ring":"R"}]},"blocks":[[[1,2],[0,1]]]}"#;
        assert_eq!(parse_element(asym).unwrap_err().code(), "NOT_HERMITIAN");
        let spin =
            r#"{"algebra":{"factors":[{"kind":"spin","d":2}]},"blocks":[{"alpha":1,"v":[1]}]}"#;
        assert_eq!(parse_element(spin).unwrap_err().code(), "SHAPE_MISMATCH");
        let ring =
            r#"{"algebra":{"factors":[{"kind":"herm","n":1,"ring":"C"}]},"blocks":[[[[1,2,3]]]]}"#;
        let err = parse_element(ring).unwrap_err();
        assert_eq!(err.code(), "SCHEMA");
        let count = r#"{"algebra":{"factors":[{"kind":"spin","d":2}]},"blocks":[]}"#;
        assert_eq!(parse_element(count).unwrap_err().code(), "SHAPE_MISMATCH");
    }

    #[test]
    fn iso_round_trip_and_invariants() {
        let d = mixed();
        for seed in 0..5 {
            let iso = random_composite_iso(&d, &d, &mut trial_rng(seed, 0)).unwrap();
            let text = serialize_iso(&iso);
            let back = parse_iso(&text).unwrap();
            assert_eq!(serialize_iso(&back), text);
            let x = random_element(&d, seed, ElementClass::Effect).unwrap();
            let a = iso.apply(&x, crate::iso::Direction::Forward).unwrap();
            let b = back.apply(&x, crate::iso::Direction::Forward).unwrap();
            assert_eq!(a, b);
        }
        let base = r#"{"source":{"factors":[{"kind":"herm","n":2,"ring":"R"}]},"sigma":[],"scalar_isos":[],
            "engaged":[{"match":[0,0],"t":T,"z":[[1,0],[0,1]],"J":{"u":U,"tau":"id"}}]}"#;
        let ok = base.replace("T", "0.5").replace("U", "[[0,1],[1,0]]");
        assert!(parse_iso(&ok).is_ok());
        let bad_t = base.replace("T", "1.5").replace("U", "[[0,1],[1,0]]");
        assert_eq!(parse_iso(&bad_t).unwrap_err().code(), "PHI_PARAM_RANGE");
        let bad_u = base.replace("T", "0.5").replace("U", "[[2,0],[0,1]]");
        assert_eq!(parse_iso(&bad_u).unwrap_err().code(), "NOT_ISOMETRY");
        let conj = ok.replace("\"id\"", "\"conj\"");
        assert!(parse_iso(&conj).is_err());
    }

    #[test]
    fn document_detection() {
        let d = mixed();
        let docs = vec![
            Document::Algebra(d.clone()),
            Document::Element(Element::unit(&d)),
            Document::Iso(CompositeOrderIso::standard(&d)),
        ];
        for doc in docs {
            let text = serialize_document(&doc);
            assert_eq!(parse_document(&text).unwrap(), doc);
        }
        assert_eq!(parse_document("[]").unwrap_err().code(), "SCHEMA");
    }
}
