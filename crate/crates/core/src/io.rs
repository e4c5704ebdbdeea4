//! Germ documents, command dispatch and result documents.

use crate::algebra::{format_float, decimal_digits, ExactMatrix, NumericScalar, Poly, Scalar, Subspace};
use crate::degeneration::{
    grading_numeric, limit_data, limit_grading, puncture_zero_locus, sector_independence_check, validate_admissibility,
    xi_obstruction, LimitConfig, PunctureGerm, PunctureKind,
};
use crate::error::{Error, Result};
use crate::filtration::{ExtensionShape, HodgeFiltration, WeightFiltration};
use crate::interior::{
    extension_class, interior_zero_locus, is_integral, transversality_check, zero_scan, InteriorGerm, ScanConfig,
};
use crate::mhs::{deligne_bigrading, validate_mhs, validate_polarization, MixedHodgeStructure, PolarizationForm};
use crate::richardson::extrapolate_to_zero;
use crate::roots::CertifiedRoot;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Instant;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GermKind {
    Interior,
    Puncture,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaTerm {
    pub power: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

/// On-disk form of a germ. Filtration steps map an index to generator columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GermDocument {
    pub format_version: u32,
    pub kind: GermKind,
    pub dimension: usize,
    pub basis_labels: Vec<String>,
    pub weight_filtration: BTreeMap<i32, Vec<Vec<i64>>>,
    pub polarization: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_base: Option<BTreeMap<i32, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_infinity: Option<BTreeMap<i32, Vec<Vec<String>>>>,
    #[serde(default)]
    pub gamma: Vec<GammaTerm>,
    pub radius: String,
    pub metadata: Metadata,
}

const TOP_FIELDS: &[&str] = &[
    "format_version",
    "kind",
    "dimension",
    "basis_labels",
    "weight_filtration",
    "polarization",
    "n_matrix",
    "f_base",
    "f_infinity",
    "gamma",
    "radius",
    "metadata",
];

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (k, l) in text.split_inclusive('\n').enumerate() {
        if k + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    text.len()
}

fn unknown_fields(v: &Value) -> Vec<String> {
    let mut out = Vec::new();
    let Some(obj) = v.as_object() else {
        return out;
    };
    for k in obj.keys() {
        if !TOP_FIELDS.contains(&k.as_str()) {
            out.push(format!("{k}: unknown field"));
        }
    }
    if let Some(Value::Object(m)) = obj.get("metadata") {
        for k in m.keys().filter(|k| *k != "name" && *k != "notes") {
            out.push(format!("metadata.{k}: unknown field"));
        }
    }
    if let Some(Value::Array(terms)) = obj.get("gamma") {
        for (i, t) in terms.iter().enumerate() {
            if let Some(m) = t.as_object() {
                for k in m.keys().filter(|k| *k != "power" && *k != "matrix") {
                    out.push(format!("gamma[{i}].{k}: unknown field"));
                }
            }
        }
    }
    out
}

/// Parses and schema-checks a germ document. Strict mode rejects unknown fields.
pub fn parse_germ(text: &str, strict: bool) -> Result<GermDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => Error::Syntax {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        },
        _ => Error::Schema(vec![e.to_string()]),
    })?;
    if strict {
        let unknown = unknown_fields(&value);
        if !unknown.is_empty() {
            return Err(Error::Schema(unknown));
        }
    }
    let doc: GermDocument = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema(vec![format!("{path}: {}", e.into_inner())])
    })?;
    doc.check()?;
    Ok(doc)
}

fn parse_scalar(s: &str, path: &str, errors: &mut Vec<String>) -> Result<Scalar> {
    match s.parse::<Scalar>() {
        Ok(x) => Ok(x),
        Err(Error::NonReducedRational(t)) => Err(Error::NonReducedRational(format!("{path}: {t}"))),
        Err(e) => {
            errors.push(format!("{path}: {e}"));
            Ok(Scalar::zero())
        }
    }
}

fn integer_columns(cols: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
    cols.iter().map(|c| c.iter().map(|&x| Scalar::int(x)).collect()).collect()
}

fn integer_matrix(rows: &[Vec<i64>]) -> ExactMatrix {
    ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect(), &())
        .expect("rectangular after schema check")
}

impl GermDocument {
    /// Structural checks: shapes of all arrays, scalar syntax, and the two-step weight shape.
    pub fn check(&self) -> Result<()> {
        let n = self.dimension;
        let mut errors = Vec::new();
        if self.format_version != FORMAT_VERSION {
            errors.push(format!("format_version: expected {FORMAT_VERSION}, found {}", self.format_version));
        }
        if n < 2 {
            errors.push("dimension: must be at least 2".into());
        }
        if self.basis_labels.len() != n {
            errors.push(format!("basis_labels: expected {n} labels, found {}", self.basis_labels.len()));
        }
        for (k, gens) in &self.weight_filtration {
            for (j, g) in gens.iter().enumerate() {
                if g.len() != n {
                    errors.push(format!("weight_filtration.{k}[{j}]: expected {n} entries"));
                }
            }
        }
        let square = |m: &[Vec<i64>]| m.len() == n && m.iter().all(|r| r.len() == n);
        if !square(&self.polarization) {
            errors.push(format!("polarization: expected a {n} x {n} matrix"));
        }
        match (self.kind, &self.n_matrix, &self.f_base, &self.f_infinity) {
            (GermKind::Interior, None, Some(_), None) => {}
            (GermKind::Interior, _, _, _) => errors.push("interior germs need f_base and no n_matrix or f_infinity".into()),
            (GermKind::Puncture, Some(m), None, Some(_)) => {
                if !square(m) {
                    errors.push(format!("n_matrix: expected a {n} x {n} matrix"));
                }
            }
            (GermKind::Puncture, _, _, _) => errors.push("puncture germs need n_matrix and f_infinity and no f_base".into()),
        }
        let hodge = self.f_base.as_ref().or(self.f_infinity.as_ref());
        let hname = if self.f_base.is_some() { "f_base" } else { "f_infinity" };
        if let Some(h) = hodge {
            for (p, gens) in h {
                for (j, g) in gens.iter().enumerate() {
                    let path = format!("{hname}.{p}[{j}]");
                    if g.len() != n {
                        errors.push(format!("{path}: expected {n} entries"));
                    }
                    for (i, x) in g.iter().enumerate() {
                        parse_scalar(x, &format!("{path}[{i}]"), &mut errors)?;
                    }
                }
            }
        }
        for (t, term) in self.gamma.iter().enumerate() {
            if term.power == 0 {
                errors.push(format!("gamma[{t}].power: must be positive"));
            }
            if term.matrix.len() != n || term.matrix.iter().any(|r| r.len() != n) {
                errors.push(format!("gamma[{t}].matrix: expected a {n} x {n} matrix"));
            }
            for (i, r) in term.matrix.iter().enumerate() {
                for (j, x) in r.iter().enumerate() {
                    parse_scalar(x, &format!("gamma[{t}].matrix[{i}][{j}]"), &mut errors)?;
                }
            }
        }
        match self.radius.parse::<Scalar>() {
            Ok(r) if r.is_real() && r.re().cmp0().is_gt() => {}
            Ok(_) => errors.push("radius: must be a positive rational".into()),
            Err(Error::NonReducedRational(t)) => return Err(Error::NonReducedRational(format!("radius: {t}"))),
            Err(e) => errors.push(format!("radius: {e}")),
        }
        if errors.is_empty() {
            if let Err(e) = self.weight() {
                errors.push(format!("weight_filtration: {e}"));
            } else if let Err(e) = ExtensionShape::new(&self.weight()?) {
                errors.push(format!("weight_filtration: {e}"));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Schema(errors))
        }
    }

    fn weight(&self) -> Result<WeightFiltration<Scalar>> {
        let n = self.dimension;
        let steps = self
            .weight_filtration
            .iter()
            .map(|(k, g)| (*k, Subspace::span(n, &integer_columns(g), &())))
            .collect();
        WeightFiltration::new(n, steps, &())
    }

    fn hodge(&self, steps: &BTreeMap<i32, Vec<Vec<String>>>) -> Result<HodgeFiltration<Scalar>> {
        let n = self.dimension;
        let mut map = BTreeMap::new();
        for (p, gens) in steps {
            let vs: Vec<Vec<Scalar>> = gens
                .iter()
                .map(|g| g.iter().map(|x| x.parse::<Scalar>()).collect::<Result<Vec<_>>>())
                .collect::<Result<_>>()?;
            map.insert(*p, Subspace::span(n, &vs, &()));
        }
        HodgeFiltration::new(n, map, &())
    }

    fn gamma_terms(&self) -> Result<Vec<(usize, ExactMatrix)>> {
        self.gamma
            .iter()
            .map(|t| {
                let rows: Vec<Vec<Scalar>> = t
                    .matrix
                    .iter()
                    .map(|r| r.iter().map(|x| x.parse::<Scalar>()).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                Ok((t.power, ExactMatrix::from_rows(rows, &())?))
            })
            .collect()
    }

    /// Builds the germ; mathematical validation happens in the germ constructors.
    pub fn to_germ(&self) -> Result<Germ> {
        let w = self.weight()?;
        let shape = ExtensionShape::new(&w)?;
        let q = PolarizationForm::new(integer_matrix(&self.polarization), shape.h())?;
        let radius = self.radius.parse::<Scalar>()?.re().clone();
        let name = if self.metadata.name.is_empty() { "germ".to_string() } else { self.metadata.name.clone() };
        match self.kind {
            GermKind::Interior => {
                let f = self.hodge(self.f_base.as_ref().expect("checked"))?;
                Ok(Germ::Interior(InteriorGerm::new(name, shape, q, f, self.gamma_terms()?, radius)?))
            }
            GermKind::Puncture => {
                let f = self.hodge(self.f_infinity.as_ref().expect("checked"))?;
                let n = integer_matrix(self.n_matrix.as_ref().expect("checked"));
                Ok(Germ::Puncture(PunctureGerm::new(name, shape, q, n, f, self.gamma_terms()?, radius)?))
            }
        }
    }

    fn common(shape: &ExtensionShape, q: &PolarizationForm, name: &str, notes: &str) -> Result<Self> {
        let n = shape.dim();
        let w = shape.weight();
        let mut weight_filtration = BTreeMap::new();
        for (k, s) in w.steps() {
            weight_filtration.insert(k, s.basis().iter().map(|v| integer_vector(v)).collect::<Result<Vec<_>>>()?);
        }
        Ok(GermDocument {
            format_version: FORMAT_VERSION,
            kind: GermKind::Interior,
            dimension: n,
            basis_labels: (0..n).map(|i| format!("e{i}")).collect(),
            weight_filtration,
            polarization: (0..n).map(|i| integer_vector(&q.matrix().row(i))).collect::<Result<_>>()?,
            n_matrix: None,
            f_base: None,
            f_infinity: None,
            gamma: vec![],
            radius: String::new(),
            metadata: Metadata {
                name: name.to_string(),
                notes: notes.to_string(),
            },
        })
    }

    pub fn from_interior(g: &InteriorGerm, notes: &str) -> Result<Self> {
        let mut doc = Self::common(g.shape(), g.polarization(), &g.name, notes)?;
        doc.f_base = Some(hodge_steps(g.f_base()));
        doc.gamma = gamma_doc(g.gamma());
        doc.radius = g.radius().to_string();
        Ok(doc)
    }

    pub fn from_puncture(g: &PunctureGerm, notes: &str) -> Result<Self> {
        let mut doc = Self::common(g.shape(), g.polarization(), &g.name, notes)?;
        doc.kind = GermKind::Puncture;
        let n = g.dim();
        doc.n_matrix = Some((0..n).map(|i| integer_vector(&g.monodromy().row(i))).collect::<Result<_>>()?);
        doc.f_infinity = Some(hodge_steps(g.f_infinity()));
        doc.gamma = gamma_doc(g.gamma());
        doc.radius = g.radius().to_string();
        Ok(doc)
    }

    /// Pretty JSON with vectors kept on one line.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_compact(&serde_json::to_value(self).expect("serializable"), 0, &mut out);
        out.push('\n');
        out
    }
}

fn write_compact(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize| "  ".repeat(k);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            let parts: Vec<String> = items.iter().map(|x| serde_json::to_string(x).expect("serializable")).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_compact(x, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(key).expect("serializable"));
                out.push_str(": ");
                write_compact(x, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}

fn integer_vector(v: &[Scalar]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            if !x.is_integer() || !x.is_real() {
                return Err(Error::Precondition(format!("{x} is not an integer")));
            }
            x.re().numer().to_i64().ok_or_else(|| Error::Precondition(format!("{x} is too large")))
        })
        .collect()
}

fn hodge_steps(f: &HodgeFiltration<Scalar>) -> BTreeMap<i32, Vec<Vec<String>>> {
    f.steps()
        .into_iter()
        .filter(|(_, s)| !s.is_full())
        .map(|(p, s)| (p, s.basis().iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect()))
        .collect()
}

fn gamma_doc(gamma: &[(usize, ExactMatrix)]) -> Vec<GammaTerm> {
    gamma
        .iter()
        .map(|(k, m)| GammaTerm {
            power: *k,
            matrix: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum Germ {
    Interior(InteriorGerm),
    Puncture(PunctureGerm),
}

/// `e0 + 1/5 e1` style rendering of a vector in the document basis.
pub fn format_vector(v: &[Scalar], labels: &[String]) -> String {
    let mut out = String::new();
    for (x, label) in v.iter().zip(labels) {
        if x.is_zero() {
            continue;
        }
        let (neg, mag) = if x.is_real() && x.re().cmp0().is_lt() { (true, -x.clone()) } else { (false, x.clone()) };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag == Scalar::one() {
            out.push_str(label);
        } else if mag == Scalar::i() {
            out.push_str(&format!("i {label}"));
        } else if mag.is_real() {
            out.push_str(&format!("{mag} {label}"));
        } else {
            out.push_str(&format!("({mag}) {label}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn scalar_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn float_string(x: &Float, digits: usize) -> String {
    format_float(x, digits)
}

fn numeric_strings(v: &[NumericScalar], digits: usize) -> Vec<Value> {
    v.iter()
        .map(|x| {
            let (re, im) = x.format_parts(digits);
            json!({"re": re, "im": im})
        })
        .collect()
}

fn poly_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn root_value(r: &CertifiedRoot) -> Value {
    json!({
        "center": r.center.to_string(),
        "exact": r.exact,
        "radius": r.radius.to_string(),
        "multiplicity": r.multiplicity,
        "box": r.isolating_box(),
    })
}

/// Configuration shared by all commands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub precision: u32,
    pub radius: Option<Rational>,
    pub point: Option<Scalar>,
    pub ray_x: f64,
    pub schedule_start: f64,
    pub schedule_order: usize,
    pub scan: bool,
    pub scan_resolution: usize,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 256,
            radius: None,
            point: None,
            ray_x: 0.0,
            schedule_start: 4.0,
            schedule_order: 6,
            scan: false,
            scan_resolution: 41,
            timing: true,
        }
    }
}

impl RunConfig {
    pub fn limit(&self) -> LimitConfig {
        LimitConfig {
            x: self.ray_x,
            y0: self.schedule_start,
            order: self.schedule_order,
            precision: self.precision,
        }
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("precision_bits".into(), self.precision.to_string());
        if let Some(r) = &self.radius {
            m.insert("radius".into(), r.to_string());
        }
        if let Some(p) = &self.point {
            m.insert("point".into(), p.to_string());
        }
        m.insert("ray_x".into(), self.ray_x.to_string());
        m.insert("schedule_start".into(), self.schedule_start.to_string());
        m.insert("schedule_order".into(), self.schedule_order.to_string());
        if self.scan {
            m.insert("scan_resolution".into(), self.scan_resolution.to_string());
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Bigrading,
    GradingAt,
    ZeroLocus,
    LimitGrading,
    Classify,
    SampleRay,
    CorpusList,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Bigrading => "bigrading",
            Command::GradingAt => "grading-at",
            Command::ZeroLocus => "zero-locus",
            Command::LimitGrading => "limit-grading",
            Command::Classify => "classify",
            Command::SampleRay => "sample-ray",
            Command::CorpusList => "corpus-list",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub options: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: CommandEcho,
    /// SHA-256 of the input bytes.
    pub germ_digest: String,
    pub precision_bits: u32,
    pub exit_code: i32,
    pub outcome: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorPayload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Exit code for an error: `2` for mathematical outcomes, `1` otherwise.
pub fn exit_code_for(e: &Error) -> i32 {
    if e.is_mathematical() {
        2
    } else {
        1
    }
}

/// Parses `input`, runs `command` and packages the outcome. Never panics on bad input.
pub fn run_command(command: Command, input: &[u8], strict: bool, config: &RunConfig) -> ResultDocument {
    let start = Instant::now();
    let echo = CommandEcho {
        name: command.name().to_string(),
        options: config.echo(),
    };
    let result = if command == Command::CorpusList {
        corpus().map(|c| (json!(c.iter().map(|d| d.metadata.name.clone()).collect::<Vec<_>>()), 0))
    } else {
        std::str::from_utf8(input)
        .map_err(|e| Error::Parse(format!("input is not UTF-8: {e}")))
        .and_then(|text| parse_germ(text, strict))
        .and_then(|doc| {
            let germ = doc.to_germ()?;
            dispatch(command, &doc, &germ, config)
        })
    };
    let (outcome, exit_code, error) = match result {
        Ok((v, code)) => (v, code, None),
        Err(e) => (
            Value::Null,
            exit_code_for(&e),
            Some(ErrorPayload {
                kind: e.kind().to_string(),
                message: e.to_string(),
            }),
        ),
    };
    ResultDocument {
        command: echo,
        germ_digest: digest(input),
        precision_bits: config.precision,
        exit_code,
        outcome,
        error,
        timing_ms: config.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    }
}

fn dispatch(command: Command, doc: &GermDocument, germ: &Germ, config: &RunConfig) -> Result<(Value, i32)> {
    let labels = &doc.basis_labels;
    let digits = decimal_digits(config.precision);
    match (command, germ) {
        (Command::Validate, Germ::Interior(g)) => {
            let mhs = validate_mhs(g.f_base(), &g.shape().weight())?;
            let pol = validate_polarization(g.f_base(), g.shape().h(), g.polarization())?;
            let tr = transversality_check(g)?;
            Ok((json!({"kind": "interior", "mhs": mhs, "polarization": pol, "transversality": tr, "gamma_in_chart": true}), 0))
        }
        (Command::Validate, Germ::Puncture(g)) => match validate_admissibility(g) {
            Ok(a) => {
                let m: BTreeMap<i32, Vec<String>> = a
                    .relative
                    .m
                    .steps()
                    .into_iter()
                    .map(|(k, s)| (k, s.basis().iter().map(|v| format_vector(v, labels)).collect()))
                    .collect();
                Ok((
                    json!({"kind": "puncture", "admissible": true, "relative_weight": m, "lift": format_vector(&a.relative.lift, labels)}),
                    0,
                ))
            }
            Err(Error::NonAdmissible(reason)) => Ok((json!({"kind": "puncture", "admissible": false, "reason": reason}), 2)),
            Err(e) => Err(e),
        },
        (Command::Bigrading, _) => {
            let (mhs, delta) = match germ {
                Germ::Interior(g) => (MixedHodgeStructure::new(g.f_base().clone(), g.shape().weight())?, None),
                Germ::Puncture(g) => {
                    let a = validate_admissibility(g)?;
                    let d = limit_data(g)?;
                    (a.limit_mhs, Some(d.delta))
                }
            };
            let b = deligne_bigrading(&mhs)?;
            let pieces: Vec<Value> = b
                .pieces()
                .iter()
                .filter(|(_, s)| !s.is_zero())
                .map(|((p, q), s)| json!({"p": p, "q": q, "basis": s.basis().iter().map(|v| format_vector(v, labels)).collect::<Vec<_>>()}))
                .collect();
            let mut out = json!({"pieces": pieces, "real_split": b.is_real_split()});
            if let Some(d) = delta {
                out["delta"] = json!(matrix_strings(&d));
            }
            Ok((out, 0))
        }
        (Command::GradingAt, Germ::Interior(g)) => {
            let s = config.point.clone().unwrap_or_else(Scalar::zero);
            let y = g.grading_at(&s)?;
            let lift = g.shape().lift_of(y.matrix());
            let class = extension_class(g, &s, None)?;
            Ok((
                json!({
                    "point": s.to_string(),
                    "lift": format_vector(&lift, labels),
                    "coordinates": scalar_strings(&g.shape().coordinates(&lift)),
                    "integral": is_integral(g.shape(), &y),
                    "extension_class": class,
                }),
                0,
            ))
        }
        (Command::GradingAt, Germ::Puncture(g)) => {
            let z = config.point.clone().ok_or_else(|| Error::Precondition("grading-at on a puncture germ needs --point z".into()))?;
            let zn = NumericScalar::new(z.to_complex(config.precision));
            let (_, t, cond) = grading_numeric(g, &zn)?;
            Ok((
                json!({"point": z.to_string(), "coordinates": numeric_strings(&t, digits), "condition": cond}),
                0,
            ))
        }
        (Command::ZeroLocus, Germ::Interior(g)) | (Command::Classify, Germ::Interior(g)) => {
            let r = config.radius.clone().unwrap_or_else(|| g.radius().clone());
            let d = interior_zero_locus(g, &r)?;
            let mut out = json!({
                "kind": d.kind,
                "roots": d.roots.iter().map(root_value).collect::<Vec<_>>(),
                "radius": d.radius.to_string(),
                "certified_radius": d.certified_radius.to_string(),
                "equation": d.equation.as_ref().map(poly_strings),
            });
            if config.scan && command == Command::ZeroLocus {
                let sc = ScanConfig {
                    resolution: config.scan_resolution,
                    precision: config.precision,
                    ..ScanConfig::default()
                };
                let report = zero_scan(g, r.to_f64(), &sc)?;
                out["scan"] = json!({"everywhere": report.everywhere, "samples": report.samples.len(), "candidates": report.candidates});
            }
            Ok((out, 0))
        }
        (Command::ZeroLocus, Germ::Puncture(g)) | (Command::Classify, Germ::Puncture(g)) => {
            let r = config.radius.clone().unwrap_or_else(|| g.radius().clone());
            let c = puncture_zero_locus(g, &r, &config.limit())?;
            let roots: Vec<Value> = match &c.kind {
                PunctureKind::NoAccumulation(rs) => rs.iter().map(root_value).collect(),
                _ => vec![],
            };
            let mut out = json!({
                "kind": c.kind.label(),
                "roots": roots,
                "diagnostics": c.diagnostics,
                "equation": c.equation.as_ref().map(poly_strings),
            });
            let code = if let PunctureKind::NonAdmissible(reason) = &c.kind {
                out["reason"] = json!(reason);
                2
            } else {
                0
            };
            Ok((out, code))
        }
        (Command::LimitGrading, Germ::Puncture(g)) => {
            let d = limit_data(g)?;
            let l = limit_grading(g, &d, &config.limit())?;
            let ob = xi_obstruction(g, &d, &l);
            let coords: Vec<String> = l.coordinates.iter().map(|c| float_string(c, digits)).collect();
            let shape = g.shape();
            let sector = sector_independence_check(g, &d, config.ray_x, config.ray_x + 0.5, &config.limit())?;
            Ok((
                json!({
                    "coordinates": coords,
                    "error_estimate": l.error,
                    "exact": l.exact.as_ref().map(|t| format_vector(&shape.lift_from_coordinates(t), labels)),
                    "y_hat": format_vector(&shape.lift_of(d.y_hat.matrix()), labels),
                    "y_infinity": format_vector(&shape.lift_of(d.y_infinity.matrix()), labels),
                    "delta": matrix_strings(&d.delta),
                    "h_operator": matrix_strings(&d.h_operator),
                    "f_o": d.f_o.steps().iter().filter(|(_, s)| !s.is_full()).map(|(p, s)| (p.to_string(), s.basis().iter().map(|v| format_vector(v, labels)).collect::<Vec<_>>())).collect::<BTreeMap<_, _>>(),
                    "obstruction_zero": ob.is_zero(),
                    "obstruction_norm": ob.norm(),
                    "lattice_distance": l.lattice_distance(),
                    "sector": sector,
                }),
                0,
            ))
        }
        (Command::SampleRay, Germ::Puncture(g)) => {
            let csv = emit_ray_trace(g, &config.limit())?;
            Ok((json!({"rows": csv.lines().count() - 1, "csv": csv}), 0))
        }
        (Command::LimitGrading, Germ::Interior(_)) | (Command::SampleRay, Germ::Interior(_)) => {
            Err(Error::Precondition(format!("{} needs a puncture germ", command.name())))
        }
        (Command::CorpusList, _) => unreachable!("handled before parsing"),
    }
}

fn matrix_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| scalar_strings(&m.row(i))).collect()
}

/// CSV trace of `Y(x + iy)` along the schedule, with running extrapolations.
pub fn emit_ray_trace(germ: &PunctureGerm, config: &LimitConfig) -> Result<String> {
    validate_admissibility(germ)?;
    let prec = config.precision;
    let digits = decimal_digits(prec);
    let ys = config.schedule();
    let m = germ.shape().h_basis().len();
    let mut header = vec!["y".to_string(), "x".to_string()];
    for j in 1..=m {
        header.push(format!("t{j}_re"));
        header.push(format!("t{j}_im"));
    }
    header.push("distance".into());
    for j in 1..=m {
        header.push(format!("extrapolated_t{j}"));
    }
    let mut out = header.join(",");
    out.push('\n');
    let samples = crate::degeneration::sample_ray(germ, config.x, &ys, prec)?;
    let hs: Vec<Float> = ys.iter().map(|y| Float::with_val(prec, 1.0 / y)).collect();
    let values: Vec<Vec<Float>> = samples.iter().map(|(_, t)| t.iter().map(|c| c.re().clone()).collect()).collect();
    for (k, (y, t)) in samples.iter().enumerate() {
        let mut row = vec![y.to_string(), config.x.to_string()];
        let mut dist = Float::new(prec);
        for c in t {
            let (re, im) = c.format_parts(digits);
            row.push(re);
            row.push(im);
            let r = c.re();
            let frac = Float::with_val(prec, r - Float::with_val(prec, r.round_ref())).abs();
            let im_abs = Float::with_val(prec, c.im().abs_ref());
            dist = dist.max(&frac).max(&im_abs);
        }
        row.push(float_string(&dist, digits));
        // diagonal entry of the tableau built from the first k + 1 samples
        let ext = extrapolate_to_zero(&hs[..=k], &values[..=k], 0.0).map(|e| e.value).unwrap_or_else(|_| values[k].clone());
        for v in ext {
            row.push(float_string(&v, digits));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// The built-in germs as documents, in corpus order.
pub fn corpus() -> Result<Vec<GermDocument>> {
    use crate::fixtures::*;
    Ok(vec![
        GermDocument::from_interior(&fix_a(), "isolated zeros at 2s in Z + iZ")?,
        GermDocument::from_interior(&fix_a_shifted(), "center is not a zero")?,
        GermDocument::from_interior(&fix_e(), "constant variation")?,
        GermDocument::from_interior(&level_three()?, "fails Griffiths transversality")?,
        GermDocument::from_puncture(&fix_b(), "R-split limit")?,
        GermDocument::from_puncture(&fix_b_trivial(), "trivial extension")?,
        GermDocument::from_puncture(&fix_c(), "non-split limit with nonzero obstruction")?,
        GermDocument::from_puncture(&fix_d(), "no relative weight filtration")?,
        GermDocument::from_puncture(&fix_a_puncture(), "trivial monodromy")?,
    ])
}
