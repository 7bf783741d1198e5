//! The JSON system file, CSV output and run reports.
//!
//! A system file looks like
//!
//! ```json
//! {
//!   "version": 1,
//!   "points": [[0, 0], [1, 0], [2, 0], "inf"],
//!   "residues": [
//!     [[[0.1, 0], [0, 0]], [[0, 0], [-0.1, 0]]],
//!     [[[0.2, 0], [0, 0]], [[0, 0], [-0.2, 0]]],
//!     [[[0.3, 0], [0, 0]], [[0, 0], [-0.3, 0]]]
//!   ],
//!   "lambda": [0.1, 0.2, 0.3, -0.6]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs (a bare number is real), rationals
//! `[num, den]`. Residues are listed for the finite points only; the one at
//! `∞` is derived. Optional fields and their defaults: `mu` (rounded
//! residue traces), `deg_l` (`−Σμ`), `lines` (the `λ`-eigenlines), `weight`
//! (`αₖ = (k − 1)/(2n)`) and `tolerances`.

use crate::character::TraceCoordinates;
use crate::error::{Error, Result};
use crate::fuchsian::{
    default_lines, ExponentBookkeeping, FuchsianSystem, ParabolicConnection, SpherePoint, Weight,
};
use crate::isomonodromy::{ApparentPoint, FlowResult};
use crate::linalg::{Matrix2, ParabolicLine, C64};
use crate::scalar::parse_decimal;
use crate::Tolerances;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

pub const FORMAT_VERSION: u64 = 1;

const KNOWN_FIELDS: [&str; 9] = [
    "version",
    "points",
    "residues",
    "lambda",
    "mu",
    "deg_l",
    "lines",
    "weight",
    "tolerances",
];

/// A parsed and validated system file.
#[derive(Clone, Debug)]
pub struct SystemFile {
    pub connection: ParabolicConnection,
    pub tolerances: Tolerances,
    /// Optional fields that were absent and filled with defaults.
    pub defaulted: Vec<String>,
}

impl PartialEq for SystemFile {
    fn eq(&self, other: &Self) -> bool {
        self.connection == other.connection && self.tolerances == other.tolerances
    }
}

fn field(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Field {
        path: path.into(),
        message: message.into(),
    }
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| field(path, format!("expected a number, found {v}")))
}

fn complex(v: &Value, path: &str) -> Result<C64> {
    match v {
        Value::Number(_) => Ok(C64::new(number(v, path)?, 0.0)),
        Value::Array(a) if a.len() == 2 => Ok(C64::new(
            number(&a[0], &format!("{path}[0]"))?,
            number(&a[1], &format!("{path}[1]"))?,
        )),
        _ => Err(field(
            path,
            format!("expected a complex number [re, im], found {v}"),
        )),
    }
}

fn array<'a>(v: &'a Value, path: &str, len: Option<usize>) -> Result<&'a Vec<Value>> {
    let a = v
        .as_array()
        .ok_or_else(|| field(path, format!("expected an array, found {v}")))?;
    if let Some(n) = len {
        if a.len() != n {
            return Err(field(
                path,
                format!("expected {n} entries, found {}", a.len()),
            ));
        }
    }
    Ok(a)
}

fn matrix(v: &Value, path: &str) -> Result<Matrix2> {
    let rows = array(v, path, Some(2))?;
    let mut e = [C64::default(); 4];
    for (r, row) in rows.iter().enumerate() {
        let p = format!("{path}[{r}]");
        let cols = array(row, &p, Some(2))?;
        for (c, x) in cols.iter().enumerate() {
            e[2 * r + c] = complex(x, &format!("{p}[{c}]"))?;
        }
    }
    Ok(Matrix2::from_entries(e))
}

fn integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| field(path, format!("expected an integer, found {v}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| field(path, format!("expected an integer, found {v}"))),
        _ => Err(field(path, format!("expected an integer, found {v}"))),
    }
}

fn rational(v: &Value, path: &str) -> Result<BigRational> {
    match v {
        Value::Array(a) if a.len() == 2 => {
            let num = integer(&a[0], &format!("{path}[0]"))?;
            let den = integer(&a[1], &format!("{path}[1]"))?;
            if den.is_zero() {
                return Err(field(path, "zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
        Value::String(s) => {
            parse_decimal(s).ok_or_else(|| field(path, format!("not a decimal: {s:?}")))
        }
        Value::Number(n) => n
            .as_i64()
            .map(|k| BigRational::from_integer(k.into()))
            .or_else(|| parse_decimal(&n.to_string()))
            .ok_or_else(|| field(path, format!("not a rational: {n}"))),
        _ => Err(field(
            path,
            format!("expected a rational [num, den], found {v}"),
        )),
    }
}

fn point(v: &Value, path: &str) -> Result<SpherePoint> {
    match v {
        Value::String(s) if s == "inf" => Ok(SpherePoint::Infinity),
        _ => complex(v, path).map(SpherePoint::Finite),
    }
}

fn parse_tolerances(v: &Value) -> Result<Tolerances> {
    let obj = v
        .as_object()
        .ok_or_else(|| field("tolerances", "expected an object"))?;
    let mut t = Tolerances::default();
    for (k, x) in obj {
        let p = format!("tolerances.{k}");
        let val = number(x, &p)?;
        if !(val > 0.0 && val.is_finite()) {
            return Err(field(p, "must be a positive number"));
        }
        match k.as_str() {
            "integrator" => t.integrator = val,
            "verify" => t.verify = val,
            "spectral" => t.spectral = val,
            _ => return Err(field(p, "unknown tolerance")),
        }
    }
    Ok(t)
}

/// Parses, applies defaults and validates. Syntax errors carry line and
/// column; structural errors carry the field path; invariant violations
/// come back as a validation report.
pub fn parse_system_str(text: &str) -> Result<SystemFile> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = root
        .as_object()
        .ok_or_else(|| field("$", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !KNOWN_FIELDS.contains(&k.as_str())) {
        return Err(field(k.clone(), "unknown field"));
    }
    match obj.get("version").map(|v| v.as_u64()) {
        Some(Some(FORMAT_VERSION)) => {}
        Some(_) => {
            return Err(field(
                "version",
                format!("unsupported version, expected {FORMAT_VERSION}"),
            ))
        }
        None => return Err(field("version", "missing")),
    }
    let get = |k: &str| obj.get(k).filter(|v| !v.is_null());
    let required = |k: &str| get(k).ok_or_else(|| field(k, "missing"));
    let mut defaulted = Vec::new();

    let points = array(required("points")?, "points", None)?
        .iter()
        .enumerate()
        .map(|(i, v)| point(v, &format!("points[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let n_finite = points.iter().filter(|p| !p.is_infinity()).count();
    let residues = array(required("residues")?, "residues", None)?;
    if residues.len() != n_finite {
        return Err(field(
            "residues",
            format!(
                "expected one residue per finite point ({n_finite}), found {}",
                residues.len()
            ),
        ));
    }
    let residues = residues
        .iter()
        .enumerate()
        .map(|(i, v)| matrix(v, &format!("residues[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let system =
        FuchsianSystem::new(points, residues).map_err(|e| field("points", e.to_string()))?;

    let lambda = array(required("lambda")?, "lambda", Some(n))?
        .iter()
        .enumerate()
        .map(|(i, v)| complex(v, &format!("lambda[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let mu: Vec<i64> = match get("mu") {
        Some(v) => array(v, "mu", Some(n))?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_i64().ok_or_else(|| {
                    field(
                        format!("mu[{i}]"),
                        format!("expected an integer, found {x}"),
                    )
                })
            })
            .collect::<Result<_>>()?,
        None => {
            defaulted.push("mu".to_string());
            system
                .residues()
                .iter()
                .map(|a| a.trace().re.round() as i64)
                .collect()
        }
    };
    let deg_l = match get("deg_l") {
        Some(v) => v
            .as_i64()
            .ok_or_else(|| field("deg_l", format!("expected an integer, found {v}")))?,
        None => {
            defaulted.push("deg_l".to_string());
            -mu.iter().sum::<i64>()
        }
    };
    let book = ExponentBookkeeping::new(lambda, mu, deg_l);
    let tolerances = match get("tolerances") {
        Some(v) => parse_tolerances(v)?,
        None => {
            defaulted.push("tolerances".to_string());
            Tolerances::default()
        }
    };
    let lines = match get("lines") {
        Some(v) => array(v, "lines", Some(n))?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let p = format!("lines[{i}]");
                let a = array(x, &p, Some(2))?;
                let (u, w) = (
                    complex(&a[0], &format!("{p}[0]"))?,
                    complex(&a[1], &format!("{p}[1]"))?,
                );
                ParabolicLine::try_new(u, w).ok_or_else(|| field(p, "zero vector"))
            })
            .collect::<Result<Vec<_>>>()?,
        None => {
            defaulted.push("lines".to_string());
            default_lines(&system, &book, tolerances.spectral)
        }
    };
    let weight = match get("weight") {
        Some(v) => Weight::new(
            array(v, "weight", None)?
                .iter()
                .enumerate()
                .map(|(k, x)| rational(x, &format!("weight[{k}]")))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => {
            defaulted.push("weight".to_string());
            Weight::uniform(n)
        }
    };
    let connection = ParabolicConnection::new(system, book, lines, weight);
    connection.validate(tolerances.spectral).into_result()?;
    Ok(SystemFile {
        connection,
        tolerances,
        defaulted,
    })
}

pub fn parse_system_file(path: &Path) -> Result<SystemFile> {
    parse_system_str(&std::fs::read_to_string(path)?)
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

fn matrix_json(m: &Matrix2) -> Value {
    json!([
        [complex_json(m.m[0][0]), complex_json(m.m[0][1])],
        [complex_json(m.m[1][0]), complex_json(m.m[1][1])]
    ])
}

fn int_json(k: &BigInt) -> Value {
    match k.to_i64() {
        Some(v) => json!(v),
        None => json!(k.to_string()),
    }
}

fn point_json(p: &SpherePoint) -> Value {
    match p {
        SpherePoint::Finite(z) => complex_json(*z),
        SpherePoint::Infinity => json!("inf"),
    }
}

/// The canonical form of a connection: every field explicit.
pub fn connection_json(conn: &ParabolicConnection, tolerances: &Tolerances) -> Value {
    let sys = &conn.system;
    json!({
        "version": FORMAT_VERSION,
        "points": sys.points().iter().map(point_json).collect::<Vec<_>>(),
        "residues": sys.finite_residues().iter().map(matrix_json).collect::<Vec<_>>(),
        "lambda": conn.book.lambda.iter().map(|&l| complex_json(l)).collect::<Vec<_>>(),
        "mu": conn.book.mu,
        "deg_l": conn.book.deg_l,
        "lines": conn.lines.iter().map(|l| {
            let v = l.vector();
            json!([complex_json(v[0]), complex_json(v[1])])
        }).collect::<Vec<_>>(),
        "weight": conn.weight.alphas().iter().map(|a| json!([int_json(a.numer()), int_json(a.denom())])).collect::<Vec<_>>(),
        "tolerances": {
            "integrator": tolerances.integrator,
            "verify": tolerances.verify,
            "spectral": tolerances.spectral,
        },
    })
}

/// Canonical serialization; parsing it gives back the same system.
pub fn to_canonical_json(file: &SystemFile) -> String {
    let mut s = serde_json::to_string_pretty(&connection_json(&file.connection, &file.tolerances))
        .expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Fixed-width scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn trace_columns(t: &TraceCoordinates) -> Vec<(String, C64)> {
    t.fricke_coordinates().unwrap_or_else(|| t.entries())
}

/// Flow samples: `s`, the moving pole, trace coordinates, the apparent
/// singularity and the drifts. Fields that are undefined at a sample are
/// left empty.
pub fn write_flow_csv<W: Write>(
    out: W,
    result: &FlowResult,
    moving: usize,
    trajectory: &[ApparentPoint],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let names: Vec<String> = result
        .samples
        .iter()
        .find_map(|s| s.traces.as_ref())
        .map(|t| trace_columns(t).into_iter().map(|(n, _)| n).collect())
        .unwrap_or_default();
    let mut header = vec!["s".to_string(), "t_moving_re".into(), "t_moving_im".into()];
    for n in &names {
        header.push(format!("{n}_re"));
        header.push(format!("{n}_im"));
    }
    header.extend(["y_re", "y_im", "eig_drift", "trace_drift"].map(String::from));
    w.write_record(&header)?;
    for (k, smp) in result.samples.iter().enumerate() {
        let t = smp.state.poles[moving];
        let mut row = vec![fmt_f64(smp.s), fmt_f64(t.re), fmt_f64(t.im)];
        match &smp.traces {
            Some(tr) => {
                for (_, v) in trace_columns(tr) {
                    row.push(fmt_f64(v.re));
                    row.push(fmt_f64(v.im));
                }
            }
            None => row.extend(std::iter::repeat_n(String::new(), 2 * names.len())),
        }
        match trajectory.get(k).and_then(|p| p.y) {
            Some(y) => {
                row.push(fmt_f64(y.re));
                row.push(fmt_f64(y.im));
            }
            None => row.extend([String::new(), String::new()]),
        }
        row.push(fmt_f64(smp.eig_drift));
        row.push(smp.trace_drift.map(fmt_f64).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per trace invariant.
pub fn write_traces_csv<W: Write>(out: W, traces: &TraceCoordinates) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["name", "re", "im"])?;
    for (name, v) in traces.entries() {
        w.write_record([name, fmt_f64(v.re), fmt_f64(v.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per singular point of a Fricke cubic fiber.
pub fn write_singular_csv<W: Write>(out: W, points: &[[C64; 3]], a: &[C64; 4]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "x1_re", "x1_im", "x2_re", "x2_im", "x3_re", "x3_im", "residual",
    ])?;
    for x in points {
        let mut row: Vec<String> = x
            .iter()
            .flat_map(|z| [fmt_f64(z.re), fmt_f64(z.im)])
            .collect();
        row.push(fmt_f64(crate::character::fricke_eval(x, a).norm()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// What a command did, as printed by the command-line front end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the input file, hex.
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub outputs: Value,
    pub diagnostics: Map<String, Value>,
    pub exit_status: i32,
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
  "version": 1,
  "points": [[0, 0], [1, 0], "inf"],
  "residues": [
    [[[0.1, 0], [0, 0]], [[0, 0], [-0.1, 0]]],
    [[[0.2, 0], [1, 0]], [[0, 0], [-0.2, 0]]]
  ],
  "lambda": [0.1, 0.2, 0.3]
}"#;

    #[test]
    fn minimal_file_gets_defaults() {
        let f = parse_system_str(MINIMAL).unwrap();
        assert_eq!(
            f.defaulted,
            ["mu", "deg_l", "tolerances", "lines", "weight"]
        );
        assert_eq!(f.connection.book.mu, vec![0, 0, 0]);
        assert_eq!(f.connection.weight, Weight::uniform(3));
        let again = parse_system_str(&to_canonical_json(&f)).unwrap();
        assert_eq!(again, f);
        assert!(again.defaulted.is_empty());
        assert_eq!(to_canonical_json(&again), to_canonical_json(&f));
    }

    #[test]
    fn syntax_error_is_located() {
        let broken = MINIMAL.replace("\"lambda\"", "lambda");
        match parse_system_str(&broken) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (8, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_errors_have_paths() {
        let bad = MINIMAL.replace("[[0.1, 0], [0, 0]]", "[[0.1, 0], [0, \"x\"]]");
        match parse_system_str(&bad) {
            Err(Error::Field { path, .. }) => assert_eq!(path, "residues[0][0][1][1]"),
            other => panic!("{other:?}"),
        }
        let short = MINIMAL.replace("[0.1, 0.2, 0.3]", "[0.1, 0.2]");
        assert!(
            matches!(parse_system_str(&short), Err(Error::Field { path, .. }) if path == "lambda")
        );
    }

    #[test]
    fn duplicate_pole_names_both_entries() {
        let dup = MINIMAL.replace("[[0, 0], [1, 0], \"inf\"]", "[[0, 0], [0, 0], \"inf\"]");
        let err = parse_system_str(&dup).unwrap_err().to_string();
        assert!(
            err.contains("points[0]") && err.contains("points[1]"),
            "{err}"
        );
    }

    #[test]
    fn exponent_outside_spectrum() {
        let bad = MINIMAL.replace("[0.1, 0.2, 0.3]", "[0.15, 0.2, 0.3]");
        let err = parse_system_str(&bad).unwrap_err().to_string();
        assert!(err.contains("exponent not in spectrum"), "{err}");
    }

    #[test]
    fn traces_csv_of_identity() {
        let t = crate::character::invariant_fingerprint(&crate::character::RepTuple::identity(3));
        let mut buf = Vec::new();
        write_traces_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("name,re,im"));
        for l in lines {
            let cols: Vec<&str> = l.split(',').collect();
            assert_eq!(cols[1].parse::<f64>().unwrap(), 2.0);
        }
    }
}
