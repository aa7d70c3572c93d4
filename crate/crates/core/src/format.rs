//! JSON file formats.
//!
//! * scalar: a string `"p/q"` or `"p"`
//! * element: array of `n` scalars
//! * algebra: `{"name": str, "dim": n, "constants": [[[c^0, .., c^{n-1}] x n] x n]}`
//!   where `constants[i][j][k]` is the coefficient of `e_k` in `e_i e_j`;
//!   wherever an algebra is expected, the string `"builtin:<name>"` or a path
//!   (relative to the referencing file) may be given instead
//! * mapping: `{"terms": [[elem, elem], ..]}` or `{"coeffs": n x n grid}`,
//!   optionally with an `"algebra"` key; a bare element stands for left
//!   multiplication by it
//! * matrix: `{"algebra": .., "rows": m, "cols": m, "entries": grid of mappings}`
//! * system: `{"matrix": matrix, "rhs": [elem, ..]}`
//!
//! Writers emit objects with sorted keys, so output is byte-stable.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebra::{builtin_algebra, validate_algebra, AlgElement, Algebra, StructureConstants, ValidationReport, Violation};
use crate::error::{Error, Result};
use crate::funmatrix::{MapMatrix, QuasidetMatrix};
use crate::linmap::LinMap;
use crate::scalar::{self, Scalar};
use crate::solver::{Classification, LinearSystem, SolveReport};

/// Where relative algebra paths are resolved, and the algebra to assume
/// when an input does not name one.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub base_dir: PathBuf,
    pub default_algebra: Option<Arc<Algebra>>,
}

impl Context {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        Context {
            base_dir: base_dir.into(),
            default_algebra: None,
        }
    }

    fn relative_to(&self, file: &Path) -> Context {
        Context {
            base_dir: file.parent().map(Path::to_path_buf).unwrap_or_default(),
            default_algebra: self.default_algebra.clone(),
        }
    }

    /// Resolves the `"algebra"` key of `obj`, falling back to the default.
    fn algebra_of(&self, obj: &Value) -> Result<Arc<Algebra>> {
        match obj.get("algebra") {
            Some(v) => algebra_from_json(v, self),
            None => self
                .default_algebra
                .clone()
                .ok_or_else(|| Error::Parse("no algebra given".into())),
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing key {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

fn usize_field(obj: &Value, key: &str) -> Result<usize> {
    field(obj, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{key:?} must be a nonnegative integer")))
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => scalar::parse(s),
        other => Err(Error::Parse(format!("scalar must be a string like \"p/q\", found {other}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(scalar::format(s))
}

fn scalars_from_json(v: &Value, len: usize, what: &str) -> Result<Vec<Scalar>> {
    let items = array(v, what)?;
    if items.len() != len {
        return Err(Error::Parse(format!("{what} must have {len} entries, found {}", items.len())));
    }
    items.iter().map(scalar_from_json).collect()
}

fn scalars_to_json(s: &[Scalar]) -> Value {
    Value::Array(s.iter().map(scalar_to_json).collect())
}

/// Parses an algebra object, a `"builtin:<name>"` string, or a file path.
pub fn algebra_from_json(v: &Value, ctx: &Context) -> Result<Arc<Algebra>> {
    match v {
        Value::String(s) => match s.strip_prefix("builtin:") {
            Some(name) => builtin_algebra(name),
            None => {
                let path = ctx.base_dir.join(s);
                algebra_from_json(&read_json(&path)?, &ctx.relative_to(&path))
            }
        },
        Value::Object(_) => {
            let (name, constants) = constants_from_json(v)?;
            Algebra::new(name, constants)
        }
        _ => Err(Error::Parse("algebra must be an object or a string reference".into())),
    }
}

/// Parses the structure constants of an algebra object without validating them.
pub fn constants_from_json(v: &Value) -> Result<(String, StructureConstants)> {
    let name = field(v, "name")?
        .as_str()
        .ok_or_else(|| Error::Parse("\"name\" must be a string".into()))?
        .to_string();
    let dim = usize_field(v, "dim")?;
    if dim == 0 {
        return Err(Error::Parse("\"dim\" must be at least 1".into()));
    }
    let grid = array(field(v, "constants")?, "constants")?;
    if grid.len() != dim {
        return Err(Error::Parse(format!("constants must have {dim} rows, found {}", grid.len())));
    }
    let mut data = Vec::with_capacity(dim * dim * dim);
    for (i, row) in grid.iter().enumerate() {
        let row = array(row, &format!("constants[{i}]"))?;
        if row.len() != dim {
            return Err(Error::Parse(format!("constants[{i}] must have {dim} entries, found {}", row.len())));
        }
        for (j, cell) in row.iter().enumerate() {
            data.extend(scalars_from_json(cell, dim, &format!("constants[{i}][{j}]"))?);
        }
    }
    Ok((name, StructureConstants::new(dim, data)?))
}

/// `"builtin:<name>"` for catalog algebras, otherwise the full object.
pub fn algebra_to_json(alg: &Algebra) -> Value {
    if let Ok(b) = builtin_algebra(alg.name()) {
        if *b == *alg {
            return Value::String(format!("builtin:{}", alg.name()));
        }
    }
    let c = alg.constants();
    let n = c.dim();
    let grid: Vec<Value> = (0..n)
        .map(|i| {
            Value::Array(
                (0..n)
                    .map(|j| Value::Array((0..n).map(|k| scalar_to_json(c.get(i, j, k))).collect()))
                    .collect(),
            )
        })
        .collect();
    json!({"name": alg.name(), "dim": n, "constants": grid})
}

pub fn element_from_json(v: &Value, alg: &Arc<Algebra>) -> Result<AlgElement> {
    AlgElement::new(alg, scalars_from_json(v, alg.dim(), "element")?)
}

pub fn element_to_json(x: &AlgElement) -> Value {
    scalars_to_json(x.coords())
}

/// A bare element, or `{"algebra": .., "coords": [..]}`.
pub fn standalone_element_from_json(v: &Value, ctx: &Context) -> Result<AlgElement> {
    match v {
        Value::Object(_) => element_from_json(field(v, "coords")?, &ctx.algebra_of(v)?),
        _ => {
            let alg = ctx.algebra_of(&Value::Null)?;
            element_from_json(v, &alg)
        }
    }
}

/// Parses a mapping in terms form, coefficient form, or as a bare element
/// (promoted to left multiplication).
pub fn map_from_json(v: &Value, alg: &Arc<Algebra>) -> Result<LinMap> {
    match v {
        Value::Array(_) => Ok(LinMap::left_mul(&element_from_json(v, alg)?)),
        Value::Object(obj) => {
            match (obj.get("terms"), obj.get("coeffs")) {
                (Some(terms), None) => {
                    let terms = array(terms, "terms")?
                        .iter()
                        .map(|t| {
                            let pair = array(t, "term")?;
                            if pair.len() != 2 {
                                return Err(Error::Parse("a term must be a pair [a, b]".into()));
                            }
                            Ok((element_from_json(&pair[0], alg)?, element_from_json(&pair[1], alg)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    LinMap::from_terms(alg, &terms)
                }
                (None, Some(coeffs)) => {
                    let n = alg.dim();
                    let rows = array(coeffs, "coeffs")?;
                    if rows.len() != n {
                        return Err(Error::Parse(format!("coeffs must have {n} rows, found {}", rows.len())));
                    }
                    let rows = rows
                        .iter()
                        .map(|r| scalars_from_json(r, n, "coeffs row"))
                        .collect::<Result<Vec<_>>>()?;
                    LinMap::from_coeff_rows(alg, rows)
                }
                _ => Err(Error::Parse("mapping needs exactly one of \"terms\" or \"coeffs\"".into())),
            }
        }
        _ => Err(Error::Parse("mapping must be an object or an element array".into())),
    }
}

/// A mapping that names its own algebra (or relies on the context default).
pub fn standalone_map_from_json(v: &Value, ctx: &Context) -> Result<LinMap> {
    let alg = ctx.algebra_of(if v.is_object() { v } else { &Value::Null })?;
    map_from_json(v, &alg)
}

fn coeffs_to_json(f: &LinMap) -> Value {
    Value::Array(f.coeff_rows().iter().map(|r| scalars_to_json(r)).collect())
}

pub fn map_to_json(f: &LinMap) -> Value {
    json!({"algebra": algebra_to_json(f.algebra()), "coeffs": coeffs_to_json(f)})
}

pub fn matrix_from_json(v: &Value, ctx: &Context) -> Result<MapMatrix> {
    let alg = ctx.algebra_of(v)?;
    let rows = usize_field(v, "rows")?;
    let cols = usize_field(v, "cols")?;
    let grid = array(field(v, "entries")?, "entries")?;
    if grid.len() != rows {
        return Err(Error::Parse(format!("entries must have {rows} rows, found {}", grid.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for (i, row) in grid.iter().enumerate() {
        let row = array(row, &format!("entries[{i}]"))?;
        if row.len() != cols {
            return Err(Error::Parse(format!("entries[{i}] must have {cols} entries, found {}", row.len())));
        }
        for cell in row {
            if let Some(a) = cell.get("algebra") {
                if *algebra_from_json(a, ctx)? != *alg {
                    return Err(Error::AlgebraMismatch);
                }
            }
            entries.push(map_from_json(cell, &alg)?);
        }
    }
    MapMatrix::new(&alg, rows, cols, entries)
}

pub fn matrix_to_json(m: &MapMatrix) -> Value {
    let entries: Vec<Value> = m
        .to_rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(|f| json!({"coeffs": coeffs_to_json(f)})).collect()))
        .collect();
    json!({
        "algebra": algebra_to_json(m.algebra()),
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": entries,
    })
}

/// Like [`matrix_to_json`], with `null` for undefined quasideterminants.
pub fn quasidet_matrix_to_json(qm: &QuasidetMatrix) -> Value {
    let n = qm.order();
    let entries: Vec<Value> = (0..n)
        .map(|p| {
            Value::Array(
                (0..n)
                    .map(|q| qm.get(p, q).map_or(Value::Null, |f| json!({"coeffs": coeffs_to_json(f)})))
                    .collect(),
            )
        })
        .collect();
    json!({
        "algebra": algebra_to_json(qm.algebra()),
        "rows": n,
        "cols": n,
        "entries": entries,
    })
}

pub fn system_from_json(v: &Value, ctx: &Context) -> Result<LinearSystem> {
    let matrix = matrix_from_json(field(v, "matrix")?, ctx)?;
    let rhs = array(field(v, "rhs")?, "rhs")?
        .iter()
        .map(|b| element_from_json(b, matrix.algebra()))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(matrix, rhs)
}

pub fn vector_to_json(x: &[AlgElement]) -> Value {
    Value::Array(x.iter().map(element_to_json).collect())
}

pub fn report_to_json(r: &SolveReport) -> Value {
    let status = match r.status {
        Classification::Nonsingular => json!({"kind": "nonsingular"}),
        Classification::Singular { rank, nullity } => {
            json!({"kind": "singular", "rank": rank, "nullity": nullity})
        }
    };
    let opt_vec = |x: &Option<Vec<AlgElement>>| x.as_deref().map_or(Value::Null, vector_to_json);
    let mut obj = Map::new();
    obj.insert("method".into(), r.method.as_str().into());
    obj.insert("status".into(), status);
    obj.insert("consistent".into(), r.consistent.into());
    obj.insert("solution".into(), opt_vec(&r.solution));
    obj.insert("particular".into(), opt_vec(&r.particular));
    obj.insert(
        "nullspace".into(),
        Value::Array(r.nullspace.iter().map(|v| scalars_to_json(v)).collect()),
    );
    obj.insert("residual_zero".into(), r.residual_zero.into());
    obj.insert("componentwise_checked".into(), r.componentwise_checked.into());
    obj.insert(
        "methods_agree".into(),
        r.methods_agree.map_or(Value::Null, Value::Bool),
    );
    obj.insert("row_perm".into(), json!(r.row_perm));
    obj.insert("col_perm".into(), json!(r.col_perm));
    Value::Object(obj)
}

pub fn validation_to_json(dim: usize, report: &ValidationReport) -> Value {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| match v {
            Violation::Associativity { i, j, k, p } => json!({"kind": "associativity", "index": [i, j, k, p]}),
            Violation::LeftUnit { i, k } => json!({"kind": "left_unit", "index": [i, k]}),
            Violation::RightUnit { i, k } => json!({"kind": "right_unit", "index": [i, k]}),
        })
        .collect();
    json!({"dim": dim, "ok": report.is_ok(), "violations": violations})
}

/// Validates the constants of an algebra object or reference without
/// constructing the algebra.
pub fn check_algebra_json(v: &Value, ctx: &Context) -> Result<(usize, ValidationReport)> {
    match v {
        Value::String(s) if s.starts_with("builtin:") => {
            let a = algebra_from_json(v, ctx)?;
            Ok((a.dim(), validate_algebra(a.constants())))
        }
        Value::String(s) => {
            let path = ctx.base_dir.join(s);
            check_algebra_json(&read_json(&path)?, &ctx.relative_to(&path))
        }
        _ => {
            let (_, c) = constants_from_json(v)?;
            Ok((c.dim(), validate_algebra(&c)))
        }
    }
}

/// Renders JSON with two-space indentation, keeping elements and coefficient
/// grids (arrays nested at most two deep) on one line.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_leaf(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| is_leaf(x) || matches!(x, Value::Array(inner) if inner.iter().all(is_leaf))),
        _ => false,
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(_) if is_flat(v) => {
            out.push_str(&serde_json::to_string(v).expect("serializable"));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(obj) if obj.is_empty() => out.push_str("{}"),
        Value::Object(obj) => {
            out.push_str("{\n");
            for (i, (k, item)) in obj.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).expect("serializable"));
                out.push_str(": ");
                write_value(item, indent + 1, out);
                out.push_str(if i + 1 < obj.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        leaf => out.push_str(&serde_json::to_string(leaf).expect("serializable")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn ctx() -> Context {
        Context::default()
    }

    #[test]
    fn builtin_reference_round_trip() {
        let q = algebra_from_json(&json!("builtin:quaternion"), &ctx()).unwrap();
        assert_eq!(algebra_to_json(&q), json!("builtin:quaternion"));
        assert!(algebra_from_json(&json!("builtin:nope"), &ctx()).is_err());
    }

    #[test]
    fn inline_algebra_round_trip() {
        let q = builtin_algebra("quaternion").unwrap();
        let mut obj = match algebra_to_json(&q) {
            Value::String(_) => {
                let renamed = Algebra::new("hamilton", q.constants().clone()).unwrap();
                algebra_to_json(&renamed)
            }
            other => other,
        };
        let back = algebra_from_json(&obj, &ctx()).unwrap();
        assert_eq!(*back, *q);
        assert_eq!(back.name(), "hamilton");

        // drop one entry: must be rejected
        obj["constants"][1][2].as_array_mut().unwrap().pop();
        assert!(matches!(algebra_from_json(&obj, &ctx()), Err(Error::Parse(_))));
    }

    #[test]
    fn validating_algebra_files() {
        let v = json!({"name": "idem", "dim": 2, "constants": [[["1","0"],["0","1"]],[["0","1"],["0","1"]]]});
        let (dim, report) = check_algebra_json(&v, &ctx()).unwrap();
        assert_eq!(dim, 2);
        // any unital table generated by one element is associative
        assert!(report.is_ok());
        let v = json!({"name": "golden", "dim": 2, "constants": [[["1","0"],["0","1"]],[["0","1"],["1","1"]]]});
        assert!(check_algebra_json(&v, &ctx()).unwrap().1.is_ok());
        // e_0 e_1 = 2 e_1 breaks the unit
        let v = json!({"name": "bad", "dim": 2, "constants": [[["1","0"],["0","2"]],[["0","1"],["1","0"]]]});
        assert!(!check_algebra_json(&v, &ctx()).unwrap().1.is_ok());
        assert!(matches!(algebra_from_json(&v, &ctx()), Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn mapping_forms() {
        let q = builtin_algebra("quaternion").unwrap();
        let i = json!(["0", "1", "0", "0"]);
        let j = json!(["0", "0", "1", "0"]);
        let from_terms = map_from_json(&json!({"terms": [[i, j]]}), &q).unwrap();
        let mut grid = vec![vec![json!("0"); 4]; 4];
        grid[1][2] = json!("1");
        let from_coeffs = map_from_json(&json!({"coeffs": grid}), &q).unwrap();
        assert_eq!(from_terms, from_coeffs);
        let bare = map_from_json(&json!(["0", "1", "0", "0"]), &q).unwrap();
        assert_eq!(bare, LinMap::left_mul(&AlgElement::basis(&q, 1)));
        assert!(map_from_json(&json!({"terms": [], "coeffs": []}), &q).is_err());
        assert!(map_from_json(&json!({"coeffs": [["1"]]}), &q).is_err());
        assert!(map_from_json(&json!(["1", "2"]), &q).is_err());
        assert!(map_from_json(&json!([1, 0, 0, 0]), &q).is_err());

        let v = map_to_json(&from_terms);
        assert_eq!(standalone_map_from_json(&v, &ctx()).unwrap(), from_terms);
    }

    #[test]
    fn matrix_and_system() {
        let v = json!({
            "algebra": "builtin:field",
            "rows": 2, "cols": 2,
            "entries": [[["1"], ["2"]], [["3"], {"coeffs": [["4"]]}]]
        });
        let m = matrix_from_json(&v, &ctx()).unwrap();
        assert_eq!(*m.get(1, 1).coeff(0, 0), int(4));
        assert_eq!(matrix_from_json(&matrix_to_json(&m), &ctx()).unwrap(), m);

        let sys = system_from_json(&json!({"matrix": v, "rhs": [["5"], ["1/2"]]}), &ctx()).unwrap();
        assert_eq!(sys.rhs()[1].coords(), &[ratio(1, 2)]);

        let ragged = json!({"algebra": "builtin:field", "rows": 2, "cols": 2, "entries": [[["1"], ["2"]], [["3"]]]});
        assert!(matrix_from_json(&ragged, &ctx()).is_err());
        let missing = json!({"rows": 1, "cols": 1, "entries": [[["1"]]]});
        assert!(matrix_from_json(&missing, &ctx()).is_err());
        let mixed = json!({"algebra": "builtin:field", "rows": 1, "cols": 1,
            "entries": [[{"algebra": "builtin:complex", "coeffs": [["1","0"],["0","0"]]}]]});
        assert_eq!(matrix_from_json(&mixed, &ctx()).unwrap_err(), Error::AlgebraMismatch);
    }

    #[test]
    fn text_layout() {
        let v = json!({"b": [["1", "2"], ["3", "4"]], "a": "x", "c": [[["1"]], [["2"]]]});
        assert_eq!(
            to_text(&v),
            "{\n  \"a\": \"x\",\n  \"b\": [[\"1\",\"2\"],[\"3\",\"4\"]],\n  \"c\": [\n    [[\"1\"]],\n    [[\"2\"]]\n  ]\n}\n"
        );
    }
}
