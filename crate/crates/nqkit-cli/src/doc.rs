//! JSON input documents. Every value that is an expression is a string in
//! the expression grammar (or a JSON integer); errors carry the JSON path.

use std::fmt;

use nqkit::nq::{Bundle, SplitNManifold};
use nqkit::{Element, GeneratorTable, Table};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for DocError {}

pub type DResult<T> = Result<T, DocError>;

pub fn err<T>(path: &str, message: impl Into<String>) -> DResult<T> {
    Err(DocError { path: path.to_string(), message: message.into() })
}

/// Attach a path to a kernel error.
pub fn at<T>(path: &str, r: nqkit::Result<T>) -> DResult<T> {
    r.map_err(|e| DocError { path: path.to_string(), message: e.to_string() })
}

pub fn join(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

pub fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

/// A parsed document with the version check done.
#[derive(Debug, Clone)]
pub struct Doc {
    root: Map<String, Value>,
}

impl Doc {
    pub fn parse(text: &str) -> DResult<Doc> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| DocError { path: format!("line {}, column {}", e.line(), e.column()), message: format!("malformed JSON: {e}") })?;
        let Value::Object(root) = v else { return err("$", "the document must be a JSON object") };
        match root.get("format") {
            Some(Value::Number(n)) if n.as_i64() == Some(1) => {}
            Some(other) => return err("$.format", format!("unsupported format {other}; expected 1")),
            None => return err("$.format", "missing \"format\": 1"),
        }
        Ok(Doc { root })
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.root.get(key)
    }

    pub fn require(&self, key: &str) -> DResult<&Value> {
        self.root.get(key).map_or_else(|| err("$", format!("missing field \"{key}\"")), Ok)
    }

    pub fn path(key: &str) -> String {
        format!("$.{key}")
    }

    pub fn strings(&self, key: &str) -> DResult<Vec<String>> {
        match self.get(key) {
            None => Ok(Vec::new()),
            Some(v) => strings(v, &Doc::path(key)),
        }
    }

    pub fn int(&self, key: &str) -> DResult<i64> {
        int(self.require(key)?, &Doc::path(key))
    }

    pub fn string(&self, key: &str) -> DResult<String> {
        Ok(string(self.require(key)?, &Doc::path(key))?.to_string())
    }

    /// `base_vars` followed by the frames of `bundles`.
    pub fn manifold(&self) -> DResult<SplitNManifold> {
        let base = self.strings("base_vars")?;
        let path = Doc::path("bundles");
        let mut bundles = Vec::new();
        for (i, b) in array(self.require("bundles")?, &path)?.iter().enumerate() {
            let p = index(&path, i);
            let o = object(b, &p)?;
            let name = string(field(o, "name", &p)?, &join(&p, "name"))?.to_string();
            let degree = int(field(o, "degree", &p)?, &join(&p, "degree"))? as i32;
            let frame = strings(field(o, "frame", &p)?, &join(&p, "frame"))?;
            bundles.push(Bundle { name, degree, frame });
        }
        at(&path, SplitNManifold::new(base, bundles))
    }

    /// A plain generator table: `generators` as `[name, degree]` pairs after
    /// the degree-0 `base_vars`, or the table of `bundles`.
    pub fn table(&self) -> DResult<Table> {
        if self.get("bundles").is_some() {
            return Ok(self.manifold()?.table().clone());
        }
        let mut entries: Vec<(String, i32)> = self.strings("base_vars")?.into_iter().map(|s| (s, 0)).collect();
        if let Some(g) = self.get("generators") {
            let path = Doc::path("generators");
            for (i, e) in array(g, &path)?.iter().enumerate() {
                let p = index(&path, i);
                let pair = array(e, &p)?;
                if pair.len() != 2 {
                    return err(&p, "a generator is a [name, degree] pair");
                }
                entries.push((string(&pair[0], &p)?.to_string(), int(&pair[1], &p)? as i32));
            }
        }
        at(&Doc::path("generators"), GeneratorTable::new(entries))
    }

    pub fn expr(&self, key: &str, table: &Table) -> DResult<Element> {
        expr(self.require(key)?, &Doc::path(key), table)
    }
}

pub fn object<'a>(v: &'a Value, path: &str) -> DResult<&'a Map<String, Value>> {
    v.as_object().map_or_else(|| err(path, "expected an object"), Ok)
}

pub fn array<'a>(v: &'a Value, path: &str) -> DResult<&'a Vec<Value>> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

pub fn string<'a>(v: &'a Value, path: &str) -> DResult<&'a str> {
    v.as_str().map_or_else(|| err(path, "expected a string"), Ok)
}

pub fn int(v: &Value, path: &str) -> DResult<i64> {
    v.as_i64().map_or_else(|| err(path, "expected an integer"), Ok)
}

pub fn strings(v: &Value, path: &str) -> DResult<Vec<String>> {
    array(v, path)?.iter().enumerate().map(|(i, s)| Ok(string(s, &index(path, i))?.to_string())).collect()
}

pub fn field<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> DResult<&'a Value> {
    o.get(key).map_or_else(|| err(path, format!("missing field \"{key}\"")), Ok)
}

/// An expression: a string in the grammar or an integer.
pub fn expr(v: &Value, path: &str, table: &Table) -> DResult<Element> {
    match v {
        Value::String(s) => at(path, Element::parse(s, table)),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Element::int(table, i)),
            None => err(path, "numbers must be integers; write fractions as strings like \"1/2\""),
        },
        _ => err(path, "expected an expression string"),
    }
}

/// Position of `name` in `names`.
pub fn lookup(name: &str, names: &[String], what: &str, path: &str) -> DResult<usize> {
    names.iter().position(|n| n == name).map_or_else(|| err(path, format!("unknown {what} `{name}`")), Ok)
}

/// `{name: expr}` as a dense vector over `names`; missing entries are zero.
pub fn vector(v: &Value, path: &str, names: &[String], what: &str, table: &Table) -> DResult<Vec<Element>> {
    let mut out = vec![Element::zero(table); names.len()];
    for (k, e) in object(v, path)? {
        let p = join(path, k);
        out[lookup(k, names, what, &p)?] = expr(e, &p, table)?;
    }
    Ok(out)
}

/// `{row: {col: expr}}` as a dense matrix.
pub fn matrix(v: &Value, path: &str, rows: &[String], cols: &[String], what: &str, table: &Table) -> DResult<Vec<Vec<Element>>> {
    let mut out = vec![vec![Element::zero(table); cols.len()]; rows.len()];
    for (k, row) in object(v, path)? {
        let p = join(path, k);
        out[lookup(k, rows, what, &p)?] = vector(row, &p, cols, what, table)?;
    }
    Ok(out)
}

/// `[{"args": [names], "value": V}]` entries.
pub fn entries<'a>(v: &'a Value, path: &str, names: &[String], what: &str) -> DResult<Vec<(Vec<usize>, &'a Value, String)>> {
    let mut out = Vec::new();
    for (i, e) in array(v, path)?.iter().enumerate() {
        let p = index(path, i);
        let o = object(e, &p)?;
        let ap = join(&p, "args");
        let args = strings(field(o, "args", &p)?, &ap)?;
        let idx = args.iter().enumerate().map(|(j, a)| lookup(a, names, what, &index(&ap, j))).collect::<DResult<Vec<_>>>()?;
        out.push((idx, field(o, "value", &p)?, join(&p, "value")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_carry_paths() {
        let e = Doc::parse("{\"format\": 2}").unwrap_err();
        assert_eq!(e.path, "$.format");
        let e = Doc::parse("{\"format\": 1,").unwrap_err();
        assert!(e.path.starts_with("line 1"));
        let d = Doc::parse(r#"{"format": 1, "generators": [["x", 0], ["e", 1]], "q": {"x": "e + "}}"#).unwrap();
        let t = d.table().unwrap();
        let names: Vec<String> = vec!["x".into(), "e".into()];
        let e = vector(d.get("q").unwrap(), "$.q", &names, "generator", &t).unwrap_err();
        assert!(e.path == "$.q.x" && e.message.contains("parse error"), "{e}");
    }
}
