//! Result tables and their CSV/JSON renderings.
//!
//! Numbers are written as the shortest decimal that parses back to the
//! same `f64` (at most 17 significant digits), so files round-trip exactly
//! and identical runs produce identical bytes.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};
use topospec_core::calculus::QuadratureSpec;

use crate::error::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_number(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            // JSON has no non-finite numbers
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) => Value::Null,
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Column names plus rows of equal length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width differs from header"
        );
        self.rows.push(row);
    }

    /// CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 fields")
    }

    fn rows_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::to_json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e16)`.
pub fn fmt_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// C-style `%.{prec}e`: mantissa with `prec` decimals, signed two-digit
/// exponent (`3e-09`, `1.5e+02`).
pub fn c_exp(x: f64, prec: usize) -> String {
    let s = format!("{x:.prec$e}");
    let Some((mant, exp)) = s.split_once('e') else {
        return s;
    };
    let (sign, digits) = match exp.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exp),
    };
    format!("{mant}e{sign}{digits:0>2}")
}

/// Run metadata carried by JSON output.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub configuration: Option<(String, Vec<(String, f64)>)>,
    pub quadrature: QuadratureSpec,
    pub max_residual: Option<f64>,
    pub flags: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn to_json(task: &str, table: &Table, meta: &Meta) -> String {
    let q = &meta.quadrature;
    let configuration = match &meta.configuration {
        Some((name, params)) => {
            let p: Map<String, Value> = params
                .iter()
                .map(|(k, v)| (k.clone(), Cell::Num(*v).to_json()))
                .collect();
            json!({ "name": name, "params": p })
        }
        None => Value::Null,
    };
    let doc = json!({
        "task": task,
        "rows": table.rows_json(),
        "meta": {
            "version": env!("CARGO_PKG_VERSION"),
            "configuration": configuration,
            "quadrature": {
                "scheme": "gauss_legendre_tensor",
                "points_per_axis": q.points_per_axis,
                "refinement_levels": q.refinement_levels,
                "convergence_tol": q.convergence_tol,
            },
            "max_residual": meta.max_residual.map_or(Value::Null, |r| Cell::Num(r).to_json()),
            "flags": meta.flags,
            "warnings": meta.warnings,
        },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
    s.push('\n');
    s
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.0,
            1.0,
            -2.5,
            1.0 / 3.0,
            std::f64::consts::PI,
            8.0 / 3.0,
            1e-5,
            9.99e-6,
            1e16,
            123456789012345.67,
            -1e-300,
            f64::MAX,
            f64::MIN_POSITIVE,
            5e-324,
        ] {
            let s = fmt_number(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let digits = s
                .split(['e', 'E'])
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() <= 17, "{s}");
        }
        assert_eq!(fmt_number(2.0), "2");
        assert_eq!(fmt_number(1e-7), "1e-7");
        assert_eq!(fmt_number(2e20), "2e20");
    }

    #[test]
    fn c_style_exponent() {
        assert_eq!(c_exp(3e-9, 0), "3e-09");
        assert_eq!(c_exp(2.96e-9, 0), "3e-09");
        assert_eq!(c_exp(150.0, 1), "1.5e+02");
        assert_eq!(c_exp(0.0, 0), "0e+00");
        assert_eq!(c_exp(1e-123, 0), "1e-123");
    }

    fn sample() -> Table {
        let mut t = Table::new(["n", "param_value", "note", "ok"]);
        t.push(vec![1i64.into(), 1.0.into(), "a, b".into(), true.into()]);
        t.push(vec![
            2i64.into(),
            (1.0f64 / 3.0).into(),
            "".into(),
            false.into(),
        ]);
        t
    }

    #[test]
    fn csv_has_header_and_quotes_commas() {
        let s = sample().to_csv();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "n,param_value,note,ok");
        assert_eq!(lines[1], "1,1,\"a, b\",true");
        assert_eq!(lines[2], "2,0.3333333333333333,,false");
    }

    #[test]
    fn csv_parses_back() {
        let s = sample().to_csv();
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert_eq!(rows[1][1].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(&rows[0][2], "a, b");
    }

    #[test]
    fn json_document_shape() {
        let meta = Meta {
            configuration: Some(("monopole".into(), vec![("g".into(), 0.5)])),
            quadrature: QuadratureSpec::default(),
            max_residual: None,
            flags: vec!["NoRoots".into()],
            warnings: vec![],
        };
        let v: Value = serde_json::from_str(&to_json("spectrum", &sample(), &meta)).unwrap();
        assert_eq!(v["task"], "spectrum");
        assert_eq!(v["rows"][0]["note"], "a, b");
        assert_eq!(v["rows"][1]["param_value"].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["meta"]["quadrature"]["points_per_axis"], 64);
        assert_eq!(v["meta"]["configuration"]["params"]["g"], 0.5);
        assert_eq!(v["meta"]["flags"][0], "NoRoots");
        assert!(v["meta"]["version"].is_string());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n1\n").unwrap();
        write_atomic(&p, "a\n2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "a\n2\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        let missing = dir.path().join("nope").join("out.csv");
        assert_eq!(write_atomic(&missing, "x").unwrap_err().exit_code(), 13);
    }
}
