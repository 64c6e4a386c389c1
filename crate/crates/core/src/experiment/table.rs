use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::Result;

/// Prefix of the line appended when a sweep stops early.
pub const TRUNCATION_MARKER: &str = "# TRUNCATED";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Complex(Complex64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<Complex64> for Value {
    fn from(v: Complex64) -> Self {
        Value::Complex(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Empty, Into::into)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v:e}"),
            Value::Complex(z) => write!(f, "{:e}{:+e}i", z.re, z.im),
            Value::Text(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Empty => Ok(()),
        }
    }
}

/// Column of a [`Table`]; complex columns expand to `<name>_re` and
/// `<name>_im` in the CSV header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub complex: bool,
}

pub fn col(name: &str) -> Column {
    Column {
        name: name.to_string(),
        complex: false,
    }
}

pub fn ccol(name: &str) -> Column {
    Column {
        name: name.to_string(),
        complex: true,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> Vec<String> {
        self.columns
            .iter()
            .flat_map(|c| {
                if c.complex {
                    vec![format!("{}_re", c.name), format!("{}_im", c.name)]
                } else {
                    vec![c.name.clone()]
                }
            })
            .collect()
    }

    /// Index of a logical column.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn get(&self, row: usize, name: &str) -> Option<&Value> {
        self.rows.get(row)?.get(self.position(name)?)
    }

    fn cells(&self, row: &[Value]) -> Vec<String> {
        let mut out = Vec::new();
        for (column, value) in self.columns.iter().zip(row) {
            match (column.complex, value) {
                (true, Value::Complex(z)) => {
                    out.push(format!("{:e}", z.re));
                    out.push(format!("{:e}", z.im));
                }
                (true, Value::Float(x)) => {
                    out.push(format!("{x:e}"));
                    out.push(format!("{:e}", 0.0));
                }
                (true, _) => {
                    out.push(String::new());
                    out.push(String::new());
                }
                (false, v) => out.push(v.to_string()),
            }
        }
        out
    }
}

/// Writes `table` to `path`: header first, rows in order, RFC-4180 quoting.
/// A `truncation` note adds a final marker line after the rows.
pub fn emit_csv(table: &Table, path: &Path, truncation: Option<&str>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(table.header())?;
    for row in &table.rows {
        writer.write_record(table.cells(row))?;
    }
    writer.flush()?;
    drop(writer);
    if let Some(reason) = truncation {
        let mut file = File::options().append(true).open(path)?;
        let reason = reason.replace('\n', " ");
        writeln!(file, "{TRUNCATION_MARKER}: {reason}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_columns_split() {
        let mut t = Table::new(vec![col("i"), ccol("value")]);
        t.rows
            .push(vec![3usize.into(), Complex64::new(0.5, -1.0).into()]);
        assert_eq!(t.header(), vec!["i", "value_re", "value_im"]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        emit_csv(&t, &path, None).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "i,value_re,value_im\n3,5e-1,-1e0\n");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(vec![col("a"), col("b, quoted")]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        emit_csv(&t, &path, Some("stopped")).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "a,\"b, quoted\"\n# TRUNCATED: stopped\n");
    }
}
