//! Column tables written as CSV with a provenance header.

use std::fmt::Write;

pub const TABLE_SCHEMA: &str = "glvar-table v1";

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub abscissa: String,
    pub x: Vec<f64>,
    pub columns: Vec<Column>,
    pub meta: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: &str, abscissa: &str, x: Vec<f64>) -> Self {
        Self { name: name.into(), abscissa: abscissa.into(), x, columns: Vec::new(), meta: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, name: &str, values: &[f64]) {
        assert_eq!(values.len(), self.x.len(), "column {name}");
        self.columns.push(Column { name: name.into(), values: values.iter().map(|&v| Some(v)).collect() });
    }

    pub fn push_sparse(&mut self, name: &str, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.x.len(), "column {name}");
        self.columns.push(Column { name: name.into(), values });
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Present values of `name` with their abscissae.
    pub fn series(&self, name: &str) -> Option<(Vec<f64>, Vec<f64>)> {
        let c = self.column(name)?;
        Some(self.x.iter().zip(&c.values).filter_map(|(&x, v)| v.map(|v| (x, v))).unzip())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        write!(out, "# {TABLE_SCHEMA} table={}", self.name).unwrap();
        for (k, v) in &self.meta {
            write!(out, " {k}={v}").unwrap();
        }
        out.push('\n');
        out.push_str(&self.abscissa);
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for (i, x) in self.x.iter().enumerate() {
            write!(out, "{x}").unwrap();
            for c in &self.columns {
                out.push(',');
                if let Some(v) = c.values[i] {
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", "epsilon", vec![1.0, 2.5]).meta("config", "abc");
        t.push("a", &[0.5, -1.0]);
        t.push_sparse("b", vec![None, Some(3.0)]);
        assert_eq!(t.to_csv(), "# glvar-table v1 table=demo config=abc\nepsilon,a,b\n1,0.5,\n2.5,-1,3\n");
        assert_eq!(t.series("b").unwrap(), (vec![2.5], vec![3.0]));
    }
}
