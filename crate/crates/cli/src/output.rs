use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "algcensus/1";

/// Floats in CSV use 17 significant digits so they round-trip exactly.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// What a subcommand produced, ready to be written in either format.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &'static str, params: &impl Serialize, results: &impl Serialize, table: Table) -> Self {
        Report::with_tables(command, params, results, vec![table])
    }

    /// Several CSV tables, written one after another separated by blank lines.
    pub fn with_tables(
        command: &'static str,
        params: &impl Serialize,
        results: &impl Serialize,
        tables: Vec<Table>,
    ) -> Self {
        Report {
            command,
            params: serde_json::to_value(params).expect("params serialise"),
            results: serde_json::to_value(results).expect("results serialise"),
            tables,
        }
    }

    pub fn write_json(&self, out: &mut impl Write) -> std::io::Result<()> {
        let doc = json!({
            "schema": SCHEMA,
            "command": self.command,
            "params": self.params,
            "results": self.results,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            t.write_csv(out)?;
        }
        Ok(())
    }
}
