//! Output rendering: aligned tables, JSON lines, and CSV rows, all
//! written through one sink (stdout or a file).

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::Result;
use clap::ValueEnum;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub fn sink(output: Option<&str>) -> Result<Box<dyn Write>> {
    Ok(match output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// One record = header names paired with cell text; JSON values are
/// provided separately so numbers stay numbers.
pub struct Rows {
    pub headers: Vec<String>,
    pub cells: Vec<Vec<String>>,
    pub json: Vec<serde_json::Value>,
}

impl Rows {
    pub fn new(headers: &[&str]) -> Self {
        Rows {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            cells: Vec::new(),
            json: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<String>, json: serde_json::Value) {
        debug_assert_eq!(cells.len(), self.headers.len());
        self.cells.push(cells);
        self.json.push(json);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Table => self.write_table(out),
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_table(&self, out: &mut dyn Write) -> Result<()> {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &self.cells {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut line = String::new();
        for (i, h) in self.headers.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<width$}", h, width = widths[i]));
        }
        writeln!(out, "{}", line.trim_end())?;
        for row in &self.cells {
            let mut line = String::new();
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(&format!("{:<width$}", cell, width = widths[i]));
            }
            writeln!(out, "{}", line.trim_end())?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        for value in &self.json {
            writeln!(out, "{}", serde_json::to_string(value)?)?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(
            out,
            "{}",
            self.headers
                .iter()
                .map(|h| csv_quote(h))
                .collect::<Vec<_>>()
                .join(",")
        )?;
        for row in &self.cells {
            writeln!(
                out,
                "{}",
                row.iter()
                    .map(|c| csv_quote(c))
                    .collect::<Vec<_>>()
                    .join(",")
            )?;
        }
        Ok(())
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}
