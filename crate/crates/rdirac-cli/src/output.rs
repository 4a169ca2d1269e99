//! CSV and JSON tables.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

/// One output line. `route` names the quantity and how it was obtained.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub re_value: f64,
    pub im_value: f64,
    pub abs_error_estimate: f64,
    pub route: String,
}

impl Row {
    pub fn new(lambda: Complex64, value: Complex64, err: f64, route: impl Into<String>) -> Self {
        Row {
            re_lambda: lambda.re,
            im_lambda: lambda.im,
            re_value: value.re,
            im_value: value.im,
            abs_error_estimate: err,
            route: route.into(),
        }
    }

    pub fn real(lambda: Complex64, value: f64, err: f64, route: impl Into<String>) -> Self {
        Self::new(lambda, Complex64::new(value, 0.0), err, route)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub re_lambda: f64,
    pub im_lambda: f64,
    pub stage: String,
    pub error: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    command: &'a str,
    potential: &'a str,
    rows: &'a [Row],
}

pub fn write_table(out: &mut dyn Write, format: Format, command: &str, potential: &str, rows: &[Row]) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(["re_lambda", "im_lambda", "re_value", "im_value", "abs_error_estimate", "route"])?;
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &JsonTable { command, potential, rows })?;
            writeln!(out)
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    potential: &'a str,
    rows_written: usize,
    failures: &'a [Failure],
}

pub fn write_manifest(out: &mut dyn Write, command: &str, potential: &str, rows_written: usize, failures: &[Failure]) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, &Manifest { command, potential, rows_written, failures })?;
    writeln!(out)
}
