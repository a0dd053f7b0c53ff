//! CSV, JSON and gnuplot output.

use crate::error::CliError;
use dpgap::table::{Converged, GapTable, Method, RunSpec, TableMeta};
use dpgap::{BigFloat, Real};
use serde::Serialize;
use std::io::Write;
use std::path::Path;

type B = BigFloat;

/// One output row; numbers are decimal strings with the full precision of the run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub s: usize,
    pub x_coord: String,
    #[serde(rename = "D")]
    pub d: String,
    /// Empty on the trailing row `s_max + 1`.
    pub density: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MethodRows {
    pub method: &'static str,
    pub working_precision: u32,
    pub discrepancy: f64,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub family: &'static str,
    pub params: Vec<(String, String)>,
    pub k: usize,
    pub s_max: usize,
    pub precision: u32,
    pub runs: Vec<MethodRows>,
}

/// Significant decimal digits written at `bits` of precision.
pub fn digits(bits: u32) -> usize {
    B::with_precision(bits, B::decimal_digits)
}

/// Rows `k..=s_max + 1` at the configured precision.
///
/// `D` is rounded to the output digits first and densities are recomputed from the rounded
/// values, so re-reading the file and recomputing reproduces the densities exactly.
pub fn rows_from(spec: &RunSpec, method: Method, run: &Converged<B>) -> Result<MethodRows, CliError> {
    let bits = spec.precision;
    let n = digits(bits);
    let rows = B::with_precision(bits, || -> Result<Vec<Row>, CliError> {
        let f = spec.build::<B>()?;
        let rounded: Vec<B> = run
            .values
            .iter()
            .map(|v| B::parse(&v.to_sci(n)).expect("own output parses"))
            .collect();
        let meta = TableMeta {
            family: spec.family,
            params: spec.params.clone(),
            k: spec.k,
            precision: bits,
            method,
            discrepancy: run.discrepancy,
        };
        let table = GapTable::from_values(&f, meta, &rounded);
        Ok(densities_to_rows(&f, &table, n))
    })?;
    Ok(MethodRows {
        method: method.name(),
        working_precision: run.precision,
        discrepancy: run.discrepancy,
        rows,
    })
}

fn densities_to_rows(f: &dpgap::FamilySpec<B>, t: &GapTable<B>, n: usize) -> Vec<Row> {
    let mut rows: Vec<Row> = t
        .rows
        .iter()
        .map(|r| Row {
            s: r.s,
            x_coord: r.x_coord.to_sci(n),
            d: r.d.to_sci(n),
            density: Some(r.density.to_sci(n)),
        })
        .collect();
    let end = t.meta.k + t.rows.len();
    rows.push(Row {
        s: end,
        x_coord: dpgap::table::x_coord(f, end).to_sci(n),
        d: t.d_end.to_sci(n),
        density: None,
    });
    rows
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    s: usize,
    x_coord: &'a str,
    #[serde(rename = "D")]
    d: &'a str,
    density: &'a str,
    method: &'a str,
}

pub fn write_csv<W: Write>(w: W, runs: &[MethodRows]) -> Result<(), CliError> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let io = |e: csv::Error| CliError::Config(format!("writing CSV: {e}"));
    for run in runs {
        for r in &run.rows {
            wr.serialize(CsvRecord {
                s: r.s,
                x_coord: &r.x_coord,
                d: &r.d,
                density: r.density.as_deref().unwrap_or(""),
                method: run.method,
            })
            .map_err(io)?;
        }
    }
    wr.flush().map_err(|e| CliError::Config(format!("writing CSV: {e}")))
}

pub fn write_json<W: Write>(w: W, doc: &Document) -> Result<(), CliError> {
    serde_json::to_writer_pretty(w, doc).map_err(|e| CliError::Config(format!("writing JSON: {e}")))
}

/// Gnuplot script plotting the density of every method in `csv_path` against `x_coord`.
pub fn gnuplot_script(csv_path: &Path, spec: &RunSpec, runs: &[MethodRows]) -> String {
    let name = csv_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = csv_path
        .file_stem()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "gap".to_string());
    let params: Vec<String> = spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let ylabel = if dpgap::table::is_q_lattice(spec.family) {
        "q-derivative of D"
    } else {
        "D(s+1) - D(s)"
    };
    let plots: Vec<String> = runs
        .iter()
        .map(|r| {
            format!(
                "'{name}' using 2:(strcol(5) eq '{m}' && strlen(strcol(4)) > 0 ? $4 : NaN) with linespoints title '{m}'",
                m = r.method
            )
        })
        .collect();
    format!(
        "# {family} k={k} {params} precision={bits} bits\n\
         set datafile separator ','\n\
         set key autotitle columnhead\n\
         set title '{family} k={k} {params}' noenhanced\n\
         set xlabel 'x'\n\
         set ylabel '{ylabel}'\n\
         set terminal pngcairo size 900,600\n\
         set output '{stem}.png'\n\
         plot {plots}\n",
        family = spec.family.key(),
        k = spec.k,
        params = params.join(" "),
        bits = spec.precision,
        plots = plots.join(", \\\n     "),
    )
}
