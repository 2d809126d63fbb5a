//! Output rendering: text tables, schema-stable JSON, and CSV.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};

use asymdep::gencorr::AsymmetricMatrix;
use asymdep::taraldsen::GridDensity;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

/// Rounds to 6 significant digits for machine-readable output.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mag = x.abs().log10().floor();
    let scale = 10f64.powf(5.0 - mag);
    (x * scale).round() / scale
}

/// JSON object as-is, or flat key: value lines in text/CSV mode.
pub fn render_json_or_kv(
    out: &mut dyn Write,
    fmt: OutputFormat,
    value: Value,
) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?),
        OutputFormat::Text => {
            for (k, v) in flatten(&value) {
                writeln!(out, "{k}: {v}")?;
            }
            Ok(())
        }
        OutputFormat::Csv => {
            let pairs = flatten(&value);
            let header: Vec<&str> = pairs.iter().map(|(k, _)| k.as_str()).collect();
            let row: Vec<String> = pairs.iter().map(|(_, v)| v.clone()).collect();
            writeln!(out, "{}", header.join(","))?;
            writeln!(out, "{}", row.join(","))
        }
    }
}

fn flatten(value: &Value) -> Vec<(String, String)> {
    let empty = Map::new();
    value
        .as_object()
        .unwrap_or(&empty)
        .iter()
        .map(|(k, v)| {
            let s = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            (k.clone(), s)
        })
        .collect()
}

/// Renders the asymmetric r* matrix. Rows are responses; the column names
/// the conditioning ("cause") variable.
pub fn render_matrix(
    out: &mut dyn Write,
    fmt: OutputFormat,
    m: &AsymmetricMatrix<f64>,
) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => {
            let values: Vec<Vec<Value>> = m
                .values
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&v| {
                            if v.is_nan() {
                                Value::Null
                            } else {
                                serde_json::json!(sig6(v))
                            }
                        })
                        .collect()
                })
                .collect();
            let doc = serde_json::json!({
                "labels": m.labels,
                "convention": "values[i][j] = rstar(row_i | col_j); column is the conditioning variable",
                "values": values,
                "degenerate_columns": m.degenerate,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "generalized correlations r*(row|column); column = conditioning variable"
            )?;
            write!(out, "{:>12}", "")?;
            for l in &m.labels {
                write!(out, "{l:>12}")?;
            }
            writeln!(out)?;
            for (i, l) in m.labels.iter().enumerate() {
                write!(out, "{l:>12}")?;
                for j in 0..m.labels.len() {
                    let v = m.values[i][j];
                    if v.is_nan() {
                        write!(out, "{:>12}", "undefined")?;
                    } else {
                        write!(out, "{v:>12.4}")?;
                    }
                }
                writeln!(out)?;
            }
            Ok(())
        }
        OutputFormat::Csv => {
            writeln!(out, "response,{}", m.labels.join(","))?;
            for (i, l) in m.labels.iter().enumerate() {
                let row: Vec<String> = m.values[i]
                    .iter()
                    .map(|&v| {
                        if v.is_nan() {
                            "NA".to_string()
                        } else {
                            format!("{:.6}", v)
                        }
                    })
                    .collect();
                writeln!(out, "{l},{}", row.join(","))?;
            }
            Ok(())
        }
    }
}

pub fn render_table1(
    out: &mut dyn Write,
    fmt: OutputFormat,
    ns: &[usize],
    cs: &[f64],
    table: &[Vec<f64>],
) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => {
            let rows: Vec<Vec<f64>> = table
                .iter()
                .map(|row| row.iter().map(|&v| sig6(v)).collect())
                .collect();
            let doc = serde_json::json!({
                "sample_sizes": ns,
                "cum_probs": cs,
                "quantiles": rows,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)
        }
        OutputFormat::Text => {
            write!(out, "{:>6}", "n")?;
            for c in cs {
                write!(out, "{:>9}", format!("c={c}"))?;
            }
            writeln!(out)?;
            for (i, &n) in ns.iter().enumerate() {
                write!(out, "{n:>6}")?;
                for v in &table[i] {
                    write!(out, "{v:>9.2}")?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
        OutputFormat::Csv => {
            let header: Vec<String> = cs.iter().map(|c| format!("c={c}")).collect();
            writeln!(out, "n,{}", header.join(","))?;
            for (i, &n) in ns.iter().enumerate() {
                let row: Vec<String> = table[i].iter().map(|v| format!("{v:.2}")).collect();
                writeln!(out, "{n},{}", row.join(","))?;
            }
            Ok(())
        }
    }
}

pub fn render_density_csv(
    out: &mut dyn Write,
    fmt: OutputFormat,
    curves: &[(usize, GridDensity<f64>)],
) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => {
            let docs: Vec<Value> = curves
                .iter()
                .map(|(n, d)| {
                    serde_json::json!({
                        "n": n,
                        "rho": d.rho(),
                        "grid": d.grid(),
                        "mass": d.mass(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&Value::Array(docs))?)
        }
        _ => {
            let header: Vec<String> = curves.iter().map(|(n, _)| format!("mass_n{n}")).collect();
            writeln!(out, "r,{}", header.join(","))?;
            let grid = curves[0].1.grid();
            for (i, &r) in grid.iter().enumerate() {
                let row: Vec<String> = curves
                    .iter()
                    .map(|(_, d)| format!("{:.6e}", d.mass()[i]))
                    .collect();
                writeln!(out, "{r:.3},{}", row.join(","))?;
            }
            Ok(())
        }
    }
}
