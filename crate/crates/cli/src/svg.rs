//! Minimal SVG rendering of density curves as polylines.

use std::io::{self, Write};

use asymdep::taraldsen::GridDensity;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub fn render_density_svg(
    out: &mut dyn Write,
    curves: &[(usize, GridDensity<f64>)],
    rho: f64,
) -> io::Result<()> {
    let peak = curves
        .iter()
        .flat_map(|(_, d)| d.mass().iter().copied())
        .fold(0.0f64, f64::max)
        .max(1e-300);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">Exact sampling density of r (rho = {rho})</text>"#,
        WIDTH / 2.0
    )?;
    // axes
    let x0 = MARGIN;
    let x1 = WIDTH - MARGIN;
    let y0 = HEIGHT - MARGIN;
    let y1 = MARGIN;
    writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    )?;
    writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    )?;
    for tick in [-1.0f64, -0.5, 0.0, 0.5, 1.0] {
        let px = x0 + (tick + 1.0) / 2.0 * (x1 - x0);
        writeln!(
            out,
            r#"<text x="{px}" y="{}" text-anchor="middle" font-size="11">{tick}</text>"#,
            y0 + 16.0
        )?;
    }

    for (k, (n, d)) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut points = String::new();
        for (i, &r) in d.grid().iter().enumerate() {
            let px = x0 + (r + 1.0) / 2.0 * (x1 - x0);
            let py = y0 - d.mass()[i] / peak * (y0 - y1);
            points.push_str(&format!("{px:.2},{py:.2} "));
        }
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.trim_end()
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">n = {n}</text>"#,
            x1 - 80.0,
            y1 + 20.0 + 16.0 * k as f64
        )?;
    }
    writeln!(out, "</svg>")
}
