//! Quick-look SVG rendering of CSV time series: one polyline per requested
//! column on shared linear axes, deterministic output for identical input.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::observables::ObservableRecord;

use super::timeseries::{read_timeseries_csv, TimeseriesError};

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error(transparent)]
    Csv(#[from] TimeseriesError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Render selected columns of a written CSV to an SVG file.
pub fn render_svg_timeseries(
    csv_path: &Path,
    columns: &[&str],
    out_path: &Path,
) -> Result<(), PlotError> {
    let records = read_timeseries_csv(csv_path)?;
    let svg = svg_for_columns(&records, columns)?;
    std::fs::write(out_path, svg)?;
    Ok(())
}

fn column_index(name: &str) -> Option<usize> {
    ObservableRecord::COLUMNS.iter().position(|&c| c == name)
}

pub(crate) fn svg_for_columns(
    records: &[ObservableRecord],
    columns: &[&str],
) -> Result<String, PlotError> {
    let mut idx = Vec::with_capacity(columns.len());
    for &c in columns {
        match column_index(c) {
            Some(0) | None => return Err(PlotError::UnknownColumn(c.to_string())),
            Some(i) => idx.push(i),
        }
    }
    let rows: Vec<[f64; 12]> = records.iter().map(|r| r.as_row()).collect();

    let t_min = rows.first().map(|r| r[0]).unwrap_or(0.0);
    let t_max = rows.last().map(|r| r[0]).unwrap_or(1.0);
    let t_span = if t_max > t_min { t_max - t_min } else { 1.0 };

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    let mut flats = Vec::new();
    for (&c, &i) in columns.iter().zip(&idx) {
        let lo = rows.iter().map(|r| r[i]).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r[i]).fold(f64::NEG_INFINITY, f64::max);
        y_min = y_min.min(lo);
        y_max = y_max.max(hi);
        if hi - lo < 1e-9 {
            flats.push(format!("{c} flat (range {:.3e})", hi - lo));
        }
    }
    let pad = ((y_max - y_min).abs()).max(1e-12) * 0.05;
    let (y_min, y_max) = (y_min - pad, y_max + pad);
    let y_span = y_max - y_min;

    let to_px = |t: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_L + (t - t_min) / t_span * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (y - y_min) / y_span * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut title = columns.join(", ");
    if !flats.is_empty() {
        let _ = write!(title, " [{}]", flats.join("; "));
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"28\" font-family=\"monospace\" font-size=\"15\">{}</text>",
        MARGIN_L,
        xml_escape(&title)
    );
    // axes
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_L:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_L:.2}\" y1=\"{MARGIN_T:.2}\" x2=\"{MARGIN_L:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        HEIGHT - MARGIN_B
    );
    // axis labels: end points only
    let _ = writeln!(
        svg,
        "<text x=\"{MARGIN_L:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">t = {t_min:.6e}</text>",
        HEIGHT - MARGIN_B + 20.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">t = {t_max:.6e}</text>",
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B + 20.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"8\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{y_max:.6e}</text>",
        MARGIN_T + 6.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"8\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{y_min:.6e}</text>",
        HEIGHT - MARGIN_B
    );

    for (pos, (&c, &i)) in columns.iter().zip(&idx).enumerate() {
        let color = PALETTE[pos % PALETTE.len()];
        let mut points = String::new();
        for r in &rows {
            let (px, py) = to_px(r[0], r[i]);
            let _ = write!(points, "{px:.2},{py:.2} ");
        }
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"13\" fill=\"{color}\">{}</text>",
            WIDTH - MARGIN_R - 180.0,
            MARGIN_T + 18.0 * (pos as f64 + 1.0),
            xml_escape(c)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
