//! Minimal standalone SVG renderers for the two figure styles: the
//! error/reward trade-off scatter and the per-arrival metric traces.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::harness::{ExperimentOutput, SweepRow};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

struct Scale {
    min: f64,
    max: f64,
    pixels: f64,
    offset: f64,
    flip: bool,
}

impl Scale {
    fn new(values: impl Iterator<Item = f64>, pixels: f64, offset: f64, flip: bool) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() {
            min = 0.0;
            max = 1.0;
        }
        if (max - min).abs() < 1e-12 {
            max = min + 1.0;
        }
        let pad = (max - min) * 0.05;
        Scale {
            min: min - pad,
            max: max + pad,
            pixels,
            offset,
            flip,
        }
    }

    fn map(&self, v: f64) -> f64 {
        let t = (v - self.min) / (self.max - self.min);
        let t = if self.flip { 1.0 - t } else { t };
        self.offset + t * self.pixels
    }
}

fn svg_header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{title}</text>\n",
        WIDTH / 2.0
    )
}

fn axes(x_label: &str, y_label: &str) -> String {
    let x0 = MARGIN;
    let y0 = HEIGHT - MARGIN;
    let x1 = WIDTH - MARGIN;
    let y1 = MARGIN;
    format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n\
         <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{x_label}</text>\n\
         <text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" \
         transform=\"rotate(-90 16 {})\">{y_label}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 16.0,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
    )
}

/// Fig-1 style: x = final RMSE%, y = mean R/A, one series per design,
/// marker intensity increasing with alpha. Returns the file path written,
/// or `None` (with a warning on stderr) when there is nothing to plot.
pub fn emit_tradeoff_svg(rows: &[SweepRow], out: &Path) -> Result<Option<std::path::PathBuf>> {
    let points: Vec<&SweepRow> = rows.iter().filter(|r| r.rmse_pct.is_some()).collect();
    if points.is_empty() {
        eprintln!("warning: no plottable sweep rows; skipping trade-off figure");
        return Ok(None);
    }
    let sx = Scale::new(
        points.iter().map(|r| r.rmse_pct.unwrap()),
        WIDTH - 2.0 * MARGIN,
        MARGIN,
        false,
    );
    let sy = Scale::new(
        points.iter().map(|r| r.mean_ra),
        HEIGHT - 2.0 * MARGIN,
        HEIGHT - MARGIN,
        true,
    );
    let alpha_max = points
        .iter()
        .filter_map(|r| r.alpha)
        .fold(1.0f64, f64::max);

    let mut designs: Vec<_> = points.iter().map(|r| r.design).collect();
    designs.dedup();

    let mut svg = svg_header("Reward-action ratio vs TTE error");
    svg.push_str(&axes("TTE error (% of true TTE)", "reward-action ratio"));
    for (i, row) in points.iter().enumerate() {
        let color_index = designs.iter().position(|&d| d == row.design).unwrap_or(0);
        let color = PALETTE[color_index % PALETTE.len()];
        let opacity = row
            .alpha
            .map_or(1.0, |a| 0.25 + 0.75 * (a / alpha_max).clamp(0.0, 1.0));
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" fill=\"{color}\" \
             fill-opacity=\"{opacity:.3}\"><title>{} alpha={:?} ({})</title></circle>",
            sx.map(row.rmse_pct.unwrap()),
            sy.map(row.mean_ra),
            row.design,
            row.alpha,
            i,
        );
    }
    for (i, design) in designs.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{}\">{design}</text>",
            WIDTH - MARGIN + 4.0 - 90.0,
            MARGIN + 16.0 * i as f64,
            PALETTE[i % PALETTE.len()],
        );
    }
    svg.push_str("</svg>\n");
    let path = out.join("tradeoff.svg");
    fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
    Ok(Some(path))
}

/// One labeled checkpoint series for the trace figures.
#[derive(Debug, Clone)]
pub struct TraceSeries {
    pub label: String,
    pub rows: Vec<crate::metrics::AggregateRow>,
}

impl From<&ExperimentOutput> for TraceSeries {
    fn from(output: &ExperimentOutput) -> Self {
        TraceSeries {
            label: output.config.design.to_string(),
            rows: output.aggregate.clone(),
        }
    }
}

/// Fig-2 style: one chart per metric, x = arrivals, y = metric, one
/// polyline per series (checkpoint aggregates).
pub fn emit_trace_svg(outputs: &[TraceSeries], out: &Path) -> Result<Vec<std::path::PathBuf>> {
    if outputs.is_empty() || outputs.iter().all(|o| o.rows.is_empty()) {
        eprintln!("warning: no traces to plot; skipping trace figures");
        return Ok(Vec::new());
    }
    let mut written = Vec::new();
    for (metric, title, file) in [
        (0usize, "TTE error over arrivals", "trace_error.svg"),
        (1usize, "Reward-action ratio over arrivals", "trace_ra.svg"),
    ] {
        let value = |row: &crate::metrics::AggregateRow| -> Option<f64> {
            if metric == 0 {
                row.rmse_pct
            } else {
                Some(row.mean_ra)
            }
        };
        let all: Vec<(f64, f64)> = outputs
            .iter()
            .flat_map(|o| o.rows.iter())
            .filter_map(|r| value(r).map(|v| (r.arrivals as f64, v)))
            .collect();
        if all.is_empty() {
            continue;
        }
        let sx = Scale::new(all.iter().map(|p| p.0), WIDTH - 2.0 * MARGIN, MARGIN, false);
        let sy = Scale::new(
            all.iter().map(|p| p.1),
            HEIGHT - 2.0 * MARGIN,
            HEIGHT - MARGIN,
            true,
        );
        let mut svg = svg_header(title);
        svg.push_str(&axes(
            "arrivals",
            if metric == 0 {
                "TTE error (% of true TTE)"
            } else {
                "reward-action ratio"
            },
        ));
        for (i, series) in outputs.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<String> = series
                .rows
                .iter()
                .filter_map(|r| value(r).map(|v| (r.arrivals as f64, v)))
                .map(|(x, y)| format!("{:.2},{:.2}", sx.map(x), sy.map(y)))
                .collect();
            if pts.is_empty() {
                continue;
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                pts.join(" ")
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\">{}</text>",
                WIDTH - MARGIN - 86.0,
                MARGIN + 16.0 * i as f64,
                series.label,
            );
        }
        svg.push_str("</svg>\n");
        let path = out.join(file);
        fs::write(&path, &svg).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Rebuild labeled checkpoint series from an `aggregate.csv`, grouping by
/// (dataset, design, alpha).
pub fn read_trace_series(path: &Path) -> Result<Vec<TraceSeries>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Serde(e.to_string()))?;
    let mut groups: Vec<(String, Vec<crate::metrics::AggregateRow>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Serde(e.to_string()))?;
        let label = format!("{} {} a={}", &record[0], &record[1], &record[2]);
        let parse = |s: &str| s.parse::<f64>().map_err(|_| Error::Serde("bad number".into()));
        let row = crate::metrics::AggregateRow {
            arrivals: record[3]
                .parse()
                .map_err(|_| Error::Serde("bad arrivals".into()))?,
            rmse_pct: if record[4].is_empty() {
                None
            } else {
                Some(parse(&record[4])?)
            },
            mean_ra: parse(&record[5])?,
            defined_runs: record[6].parse().unwrap_or(0),
            total_runs: record[7].parse().unwrap_or(0),
        };
        match groups.iter_mut().find(|(l, _)| *l == label) {
            Some((_, rows)) => rows.push(row),
            None => groups.push((label, vec![row])),
        }
    }
    Ok(groups
        .into_iter()
        .map(|(label, rows)| TraceSeries { label, rows })
        .collect())
}
