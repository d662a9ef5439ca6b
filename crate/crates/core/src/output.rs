//! CSV tables with `# key=value` metadata and bare-bones SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{invalid, Result};

/// Column-oriented numeric table.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.meta
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(invalid(
                "row",
                format!("expected {} values, got {}", self.columns.len(), row.len()),
            ));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Metadata lines, a header row, then one line per row. Floats use the
    /// shortest representation that parses back to the same value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_csv())
    }

    /// Parses the output of [`Table::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut table = Table::default();
        let mut header = false;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.trim().split_once('=') {
                    table.meta.push((k.trim().to_string(), v.trim().to_string()));
                }
            } else if !header {
                table.columns = line.split(',').map(|s| s.trim().to_string()).collect();
                header = true;
            } else {
                let row = line
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().map_err(|e| invalid("csv", format!("{s}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                table.push(row)?;
            }
        }
        if !header {
            return Err(invalid("csv", "missing header row"));
        }
        Ok(table)
    }

    /// Line plot of every column against the first one.
    pub fn to_svg(&self, title: &str) -> String {
        let Some(xs) = self
            .rows
            .first()
            .map(|_| self.column(&self.columns[0]).unwrap_or_default())
        else {
            return svg_plot(title, &[], &[]);
        };
        let series: Vec<(String, Vec<f64>)> = self.columns[1..]
            .iter()
            .map(|c| (c.clone(), self.column(c).unwrap_or_default()))
            .collect();
        svg_plot(title, &xs, &series)
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

/// SVG 1.1 document with one polyline per series.
pub fn svg_plot(title: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let finite = |v: &&f64| v.is_finite();
    let (x0, x1) = bounds(xs.iter().filter(finite));
    let (y0, y1) = bounds(series.iter().flat_map(|(_, ys)| ys.iter()).filter(finite));
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let _ = writeln!(
        out,
        r#"<text x="{pad}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    for (k, (name, ys)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{color}">{}</text>"#,
            w - pad - 120.0,
            pad + 16.0 * (k as f64 + 1.0),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds<'a>(it: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
