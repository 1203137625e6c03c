use serde::{Serialize, Serializer};
use std::fmt::Write;

pub const HEADER: &str = "stretchlab v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

/// Shortest decimal that parses back to the same f64; "inf", "-inf", "nan" otherwise.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:?}")
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Num(x) => f.write_str(&format_number(*x)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub version: &'static str,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Table {
        Table {
            version: HEADER,
            title: title.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# {HEADER} {}\n{}\n", self.title, self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    /// Numeric values of column `j`, NaN for text cells.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match r.get(j) {
                Some(Cell::Num(x)) => *x,
                _ => f64::NAN,
            })
            .collect()
    }
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-300 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Polyline plot of `series` against `xs`; non-finite points break the line.
pub fn line_plot(title: &str, xs: &[f64], series: &[(String, Vec<f64>)]) -> String {
    let (x0, x1) = range(xs.iter().copied());
    let (y0, y1) = range(series.iter().flat_map(|s| s.1.iter().copied()));
    let px = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut svg = svg_open(title);
    let _ = writeln!(
        svg,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for (label, y, anchor) in [
        (format_number(x0), H - PAD + 15.0, PAD),
        (format_number(x1), H - PAD + 15.0, W - PAD),
    ] {
        let _ = writeln!(svg, r#"<text x="{anchor}" y="{y}" font-size="10" text-anchor="middle">{label}</text>"#);
    }
    for (label, y) in [(format_number(y0), H - PAD), (format_number(y1), PAD)] {
        let _ = writeln!(svg, r#"<text x="{}" y="{y}" font-size="10" text-anchor="end">{label}</text>"#, PAD - 4.0);
    }
    for (k, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        for (&x, &y) in xs.iter().zip(ys) {
            if x.is_finite() && y.is_finite() {
                runs.last_mut().expect("non-empty").push(format!("{:.2},{:.2}", px(x), py(y)));
            } else if !runs.last().expect("non-empty").is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                run.join(" ")
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="10" fill="{color}">{name}</text>"#,
            W - PAD + 4.0,
            PAD + 12.0 * (k as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Grey-scale heatmap of a row-major `nx × ny` grid, y increasing upwards.
pub fn heatmap(title: &str, nx: usize, ny: usize, values: &[f64]) -> String {
    let (lo, hi) = range(values.iter().copied());
    let (cw, ch) = ((W - 2.0 * PAD) / nx as f64, (H - 2.0 * PAD) / ny as f64);
    let mut svg = svg_open(title);
    for j in 0..ny {
        for i in 0..nx {
            let v = values[j * nx + i];
            let t = if v.is_finite() { (v - lo) / (hi - lo) } else { 1.0 };
            let g = (255.0 * (1.0 - t)).round() as u8;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({g},{g},{g})"/>"#,
                PAD + i as f64 * cw,
                H - PAD - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <text x=\"{}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{title}</text>\n",
        W / 2.0
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 4.934802200544679, 1e-300, -2.5e17] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", vec!["a".into(), "b".into()]);
        t.rows.push(vec![0.5.into(), "even".into()]);
        assert_eq!(t.to_csv(), "# stretchlab v1 demo\na,b\n0.5,even\n");
    }
}
