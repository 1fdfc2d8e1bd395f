//! Command output: a JSON value plus an aligned text rendering.
//!
//! Text uses one decimal for odds-ratios and chi-squares, two for
//! correlations, coefficients and fitted counts, three for p-values. JSON
//! carries full precision; undefined values are `null`.

use serde::Serialize;
use serde_json::Value;

/// What a command produced. `ok = false` turns into exit status 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Output {
    pub fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            ok: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Fixed decimals, `-` when undefined or not finite.
pub fn fmt(x: Option<f64>, decimals: usize) -> String {
    match x {
        Some(v) if v.is_finite() => {
            let s = format!("{v:.decimals$}");
            // avoid "-0.0"
            if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
                s[1..].to_string()
            } else {
                s
            }
        }
        Some(v) if v.is_infinite() => if v > 0.0 { "inf" } else { "-inf" }.into(),
        _ => "-".into(),
    }
}

pub fn or1(x: Option<f64>) -> String {
    fmt(x, 1)
}

pub fn f2(x: f64) -> String {
    fmt(Some(x), 2)
}

pub fn p3(x: f64) -> String {
    if x < 0.0005 {
        "<0.001".into()
    } else {
        fmt(Some(x), 3)
    }
}

pub fn levels_label(names: &[String], levels: &[u8]) -> String {
    if names.is_empty() {
        return "(all)".into();
    }
    names
        .iter()
        .zip(levels)
        .map(|(n, l)| format!("{n}={l}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Columns right-aligned except the first, two spaces apart.
#[derive(Clone, Debug, Default)]
pub struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        TextTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let ncol = self.header.len();
        let mut width = vec![0; ncol];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (j, c) in r.iter().enumerate().take(ncol) {
                width[j] = width[j].max(c.chars().count());
            }
        }
        let line = |r: &[String]| {
            let cells: Vec<String> = (0..ncol)
                .map(|j| {
                    let c = r.get(j).map(String::as_str).unwrap_or("");
                    if j == 0 {
                        format!("{c:<w$}", w = width[j])
                    } else {
                        format!("{c:>w$}", w = width[j])
                    }
                })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(or1(Some(9.7731)), "9.8");
        assert_eq!(or1(None), "-");
        assert_eq!(fmt(Some(-0.001), 2), "0.00");
        assert_eq!(fmt(Some(f64::INFINITY), 2), "inf");
        assert_eq!(p3(1e-9), "<0.001");
        assert_eq!(p3(0.0123), "0.012");
    }

    #[test]
    fn aligned() {
        let mut t = TextTable::new(["pair", "or"]);
        t.row(["L,V", "9.8"]);
        t.row(["L,C", "12.0"]);
        assert_eq!(t.render(), "pair    or\nL,V    9.8\nL,C   12.0\n");
    }
}
