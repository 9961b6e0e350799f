use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format {other:?} (expected text, csv or json)"),
        }
    }
}

/// Outcome of a row's built-in check, if it carries one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

/// One line of a report. Column order is the CSV header order.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub id: String,
    pub kind: String,
    pub target: Option<String>,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub p: Option<String>,
    /// Secondary size parameter: residual size, Stirling index or f-band index.
    pub j: Option<u64>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub estimate_log10: Option<f64>,
    pub estimate_exact: Option<String>,
    pub oracle: Option<String>,
    pub relative_error: Option<f64>,
    pub stderr: Option<f64>,
    pub empirical_crr: Option<f64>,
    pub analytic_crr: Option<f64>,
    pub check: Option<Check>,
    pub status: Status,
    pub note: String,
    pub wall_seconds: f64,
}

impl ResultRow {
    pub fn new(kind: &str) -> Self {
        ResultRow {
            id: String::new(),
            kind: kind.to_string(),
            target: None,
            n: None,
            k: None,
            p: None,
            j: None,
            seed: None,
            samples: None,
            estimate_log10: None,
            estimate_exact: None,
            oracle: None,
            relative_error: None,
            stderr: None,
            empirical_crr: None,
            analytic_crr: None,
            check: None,
            status: Status::Ok,
            note: String::new(),
            wall_seconds: 0.0,
        }
    }

    pub fn failed(mut self, err: &anyhow::Error) -> Self {
        self.status = Status::Error;
        self.note = format!("{err:#}");
        self
    }

    fn text(&self) -> String {
        let mut out = Vec::new();
        let mut push = |key: &str, value: String| out.push(format!("{key}: {value}"));
        push("id", self.id.clone());
        push("kind", self.kind.clone());
        if let Some(t) = &self.target {
            push("target", t.clone());
        }
        let opt_u = |v: Option<u64>| v.map(|x| x.to_string());
        for (key, value) in [
            ("n", opt_u(self.n)),
            ("k", opt_u(self.k)),
            ("p", self.p.clone()),
            ("j", opt_u(self.j)),
        ] {
            if let Some(v) = value {
                push(key, v);
            }
        }
        for (key, value) in [("seed", opt_u(self.seed)), ("samples", opt_u(self.samples))] {
            if let Some(v) = value {
                push(key, v);
            }
        }
        if let Some(v) = &self.estimate_exact {
            push("estimate", v.clone());
        }
        let floats = [
            ("estimate_log10", self.estimate_log10),
            ("relative_error", self.relative_error),
            ("stderr", self.stderr),
            ("empirical_crr", self.empirical_crr),
            ("analytic_crr", self.analytic_crr),
        ];
        if let Some(v) = &self.oracle {
            push("oracle", v.clone());
        }
        for (key, value) in floats {
            if let Some(v) = value {
                push(key, v.to_string());
            }
        }
        if let Some(c) = self.check {
            push("check", format!("{c:?}").to_lowercase());
        }
        push("status", format!("{:?}", self.status).to_lowercase());
        if !self.note.is_empty() {
            push("note", self.note.clone());
        }
        push("wall_seconds", format!("{:.3}", self.wall_seconds));
        out.join("\n")
    }
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
        Format::Text => {
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "{}", row.text())?;
            }
        }
    }
    Ok(())
}

/// Writes to `path`, or stdout when `path` is `None`.
pub fn emit(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            write_rows(rows, format, std::io::BufWriter::new(file))
                .with_context(|| format!("writing {}", path.display()))
        }
        None => write_rows(rows, format, std::io::stdout().lock()),
    }
}

/// Lists failed rows on stderr; true if there were any.
pub fn report_failures(rows: &[ResultRow]) -> bool {
    let failed: Vec<&ResultRow> = rows.iter().filter(|r| r.status == Status::Error).collect();
    for row in &failed {
        eprintln!("row {} failed: {}", row.id, row.note);
    }
    if !failed.is_empty() {
        eprintln!("{} of {} rows failed", failed.len(), rows.len());
    }
    !failed.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_is_fixed_and_quotes_commas() {
        let mut row = ResultRow::new("estimate");
        row.id = "estimate-0000".into();
        row.note = "a, \"quoted\" note".into();
        row.estimate_log10 = Some(1.5);
        let mut buf = Vec::new();
        write_rows(&[row], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "id,kind,target,n,k,p,j,seed,samples,estimate_log10,estimate_exact,oracle,relative_error,\
             stderr,empirical_crr,analytic_crr,check,status,note,wall_seconds"
        );
        assert_eq!(
            lines.next().unwrap(),
            "estimate-0000,estimate,,,,,,,,1.5,,,,,,,,ok,\"a, \"\"quoted\"\" note\",0.0"
        );
    }

    #[test]
    fn json_is_an_array_of_rows() {
        let rows = vec![ResultRow::new("a"), ResultRow::new("b")];
        let mut buf = Vec::new();
        write_rows(&rows, Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 2);
        assert_eq!(v[1]["kind"], "b");
        assert_eq!(v[0]["status"], "ok");
    }
}
