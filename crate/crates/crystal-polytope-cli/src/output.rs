use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

/// The result of one command, ready to be rendered in any supported format.
#[derive(Debug, Clone)]
pub struct Report {
    pub word: Option<Vec<usize>>,
    pub lambda: Option<Vec<i64>>,
    pub data: Value,
    /// CSV records, header first when there is one.
    pub rows: Vec<Vec<String>>,
    /// The H-representation text, for commands that have one.
    pub text: Option<String>,
    pub default_format: Format,
    pub mismatch: bool,
}

impl Report {
    pub fn new(data: Value, rows: Vec<Vec<String>>) -> Self {
        Report {
            word: None,
            lambda: None,
            data,
            rows,
            text: None,
            default_format: Format::Csv,
            mismatch: false,
        }
    }

    pub fn with_word(mut self, word: &[usize]) -> Self {
        self.word = Some(word.to_vec());
        self
    }

    pub fn with_lambda(mut self, lambda: &[i64]) -> Self {
        self.lambda = Some(lambda.to_vec());
        self
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    word: &'a Option<Vec<usize>>,
    lambda: &'a Option<Vec<i64>>,
    convention: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a> {
    meta: Meta<'a>,
    data: &'a Value,
}

pub fn render(report: &Report, format: Option<Format>) -> Result<String> {
    match format.unwrap_or(report.default_format) {
        Format::Json => {
            let env = Envelope {
                meta: Meta {
                    word: &report.word,
                    lambda: &report.lambda,
                    convention: crystal_polytope::CONVENTION,
                },
                data: &report.data,
            };
            Ok(serde_json::to_string_pretty(&env)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_writer(Vec::new());
            for row in &report.rows {
                w.write_record(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::HrepText => match &report.text {
            Some(t) => Ok(t.clone()),
            None => bail!("--format hrep-text is only available for delta-hrep"),
        },
    }
}

/// One CSV record per integer vector.
pub fn int_rows<'a>(points: impl IntoIterator<Item = &'a Vec<i64>>) -> Vec<Vec<String>> {
    points
        .into_iter()
        .map(|p| p.iter().map(i64::to_string).collect())
        .collect()
}

/// `prefix1, .., prefixN`.
pub fn header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}
