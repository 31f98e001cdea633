//! Shared readers and writers for the noun-by-adjective matrix TSV layout and
//! the `word v1 v2 ...` vector layout.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use ndarray::Array2;

use super::lexicon::Lexicon;
use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct TsvRow {
    pub line: usize,
    pub label: String,
    pub cells: Vec<String>,
}

#[derive(Debug)]
pub(crate) struct MatrixTsv {
    /// Comment lines with the leading `#` and surrounding whitespace removed.
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<TsvRow>,
}

impl MatrixTsv {
    /// Value of the first `# key: value` comment, if any.
    pub fn directive(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once(':')?;
            (k.trim() == key).then(|| v.trim())
        })
    }
}

pub(crate) fn parse_matrix_tsv(text: &str) -> Result<MatrixTsv> {
    let mut comments = Vec::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(c) = line.trim_start().strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let mut fields = line.split('\t');
        let first = fields.next().unwrap_or("").trim().to_lowercase();
        let rest: Vec<String> = fields.map(|f| f.trim().to_string()).collect();
        match &columns {
            None => {
                if rest.is_empty() {
                    return Err(Error::format(i + 1, "header row has no column labels"));
                }
                columns = Some(rest.into_iter().map(|c| c.to_lowercase()).collect());
            }
            Some(cols) => {
                if rest.len() != cols.len() {
                    return Err(Error::format(
                        i + 1,
                        format!("row '{first}' has {} cells, header has {}", rest.len(), cols.len()),
                    ));
                }
                rows.push(TsvRow {
                    line: i + 1,
                    label: first,
                    cells: rest,
                });
            }
        }
    }
    let columns = columns.ok_or_else(|| Error::format(0, "missing header row"))?;
    Ok(MatrixTsv {
        comments,
        columns,
        rows,
    })
}

/// Aligns a parsed TSV to lexicon order. Labels outside the lexicon are
/// skipped (and counted in a warning); every lexicon word must be present.
pub(crate) fn align_matrix<T, F>(tsv: &MatrixTsv, lexicon: &Lexicon, mut parse: F) -> Result<Array2<T>>
where
    T: Clone + Default,
    F: FnMut(&str) -> std::result::Result<T, String>,
{
    let mut col_map = Vec::with_capacity(tsv.columns.len());
    let mut seen_cols = HashSet::new();
    let mut ignored = 0usize;
    for c in &tsv.columns {
        if !seen_cols.insert(c.as_str()) {
            return Err(Error::format(1, format!("duplicate column label '{c}'")));
        }
        let idx = lexicon.adjective_index(c);
        if idx.is_none() {
            ignored += 1;
        }
        col_map.push(idx);
    }
    for adj in lexicon.adjectives() {
        if !seen_cols.contains(adj.as_str()) {
            return Err(Error::MissingWord {
                kind: "adjective",
                word: adj.clone(),
            });
        }
    }

    let mut out = Array2::<T>::default((lexicon.n_nouns(), lexicon.n_adjectives()));
    let mut seen_rows = vec![false; lexicon.n_nouns()];
    let mut seen_labels = HashSet::new();
    for row in &tsv.rows {
        if !seen_labels.insert(row.label.as_str()) {
            return Err(Error::format(row.line, format!("duplicate row label '{}'", row.label)));
        }
        let Some(n) = lexicon.noun_index(&row.label) else {
            ignored += 1;
            continue;
        };
        seen_rows[n] = true;
        for (cell, col) in row.cells.iter().zip(&col_map) {
            let Some(a) = *col else { continue };
            out[[n, a]] = parse(cell).map_err(|msg| Error::BadCell {
                row: row.label.clone(),
                col: lexicon.adjective(a).to_string(),
                msg,
            })?;
        }
    }
    if let Some(n) = seen_rows.iter().position(|s| !s) {
        return Err(Error::MissingWord {
            kind: "noun",
            word: lexicon.noun(n).to_string(),
        });
    }
    if ignored > 0 {
        log::warn!("ignored {ignored} labels not present in the lexicon");
    }
    Ok(out)
}

pub(crate) fn write_matrix_tsv<F>(comments: &[String], lexicon: &Lexicon, mut cell: F) -> String
where
    F: FnMut(usize, usize) -> String,
{
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for adj in lexicon.adjectives() {
        out.push('\t');
        out.push_str(adj);
    }
    out.push('\n');
    for (n, noun) in lexicon.nouns().iter().enumerate() {
        out.push_str(noun);
        for a in 0..lexicon.n_adjectives() {
            out.push('\t');
            out.push_str(&cell(n, a));
        }
        out.push('\n');
    }
    out
}

/// Reads `word v1 v2 ...` lines, keeping only lexicon words. Returns the
/// common dimension and the vectors keyed by word.
pub(crate) fn parse_vector_file(
    text: &str,
    lexicon: &Lexicon,
) -> Result<(usize, BTreeMap<String, Vec<f64>>)> {
    let mut dimension: Option<usize> = None;
    let mut vectors = BTreeMap::new();
    let mut ignored = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let word = tokens.next().unwrap_or_default().to_lowercase();
        if lexicon.noun_index(&word).is_none() && lexicon.adjective_index(&word).is_none() {
            ignored += 1;
            continue;
        }
        let values = tokens
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::format(i + 1, format!("bad value '{t}' for '{word}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.is_empty() {
            return Err(Error::format(i + 1, format!("no values for '{word}'")));
        }
        match dimension {
            None => dimension = Some(values.len()),
            Some(d) if d != values.len() => {
                return Err(Error::format(
                    i + 1,
                    format!("'{word}' has {} values, expected {d}", values.len()),
                ))
            }
            Some(_) => {}
        }
        if vectors.insert(word.clone(), values).is_some() {
            return Err(Error::format(i + 1, format!("duplicate entry for '{word}'")));
        }
    }
    for w in lexicon.nouns() {
        if !vectors.contains_key(w) {
            return Err(Error::MissingWord {
                kind: "noun",
                word: w.clone(),
            });
        }
    }
    for w in lexicon.adjectives() {
        if !vectors.contains_key(w) {
            return Err(Error::MissingWord {
                kind: "adjective",
                word: w.clone(),
            });
        }
    }
    if ignored > 0 {
        log::warn!("ignored {ignored} vector lines for words not in the lexicon");
    }
    Ok((dimension.unwrap_or(0), vectors))
}

pub(crate) fn write_vector_file(vectors: &BTreeMap<String, Vec<f64>>) -> String {
    let mut out = String::new();
    for (w, v) in vectors {
        out.push_str(w);
        for x in v {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}
