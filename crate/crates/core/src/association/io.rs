//! TSV persistence for association matrices.
//!
//! ```text
//! # metric: bigram
//! # zero-mask: 0,1;2,0
//! \tdying\tviolent
//! heart\t0.5\t1e-7
//! ```
//!
//! Zero-mask coordinates index the file's own row and column order.

use std::path::Path;

use ndarray::Array2;

use super::{AssociationMatrix, Metric, NormalizedAssociation, ZeroMask};
use crate::error::{Error, Result};
use crate::ingest::tsv::{align_matrix, parse_matrix_tsv, write_matrix_tsv, MatrixTsv};
use crate::ingest::{parse_finite, read_file, Lexicon};

struct Parsed {
    metric: Metric,
    lexicon: Lexicon,
    values: Array2<f64>,
    mask: ZeroMask,
}

fn parse_mask(spec: &str) -> Result<Vec<(usize, usize)>> {
    spec.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|cell| {
            let parsed = cell
                .split_once(',')
                .and_then(|(r, c)| Some((r.trim().parse().ok()?, c.trim().parse().ok()?)));
            parsed.ok_or_else(|| Error::format(0, format!("bad zero-mask entry '{cell}'")))
        })
        .collect()
}

fn format_mask(mask: &ZeroMask) -> String {
    mask.iter()
        .map(|(n, a)| format!("{n},{a}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_file(text: &str, target: Option<&Lexicon>) -> Result<Parsed> {
    let tsv: MatrixTsv = parse_matrix_tsv(text)?;
    let metric: Metric = tsv
        .directive("metric")
        .ok_or_else(|| Error::format(0, "missing '# metric: <id>' header"))?
        .parse()
        .map_err(|e: String| Error::format(0, e))?;
    let file_mask = parse_mask(tsv.directive("zero-mask").unwrap_or(""))?;
    let file_lex = Lexicon::new(tsv.rows.iter().map(|r| r.label.as_str()), tsv.columns.iter())?;
    let file_values = align_matrix(&tsv, &file_lex, parse_finite)?;
    for &(n, a) in &file_mask {
        if n >= file_lex.n_nouns() || a >= file_lex.n_adjectives() {
            return Err(Error::format(0, format!("zero-mask cell {n},{a} outside the matrix")));
        }
    }

    let Some(target) = target else {
        return Ok(Parsed {
            metric,
            lexicon: file_lex,
            values: file_values,
            mask: file_mask.into_iter().collect(),
        });
    };
    let rows = target
        .nouns()
        .iter()
        .map(|w| file_lex.require_noun(w))
        .collect::<Result<Vec<_>>>()?;
    let cols = target
        .adjectives()
        .iter()
        .map(|w| file_lex.require_adjective(w))
        .collect::<Result<Vec<_>>>()?;
    let values = Array2::from_shape_fn((rows.len(), cols.len()), |(n, a)| file_values[[rows[n], cols[a]]]);
    let mask = file_mask
        .into_iter()
        .filter_map(|(fn_, fa)| {
            let n = target.noun_index(file_lex.noun(fn_))?;
            let a = target.adjective_index(file_lex.adjective(fa))?;
            Some((n, a))
        })
        .collect();
    Ok(Parsed {
        metric,
        lexicon: target.clone(),
        values,
        mask,
    })
}

fn to_tsv(metric: Metric, lexicon: &Lexicon, values: &Array2<f64>, mask: &ZeroMask) -> String {
    let comments = [format!("metric: {metric}"), format!("zero-mask: {}", format_mask(mask))];
    write_matrix_tsv(&comments, lexicon, |n, a| values[[n, a]].to_string())
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

impl AssociationMatrix {
    /// Parses a raw association TSV. With `lexicon`, rows and columns are
    /// aligned to it; otherwise the file's own labels define the lexicon.
    pub fn parse(text: &str, lexicon: Option<&Lexicon>) -> Result<Self> {
        let p = parse_file(text, lexicon)?;
        AssociationMatrix::new(p.metric, p.lexicon, p.values, p.mask)
    }

    pub fn load(path: impl AsRef<Path>, lexicon: Option<&Lexicon>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, lexicon)
    }

    pub fn to_tsv(&self) -> String {
        to_tsv(self.metric, &self.lexicon, &self.values, &self.zero_mask)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_tsv())
    }
}

impl NormalizedAssociation {
    pub fn parse(text: &str, lexicon: Option<&Lexicon>) -> Result<Self> {
        let p = parse_file(text, lexicon)?;
        NormalizedAssociation::new(p.metric, p.lexicon, p.values, p.mask)
    }

    pub fn load(path: impl AsRef<Path>, lexicon: Option<&Lexicon>) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, lexicon)
    }

    pub fn to_tsv(&self) -> String {
        to_tsv(self.metric, &self.lexicon, &self.values, &self.zero_mask)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write(path.as_ref(), &self.to_tsv())
    }

    /// Reinterprets the normalized grid as a raw matrix (e.g. to renormalize it).
    pub fn to_raw(&self) -> AssociationMatrix {
        AssociationMatrix {
            metric: self.metric,
            lexicon: self.lexicon.clone(),
            values: self.values.clone(),
            zero_mask: self.zero_mask.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::quantile_normalize;
    use super::*;
    use ndarray::array;

    #[test]
    fn tsv_layout() {
        let lex = Lexicon::new(["heart", "phone"], ["dying", "empty"]).unwrap();
        let mask: ZeroMask = [(1, 0)].into_iter().collect();
        let raw = AssociationMatrix::new(Metric::Bigram, lex, array![[1.6, 0.4], [0.0, 2.0]], mask).unwrap();
        assert_eq!(
            raw.to_tsv(),
            "# metric: bigram\n# zero-mask: 1,0\n\tdying\tempty\nheart\t1.6\t0.4\nphone\t0\t2\n"
        );
        let norm = quantile_normalize(&raw);
        let text = norm.to_tsv();
        assert!(text.contains("phone\t0.0000001\t"), "{text}");
        assert_eq!(NormalizedAssociation::parse(&text, None).unwrap(), norm);
    }

    #[test]
    fn realigns_to_target_lexicon() {
        let text = "# metric: graph-relatedness\n# zero-mask: 0,1\n\tb\ta\ny\t0.5\t0\nx\t0.25\t0.75\n";
        let target = Lexicon::new(["x", "y"], ["a", "b"]).unwrap();
        let m = AssociationMatrix::parse(text, Some(&target)).unwrap();
        assert_eq!(m.values(), &array![[0.75, 0.25], [0.0, 0.5]]);
        let expected: ZeroMask = [(1, 0)].into_iter().collect();
        assert_eq!(m.zero_mask(), &expected);
    }

    #[test]
    fn requires_metric_header() {
        let err = AssociationMatrix::parse("\ta\nx\t1\n", None).unwrap_err();
        assert!(err.to_string().contains("metric"));
    }

    #[test]
    fn normalized_range_enforced() {
        let err = NormalizedAssociation::parse("# metric: bigram\n\ta\nx\t1.5\n", None).unwrap_err();
        assert!(matches!(err, Error::BadCell { .. }));
    }
}
