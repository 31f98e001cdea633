use std::collections::BTreeMap;
use std::path::Path;

use ndarray::Array2;

use super::lexicon::Lexicon;
use super::tsv::{align_matrix, parse_matrix_tsv, parse_vector_file, write_matrix_tsv, write_vector_file};
use crate::error::{Error, Result};

/// Topic rows further than this from summing to one are rejected.
pub const TOPIC_SUM_TOLERANCE: f64 = 1e-6;
/// Rows closer than this to one are kept verbatim so that a write/reload
/// cycle is exact.
const TOPIC_RENORMALIZE_THRESHOLD: f64 = 1e-12;

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Noun-adjective bigram counts, rows in noun order, columns in adjective order.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceCounts {
    pub lexicon: Lexicon,
    pub counts: Array2<u64>,
    pub source: String,
}

impl CooccurrenceCounts {
    pub fn new(lexicon: Lexicon, counts: Array2<u64>, source: impl Into<String>) -> Result<Self> {
        check_shape(&lexicon, counts.dim())?;
        Ok(CooccurrenceCounts {
            lexicon,
            counts,
            source: source.into(),
        })
    }

    pub fn parse(text: &str, lexicon: &Lexicon, default_source: &str) -> Result<Self> {
        let tsv = parse_matrix_tsv(text)?;
        let counts = align_matrix(&tsv, lexicon, parse_count)?;
        let source = tsv.directive("source").unwrap_or(default_source).to_string();
        Ok(CooccurrenceCounts {
            lexicon: lexicon.clone(),
            counts,
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<Self> {
        let path = path.as_ref();
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("unknown");
        Self::parse(&read_file(path)?, lexicon, stem)
    }

    pub fn to_tsv(&self) -> String {
        write_matrix_tsv(&[format!("source: {}", self.source)], &self.lexicon, |n, a| {
            self.counts[[n, a]].to_string()
        })
    }
}

fn parse_count(cell: &str) -> std::result::Result<u64, String> {
    if let Some(rest) = cell.strip_prefix('-') {
        if rest.parse::<f64>().is_ok() {
            return Err(format!("negative count '{cell}'"));
        }
    }
    if !cell.is_empty() && cell.bytes().all(|b| b.is_ascii_digit()) {
        return cell
            .parse::<u64>()
            .map_err(|_| format!("count '{cell}' exceeds the 64-bit range"));
    }
    Err(format!("non-integer count '{cell}'"))
}

/// Word vectors for every lexicon word.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub lexicon: Lexicon,
    pub dimension: usize,
    pub vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn parse(text: &str, lexicon: &Lexicon) -> Result<Self> {
        let (dimension, vectors) = parse_vector_file(text, lexicon)?;
        for (w, v) in &vectors {
            if v.iter().all(|x| *x == 0.0) {
                return Err(Error::ZeroNorm(w.clone()));
            }
        }
        Ok(EmbeddingTable {
            lexicon: lexicon.clone(),
            dimension,
            vectors,
        })
    }

    pub fn load(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, lexicon)
    }

    pub fn vector(&self, word: &str) -> &[f64] {
        &self.vectors[word]
    }

    pub fn to_text(&self) -> String {
        write_vector_file(&self.vectors)
    }
}

/// Precomputed graph relatedness scores, higher meaning more related.
#[derive(Debug, Clone, PartialEq)]
pub struct RelatednessTable {
    pub lexicon: Lexicon,
    pub scores: Array2<f64>,
}

impl RelatednessTable {
    pub fn new(lexicon: Lexicon, scores: Array2<f64>) -> Result<Self> {
        check_shape(&lexicon, scores.dim())?;
        if scores.iter().any(|x| !x.is_finite()) {
            return Err(Error::InsufficientData("relatedness scores must be finite".into()));
        }
        Ok(RelatednessTable { lexicon, scores })
    }

    pub fn parse(text: &str, lexicon: &Lexicon) -> Result<Self> {
        let tsv = parse_matrix_tsv(text)?;
        let scores = align_matrix(&tsv, lexicon, parse_finite)?;
        Ok(RelatednessTable {
            lexicon: lexicon.clone(),
            scores,
        })
    }

    pub fn load(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, lexicon)
    }

    pub fn to_tsv(&self) -> String {
        write_matrix_tsv(&[], &self.lexicon, |n, a| self.scores[[n, a]].to_string())
    }
}

pub(crate) fn parse_finite(cell: &str) -> std::result::Result<f64, String> {
    cell.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("not a finite number: '{cell}'"))
}

/// Per-word distributions over topics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicTable {
    pub lexicon: Lexicon,
    pub topics: usize,
    pub distributions: BTreeMap<String, Vec<f64>>,
}

impl TopicTable {
    pub fn parse(text: &str, lexicon: &Lexicon) -> Result<Self> {
        let (topics, mut distributions) = parse_vector_file(text, lexicon)?;
        for (w, v) in distributions.iter_mut() {
            if v.iter().any(|x| *x < 0.0) {
                return Err(Error::BadDistribution {
                    word: w.clone(),
                    sum: v.iter().sum(),
                });
            }
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > TOPIC_SUM_TOLERANCE {
                return Err(Error::BadDistribution { word: w.clone(), sum });
            }
            if (sum - 1.0).abs() > TOPIC_RENORMALIZE_THRESHOLD {
                v.iter_mut().for_each(|x| *x /= sum);
            }
        }
        Ok(TopicTable {
            lexicon: lexicon.clone(),
            topics,
            distributions,
        })
    }

    pub fn load(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<Self> {
        Self::parse(&read_file(path.as_ref())?, lexicon)
    }

    pub fn distribution(&self, word: &str) -> &[f64] {
        &self.distributions[word]
    }

    pub fn to_text(&self) -> String {
        write_vector_file(&self.distributions)
    }
}

pub(crate) fn check_shape(lexicon: &Lexicon, dim: (usize, usize)) -> Result<()> {
    if dim != (lexicon.n_nouns(), lexicon.n_adjectives()) {
        return Err(Error::LexiconMismatch(format!(
            "matrix is {}x{}, lexicon is {}x{}",
            dim.0,
            dim.1,
            lexicon.n_nouns(),
            lexicon.n_adjectives()
        )));
    }
    Ok(())
}

pub fn load_counts(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<CooccurrenceCounts> {
    CooccurrenceCounts::load(path, lexicon)
}

pub fn load_embeddings(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<EmbeddingTable> {
    EmbeddingTable::load(path, lexicon)
}

pub fn load_relatedness(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<RelatednessTable> {
    RelatednessTable::load(path, lexicon)
}

pub fn load_topics(path: impl AsRef<Path>, lexicon: &Lexicon) -> Result<TopicTable> {
    TopicTable::load(path, lexicon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn lex2() -> Lexicon {
        Lexicon::new(["heart", "phone"], ["dying", "empty"]).unwrap()
    }

    #[test]
    fn counts_direct_parse() {
        let c = CooccurrenceCounts::parse("\tdying\tempty\nheart\t8\t2\nphone\t2\t8\n", &lex2(), "t")
            .unwrap();
        assert_eq!(c.counts, array![[8, 2], [2, 8]]);
        assert_eq!(c.source, "t");
    }

    #[test]
    fn counts_order_insensitive() {
        let a = CooccurrenceCounts::parse("\tdying\tempty\nheart\t1\t2\nphone\t3\t4\n", &lex2(), "x")
            .unwrap();
        let b = CooccurrenceCounts::parse("\tempty\tdying\nphone\t4\t3\nheart\t2\t1\n", &lex2(), "x")
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counts_missing_adjective() {
        let err = CooccurrenceCounts::parse("\tdying\nheart\t1\nphone\t3\n", &lex2(), "x").unwrap_err();
        assert_eq!(err.to_string(), "adjective 'empty' absent");
    }

    #[test]
    fn counts_bad_cells_name_row_and_column() {
        let err = CooccurrenceCounts::parse("\tdying\tempty\nheart\t-1\t2\nphone\t3\t4\n", &lex2(), "x")
            .unwrap_err();
        assert!(matches!(err, Error::BadCell { ref row, ref col, .. } if row == "heart" && col == "dying"));
        let err = CooccurrenceCounts::parse("\tdying\tempty\nheart\t1\t2.5\nphone\t3\t4\n", &lex2(), "x")
            .unwrap_err();
        assert!(err.to_string().contains("non-integer"), "{err}");
        let err = CooccurrenceCounts::parse(
            "\tdying\tempty\nheart\t1\t99999999999999999999999\nphone\t3\t4\n",
            &lex2(),
            "x",
        )
        .unwrap_err();
        assert!(err.to_string().contains("64-bit"), "{err}");
    }

    #[test]
    fn counts_ignore_extra_words() {
        let c = CooccurrenceCounts::parse(
            "\tdying\tloud\tempty\nheart\t1\t9\t2\ncat\t5\t5\t5\nphone\t3\t9\t4\n",
            &lex2(),
            "x",
        )
        .unwrap();
        assert_eq!(c.counts, array![[1, 2], [3, 4]]);
    }

    #[test]
    fn embeddings_parse_and_validate() {
        let e = EmbeddingTable::parse(
            "heart 1.0 0.0\nphone 0 1\ndying 1 1\nempty 2 0\nzebra 5 5\n",
            &lex2(),
        )
        .unwrap();
        assert_eq!(e.dimension, 2);
        assert_eq!(e.vector("heart"), [1.0, 0.0]);
        assert!(matches!(
            EmbeddingTable::parse("heart 0 0\nphone 0 1\ndying 1 1\nempty 2 0\n", &lex2()),
            Err(Error::ZeroNorm(w)) if w == "heart"
        ));
        assert!(matches!(
            EmbeddingTable::parse("heart 1 0\nphone 0 1 3\ndying 1 1\nempty 2 0\n", &lex2()),
            Err(Error::Format { line: 2, .. })
        ));
    }

    #[test]
    fn topics_tolerance() {
        let t = TopicTable::parse(
            "heart 0.5 0.5000001\nphone 1 0\ndying 0 1\nempty 0.25 0.75\n",
            &lex2(),
        )
        .unwrap();
        let d = t.distribution("heart");
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let err = TopicTable::parse("heart 0.5 0.4\nphone 1 0\ndying 0 1\nempty 0.25 0.75\n", &lex2())
            .unwrap_err();
        assert!(err.to_string().starts_with("distribution sums to 0.9"), "{err}");
    }

    #[test]
    fn relatedness_round_trip() {
        let r = RelatednessTable::new(lex2(), array![[0.73, -0.1], [0.0, 1e-9]]).unwrap();
        assert_eq!(RelatednessTable::parse(&r.to_tsv(), &lex2()).unwrap(), r);
    }
}
