//! Semantic association metrics over the noun-by-adjective grid.
//!
//! Raw metrics are oriented so that larger means more strongly associated.
//! [`quantile_normalize`] maps any of them onto a common `(0, 1]` rank grid,
//! with raw-zero cells pinned at [`ZERO_FLOOR`].

mod io;
mod set;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{check_shape, CooccurrenceCounts, EmbeddingTable, Lexicon, RelatednessTable, TopicTable};
use crate::rsa::{ConfigIndex, Configuration};
use crate::stats::average_ranks;

pub use set::AssociationSet;

/// Value assigned to cells with no observed association.
pub const ZERO_FLOOR: f64 = 1e-7;

/// Set of `(noun, adjective)` cells flagged as raw zeros.
pub type ZeroMask = BTreeSet<(usize, usize)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Bigram,
    EmbeddingCosine,
    GraphRelatedness,
    TopicDistance,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Bigram,
        Metric::EmbeddingCosine,
        Metric::GraphRelatedness,
        Metric::TopicDistance,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Bigram => "bigram",
            Metric::EmbeddingCosine => "embedding-cosine",
            Metric::GraphRelatedness => "graph-relatedness",
            Metric::TopicDistance => "topic-distance",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!("unknown metric '{s}' (expected bigram, embedding-cosine, graph-relatedness or topic-distance)")
            })
    }
}

/// Raw association strengths for one metric, larger = stronger.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationMatrix {
    metric: Metric,
    lexicon: Lexicon,
    values: Array2<f64>,
    zero_mask: ZeroMask,
}

impl AssociationMatrix {
    pub fn new(metric: Metric, lexicon: Lexicon, values: Array2<f64>, zero_mask: ZeroMask) -> Result<Self> {
        check_shape(&lexicon, values.dim())?;
        if let Some(((n, a), _)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::BadCell {
                row: lexicon.noun(n).to_string(),
                col: lexicon.adjective(a).to_string(),
                msg: "non-finite association".into(),
            });
        }
        check_mask(&lexicon, &zero_mask)?;
        Ok(AssociationMatrix {
            metric,
            lexicon,
            values,
            zero_mask,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn zero_mask(&self) -> &ZeroMask {
        &self.zero_mask
    }
}

/// Quantile-normalized association: every entry in `[ZERO_FLOOR, 1]`,
/// masked cells exactly `ZERO_FLOOR`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAssociation {
    metric: Metric,
    lexicon: Lexicon,
    values: Array2<f64>,
    zero_mask: ZeroMask,
}

impl NormalizedAssociation {
    /// Wraps already-normalized values, checking the range and mask invariants.
    pub fn new(metric: Metric, lexicon: Lexicon, values: Array2<f64>, zero_mask: ZeroMask) -> Result<Self> {
        check_shape(&lexicon, values.dim())?;
        check_mask(&lexicon, &zero_mask)?;
        for ((n, a), &v) in values.indexed_iter() {
            let masked = zero_mask.contains(&(n, a));
            let ok = if masked {
                v == ZERO_FLOOR
            } else {
                (ZERO_FLOOR..=1.0).contains(&v)
            };
            if !ok {
                return Err(Error::BadCell {
                    row: lexicon.noun(n).to_string(),
                    col: lexicon.adjective(a).to_string(),
                    msg: format!("normalized value {v} out of range (masked: {masked})"),
                });
            }
        }
        Ok(NormalizedAssociation {
            metric,
            lexicon,
            values,
            zero_mask,
        })
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn zero_mask(&self) -> &ZeroMask {
        &self.zero_mask
    }

    pub fn get(&self, noun: usize, adjective: usize) -> f64 {
        self.values[[noun, adjective]]
    }
}

fn check_mask(lexicon: &Lexicon, mask: &ZeroMask) -> Result<()> {
    for &(n, a) in mask {
        if n >= lexicon.n_nouns() {
            return Err(Error::OutOfRange {
                kind: "noun",
                index: n,
                len: lexicon.n_nouns(),
            });
        }
        if a >= lexicon.n_adjectives() {
            return Err(Error::OutOfRange {
                kind: "adjective",
                index: a,
                len: lexicon.n_adjectives(),
            });
        }
    }
    Ok(())
}

/// Frequency-normalized conditional probability `P(a|n) / P(a)`, with `P(a)`
/// taken from the adjective marginals of the table itself.
pub fn bigram_association(counts: &CooccurrenceCounts) -> Result<AssociationMatrix> {
    let z = &counts.counts;
    let lex = &counts.lexicon;
    let (n_nouns, n_adjs) = z.dim();
    let overflow = |what: &str| Error::Overflow(format!("{what} of {} counts", counts.source));

    let mut row_sums = vec![0u64; n_nouns];
    let mut col_sums = vec![0u64; n_adjs];
    let mut total = 0u64;
    for ((n, a), &c) in z.indexed_iter() {
        row_sums[n] = row_sums[n].checked_add(c).ok_or_else(|| overflow("row sum"))?;
        col_sums[a] = col_sums[a].checked_add(c).ok_or_else(|| overflow("column sum"))?;
        total = total.checked_add(c).ok_or_else(|| overflow("total"))?;
    }
    if let Some(n) = row_sums.iter().position(|&s| s == 0) {
        return Err(Error::NoObservations(lex.noun(n).to_string()));
    }

    let mut mask = ZeroMask::new();
    let values = Array2::from_shape_fn((n_nouns, n_adjs), |(n, a)| {
        let c = z[[n, a]];
        if c == 0 || col_sums[a] == 0 {
            mask.insert((n, a));
            return 0.0;
        }
        // (c / row) / (col / total) == c * total / (row * col), exact in u128
        let num = c as u128 * total as u128;
        let den = row_sums[n] as u128 * col_sums[a] as u128;
        num as f64 / den as f64
    });
    AssociationMatrix::new(Metric::Bigram, lex.clone(), values, mask)
}

/// Cosine similarity between noun and adjective vectors.
pub fn cosine_association(emb: &EmbeddingTable) -> AssociationMatrix {
    let lex = &emb.lexicon;
    let values = Array2::from_shape_fn((lex.n_nouns(), lex.n_adjectives()), |(n, a)| {
        cosine(emb.vector(lex.noun(n)), emb.vector(lex.adjective(a)))
    });
    AssociationMatrix::new(Metric::EmbeddingCosine, lex.clone(), values, ZeroMask::new())
        .expect("cosine of validated vectors is finite")
}

pub(crate) fn cosine(u: &[f64], v: &[f64]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    (dot / (uu * vv).sqrt()).clamp(-1.0, 1.0)
}

/// Relatedness scores used as-is. Exact zeros are treated as missing edges
/// and flagged in the zero mask.
pub fn relatedness_association(rel: &RelatednessTable) -> AssociationMatrix {
    let mask = rel
        .scores
        .indexed_iter()
        .filter(|(_, v)| **v == 0.0)
        .map(|(ix, _)| ix)
        .collect();
    AssociationMatrix::new(Metric::GraphRelatedness, rel.lexicon.clone(), rel.scores.clone(), mask)
        .expect("relatedness table is validated on construction")
}

/// Negated Euclidean distance between topic distributions.
pub fn topic_association(topics: &TopicTable) -> AssociationMatrix {
    let lex = &topics.lexicon;
    let values = Array2::from_shape_fn((lex.n_nouns(), lex.n_adjectives()), |(n, a)| {
        let p = topics.distribution(lex.noun(n));
        let q = topics.distribution(lex.adjective(a));
        let d2: f64 = p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum();
        -d2.sqrt()
    });
    AssociationMatrix::new(Metric::TopicDistance, lex.clone(), values, ZeroMask::new())
        .expect("distances of validated distributions are finite")
}

/// Pools every cell, assigns average ranks and divides by the cell count.
/// Masked cells are then overwritten with [`ZERO_FLOOR`].
pub fn quantile_normalize(raw: &AssociationMatrix) -> NormalizedAssociation {
    let (rows, cols) = raw.values.dim();
    let flat: Vec<f64> = raw.values.iter().copied().collect();
    let total = flat.len() as f64;
    let ranks = average_ranks(&flat);
    let mut values = Array2::from_shape_vec((rows, cols), ranks.into_iter().map(|r| r / total).collect())
        .expect("shape preserved");
    for &(n, a) in &raw.zero_mask {
        values[[n, a]] = ZERO_FLOOR;
    }
    NormalizedAssociation {
        metric: raw.metric,
        lexicon: raw.lexicon.clone(),
        values,
        zero_mask: raw.zero_mask.clone(),
    }
}

/// Product aggregation of two nouns' associations with one adjective.
pub fn pair_association(norm: &NormalizedAssociation, n1: usize, n2: usize, a: usize) -> Result<f64> {
    let lex = &norm.lexicon;
    for n in [n1, n2] {
        if n >= lex.n_nouns() {
            return Err(Error::OutOfRange {
                kind: "noun",
                index: n,
                len: lex.n_nouns(),
            });
        }
    }
    if a >= lex.n_adjectives() {
        return Err(Error::OutOfRange {
            kind: "adjective",
            index: a,
            len: lex.n_adjectives(),
        });
    }
    if n1 == n2 {
        return Err(Error::DegeneratePair(n1));
    }
    Ok(norm.values[[n1, a]] * norm.values[[n2, a]])
}

/// Noun-adjective cells a literal model reads for this configuration:
/// the clue column over all scenario nouns (listener), or both target rows
/// over all scenario adjectives (speaker).
pub fn referenced_cells(config: &Configuration) -> Vec<(usize, usize)> {
    let s = config.scenario();
    match config.index() {
        ConfigIndex::Clue(pos) => {
            let a = s.adjectives()[pos];
            s.nouns().iter().map(|&n| (n, a)).collect()
        }
        ConfigIndex::TargetPair(i, j) => [s.nouns()[i], s.nouns()[j]]
            .into_iter()
            .flat_map(|n| s.adjectives().iter().map(move |&a| (n, a)))
            .collect(),
    }
}

/// Fraction of referenced cells (with multiplicity) that are zero-masked.
pub fn sparsity_report(norm: &NormalizedAssociation, configs: &[Configuration]) -> Result<f64> {
    if configs.is_empty() {
        return Err(Error::InsufficientData("sparsity of an empty configuration list".into()));
    }
    let mut total = 0usize;
    let mut masked = 0usize;
    for config in configs {
        config.scenario().check_lexicon(&norm.lexicon)?;
        for cell in referenced_cells(config) {
            total += 1;
            if norm.zero_mask.contains(&cell) {
                masked += 1;
            }
        }
    }
    Ok(masked as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn lex(n: usize, a: usize) -> Lexicon {
        Lexicon::new(
            (0..n).map(|i| format!("n{i}")),
            (0..a).map(|i| format!("a{i}")),
        )
        .unwrap()
    }

    fn counts(z: Array2<u64>) -> CooccurrenceCounts {
        let (n, a) = z.dim();
        CooccurrenceCounts::new(lex(n, a), z, "test").unwrap()
    }

    #[test]
    fn bigram_worked_example() {
        let s = bigram_association(&counts(array![[8, 2], [2, 8]])).unwrap();
        assert_eq!(s.values(), &array![[1.6, 0.4], [0.4, 1.6]]);
        assert!(s.zero_mask().is_empty());
    }

    #[test]
    fn bigram_uniform_is_one() {
        let s = bigram_association(&counts(Array2::from_elem((3, 4), 7))).unwrap();
        assert!(s.values().iter().all(|v| *v == 1.0));
    }

    #[test]
    fn bigram_rejects_empty_noun() {
        let err = bigram_association(&counts(array![[0, 0], [1, 1]])).unwrap_err();
        assert_eq!(err.to_string(), "noun has no observations: 'n0'");
    }

    #[test]
    fn bigram_zero_cells_and_columns_masked() {
        let s = bigram_association(&counts(array![[3, 0, 0], [1, 2, 0]])).unwrap();
        let expected: ZeroMask = [(0, 1), (0, 2), (1, 2)].into_iter().collect();
        assert_eq!(s.zero_mask(), &expected);
        assert_eq!(s.values()[[1, 2]], 0.0);
    }

    #[test]
    fn bigram_overflow_is_error() {
        let err = bigram_association(&counts(array![[u64::MAX, 1]])).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }

    #[test]
    fn cosine_values() {
        assert_eq!(cosine(&[0.3, 0.7], &[0.3, 0.7]), 1.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert!((cosine(&[1.0, 0.0], &[1.0, 1.0]) - 0.707_106_781_186_547_5).abs() < 1e-15);
    }

    #[test]
    fn topic_distance_negated() {
        let l = Lexicon::new(["x", "y"], ["u", "v"]).unwrap();
        let t = TopicTable::parse("x 1 0\ny 0.5 0.5\nu 0 1\nv 0.5 0.5\n", &l).unwrap();
        let m = topic_association(&t);
        assert!((m.values()[[0, 0]] + 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.values()[[1, 1]], 0.0);
    }

    #[test]
    fn relatedness_passes_through() {
        let l = lex(2, 2);
        let r = RelatednessTable::new(l, array![[0.73, 0.1], [0.0, -0.2]]).unwrap();
        let m = relatedness_association(&r);
        assert_eq!(m.values(), &r.scores);
        assert!(m.zero_mask().contains(&(1, 0)));
        let zeros = RelatednessTable::new(lex(2, 2), Array2::zeros((2, 2))).unwrap();
        assert!(relatedness_association(&zeros).values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn quantile_hand_example() {
        let raw = AssociationMatrix::new(Metric::Bigram, lex(2, 2), array![[5.0, 1.0], [3.0, 2.0]], ZeroMask::new())
            .unwrap();
        assert_eq!(quantile_normalize(&raw).values(), &array![[1.0, 0.25], [0.75, 0.5]]);
        let one = AssociationMatrix::new(Metric::Bigram, lex(1, 1), array![[42.0]], ZeroMask::new()).unwrap();
        assert_eq!(quantile_normalize(&one).values(), &array![[1.0]]);
    }

    #[test]
    fn quantile_masks_zero_counts() {
        let s = bigram_association(&counts(array![[3, 0], [1, 2]])).unwrap();
        let q = quantile_normalize(&s);
        assert_eq!(q.get(0, 1), ZERO_FLOOR);
        assert!(q.values().iter().all(|v| (ZERO_FLOOR..=1.0).contains(v)));
    }

    #[test]
    fn pair_product_and_degenerate() {
        let n = NormalizedAssociation::new(Metric::Bigram, lex(3, 1), array![[0.5], [0.4], [1.0]], ZeroMask::new())
            .unwrap();
        assert!((pair_association(&n, 0, 1, 0).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(pair_association(&n, 2, 2, 0).unwrap_err().to_string(), "degenerate pair: both nouns are index 2");
        assert_eq!(pair_association(&n, 0, 1, 0).unwrap(), pair_association(&n, 1, 0, 0).unwrap());
    }
}
