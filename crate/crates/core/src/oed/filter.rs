use std::collections::{BTreeSet, HashMap};

use super::DesignCandidate;
use crate::error::{Error, Result};

/// A lexicon word, tagged by list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordRef {
    Noun(usize),
    Adjective(usize),
}

/// All nouns and adjectives of the candidate's scenario.
pub fn candidate_words(candidate: &DesignCandidate) -> BTreeSet<WordRef> {
    let s = candidate.design.scenario();
    s.nouns()
        .iter()
        .map(|&n| WordRef::Noun(n))
        .chain(s.adjectives().iter().map(|&a| WordRef::Adjective(a)))
        .collect()
}

/// Number of words one candidate has that the other lacks, taking the larger
/// side (equal to either side when both scenarios have the same shape).
pub fn word_difference(a: &BTreeSet<WordRef>, b: &BTreeSet<WordRef>) -> usize {
    a.difference(b).count().max(b.difference(a).count())
}

/// Greedy diversity filter over candidates sorted by descending utility.
///
/// A candidate is kept when it differs from every kept candidate in at least
/// `min_word_difference` words and keeping it leaves every word used by at
/// most `max_word_occurrence` kept candidates.
pub fn filter_candidates(
    candidates: &[DesignCandidate],
    min_word_difference: usize,
    max_word_occurrence: usize,
) -> Vec<DesignCandidate> {
    debug_assert!(candidates.windows(2).all(|w| w[0].utility >= w[1].utility));
    let mut kept: Vec<DesignCandidate> = Vec::new();
    let mut kept_words: Vec<BTreeSet<WordRef>> = Vec::new();
    let mut occurrences: HashMap<WordRef, usize> = HashMap::new();
    for c in candidates {
        let words = candidate_words(c);
        if words
            .iter()
            .any(|w| occurrences.get(w).copied().unwrap_or(0) + 1 > max_word_occurrence)
        {
            continue;
        }
        if kept_words.iter().any(|k| word_difference(&words, k) < min_word_difference) {
            continue;
        }
        for w in &words {
            *occurrences.entry(*w).or_default() += 1;
        }
        kept.push(c.clone());
        kept_words.push(words);
    }
    kept
}

/// Keeps the entries whose mean confidence is strictly above the grand mean
/// across entries (with a 1e-12 margin so that equal ratings never pass).
pub fn confidence_filter<T: Clone>(entries: &[(T, f64)]) -> Result<Vec<T>> {
    if entries.is_empty() {
        return Err(Error::InsufficientData("confidence filter on an empty list".into()));
    }
    if let Some((_, c)) = entries.iter().find(|(_, c)| !(1.0..=5.0).contains(c)) {
        return Err(Error::InsufficientData(format!("mean confidence {c} outside the 1-5 scale")));
    }
    let grand = entries.iter().map(|(_, c)| c).sum::<f64>() / entries.len() as f64;
    Ok(entries
        .iter()
        .filter(|(_, c)| *c > grand + 1e-12)
        .map(|(t, _)| t.clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Lexicon;
    use crate::oed::Design;
    use crate::rsa::Scenario;

    fn lex() -> Lexicon {
        Lexicon::new((0..8).map(|i| format!("n{i}")), (0..8).map(|i| format!("a{i}"))).unwrap()
    }

    fn cand(nouns: &[usize], adjs: &[usize], utility: f64) -> DesignCandidate {
        DesignCandidate {
            design: Design::Scenario(Scenario::new(nouns.to_vec(), adjs.to_vec(), &lex()).unwrap()),
            utility,
        }
    }

    #[test]
    fn empty_in_empty_out() {
        assert!(filter_candidates(&[], 2, 20).is_empty());
    }

    #[test]
    fn one_word_difference_rejected() {
        let out = filter_candidates(&[cand(&[0, 1, 2], &[0, 1], 0.9), cand(&[0, 1, 3], &[0, 1], 0.8)], 2, 20);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].utility, 0.9);
        let out = filter_candidates(&[cand(&[0, 1, 2], &[0, 1], 0.9), cand(&[0, 4, 3], &[0, 1], 0.8)], 2, 20);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn occurrence_cap() {
        let c = [cand(&[0, 1, 2], &[0, 1], 0.9), cand(&[0, 4, 5], &[2, 3], 0.8), cand(&[6, 7, 3], &[4, 5], 0.7)];
        let out = filter_candidates(&c, 2, 1);
        assert_eq!(out.iter().map(|c| c.utility).collect::<Vec<_>>(), [0.9, 0.7]);
    }

    #[test]
    fn confidence_rules() {
        assert!(confidence_filter::<u8>(&[]).is_err());
        assert!(confidence_filter(&[(1, 3.7), (2, 3.7), (3, 3.7)]).unwrap().is_empty());
        assert_eq!(confidence_filter(&[('a', 3.0), ('b', 5.0)]).unwrap(), ['b']);
        assert_eq!(confidence_filter(&[(1, 2.0), (2, 3.0), (3, 4.0)]).unwrap(), [3]);
        assert!(confidence_filter(&[(1, 0.5)]).is_err());
    }
}
