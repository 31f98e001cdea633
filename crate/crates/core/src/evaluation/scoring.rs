use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::association::AssociationSet;
use crate::error::{Error, Result};
use crate::rsa::{Answer, Configuration, ModelSpec, PredictionDistribution};
use crate::stats::{mean, sample_sd, spearman};

/// Observed answers for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseRecord {
    configuration: Configuration,
    counts: BTreeMap<Answer, u64>,
    confidence: Vec<u8>,
}

impl ResponseRecord {
    pub fn new(configuration: Configuration, counts: BTreeMap<Answer, u64>, confidence: Vec<u8>) -> Result<Self> {
        let support = configuration.support();
        if let Some(a) = counts.keys().find(|a| !support.contains(a)) {
            return Err(Error::SupportMismatch(format!("answer {a:?} is not a possible response")));
        }
        if counts.values().sum::<u64>() == 0 {
            return Err(Error::InsufficientData("response record without responses".into()));
        }
        if let Some(c) = confidence.iter().find(|c| !(1..=5).contains(*c)) {
            return Err(Error::InsufficientData(format!("confidence rating {c} outside 1-5")));
        }
        Ok(ResponseRecord {
            configuration,
            counts,
            confidence,
        })
    }

    pub fn configuration(&self) -> &Configuration {
        &self.configuration
    }

    pub fn counts(&self) -> &BTreeMap<Answer, u64> {
        &self.counts
    }

    pub fn confidence(&self) -> &[u8] {
        &self.confidence
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn mean_confidence(&self) -> Option<f64> {
        (!self.confidence.is_empty())
            .then(|| self.confidence.iter().map(|&c| c as f64).sum::<f64>() / self.confidence.len() as f64)
    }

    /// Counts in the order of `support`, unchosen answers as 0.
    pub fn aligned_counts(&self, support: &[Answer]) -> Vec<f64> {
        support
            .iter()
            .map(|a| self.counts.get(a).copied().unwrap_or(0) as f64)
            .collect()
    }

    /// Relative response frequencies over the configuration's support.
    pub fn relative_frequencies(&self) -> PredictionDistribution {
        let support = self.configuration.support();
        let total = self.total() as f64;
        let probs = self.aligned_counts(&support).into_iter().map(|c| c / total).collect();
        PredictionDistribution::new(support, probs).expect("frequencies of a non-empty record")
    }

    /// Most frequent answers (all of them when tied).
    pub fn modal_answers(&self) -> BTreeSet<Answer> {
        let max = self.counts.values().copied().max().unwrap_or(0);
        self.counts
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(a, _)| *a)
            .collect()
    }
}

fn check_support(pred: &PredictionDistribution, resp: &ResponseRecord) -> Result<()> {
    let expected: BTreeSet<Answer> = resp.configuration.support().into_iter().collect();
    let got: BTreeSet<Answer> = pred.support().iter().copied().collect();
    if expected != got || got.len() != pred.len() {
        return Err(Error::SupportMismatch(
            "prediction and response cover different answers".into(),
        ));
    }
    Ok(())
}

/// 1 when the model's top answers and the most frequent responses overlap.
pub fn top_answer(pred: &PredictionDistribution, resp: &ResponseRecord) -> Result<u8> {
    check_support(pred, resp)?;
    let modal = resp.modal_answers();
    Ok(pred.top_answers().iter().any(|a| modal.contains(a)) as u8)
}

/// Expected top-answer score if model ties were broken uniformly at random:
/// the fraction of the model's top answers that are modal responses.
pub fn expected_top_answer(pred: &PredictionDistribution, resp: &ResponseRecord) -> Result<f64> {
    check_support(pred, resp)?;
    let modal = resp.modal_answers();
    let top = pred.top_answers();
    Ok(top.iter().filter(|a| modal.contains(a)).count() as f64 / top.len() as f64)
}

/// Spearman correlation between predicted probabilities and response counts
/// over the full support (unchosen answers tie at zero).
pub fn rank_correlation(pred: &PredictionDistribution, resp: &ResponseRecord) -> Result<f64> {
    check_support(pred, resp)?;
    if pred.len() < 2 {
        return Err(Error::InsufficientData("rank correlation needs at least 2 answers".into()));
    }
    Ok(spearman(pred.probs(), &resp.aligned_counts(pred.support())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfigScore {
    pub top_answer: f64,
    pub rank_correlation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanSem {
    pub mean: f64,
    pub sem: f64,
    pub n: usize,
}

/// Mean and standard error (sample sd / sqrt n). Needs at least 2 values.
pub fn mean_sem(values: &[f64]) -> Result<MeanSem> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "standard error needs at least 2 values, got {}",
            values.len()
        )));
    }
    Ok(MeanSem {
        mean: mean(values),
        sem: sample_sd(values) / (values.len() as f64).sqrt(),
        n: values.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub per_config: Vec<ConfigScore>,
    pub top_answer: MeanSem,
    pub rank_correlation: MeanSem,
}

pub fn aggregate(scores: &[ConfigScore]) -> Result<ScoreReport> {
    let top: Vec<f64> = scores.iter().map(|s| s.top_answer).collect();
    let rank: Vec<f64> = scores.iter().map(|s| s.rank_correlation).collect();
    Ok(ScoreReport {
        per_config: scores.to_vec(),
        top_answer: mean_sem(&top)?,
        rank_correlation: mean_sem(&rank)?,
    })
}

/// Scores one model against every response record of its role.
pub fn score_model(tables: &AssociationSet, spec: &ModelSpec, responses: &[ResponseRecord]) -> Result<ScoreReport> {
    let scores = responses
        .iter()
        .filter(|r| r.configuration.role() == spec.role)
        .map(|r| {
            let pred = tables.predict(&r.configuration, spec)?;
            Ok(ConfigScore {
                top_answer: top_answer(&pred, r)? as f64,
                rank_correlation: rank_correlation(&pred, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(&scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Lexicon;
    use crate::rsa::Scenario;

    fn speaker_record(counts: &[u64]) -> ResponseRecord {
        let lex = Lexicon::new(["a", "b", "c"], ["x", "y", "z"]).unwrap();
        let s = Scenario::new(vec![0, 1, 2], vec![0, 1, 2], &lex).unwrap();
        let c = Configuration::speaker(s, 0, 1).unwrap();
        let map = counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| (Answer::Adjective(i), n))
            .collect();
        ResponseRecord::new(c, map, vec![3, 4]).unwrap()
    }

    fn pred(p: &[f64]) -> PredictionDistribution {
        PredictionDistribution::new((0..p.len()).map(Answer::Adjective).collect(), p.to_vec()).unwrap()
    }

    #[test]
    fn top_answer_cases() {
        assert_eq!(top_answer(&pred(&[0.2, 0.7, 0.1]), &speaker_record(&[1, 5, 0])).unwrap(), 1);
        assert_eq!(top_answer(&pred(&[0.2, 0.7, 0.1]), &speaker_record(&[5, 1, 0])).unwrap(), 0);
        assert_eq!(top_answer(&pred(&[0.4, 0.4, 0.2]), &speaker_record(&[3, 1, 0])).unwrap(), 1);
        assert_eq!(expected_top_answer(&pred(&[0.4, 0.4, 0.2]), &speaker_record(&[3, 1, 0])).unwrap(), 0.5);
    }

    #[test]
    fn rank_correlation_cases() {
        assert_eq!(rank_correlation(&pred(&[0.5, 0.3, 0.2]), &speaker_record(&[3, 2, 1])).unwrap(), 1.0);
        assert_eq!(rank_correlation(&pred(&[0.5, 0.3, 0.2]), &speaker_record(&[1, 2, 3])).unwrap(), -1.0);
        let r = rank_correlation(&pred(&[0.5, 0.3, 0.2]), &speaker_record(&[2, 2, 0])).unwrap();
        assert!((r - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn support_mismatch() {
        let p = PredictionDistribution::new(vec![Answer::Adjective(0), Answer::Adjective(1)], vec![0.5, 0.5]).unwrap();
        assert!(matches!(top_answer(&p, &speaker_record(&[1, 1, 1])), Err(Error::SupportMismatch(_))));
    }

    #[test]
    fn record_validation() {
        let lex = Lexicon::new(["a", "b", "c"], ["x", "y"]).unwrap();
        let s = Scenario::new(vec![0, 1], vec![0, 1], &lex).unwrap();
        let c = Configuration::listener(s, 0).unwrap();
        let bad = BTreeMap::from([(Answer::Pair(0, 2), 1)]);
        assert!(ResponseRecord::new(c.clone(), bad, vec![]).is_err());
        assert!(ResponseRecord::new(c.clone(), BTreeMap::new(), vec![]).is_err());
        let ok = BTreeMap::from([(Answer::Pair(0, 1), 2)]);
        assert!(ResponseRecord::new(c.clone(), ok.clone(), vec![6]).is_err());
        assert_eq!(ResponseRecord::new(c, ok, vec![2, 5]).unwrap().mean_confidence(), Some(3.5));
    }

    #[test]
    fn aggregate_cases() {
        let s = |t| ConfigScore {
            top_answer: t,
            rank_correlation: 0.3,
        };
        let r = aggregate(&[s(0.0), s(1.0)]).unwrap();
        assert_eq!(r.top_answer.mean, 0.5);
        assert!((r.top_answer.sem - 0.5).abs() < 1e-15);
        assert_eq!(r.rank_correlation.sem, 0.0);
        assert!(aggregate(&[s(1.0)]).is_err());
    }
}
