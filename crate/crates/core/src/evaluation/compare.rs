use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::association::{AssociationSet, NormalizedAssociation};
use crate::error::{Error, Result};
use crate::rsa::{Configuration, ModelSpec};
use crate::stats::{mean, spearman};

/// Spearman correlation between two metrics over every noun-adjective cell.
pub fn metric_rank_correlation(a: &NormalizedAssociation, b: &NormalizedAssociation) -> Result<f64> {
    if a.lexicon() != b.lexicon() {
        return Err(Error::LexiconMismatch(format!("{} and {} tables", a.metric(), b.metric())));
    }
    let x: Vec<f64> = a.values().iter().copied().collect();
    let y: Vec<f64> = b.values().iter().copied().collect();
    Ok(spearman(&x, &y))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Agreement {
    /// Fraction of configurations whose top-answer sets overlap.
    pub top_answer: f64,
    /// Mean Spearman correlation between the two prediction vectors.
    pub rank_correlation: f64,
}

pub fn model_agreement(
    tables: &AssociationSet,
    a: &ModelSpec,
    b: &ModelSpec,
    configs: &[Configuration],
) -> Result<Agreement> {
    if configs.is_empty() {
        return Err(Error::InsufficientData("no configurations to compare on".into()));
    }
    let mut tops = Vec::with_capacity(configs.len());
    let mut ranks = Vec::with_capacity(configs.len());
    for c in configs {
        let pa = tables.predict(c, a)?;
        let pb = tables.predict(c, b)?;
        let top_b = pb.top_answers();
        tops.push(pa.top_answers().iter().any(|x| top_b.contains(x)) as u8 as f64);
        ranks.push(spearman(pa.probs(), pb.probs()));
    }
    Ok(Agreement {
        top_answer: mean(&tops),
        rank_correlation: mean(&ranks),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
}

/// Welch's unequal-variance t-test of `a` against `b`.
pub fn confidence_ttest(a: &[f64], b: &[f64]) -> Result<TTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData("t-test needs at least 2 values per group".into()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (mean(a), mean(b));
    let var = |x: &[f64], m: f64| x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0);
    let (va, vb) = (var(a, ma) / na, var(b, mb) / nb);
    let se2 = va + vb;
    if se2 == 0.0 {
        let df = na + nb - 2.0;
        return Ok(if ma == mb {
            TTest { t: 0.0, df, p: 1.0 }
        } else {
            TTest {
                t: if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY },
                df,
                p: 0.0,
            }
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::InsufficientData(e.to_string()))?;
    let p = (2.0 * dist.cdf(-t.abs())).min(1.0);
    Ok(TTest { t, df, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welch_hand_values() {
        // scipy.stats.ttest_ind(equal_var=False)
        let r = confidence_ttest(&[2.0, 3.0, 4.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((r.t + 2.449_489_742_783_178).abs() < 1e-12);
        assert!((r.df - 4.0).abs() < 1e-12);
        assert!((r.p - 0.070_483_996_910_219_93).abs() < 1e-9);
        let r = confidence_ttest(&[1.0, 2.0, 2.0, 3.0, 5.0], &[4.0, 4.0, 5.0, 6.0]).unwrap();
        assert!((r.t + 2.589_860_239_094_208_7).abs() < 1e-12);
        assert!((r.df - 6.745_904_199_531_156).abs() < 1e-9);
        assert!((r.p - 0.037_127_670_280_480_606).abs() < 1e-9);
    }

    #[test]
    fn degenerate_groups() {
        let r = confidence_ttest(&[3.0, 3.0], &[3.0, 3.0]).unwrap();
        assert_eq!((r.t, r.p), (0.0, 1.0));
        let r = confidence_ttest(&[1.0; 4], &[5.0; 4]).unwrap();
        assert!(r.t < 0.0 && r.p < 1e-3);
        let r = confidence_ttest(&[2.0, 4.0, 3.0], &[2.0, 4.0, 3.0]).unwrap();
        assert_eq!(r.t, 0.0);
        assert!((r.p - 1.0).abs() < 1e-12);
        assert!(confidence_ttest(&[1.0], &[1.0, 2.0]).is_err());
    }
}
