use ndarray::{Array2, ArrayView2};

use super::kernel;
use super::{ConfigIndex, Configuration, Depth, ModelSpec, PredictionDistribution, Role, Scenario};
use crate::association::NormalizedAssociation;
use crate::error::{Error, Result};

/// Product-aggregated scores `s[p, a] = v[n1, a] * v[n2, a]` over the
/// scenario's pairs (rows, in [`Scenario::pairs`] order) and adjectives.
pub fn pair_scores(values: ArrayView2<'_, f64>, scenario: &Scenario) -> Array2<f64> {
    let pairs = scenario.pairs();
    let nouns = scenario.nouns();
    let adjs = scenario.adjectives();
    Array2::from_shape_fn((pairs.len(), adjs.len()), |(p, a)| {
        let (i, j) = pairs[p];
        values[[nouns[i], adjs[a]]] * values[[nouns[j], adjs[a]]]
    })
}

fn scores_for(norm: &NormalizedAssociation, config: &Configuration, role: Role) -> Result<Array2<f64>> {
    if config.role() != role {
        return Err(Error::RoleMismatch {
            model: role,
            config: config.role(),
        });
    }
    config.scenario().check_lexicon(norm.lexicon())?;
    Ok(pair_scores(norm.values().view(), config.scenario()))
}

fn listener_output(config: &Configuration, matrix: Array2<f64>) -> Result<PredictionDistribution> {
    let ConfigIndex::Clue(a) = config.index() else {
        unreachable!("role checked by caller")
    };
    PredictionDistribution::new(config.support(), matrix.column(a).to_vec())
}

fn speaker_output(config: &Configuration, matrix: Array2<f64>) -> Result<PredictionDistribution> {
    let ConfigIndex::TargetPair(i, j) = config.index() else {
        unreachable!("role checked by caller")
    };
    let row = config
        .scenario()
        .pairs()
        .iter()
        .position(|&p| p == (i, j))
        .expect("target pair is a scenario pair");
    PredictionDistribution::new(config.support(), matrix.row(row).to_vec())
}

/// `P_L0(p | a)` over the scenario's noun pairs for the configured clue.
pub fn literal_listener(norm: &NormalizedAssociation, config: &Configuration) -> Result<PredictionDistribution> {
    let s = scores_for(norm, config, Role::Listener)?;
    listener_output(config, kernel::literal_listener(&s)?)
}

/// `P_S0(a | p)` over the scenario's adjectives for the configured target pair.
pub fn literal_speaker(norm: &NormalizedAssociation, config: &Configuration) -> Result<PredictionDistribution> {
    let s = scores_for(norm, config, Role::Speaker)?;
    speaker_output(config, kernel::literal_speaker(&s)?)
}

/// `P_L1(p | a)` via `L0 -> S1 -> L1`.
pub fn pragmatic_listener(
    norm: &NormalizedAssociation,
    config: &Configuration,
    alpha: f64,
) -> Result<PredictionDistribution> {
    let s = scores_for(norm, config, Role::Listener)?;
    listener_output(config, kernel::pragmatic_listener(&s, alpha)?)
}

/// `P_S1(a | p)` via `S0 -> L1 -> S1`.
pub fn pragmatic_speaker(
    norm: &NormalizedAssociation,
    config: &Configuration,
    alpha: f64,
) -> Result<PredictionDistribution> {
    let s = scores_for(norm, config, Role::Speaker)?;
    speaker_output(config, kernel::pragmatic_speaker(&s, alpha)?)
}

/// Runs the agent described by `spec` on `config`.
pub fn predict(norm: &NormalizedAssociation, config: &Configuration, spec: &ModelSpec) -> Result<PredictionDistribution> {
    if spec.role != config.role() {
        return Err(Error::RoleMismatch {
            model: spec.role,
            config: config.role(),
        });
    }
    if spec.metric != norm.metric() {
        return Err(Error::MetricMismatch {
            expected: spec.metric,
            found: norm.metric(),
        });
    }
    match (spec.role, spec.depth) {
        (Role::Listener, Depth::Literal) => literal_listener(norm, config),
        (Role::Speaker, Depth::Literal) => literal_speaker(norm, config),
        (Role::Listener, Depth::Pragmatic { alpha }) => pragmatic_listener(norm, config, alpha),
        (Role::Speaker, Depth::Pragmatic { alpha }) => pragmatic_speaker(norm, config, alpha),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::association::{Metric, ZeroMask};
    use crate::ingest::Lexicon;
    use crate::rsa::Answer;
    use ndarray::{array, Array2};

    fn norm(values: Array2<f64>) -> NormalizedAssociation {
        let (n, a) = values.dim();
        let lex = Lexicon::new((0..n).map(|i| format!("n{i}")), (0..a).map(|i| format!("a{i}"))).unwrap();
        NormalizedAssociation::new(Metric::Bigram, lex, values, ZeroMask::new()).unwrap()
    }

    fn scenario(n: &NormalizedAssociation, k: usize, m: usize) -> Scenario {
        Scenario::new((0..k).collect(), (0..m).collect(), n.lexicon()).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn literal_listener_hand_example() {
        // pair scores 0.5, 0.5, 1.0
        let nm = norm(array![[0.5], [1.0], [1.0]]);
        let c = Configuration::listener(scenario(&nm, 3, 1), 0).unwrap();
        let d = literal_listener(&nm, &c).unwrap();
        assert_close(d.probs(), &[0.25, 0.25, 0.5]);
        assert_eq!(d.support()[2], Answer::Pair(1, 2));
    }

    #[test]
    fn singleton_supports() {
        let nm = norm(array![[0.3, 0.9], [0.7, 0.2]]);
        let c = Configuration::listener(scenario(&nm, 2, 2), 1).unwrap();
        assert_eq!(literal_listener(&nm, &c).unwrap().probs(), [1.0]);
        let s = Scenario::new(vec![0, 1], vec![1], nm.lexicon()).unwrap();
        let c = Configuration::speaker(s, 0, 1).unwrap();
        assert_eq!(literal_speaker(&nm, &c).unwrap().probs(), [1.0]);
    }

    #[test]
    fn literal_speaker_already_normalized() {
        let nm = norm(array![[0.2, 0.3, 0.5], [1.0, 1.0, 1.0]]);
        let c = Configuration::speaker(scenario(&nm, 2, 3), 0, 1).unwrap();
        assert_close(literal_speaker(&nm, &c).unwrap().probs(), &[0.2, 0.3, 0.5]);
    }

    #[test]
    fn pragmatic_listener_single_adjective_is_uniform() {
        let nm = norm(array![[0.9], [0.1], [0.4]]);
        let c = Configuration::listener(scenario(&nm, 3, 1), 0).unwrap();
        assert_close(pragmatic_listener(&nm, &c, 1.0).unwrap().probs(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn constant_matrix_gives_uniform() {
        let nm = norm(Array2::from_elem((4, 3), 0.5));
        let s = scenario(&nm, 4, 3);
        for c in s.speaker_configs() {
            assert_close(pragmatic_speaker(&nm, &c, 1.0).unwrap().probs(), &[1.0 / 3.0; 3]);
        }
        for c in s.listener_configs() {
            assert_close(pragmatic_listener(&nm, &c, 1.0).unwrap().probs(), &[1.0 / 6.0; 6]);
        }
    }

    #[test]
    fn predict_dispatch_and_errors() {
        let nm = norm(array![[0.9, 0.2], [0.4, 0.6], [0.3, 0.8]]);
        let s = scenario(&nm, 3, 2);
        let lc = Configuration::listener(s.clone(), 1).unwrap();
        let lit = ModelSpec::literal(Metric::Bigram, Role::Listener);
        assert_eq!(predict(&nm, &lc, &lit).unwrap(), literal_listener(&nm, &lc).unwrap());
        let p5 = ModelSpec::pragmatic(Metric::Bigram, Role::Listener, 5.0).unwrap();
        assert_eq!(predict(&nm, &lc, &p5).unwrap(), pragmatic_listener(&nm, &lc, 5.0).unwrap());
        let sp = ModelSpec::pragmatic(Metric::Bigram, Role::Speaker, 1.0).unwrap();
        assert!(matches!(predict(&nm, &lc, &sp), Err(Error::RoleMismatch { .. })));
        let other = ModelSpec::literal(Metric::TopicDistance, Role::Listener);
        assert!(matches!(predict(&nm, &lc, &other), Err(Error::MetricMismatch { .. })));
        let spk = Configuration::speaker(s, 0, 2).unwrap();
        assert!(matches!(pragmatic_speaker(&nm, &spk, 0.0), Err(Error::InvalidAlpha(_))));
    }
}
