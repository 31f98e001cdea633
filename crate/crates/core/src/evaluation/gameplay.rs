use std::collections::BTreeMap;

use serde::Serialize;

use super::scoring::{mean_sem, MeanSem, ResponseRecord};
use crate::association::AssociationSet;
use crate::error::{Error, Result};
use crate::rsa::{Answer, Configuration, ModelSpec, PredictionDistribution, Role, Scenario};

/// Probability that a clue drawn from `speaker` leads the listener to pick
/// `target`: `Σ_a P(L = target | a) P(S = a)`.
///
/// `listeners` maps lexicon adjective indices to listener distributions; one
/// is required for every clue the speaker can give.
pub fn average_success(
    scenario: &Scenario,
    target: Answer,
    speaker: &PredictionDistribution,
    listeners: &BTreeMap<usize, PredictionDistribution>,
) -> Result<f64> {
    let Answer::Pair(..) = target else {
        return Err(Error::SupportMismatch("target must be a noun pair".into()));
    };
    let expected: Vec<Answer> = scenario.adjectives().iter().map(|&a| Answer::Adjective(a)).collect();
    if speaker.support() != expected.as_slice() {
        return Err(Error::SupportMismatch("speaker distribution is not over the scenario's adjectives".into()));
    }
    let mut success = 0.0;
    for (answer, &p) in speaker.support().iter().zip(speaker.probs()) {
        if p == 0.0 {
            continue;
        }
        let Answer::Adjective(a) = *answer else { unreachable!() };
        let listener = listeners
            .get(&a)
            .ok_or_else(|| Error::InsufficientData(format!("no listener distribution for adjective {a}")))?;
        let hit = listener
            .prob(&target)
            .ok_or_else(|| Error::SupportMismatch("target pair missing from listener support".into()))?;
        success += hit * p;
    }
    Ok(success)
}

/// [`average_success`] estimated from human responses: the speaker record for
/// the target pair and listener records keyed by clue.
pub fn empirical_success(speaker: &ResponseRecord, listeners: &[ResponseRecord]) -> Result<f64> {
    let config = speaker.configuration();
    let target = config
        .target()
        .ok_or_else(|| Error::RoleMismatch {
            model: Role::Speaker,
            config: config.role(),
        })?;
    let scenario = config.scenario().canonical();
    let listener_dists = listeners
        .iter()
        .filter(|r| r.configuration().scenario().canonical() == scenario)
        .filter_map(|r| Some((r.configuration().clue()?, r.relative_frequencies())))
        .collect();
    average_success(config.scenario(), target, &speaker.relative_frequencies(), &listener_dists)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessRow {
    pub scenario: usize,
    /// Lexicon noun indices of the target pair.
    pub target: (usize, usize),
    pub success: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameplayReport {
    pub per_config: Vec<SuccessRow>,
    pub per_scenario: Vec<f64>,
    pub mean: f64,
    /// `None` when fewer than two configurations were played.
    pub sem: Option<f64>,
}

/// Exact expected success of a model speaker paired with a model listener
/// over every speaker configuration of every scenario.
pub fn simulate_gameplay(
    tables: &AssociationSet,
    scenarios: &[Scenario],
    speaker: &ModelSpec,
    listener: &ModelSpec,
) -> Result<GameplayReport> {
    if speaker.role != Role::Speaker || listener.role != Role::Listener {
        return Err(Error::InvalidSettings("simulation needs a speaker model and a listener model".into()));
    }
    simulate_gameplay_with(scenarios, |c| tables.predict(c, speaker), |c| tables.predict(c, listener))
}

/// [`simulate_gameplay`] for arbitrary agents, given as functions from a
/// configuration to a distribution over its support.
pub fn simulate_gameplay_with<S, L>(scenarios: &[Scenario], speaker: S, listener: L) -> Result<GameplayReport>
where
    S: Fn(&Configuration) -> Result<PredictionDistribution>,
    L: Fn(&Configuration) -> Result<PredictionDistribution>,
{
    if scenarios.is_empty() {
        return Err(Error::InsufficientData("no scenarios to simulate".into()));
    }
    let mut per_config = Vec::new();
    let mut per_scenario = Vec::with_capacity(scenarios.len());
    for (si, scenario) in scenarios.iter().enumerate() {
        let listeners = scenario
            .listener_configs()
            .iter()
            .map(|c| Ok((c.clue().expect("listener config"), listener(c)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut sum = 0.0;
        let configs: Vec<Configuration> = scenario.speaker_configs();
        for c in &configs {
            let target = c.target().expect("speaker config");
            let success = average_success(scenario, target, &speaker(c)?, &listeners)?;
            let Answer::Pair(a, b) = target else { unreachable!() };
            per_config.push(SuccessRow {
                scenario: si,
                target: (a, b),
                success,
            });
            sum += success;
        }
        per_scenario.push(sum / configs.len() as f64);
    }
    let values: Vec<f64> = per_config.iter().map(|r| r.success).collect();
    let (mean, sem) = match mean_sem(&values) {
        Ok(MeanSem { mean, sem, .. }) => (mean, Some(sem)),
        Err(_) => (values[0], None),
    };
    Ok(GameplayReport {
        per_config,
        per_scenario,
        mean,
        sem,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Lexicon;

    fn scenario() -> Scenario {
        let lex = Lexicon::new(["a", "b", "c"], ["x", "y"]).unwrap();
        Scenario::new(vec![0, 1, 2], vec![0, 1], &lex).unwrap()
    }

    fn listener(p_target: f64) -> PredictionDistribution {
        let rest = (1.0 - p_target) / 2.0;
        PredictionDistribution::new(
            vec![Answer::Pair(0, 1), Answer::Pair(0, 2), Answer::Pair(1, 2)],
            vec![p_target, rest, rest],
        )
        .unwrap()
    }

    fn speaker(p: [f64; 2]) -> PredictionDistribution {
        PredictionDistribution::new(vec![Answer::Adjective(0), Answer::Adjective(1)], p.to_vec()).unwrap()
    }

    #[test]
    fn hand_values() {
        let s = scenario();
        let t = Answer::Pair(0, 1);
        let l = BTreeMap::from([(0, listener(1.0)), (1, listener(1.0))]);
        assert_eq!(average_success(&s, t, &speaker([1.0, 0.0]), &l).unwrap(), 1.0);
        let l = BTreeMap::from([(0, listener(0.8)), (1, listener(0.2))]);
        assert!((average_success(&s, t, &speaker([0.5, 0.5]), &l).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uniform_listener_is_chance() {
        let s = scenario();
        let u = listener(1.0 / 3.0);
        let l = BTreeMap::from([(0, u.clone()), (1, u)]);
        let v = average_success(&s, Answer::Pair(0, 2), &speaker([0.9, 0.1]), &l).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn missing_listener_is_error_only_with_mass() {
        let s = scenario();
        let l = BTreeMap::from([(0, listener(0.6))]);
        assert!(average_success(&s, Answer::Pair(0, 1), &speaker([0.5, 0.5]), &l).is_err());
        assert!((average_success(&s, Answer::Pair(0, 1), &speaker([1.0, 0.0]), &l).unwrap() - 0.6).abs() < 1e-15);
    }
}
