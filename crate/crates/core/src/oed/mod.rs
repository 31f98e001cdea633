//! Choosing game configurations that best discriminate between candidate
//! models.
//!
//! The utility of a configuration is the mutual information (in bits) between
//! the model identity, under a uniform prior, and the response it elicits.
//! Designs are found by seeded Monte Carlo sampling of the configuration space
//! and thinned with greedy diversity filters.

mod filter;
mod search;

use crate::association::AssociationSet;
use crate::error::{Error, Result};
use crate::rsa::{Configuration, ModelSpec, PredictionDistribution, Role, Scenario};

pub use filter::{candidate_words, confidence_filter, filter_candidates, word_difference, WordRef};
pub use search::{monte_carlo_search, Design, DesignCandidate, Objective, SearchMode, SearchSettings};

/// Candidate models sharing one role, with a uniform prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSet {
    role: Role,
    models: Vec<ModelSpec>,
}

impl ModelSet {
    pub fn new(models: Vec<ModelSpec>) -> Result<Self> {
        let first = models
            .first()
            .ok_or_else(|| Error::InsufficientData("empty model set".into()))?;
        let role = first.role;
        if let Some(m) = models.iter().find(|m| m.role != role) {
            return Err(Error::RoleMismatch {
                model: m.role,
                config: role,
            });
        }
        Ok(ModelSet { role, models })
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn models(&self) -> &[ModelSpec] {
        &self.models
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

/// Per-model response distributions and their uniform-prior mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseProbabilities {
    pub per_model: Vec<PredictionDistribution>,
    pub mixture: Vec<f64>,
}

pub fn response_probability(
    tables: &AssociationSet,
    config: &Configuration,
    models: &ModelSet,
) -> Result<ResponseProbabilities> {
    let per_model = models
        .models()
        .iter()
        .map(|spec| tables.predict(config, spec))
        .collect::<Result<Vec<_>>>()?;
    let n = per_model.len() as f64;
    let mut mixture = vec![0.0; per_model[0].len()];
    for d in &per_model {
        for (acc, p) in mixture.iter_mut().zip(d.probs()) {
            *acc += p;
        }
    }
    mixture.iter_mut().for_each(|x| *x /= n);
    Ok(ResponseProbabilities { per_model, mixture })
}

/// Expected information gain (bits) about which row of `per_model` generated
/// an outcome, starting from a uniform prior over rows:
///
/// `U = Σ_y P(y) Σ_m P(m|y) log2(P(m|y) / P(m))`, with
/// `P(m|y) = P_m(y) / (|M| P(y))`.
pub fn information_gain(per_model: &[&[f64]]) -> f64 {
    let n_models = per_model.len();
    if n_models < 2 {
        return 0.0;
    }
    let prior = 1.0 / n_models as f64;
    let n_outcomes = per_model[0].len();
    let mut utility = 0.0;
    for y in 0..n_outcomes {
        let p_y: f64 = per_model.iter().map(|p| p[y]).sum::<f64>() * prior;
        if p_y <= 0.0 {
            continue;
        }
        let mut u_y = 0.0;
        for p in per_model {
            let posterior = p[y] * prior / p_y;
            if posterior > 0.0 {
                u_y += posterior * (posterior / prior).log2();
            }
        }
        utility += p_y * u_y;
    }
    utility.max(0.0)
}

/// Mutual information between model identity and the response to `config`.
pub fn configuration_utility(tables: &AssociationSet, config: &Configuration, models: &ModelSet) -> Result<f64> {
    if models.len() < 2 {
        log::warn!("utility with {} model(s) is 0 by definition", models.len());
    }
    let r = response_probability(tables, config, models)?;
    let rows: Vec<&[f64]> = r.per_model.iter().map(|d| d.probs()).collect();
    Ok(information_gain(&rows))
}

/// Geometric mean of the utilities of every speaker and listener
/// configuration of `scenario`. Zero if any configuration has zero utility.
pub fn scenario_joint_utility(
    tables: &AssociationSet,
    scenario: &Scenario,
    speaker_models: &ModelSet,
    listener_models: &ModelSet,
) -> Result<f64> {
    if speaker_models.role() != Role::Speaker || listener_models.role() != Role::Listener {
        return Err(Error::InvalidSettings(
            "joint utility needs a speaker model set and a listener model set".into(),
        ));
    }
    let mut utilities = Vec::with_capacity(scenario.n_pairs() + scenario.adjectives().len());
    for c in scenario.speaker_configs() {
        utilities.push(configuration_utility(tables, &c, speaker_models)?);
    }
    for c in scenario.listener_configs() {
        utilities.push(configuration_utility(tables, &c, listener_models)?);
    }
    Ok(geometric_mean(&utilities))
}

pub(crate) fn geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() || values.iter().any(|v| *v <= 0.0) {
        return 0.0;
    }
    let log_mean = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    log_mean.exp()
}

/// `log2 |M|`, the largest utility a model set can reach.
pub fn max_utility(models: &ModelSet) -> f64 {
    (models.len() as f64).log2()
}
