use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{configuration_utility, max_utility, scenario_joint_utility, ModelSet};
use crate::association::AssociationSet;
use crate::error::{Error, Result};
use crate::rsa::{Configuration, ModelSpec, Role, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    SeparateSpeaker,
    SeparateListener,
    Joint,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::SeparateSpeaker => "separate-speaker",
            SearchMode::SeparateListener => "separate-listener",
            SearchMode::Joint => "joint",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [SearchMode::SeparateSpeaker, SearchMode::SeparateListener, SearchMode::Joint]
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode '{s}' (expected separate-speaker, separate-listener or joint)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub iterations: usize,
    pub nouns: usize,
    pub adjectives: usize,
    pub seed: u64,
    pub top_k: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings {
            iterations: 100_000,
            nouns: 3,
            adjectives: 4,
            seed: 0,
            top_k: 500,
        }
    }
}

/// What a search scores: single configurations of one role, or whole
/// scenarios by the geometric mean over all their configurations.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    Speaker(ModelSet),
    Listener(ModelSet),
    Joint { speaker: ModelSet, listener: ModelSet },
}

impl Objective {
    /// Builds the objective for `mode`, assigning roles to `models`.
    pub fn new(mode: SearchMode, models: &[ModelSpec]) -> Result<Self> {
        let with_role = |role| ModelSet::new(models.iter().map(|m| m.with_role(role)).collect());
        Ok(match mode {
            SearchMode::SeparateSpeaker => Objective::Speaker(with_role(Role::Speaker)?),
            SearchMode::SeparateListener => Objective::Listener(with_role(Role::Listener)?),
            SearchMode::Joint => Objective::Joint {
                speaker: with_role(Role::Speaker)?,
                listener: with_role(Role::Listener)?,
            },
        })
    }

    pub fn mode(&self) -> SearchMode {
        match self {
            Objective::Speaker(_) => SearchMode::SeparateSpeaker,
            Objective::Listener(_) => SearchMode::SeparateListener,
            Objective::Joint { .. } => SearchMode::Joint,
        }
    }

    pub fn utility(&self, tables: &AssociationSet, design: &Design) -> Result<f64> {
        match (self, design) {
            (Objective::Speaker(ms) | Objective::Listener(ms), Design::Configuration(c)) => {
                configuration_utility(tables, c, ms)
            }
            (Objective::Joint { speaker, listener }, Design::Scenario(s)) => {
                scenario_joint_utility(tables, s, speaker, listener)
            }
            _ => Err(Error::InvalidSettings(format!("design does not match {} objective", self.mode()))),
        }
    }

    /// Upper bound on any utility this objective can return.
    pub fn max_utility(&self) -> f64 {
        match self {
            Objective::Speaker(ms) | Objective::Listener(ms) => max_utility(ms),
            Objective::Joint { speaker, listener } => max_utility(speaker).min(max_utility(listener)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Design {
    Configuration(Configuration),
    Scenario(Scenario),
}

impl Design {
    pub fn scenario(&self) -> &Scenario {
        match self {
            Design::Configuration(c) => c.scenario(),
            Design::Scenario(s) => s,
        }
    }

    pub fn configuration(&self) -> Option<&Configuration> {
        match self {
            Design::Configuration(c) => Some(c),
            Design::Scenario(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignCandidate {
    pub design: Design,
    /// Bits.
    pub utility: f64,
}

fn check_settings(tables: &AssociationSet, settings: &SearchSettings) -> Result<()> {
    let lex = tables.lexicon();
    if settings.iterations == 0 {
        return Err(Error::InvalidSettings("iterations must be positive".into()));
    }
    if settings.nouns < 2 || settings.adjectives < 1 {
        return Err(Error::InvalidSettings(format!(
            "scenario shape {}x{} needs at least 2 nouns and 1 adjective",
            settings.nouns, settings.adjectives
        )));
    }
    if settings.nouns > lex.n_nouns() || settings.adjectives > lex.n_adjectives() {
        return Err(Error::InvalidSettings(format!(
            "cannot sample {} nouns and {} adjectives from a {}x{} lexicon",
            settings.nouns,
            settings.adjectives,
            lex.n_nouns(),
            lex.n_adjectives()
        )));
    }
    Ok(())
}

/// Draws `settings.iterations` designs uniformly at random, scores each
/// distinct one once, and returns the best `top_k` by descending utility
/// (ties in first-drawn order). Deterministic for a given seed.
pub fn monte_carlo_search(
    tables: &AssociationSet,
    objective: &Objective,
    settings: &SearchSettings,
) -> Result<Vec<DesignCandidate>> {
    check_settings(tables, settings)?;
    let lex = tables.lexicon();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut seen = HashSet::new();
    let mut designs = Vec::new();
    for _ in 0..settings.iterations {
        let mut nouns = sample(&mut rng, lex.n_nouns(), settings.nouns).into_vec();
        let mut adjectives = sample(&mut rng, lex.n_adjectives(), settings.adjectives).into_vec();
        nouns.sort_unstable();
        adjectives.sort_unstable();
        let scenario = Scenario::new(nouns, adjectives, lex)?;
        let design = match objective {
            Objective::Speaker(_) => {
                let pairs = scenario.pairs();
                let (i, j) = pairs[rng.random_range(0..pairs.len())];
                Design::Configuration(Configuration::speaker(scenario, i, j)?)
            }
            Objective::Listener(_) => {
                let clue = rng.random_range(0..settings.adjectives);
                Design::Configuration(Configuration::listener(scenario, clue)?)
            }
            Objective::Joint { .. } => Design::Scenario(scenario),
        };
        if seen.insert(design.clone()) {
            designs.push(design);
        }
    }
    log::debug!("{} distinct designs from {} draws", designs.len(), settings.iterations);

    let utilities = designs
        .par_iter()
        .map(|d| objective.utility(tables, d))
        .collect::<Result<Vec<f64>>>()?;
    let mut order: Vec<usize> = (0..designs.len()).collect();
    order.sort_by(|&a, &b| utilities[b].total_cmp(&utilities[a]));
    order.truncate(settings.top_k);
    Ok(order
        .into_iter()
        .map(|i| DesignCandidate {
            design: designs[i].clone(),
            utility: utilities[i],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::association::{Metric, NormalizedAssociation, ZeroMask};
    use crate::ingest::Lexicon;
    use ndarray::Array2;

    fn tables() -> AssociationSet {
        let lex = Lexicon::new((0..5).map(|i| format!("n{i}")), (0..5).map(|i| format!("a{i}"))).unwrap();
        let a = Array2::from_shape_fn((5, 5), |(n, a)| ((n * 7 + a * 3) % 25 + 1) as f64 / 25.0);
        let b = Array2::from_shape_fn((5, 5), |(n, a)| ((n * 2 + a * 11) % 25 + 1) as f64 / 25.0);
        AssociationSet::new([
            NormalizedAssociation::new(Metric::Bigram, lex.clone(), a, ZeroMask::new()).unwrap(),
            NormalizedAssociation::new(Metric::EmbeddingCosine, lex, b, ZeroMask::new()).unwrap(),
        ])
        .unwrap()
    }

    fn models() -> Vec<ModelSpec> {
        vec![
            ModelSpec::literal(Metric::Bigram, Role::Listener),
            ModelSpec::literal(Metric::EmbeddingCosine, Role::Listener),
        ]
    }

    #[test]
    fn deterministic_and_sorted() {
        let t = tables();
        let settings = SearchSettings {
            iterations: 300,
            nouns: 3,
            adjectives: 2,
            seed: 7,
            top_k: 25,
        };
        for mode in [SearchMode::SeparateSpeaker, SearchMode::SeparateListener, SearchMode::Joint] {
            let obj = Objective::new(mode, &models()).unwrap();
            let a = monte_carlo_search(&t, &obj, &settings).unwrap();
            let b = monte_carlo_search(&t, &obj, &settings).unwrap();
            assert_eq!(a, b);
            assert!(a.len() <= 25 && !a.is_empty());
            assert!(a.windows(2).all(|w| w[0].utility >= w[1].utility));
            let distinct: HashSet<_> = a.iter().map(|c| c.design.clone()).collect();
            assert_eq!(distinct.len(), a.len());
        }
    }

    #[test]
    fn identical_models_have_zero_utility() {
        let t = tables();
        let same = vec![
            ModelSpec::literal(Metric::Bigram, Role::Speaker),
            ModelSpec::literal(Metric::Bigram, Role::Speaker),
        ];
        let obj = Objective::new(SearchMode::SeparateSpeaker, &same).unwrap();
        let settings = SearchSettings {
            iterations: 50,
            top_k: 10,
            ..SearchSettings::default()
        };
        let out = monte_carlo_search(&t, &obj, &settings).unwrap();
        assert!(out.iter().all(|c| c.utility == 0.0));
    }

    #[test]
    fn rejects_oversized_shape() {
        let t = tables();
        let obj = Objective::new(SearchMode::Joint, &models()).unwrap();
        let settings = SearchSettings {
            nouns: 6,
            ..SearchSettings::default()
        };
        assert!(matches!(monte_carlo_search(&t, &obj, &settings), Err(Error::InvalidSettings(_))));
    }
}
