//! Literal and pragmatic speaker/listener models over game configurations.
//!
//! Referents are noun pairs, utterances are adjectives. All agents assume
//! uniform priors and zero utterance cost.

mod agents;
pub mod kernel;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::association::Metric;
use crate::error::{Error, Result};
use crate::ingest::Lexicon;
use crate::stats::argmax_set;

pub use agents::{literal_listener, literal_speaker, pair_scores, pragmatic_listener, pragmatic_speaker, predict};

/// Probabilities closer than this to the maximum count as tied for argmax.
pub const ARGMAX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Speaker,
    Listener,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Speaker => "speaker",
            Role::Listener => "listener",
        })
    }
}

/// Nouns (codenames) and adjectives (clues) visible to both players, stored
/// as lexicon indices in display order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scenario {
    nouns: Vec<usize>,
    adjectives: Vec<usize>,
}

impl Scenario {
    pub fn new(nouns: Vec<usize>, adjectives: Vec<usize>, lexicon: &Lexicon) -> Result<Self> {
        let s = Scenario { nouns, adjectives };
        s.check_lexicon(lexicon)?;
        Ok(s)
    }

    pub fn from_words<N: AsRef<str>, A: AsRef<str>>(nouns: &[N], adjectives: &[A], lexicon: &Lexicon) -> Result<Self> {
        let nouns = nouns
            .iter()
            .map(|w| lexicon.require_noun(w.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let adjectives = adjectives
            .iter()
            .map(|w| lexicon.require_adjective(w.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(nouns, adjectives, lexicon)
    }

    /// Validates shape, distinctness and index bounds against `lexicon`.
    pub fn check_lexicon(&self, lexicon: &Lexicon) -> Result<()> {
        if self.nouns.len() < 2 {
            return Err(Error::InvalidScenario(format!("needs at least 2 nouns, has {}", self.nouns.len())));
        }
        if self.adjectives.is_empty() {
            return Err(Error::InvalidScenario("needs at least 1 adjective".into()));
        }
        for (kind, list, len) in [
            ("noun", &self.nouns, lexicon.n_nouns()),
            ("adjective", &self.adjectives, lexicon.n_adjectives()),
        ] {
            for (i, &x) in list.iter().enumerate() {
                if x >= len {
                    return Err(Error::OutOfRange { kind, index: x, len });
                }
                if list[..i].contains(&x) {
                    return Err(Error::InvalidScenario(format!("repeated {kind} index {x}")));
                }
            }
        }
        Ok(())
    }

    pub fn nouns(&self) -> &[usize] {
        &self.nouns
    }

    pub fn adjectives(&self) -> &[usize] {
        &self.adjectives
    }

    /// Unordered noun pairs as scenario positions `(i, j)`, `i < j`, in
    /// lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let k = self.nouns.len();
        (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
    }

    pub fn n_pairs(&self) -> usize {
        let k = self.nouns.len();
        k * (k - 1) / 2
    }

    /// Same words with indices sorted ascending.
    pub fn canonical(&self) -> Scenario {
        let mut nouns = self.nouns.clone();
        let mut adjectives = self.adjectives.clone();
        nouns.sort_unstable();
        adjectives.sort_unstable();
        Scenario { nouns, adjectives }
    }

    pub fn speaker_configs(&self) -> Vec<Configuration> {
        self.pairs()
            .into_iter()
            .map(|(i, j)| Configuration {
                scenario: self.clone(),
                index: ConfigIndex::TargetPair(i, j),
            })
            .collect()
    }

    pub fn listener_configs(&self) -> Vec<Configuration> {
        (0..self.adjectives.len())
            .map(|a| Configuration {
                scenario: self.clone(),
                index: ConfigIndex::Clue(a),
            })
            .collect()
    }

    pub fn configs(&self, role: Role) -> Vec<Configuration> {
        match role {
            Role::Speaker => self.speaker_configs(),
            Role::Listener => self.listener_configs(),
        }
    }

    pub fn noun_words<'a>(&self, lexicon: &'a Lexicon) -> Vec<&'a str> {
        self.nouns.iter().map(|&n| lexicon.noun(n)).collect()
    }

    pub fn adjective_words<'a>(&self, lexicon: &'a Lexicon) -> Vec<&'a str> {
        self.adjectives.iter().map(|&a| lexicon.adjective(a)).collect()
    }
}

/// Which configuration of a scenario is being played, in scenario positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConfigIndex {
    TargetPair(usize, usize),
    Clue(usize),
}

/// A scenario plus the speaker's target pair or the listener's clue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    scenario: Scenario,
    index: ConfigIndex,
}

impl Configuration {
    pub fn speaker(scenario: Scenario, i: usize, j: usize) -> Result<Self> {
        let k = scenario.nouns.len();
        if i == j {
            return Err(Error::DegeneratePair(scenario.nouns.get(i).copied().unwrap_or(i)));
        }
        for p in [i, j] {
            if p >= k {
                return Err(Error::OutOfRange {
                    kind: "scenario noun position",
                    index: p,
                    len: k,
                });
            }
        }
        Ok(Configuration {
            scenario,
            index: ConfigIndex::TargetPair(i.min(j), i.max(j)),
        })
    }

    pub fn listener(scenario: Scenario, clue: usize) -> Result<Self> {
        let m = scenario.adjectives.len();
        if clue >= m {
            return Err(Error::OutOfRange {
                kind: "scenario adjective position",
                index: clue,
                len: m,
            });
        }
        Ok(Configuration {
            scenario,
            index: ConfigIndex::Clue(clue),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn index(&self) -> ConfigIndex {
        self.index
    }

    pub fn role(&self) -> Role {
        match self.index {
            ConfigIndex::TargetPair(..) => Role::Speaker,
            ConfigIndex::Clue(_) => Role::Listener,
        }
    }

    /// The answers a player in this configuration chooses among: noun pairs
    /// for a listener, adjectives for a speaker.
    pub fn support(&self) -> Vec<Answer> {
        match self.role() {
            Role::Listener => self
                .scenario
                .pairs()
                .into_iter()
                .map(|(i, j)| Answer::pair(self.scenario.nouns[i], self.scenario.nouns[j]))
                .collect(),
            Role::Speaker => self.scenario.adjectives.iter().map(|&a| Answer::Adjective(a)).collect(),
        }
    }

    /// The target pair as lexicon noun indices (speaker configurations only).
    pub fn target(&self) -> Option<Answer> {
        match self.index {
            ConfigIndex::TargetPair(i, j) => Some(Answer::pair(self.scenario.nouns[i], self.scenario.nouns[j])),
            ConfigIndex::Clue(_) => None,
        }
    }

    /// The clue as a lexicon adjective index (listener configurations only).
    pub fn clue(&self) -> Option<usize> {
        match self.index {
            ConfigIndex::Clue(a) => Some(self.scenario.adjectives[a]),
            ConfigIndex::TargetPair(..) => None,
        }
    }
}

/// One possible response. Pairs hold lexicon noun indices, smaller first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    Pair(usize, usize),
    Adjective(usize),
}

impl Answer {
    pub fn pair(a: usize, b: usize) -> Answer {
        Answer::Pair(a.min(b), a.max(b))
    }

    pub fn describe(&self, lexicon: &Lexicon) -> String {
        match *self {
            Answer::Pair(a, b) => format!("{}+{}", lexicon.noun(a), lexicon.noun(b)),
            Answer::Adjective(a) => lexicon.adjective(a).to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Depth {
    Literal,
    Pragmatic { alpha: f64 },
}

/// Which agent to run: association metric, role and recursion depth.
/// Serialized (without the role) as `metric:literal` or `metric:pragmatic[:alpha]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub metric: Metric,
    pub role: Role,
    pub depth: Depth,
}

/// Alpha used when a pragmatic spec string omits it.
pub const DEFAULT_ALPHA: f64 = 1.0;

impl ModelSpec {
    pub fn literal(metric: Metric, role: Role) -> Self {
        ModelSpec {
            metric,
            role,
            depth: Depth::Literal,
        }
    }

    pub fn pragmatic(metric: Metric, role: Role, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ModelSpec {
            metric,
            role,
            depth: Depth::Pragmatic { alpha },
        })
    }

    pub fn parse(s: &str, role: Role) -> Result<Self> {
        let (metric, depth) = parse_model(s)?;
        Ok(ModelSpec { metric, role, depth })
    }

    pub fn with_role(self, role: Role) -> Self {
        ModelSpec { role, ..self }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth {
            Depth::Literal => write!(f, "{}:literal", self.metric),
            Depth::Pragmatic { alpha } => write!(f, "{}:pragmatic:{alpha:?}", self.metric),
        }
    }
}

/// Parses the role-free `metric:depth[:alpha]` form.
pub fn parse_model(s: &str) -> Result<(Metric, Depth)> {
    let bad = || Error::InvalidModelSpec(s.to_string());
    let parts: Vec<&str> = s.trim().split(':').collect();
    let metric = Metric::from_str(parts[0]).map_err(|_| bad())?;
    let depth = match parts.as_slice() {
        [_, "literal"] => Depth::Literal,
        [_, "pragmatic"] => Depth::Pragmatic { alpha: DEFAULT_ALPHA },
        [_, "pragmatic", a] => {
            let alpha: f64 = a.parse().map_err(|_| bad())?;
            check_alpha(alpha)?;
            Depth::Pragmatic { alpha }
        }
        _ => return Err(bad()),
    };
    Ok((metric, depth))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// A probability vector over a configuration's answer support.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionDistribution {
    support: Vec<Answer>,
    probs: Vec<f64>,
}

impl PredictionDistribution {
    /// Checks non-negativity and that the probabilities sum to 1 within 1e-9.
    pub fn new(support: Vec<Answer>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() || support.is_empty() {
            return Err(Error::SupportMismatch(format!(
                "{} answers, {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InsufficientData(format!("not a probability vector (sum {sum})")));
        }
        Ok(PredictionDistribution { support, probs })
    }

    pub fn uniform(support: Vec<Answer>) -> Result<Self> {
        let n = support.len();
        Self::new(support, vec![1.0 / n as f64; n])
    }

    pub fn support(&self) -> &[Answer] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, answer: &Answer) -> Option<f64> {
        self.support.iter().position(|a| a == answer).map(|i| self.probs[i])
    }

    /// Positions within [`ARGMAX_TOLERANCE`] of the largest probability.
    pub fn argmax_set(&self) -> Vec<usize> {
        argmax_set(&self.probs, ARGMAX_TOLERANCE)
    }

    pub fn top_answers(&self) -> Vec<Answer> {
        self.argmax_set().into_iter().map(|i| self.support[i]).collect()
    }
}
