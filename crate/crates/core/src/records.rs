//! Word-level record types for configuration, candidate, response and
//! scenario files. Index-based domain types convert to and from these
//! against a [`Lexicon`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluation::ResponseRecord;
use crate::ingest::Lexicon;
use crate::oed::{Design, DesignCandidate};
use crate::rsa::{Answer, ConfigIndex, Configuration, Role, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioRecord {
    pub nouns: Vec<String>,
    pub adjectives: Vec<String>,
}

impl ScenarioRecord {
    pub fn from_scenario(s: &Scenario, lexicon: &Lexicon) -> Self {
        ScenarioRecord {
            nouns: s.noun_words(lexicon).into_iter().map(String::from).collect(),
            adjectives: s.adjective_words(lexicon).into_iter().map(String::from).collect(),
        }
    }

    pub fn to_scenario(&self, lexicon: &Lexicon) -> Result<Scenario> {
        Scenario::from_words(&self.nouns, &self.adjectives, lexicon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub scenario: ScenarioRecord,
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pair: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clue: Option<String>,
}

fn position(words: &[String], word: &str, kind: &'static str) -> Result<usize> {
    let w = word.trim().to_lowercase();
    words.iter().position(|x| *x == w).ok_or_else(|| Error::MissingWord {
        kind,
        word: word.to_string(),
    })
}

fn index_fields(c: &Configuration, lexicon: &Lexicon) -> (Option<[String; 2]>, Option<String>) {
    let s = c.scenario();
    match c.index() {
        ConfigIndex::TargetPair(i, j) => (
            Some([lexicon.noun(s.nouns()[i]).to_string(), lexicon.noun(s.nouns()[j]).to_string()]),
            None,
        ),
        ConfigIndex::Clue(a) => (None, Some(lexicon.adjective(s.adjectives()[a]).to_string())),
    }
}

fn build_configuration(
    scenario: Scenario,
    role: Role,
    target_pair: Option<&[String; 2]>,
    clue: Option<&String>,
    lexicon: &Lexicon,
) -> Result<Configuration> {
    let rec = ScenarioRecord::from_scenario(&scenario, lexicon);
    match (role, target_pair, clue) {
        (Role::Speaker, Some([a, b]), None) => {
            let i = position(&rec.nouns, a, "scenario noun")?;
            let j = position(&rec.nouns, b, "scenario noun")?;
            Configuration::speaker(scenario, i, j)
        }
        (Role::Listener, None, Some(c)) => {
            let i = position(&rec.adjectives, c, "scenario adjective")?;
            Configuration::listener(scenario, i)
        }
        _ => Err(Error::InvalidScenario(format!(
            "a {role} configuration needs exactly one {}",
            if role == Role::Speaker { "target_pair" } else { "clue" }
        ))),
    }
}

impl ConfigRecord {
    pub fn from_configuration(c: &Configuration, lexicon: &Lexicon) -> Self {
        let (target_pair, clue) = index_fields(c, lexicon);
        ConfigRecord {
            scenario: ScenarioRecord::from_scenario(c.scenario(), lexicon),
            role: c.role(),
            target_pair,
            clue,
        }
    }

    pub fn to_configuration(&self, lexicon: &Lexicon) -> Result<Configuration> {
        build_configuration(
            self.scenario.to_scenario(lexicon)?,
            self.role,
            self.target_pair.as_ref(),
            self.clue.as_ref(),
            lexicon,
        )
    }
}

/// A scored search result. Whole-scenario candidates carry no role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub scenario: ScenarioRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pair: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clue: Option<String>,
    pub utility: f64,
}

impl CandidateRecord {
    pub fn from_candidate(c: &DesignCandidate, lexicon: &Lexicon) -> Self {
        let scenario = ScenarioRecord::from_scenario(c.design.scenario(), lexicon);
        match &c.design {
            Design::Configuration(cfg) => {
                let (target_pair, clue) = index_fields(cfg, lexicon);
                CandidateRecord {
                    scenario,
                    role: Some(cfg.role()),
                    target_pair,
                    clue,
                    utility: c.utility,
                }
            }
            Design::Scenario(_) => CandidateRecord {
                scenario,
                role: None,
                target_pair: None,
                clue: None,
                utility: c.utility,
            },
        }
    }

    pub fn to_candidate(&self, lexicon: &Lexicon) -> Result<DesignCandidate> {
        let scenario = self.scenario.to_scenario(lexicon)?;
        let design = match self.role {
            None if self.target_pair.is_none() && self.clue.is_none() => Design::Scenario(scenario),
            None => return Err(Error::InvalidScenario("candidate has an index but no role".into())),
            Some(role) => Design::Configuration(build_configuration(
                scenario,
                role,
                self.target_pair.as_ref(),
                self.clue.as_ref(),
                lexicon,
            )?),
        };
        Ok(DesignCandidate {
            design,
            utility: self.utility,
        })
    }
}

/// A response: a noun pair for listeners, an adjective for speakers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnswerRecord {
    Pair([String; 2]),
    Adjective(String),
}

impl AnswerRecord {
    pub fn from_answer(a: &Answer, lexicon: &Lexicon) -> Self {
        match *a {
            Answer::Pair(x, y) => AnswerRecord::Pair([lexicon.noun(x).to_string(), lexicon.noun(y).to_string()]),
            Answer::Adjective(x) => AnswerRecord::Adjective(lexicon.adjective(x).to_string()),
        }
    }

    pub fn to_answer(&self, lexicon: &Lexicon) -> Result<Answer> {
        Ok(match self {
            AnswerRecord::Pair([a, b]) => Answer::pair(lexicon.require_noun(a)?, lexicon.require_noun(b)?),
            AnswerRecord::Adjective(a) => Answer::Adjective(lexicon.require_adjective(a)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerCount {
    pub answer: AnswerRecord,
    pub count: u64,
}

/// Observed responses for one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseEntry {
    #[serde(flatten)]
    pub configuration: ConfigRecord,
    pub responses: Vec<AnswerCount>,
    #[serde(default)]
    pub confidence: Vec<u8>,
}

impl ResponseEntry {
    pub fn from_response(r: &ResponseRecord, lexicon: &Lexicon) -> Self {
        ResponseEntry {
            configuration: ConfigRecord::from_configuration(r.configuration(), lexicon),
            responses: r
                .counts()
                .iter()
                .map(|(a, &count)| AnswerCount {
                    answer: AnswerRecord::from_answer(a, lexicon),
                    count,
                })
                .collect(),
            confidence: r.confidence().to_vec(),
        }
    }

    pub fn to_response(&self, lexicon: &Lexicon) -> Result<ResponseRecord> {
        let config = self.configuration.to_configuration(lexicon)?;
        let mut counts = BTreeMap::new();
        for ac in &self.responses {
            *counts.entry(ac.answer.to_answer(lexicon)?).or_insert(0) += ac.count;
        }
        counts.retain(|_, c| *c > 0);
        ResponseRecord::new(config, counts, self.confidence.clone())
    }
}
