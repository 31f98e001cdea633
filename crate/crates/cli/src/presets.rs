use refgame_core::oed::SearchMode;

use crate::args::Preset;

/// Scenario shape, search mode and candidate models of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetSettings {
    pub nouns: usize,
    pub adjectives: usize,
    /// `None` for designs built without search.
    pub mode: Option<SearchMode>,
    pub models: &'static [&'static str],
    pub iterations: usize,
    pub top: usize,
}

const ALL_METRICS: &[&str] = &[
    "bigram:literal",
    "embedding-cosine:literal",
    "graph-relatedness:literal",
    "topic-distance:literal",
];

const NO_TOPICS: &[&str] = &["bigram:literal", "embedding-cosine:literal", "graph-relatedness:literal"];

const LITERAL_VS_PRAGMATIC: &[&str] = &["bigram:literal", "bigram:pragmatic:1.0"];

impl Preset {
    pub fn settings(self) -> PresetSettings {
        let (nouns, adjectives, mode, models) = match self {
            Preset::Exp1 => (5, 8, None, ALL_METRICS),
            Preset::Exp2Speaker => (3, 4, Some(SearchMode::SeparateSpeaker), ALL_METRICS),
            Preset::Exp2Listener => (3, 4, Some(SearchMode::SeparateListener), ALL_METRICS),
            Preset::Exp3 => (3, 3, Some(SearchMode::Joint), NO_TOPICS),
            Preset::Exp4 => (3, 3, Some(SearchMode::Joint), LITERAL_VS_PRAGMATIC),
        };
        PresetSettings {
            nouns,
            adjectives,
            mode,
            models,
            iterations: 100_000,
            top: 500,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let s = Preset::Exp2Listener.settings();
        assert_eq!((s.nouns, s.adjectives, s.mode), (3, 4, Some(SearchMode::SeparateListener)));
        let s = Preset::Exp3.settings();
        assert_eq!((s.nouns, s.adjectives, s.mode), (3, 3, Some(SearchMode::Joint)));
        assert_eq!(s.models.len(), 3);
        assert_eq!(Preset::Exp1.settings().mode, None);
        assert_eq!((Preset::Exp1.settings().nouns, Preset::Exp1.settings().adjectives), (5, 8));
        assert_eq!(Preset::Exp4.settings().models, ["bigram:literal", "bigram:pragmatic:1.0"]);
    }
}
