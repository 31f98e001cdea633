use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Ordered noun and adjective vocabularies. Every matrix in the crate is
/// indexed `[noun, adjective]` against one of these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    nouns: Vec<String>,
    adjectives: Vec<String>,
    noun_pos: HashMap<String, usize>,
    adjective_pos: HashMap<String, usize>,
}

impl Lexicon {
    /// Builds a lexicon, lowercasing every word. Fails on empty lists,
    /// malformed words and duplicates (within or across the two lists).
    pub fn new<N, A>(nouns: N, adjectives: A) -> Result<Self>
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
        A: IntoIterator,
        A::Item: AsRef<str>,
    {
        let nouns = nouns
            .into_iter()
            .map(|w| normalize_word(w.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let adjectives = adjectives
            .into_iter()
            .map(|w| normalize_word(w.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        if nouns.is_empty() {
            return Err(Error::EmptySection("nouns"));
        }
        if adjectives.is_empty() {
            return Err(Error::EmptySection("adjectives"));
        }
        let noun_pos = index_words(&nouns)?;
        let adjective_pos = index_words(&adjectives)?;
        if let Some(w) = adjectives.iter().find(|w| noun_pos.contains_key(*w)) {
            return Err(Error::DuplicateAcrossSections(w.clone()));
        }
        Ok(Lexicon {
            nouns,
            adjectives,
            noun_pos,
            adjective_pos,
        })
    }

    pub fn nouns(&self) -> &[String] {
        &self.nouns
    }

    pub fn adjectives(&self) -> &[String] {
        &self.adjectives
    }

    pub fn n_nouns(&self) -> usize {
        self.nouns.len()
    }

    pub fn n_adjectives(&self) -> usize {
        self.adjectives.len()
    }

    pub fn noun(&self, i: usize) -> &str {
        &self.nouns[i]
    }

    pub fn adjective(&self, i: usize) -> &str {
        &self.adjectives[i]
    }

    /// Case-insensitive lookup.
    pub fn noun_index(&self, word: &str) -> Option<usize> {
        self.noun_pos.get(&word.to_lowercase()).copied()
    }

    pub fn adjective_index(&self, word: &str) -> Option<usize> {
        self.adjective_pos.get(&word.to_lowercase()).copied()
    }

    pub fn require_noun(&self, word: &str) -> Result<usize> {
        self.noun_index(word).ok_or_else(|| Error::MissingWord {
            kind: "noun",
            word: word.to_lowercase(),
        })
    }

    pub fn require_adjective(&self, word: &str) -> Result<usize> {
        self.adjective_index(word).ok_or_else(|| Error::MissingWord {
            kind: "adjective",
            word: word.to_lowercase(),
        })
    }

    /// Parses the sectioned text format (`[nouns]`, `[adjectives]`, `#` comments).
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Nouns,
            Adjectives,
        }
        let mut section = Section::None;
        let mut seen_nouns = false;
        let mut seen_adjectives = false;
        let mut nouns = Vec::new();
        let mut adjectives = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.to_ascii_lowercase().as_str() {
                "[nouns]" => {
                    if seen_nouns {
                        return Err(Error::format(lineno + 1, "repeated [nouns] section"));
                    }
                    seen_nouns = true;
                    section = Section::Nouns;
                    continue;
                }
                "[adjectives]" => {
                    if seen_adjectives {
                        return Err(Error::format(lineno + 1, "repeated [adjectives] section"));
                    }
                    seen_adjectives = true;
                    section = Section::Adjectives;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::None => {
                    return Err(Error::format(
                        lineno + 1,
                        format!("word '{line}' outside of a section"),
                    ))
                }
                Section::Nouns => nouns.push(line.to_string()),
                Section::Adjectives => adjectives.push(line.to_string()),
            }
        }
        Lexicon::new(nouns, adjectives)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("[nouns]\n");
        for w in &self.nouns {
            let _ = writeln!(out, "{w}");
        }
        out.push_str("[adjectives]\n");
        for w in &self.adjectives {
            let _ = writeln!(out, "{w}");
        }
        out
    }
}

/// Reads a lexicon file from disk.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    Lexicon::load(path)
}

pub(crate) fn normalize_word(word: &str) -> Result<String> {
    let w = word.trim();
    if w.is_empty() || w.chars().any(char::is_whitespace) {
        return Err(Error::InvalidWord(word.to_string()));
    }
    Ok(w.to_lowercase())
}

fn index_words(words: &[String]) -> Result<HashMap<String, usize>> {
    let mut pos = HashMap::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        if pos.insert(w.clone(), i).is_some() {
            return Err(Error::DuplicateWord(w.clone()));
        }
    }
    Ok(pos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_in_file_order() {
        let lex = Lexicon::parse(
            "# figure words\n[nouns]\nheart\nphone\nwedding\n\n[adjectives]\ndying\nviolent  # trailing\nempty\n",
        )
        .unwrap();
        assert_eq!(lex.nouns(), ["heart", "phone", "wedding"]);
        assert_eq!(lex.adjectives(), ["dying", "violent", "empty"]);
        assert_eq!(lex.noun_index("PHONE"), Some(1));
    }

    #[test]
    fn minimal_lexicon() {
        let lex = Lexicon::parse("[nouns]\ndog\n[adjectives]\nbig\n").unwrap();
        assert_eq!((lex.n_nouns(), lex.n_adjectives()), (1, 1));
    }

    #[test]
    fn rejects_cross_section_duplicate() {
        let err = Lexicon::parse("[nouns]\ndog\n[adjectives]\ndog\n").unwrap_err();
        assert_eq!(err.to_string(), "duplicate across sections: 'dog'");
    }

    #[test]
    fn rejects_duplicate_within_section_case_insensitive() {
        let err = Lexicon::parse("[nouns]\ndog\nDog\n[adjectives]\nbig\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateWord(w) if w == "dog"));
    }

    #[test]
    fn rejects_empty_sections() {
        assert!(matches!(
            Lexicon::parse("[nouns]\n[adjectives]\nbig\n"),
            Err(Error::EmptySection("nouns"))
        ));
        assert!(matches!(
            Lexicon::parse("[nouns]\ndog\n"),
            Err(Error::EmptySection("adjectives"))
        ));
    }

    #[test]
    fn rejects_words_with_spaces_and_orphans() {
        assert!(matches!(
            Lexicon::parse("[nouns]\nhot dog\n[adjectives]\nbig\n"),
            Err(Error::InvalidWord(_))
        ));
        assert!(matches!(
            Lexicon::parse("dog\n[nouns]\ncat\n[adjectives]\nbig\n"),
            Err(Error::Format { line: 1, .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let lex = Lexicon::new(["a", "b"], ["c"]).unwrap();
        assert_eq!(Lexicon::parse(&lex.to_text()).unwrap(), lex);
    }
}
