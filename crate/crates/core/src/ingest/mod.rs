//! Loading vocabularies and precomputed semantic resources.
//!
//! Every loader aligns its input to lexicon order, ignores (and warns about)
//! words the lexicon does not contain, and fails if a lexicon word is missing.

mod lexicon;
mod tables;
pub(crate) mod tsv;

pub use lexicon::{load_lexicon, Lexicon};
pub use tables::{
    load_counts, load_embeddings, load_relatedness, load_topics, CooccurrenceCounts, EmbeddingTable,
    RelatednessTable, TopicTable, TOPIC_SUM_TOLERANCE,
};
pub(crate) use tables::{check_shape, parse_finite, read_file};
