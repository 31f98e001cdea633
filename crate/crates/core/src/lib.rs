//! Computational machinery for an associative reference game in the style of
//! Codenames: a speaker sees a set of nouns and adjectives plus a target noun
//! pair and picks one adjective; a listener sees the same words plus the
//! adjective and picks a noun pair.
//!
//! - [`ingest`]: vocabularies and precomputed resources.
//! - [`association`]: association metrics, quantile normalization, pair scores.
//! - [`rsa`]: literal and pragmatic speaker/listener agents.
//! - [`oed`]: information-theoretic design scoring and Monte Carlo search.
//! - [`evaluation`]: scoring against responses, model agreement, gameplay success.
//! - [`records`]: JSON record formats for configurations, candidates and responses.

pub mod association;
pub mod error;
pub mod evaluation;
pub mod ingest;
pub mod oed;
pub mod records;
pub mod rsa;
pub mod stats;

pub use error::{Error, Result};
