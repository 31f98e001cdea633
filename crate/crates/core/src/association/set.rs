use std::collections::BTreeMap;

use super::{Metric, NormalizedAssociation};
use crate::error::{Error, Result};
use crate::ingest::Lexicon;
use crate::rsa::{predict, Configuration, ModelSpec, PredictionDistribution};

/// Normalized tables for several metrics over one shared lexicon.
#[derive(Debug, Clone, PartialEq)]
pub struct AssociationSet {
    lexicon: Lexicon,
    tables: BTreeMap<Metric, NormalizedAssociation>,
}

impl AssociationSet {
    pub fn new(tables: impl IntoIterator<Item = NormalizedAssociation>) -> Result<Self> {
        let mut iter = tables.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::InsufficientData("no association tables".into()))?;
        let lexicon = first.lexicon().clone();
        let mut map = BTreeMap::from([(first.metric(), first)]);
        for t in iter {
            if t.lexicon() != &lexicon {
                return Err(Error::LexiconMismatch(format!("{} table uses a different lexicon", t.metric())));
            }
            let metric = t.metric();
            if map.insert(metric, t).is_some() {
                return Err(Error::InsufficientData(format!("metric {metric} supplied twice")));
            }
        }
        Ok(AssociationSet { lexicon, tables: map })
    }

    pub fn single(table: NormalizedAssociation) -> Self {
        AssociationSet {
            lexicon: table.lexicon().clone(),
            tables: BTreeMap::from([(table.metric(), table)]),
        }
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn get(&self, metric: Metric) -> Result<&NormalizedAssociation> {
        self.tables.get(&metric).ok_or(Error::MissingMetric(metric))
    }

    pub fn metrics(&self) -> impl Iterator<Item = Metric> + '_ {
        self.tables.keys().copied()
    }

    pub fn tables(&self) -> impl Iterator<Item = &NormalizedAssociation> {
        self.tables.values()
    }

    /// Runs `spec` against the table for its metric.
    pub fn predict(&self, config: &Configuration, spec: &ModelSpec) -> Result<PredictionDistribution> {
        predict(self.get(spec.metric)?, config, spec)
    }
}
