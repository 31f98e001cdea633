use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use refgame_core::association::{
    bigram_association, cosine_association, quantile_normalize, relatedness_association, sparsity_report,
    topic_association, AssociationMatrix, AssociationSet, NormalizedAssociation,
};
use refgame_core::evaluation::{confidence_ttest, ResponseRecord};
use refgame_core::ingest::{CooccurrenceCounts, EmbeddingTable, Lexicon, RelatednessTable, TopicTable};
use refgame_core::oed::{confidence_filter, filter_candidates, monte_carlo_search, Objective, SearchSettings};
use refgame_core::records::{CandidateRecord, ConfigRecord, ResponseEntry, ScenarioRecord};
use refgame_core::rsa::{Configuration, ModelSpec, PredictionDistribution, Role, Scenario};
use serde::Deserialize;
use serde_json::json;

use crate::args::*;
use crate::io::{emit, to_json, usage, Inputs, RunManifest};

pub fn load_lexicon(inputs: &mut Inputs, path: &Path) -> Result<Lexicon> {
    let text = inputs.read(path)?;
    Lexicon::parse(&text).with_context(|| format!("lexicon {}", path.display()))
}

/// Loads every `--matrix`, aligned to `--lexicon` or to the first matrix.
pub fn load_tables(inputs: &mut Inputs, args: &TablesArgs) -> Result<AssociationSet> {
    let mut lexicon = match &args.lexicon {
        Some(p) => Some(load_lexicon(inputs, p)?),
        None => None,
    };
    let mut tables = Vec::with_capacity(args.matrices.len());
    for m in &args.matrices {
        let text = inputs.read(&m.path)?;
        let table = NormalizedAssociation::parse(&text, lexicon.as_ref())
            .with_context(|| format!("matrix {}", m.path.display()))?;
        if table.metric() != m.metric {
            bail!(
                "{} holds a {} matrix but was given as {}",
                m.path.display(),
                table.metric(),
                m.metric
            );
        }
        lexicon.get_or_insert_with(|| table.lexicon().clone());
        tables.push(table);
    }
    Ok(AssociationSet::new(tables)?)
}

pub fn model_spec(m: ModelArg, role: Role) -> ModelSpec {
    ModelSpec {
        metric: m.metric,
        role,
        depth: m.depth,
    }
}

/// The given models, or the literal model of every loaded metric.
pub fn models_or_literal(tables: &AssociationSet, models: &[ModelArg]) -> Vec<ModelArg> {
    if models.is_empty() {
        tables
            .metrics()
            .map(|metric| ModelArg {
                metric,
                depth: refgame_core::rsa::Depth::Literal,
            })
            .collect()
    } else {
        models.to_vec()
    }
}

pub fn model_name(m: ModelArg) -> String {
    model_spec(m, Role::Listener).to_string()
}

pub fn matrix_settings(t: &TablesArgs) -> serde_json::Value {
    json!({ "matrices": t.matrices, "lexicon": t.lexicon })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    Many(Vec<T>),
    One(T),
}

pub fn read_configs(inputs: &mut Inputs, path: &Path, lexicon: &Lexicon) -> Result<Vec<Configuration>> {
    let records = match inputs.read_json::<OneOrMany<ConfigRecord>>(path)? {
        OneOrMany::Many(v) => v,
        OneOrMany::One(r) => vec![r],
    };
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.to_configuration(lexicon)
                .with_context(|| format!("configuration {i} in {}", path.display()))
        })
        .collect()
}

/// Scenarios from a list of scenario records or of candidate records.
pub fn read_scenarios(inputs: &mut Inputs, path: &Path, lexicon: &Lexicon) -> Result<Vec<Scenario>> {
    let values: Vec<serde_json::Value> = inputs.read_json(path)?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, mut v)| {
            let v = v.get_mut("scenario").map(serde_json::Value::take).unwrap_or(v);
            let rec: ScenarioRecord =
                serde_json::from_value(v).with_context(|| format!("scenario {i} in {}", path.display()))?;
            rec.to_scenario(lexicon)
                .with_context(|| format!("scenario {i} in {}", path.display()))
        })
        .collect()
}

pub fn read_responses(inputs: &mut Inputs, path: &Path, lexicon: &Lexicon) -> Result<Vec<ResponseRecord>> {
    let entries: Vec<ResponseEntry> = inputs.read_json(path)?;
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            e.to_response(lexicon)
                .with_context(|| format!("response record {i} in {}", path.display()))
        })
        .collect()
}

pub fn predict_agent(
    tables: &AssociationSet,
    agent: AgentArg,
    config: &Configuration,
) -> refgame_core::Result<PredictionDistribution> {
    match agent {
        AgentArg::Uniform => PredictionDistribution::uniform(config.support()),
        AgentArg::Model(m) => tables.predict(config, &model_spec(m, config.role())),
    }
}

pub fn agent_name(agent: AgentArg) -> String {
    match agent {
        AgentArg::Uniform => "uniform".into(),
        AgentArg::Model(m) => model_name(m),
    }
}

pub fn ingest(args: &IngestArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let lexicon = load_lexicon(&mut inputs, &args.lexicon)?;
    let text = inputs.read(&args.input)?;
    let ctx = || format!("{}", args.input.display());
    let raw = match args.kind {
        SourceKind::Counts => {
            let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("counts");
            bigram_association(&CooccurrenceCounts::parse(&text, &lexicon, stem).with_context(ctx)?)
                .with_context(ctx)?
        }
        SourceKind::Embeddings => cosine_association(&EmbeddingTable::parse(&text, &lexicon).with_context(ctx)?),
        SourceKind::Relatedness => {
            relatedness_association(&RelatednessTable::parse(&text, &lexicon).with_context(ctx)?)
        }
        SourceKind::Topics => topic_association(&TopicTable::parse(&text, &lexicon).with_context(ctx)?),
    };
    let settings = json!({ "kind": args.kind, "input": args.input, "lexicon": args.lexicon, "output": args.out.output });
    emit(
        args.out.output.as_deref(),
        &raw.to_tsv(),
        &RunManifest::new("ingest", settings, None, inputs),
    )
}

pub fn normalize(args: &NormalizeArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let lexicon = match &args.lexicon {
        Some(p) => Some(load_lexicon(&mut inputs, p)?),
        None => None,
    };
    let text = inputs.read(&args.input)?;
    let raw = AssociationMatrix::parse(&text, lexicon.as_ref()).with_context(|| format!("{}", args.input.display()))?;
    let norm = quantile_normalize(&raw);
    let settings = json!({ "input": args.input, "lexicon": args.lexicon, "output": args.out.output });
    emit(
        args.out.output.as_deref(),
        &norm.to_tsv(),
        &RunManifest::new("normalize", settings, None, inputs),
    )
}

pub fn predict(args: &PredictArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let lex = tables.lexicon();
    let configs = read_configs(&mut inputs, &args.config, lex)?;
    let mut out = String::from("# config\trole\tanswer\tprobability\n");
    for (i, c) in configs.iter().enumerate() {
        let pred = predict_agent(&tables, args.model, c).with_context(|| format!("configuration {i}"))?;
        for (a, p) in pred.support().iter().zip(pred.probs()) {
            out.push_str(&format!("{i}\t{}\t{}\t{p}\n", c.role(), a.describe(lex)));
        }
    }
    let mut settings = matrix_settings(&args.tables);
    settings["config"] = json!(args.config);
    settings["model"] = json!(agent_name(args.model));
    emit(
        args.out.output.as_deref(),
        &out,
        &RunManifest::new("predict", settings, None, inputs),
    )
}

pub fn oed(args: &OedArgs) -> Result<()> {
    let preset = args.preset.map(|p| p.settings());
    if let (Some(p), None) = (&preset, args.mode) {
        if p.mode.is_none() {
            return Err(usage(
                "preset exp1 uses heuristic designs without search; use `generate --preset exp1` or pass --mode",
            ));
        }
    }
    let mode = args
        .mode
        .or(preset.as_ref().and_then(|p| p.mode))
        .ok_or_else(|| usage("--mode is required without --preset"))?;
    let models = if !args.models.is_empty() {
        args.models.clone()
    } else if let Some(p) = &preset {
        p.models
            .iter()
            .map(|s| parse_model_arg(s).map_err(anyhow::Error::msg))
            .collect::<Result<Vec<_>>>()?
    } else {
        return Err(usage("at least one --model is required without --preset"));
    };
    let defaults = SearchSettings::default();
    let settings = SearchSettings {
        iterations: args.iterations.or(preset.as_ref().map(|p| p.iterations)).unwrap_or(defaults.iterations),
        nouns: args.nouns.or(preset.as_ref().map(|p| p.nouns)).unwrap_or(defaults.nouns),
        adjectives: args
            .adjectives
            .or(preset.as_ref().map(|p| p.adjectives))
            .unwrap_or(defaults.adjectives),
        seed: args.seed,
        top_k: args.top.or(preset.as_ref().map(|p| p.top)).unwrap_or(defaults.top_k),
    };

    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let specs: Vec<ModelSpec> = models.iter().map(|&m| model_spec(m, Role::Listener)).collect();
    let objective = Objective::new(mode, &specs)?;
    let mut candidates = monte_carlo_search(&tables, &objective, &settings)?;
    log::info!("search kept {} candidates", candidates.len());
    if args.filter {
        candidates = filter_candidates(
            &candidates,
            args.filter_settings.min_word_diff,
            args.filter_settings.max_word_occurrence,
        );
        log::info!("{} candidates after filtering", candidates.len());
    }
    let records: Vec<CandidateRecord> = candidates
        .iter()
        .map(|c| CandidateRecord::from_candidate(c, tables.lexicon()))
        .collect();

    let mut manifest_settings = matrix_settings(&args.tables);
    manifest_settings["preset"] = json!(args.preset);
    manifest_settings["mode"] = json!(mode);
    manifest_settings["models"] = json!(models.iter().map(|&m| model_name(m)).collect::<Vec<_>>());
    manifest_settings["search"] = json!(settings);
    manifest_settings["filter"] = if args.filter {
        json!({
            "min_word_diff": args.filter_settings.min_word_diff,
            "max_word_occurrence": args.filter_settings.max_word_occurrence,
        })
    } else {
        serde_json::Value::Null
    };
    emit(
        args.out.output.as_deref(),
        &to_json(&records)?,
        &RunManifest::new("oed", manifest_settings, Some(settings.seed), inputs),
    )
}

/// Lexicon holding exactly the words the candidates use, in sorted order.
fn candidate_lexicon(records: &[CandidateRecord]) -> Result<Lexicon> {
    let nouns: BTreeSet<String> = records.iter().flat_map(|r| r.scenario.nouns.iter().map(|w| w.to_lowercase())).collect();
    let adjectives: BTreeSet<String> =
        records.iter().flat_map(|r| r.scenario.adjectives.iter().map(|w| w.to_lowercase())).collect();
    Ok(Lexicon::new(nouns, adjectives)?)
}

pub fn filter(args: &FilterArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let records: Vec<CandidateRecord> = inputs.read_json(&args.input)?;
    let kept = if records.is_empty() {
        Vec::new()
    } else {
        let lexicon = candidate_lexicon(&records)?;
        let mut candidates = records
            .iter()
            .map(|r| r.to_candidate(&lexicon))
            .collect::<refgame_core::Result<Vec<_>>>()?;
        candidates.sort_by(|a, b| b.utility.total_cmp(&a.utility));
        filter_candidates(
            &candidates,
            args.filter_settings.min_word_diff,
            args.filter_settings.max_word_occurrence,
        )
        .iter()
        .map(|c| CandidateRecord::from_candidate(c, &lexicon))
        .collect()
    };
    let settings = json!({
        "input": args.input,
        "min_word_diff": args.filter_settings.min_word_diff,
        "max_word_occurrence": args.filter_settings.max_word_occurrence,
    });
    emit(
        args.out.output.as_deref(),
        &to_json(&kept)?,
        &RunManifest::new("filter", settings, None, inputs),
    )
}

fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k as u128).fold(1u128, |acc, i| acc.saturating_mul(n as u128 - i) / (i + 1))
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let preset = args.preset.map(|p| p.settings());
    let nouns = args
        .nouns
        .or(preset.as_ref().map(|p| p.nouns))
        .ok_or_else(|| usage("--nouns or --preset is required"))?;
    let adjectives = args
        .adjectives
        .or(preset.as_ref().map(|p| p.adjectives))
        .ok_or_else(|| usage("--adjectives or --preset is required"))?;
    let mut inputs = Inputs::default();
    let lex = load_lexicon(&mut inputs, &args.lexicon)?;
    if nouns < 2 || adjectives < 1 || nouns > lex.n_nouns() || adjectives > lex.n_adjectives() {
        bail!(
            "cannot draw scenarios of {nouns} nouns and {adjectives} adjectives from a {}x{} lexicon",
            lex.n_nouns(),
            lex.n_adjectives()
        );
    }
    let space = choose(lex.n_nouns(), nouns).saturating_mul(choose(lex.n_adjectives(), adjectives));
    if (args.count as u128) > space {
        bail!("only {space} distinct scenarios exist, {} requested", args.count);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut seen = HashSet::new();
    let mut scenarios = Vec::with_capacity(args.count);
    while scenarios.len() < args.count {
        let mut n = sample(&mut rng, lex.n_nouns(), nouns).into_vec();
        let mut a = sample(&mut rng, lex.n_adjectives(), adjectives).into_vec();
        n.sort_unstable();
        a.sort_unstable();
        let s = Scenario::new(n, a, &lex)?;
        if seen.insert(s.clone()) {
            scenarios.push(ScenarioRecord::from_scenario(&s, &lex));
        }
    }
    let settings = json!({
        "lexicon": args.lexicon,
        "count": args.count,
        "preset": args.preset,
        "nouns": nouns,
        "adjectives": adjectives,
    });
    emit(
        args.out.output.as_deref(),
        &to_json(&scenarios)?,
        &RunManifest::new("generate", settings, Some(args.seed), inputs),
    )
}

pub fn sparsity(args: &SparsityArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let configs = read_configs(&mut inputs, &args.configs, tables.lexicon())?;
    let mut out = String::from("# metric\tconfigurations\tzero_fraction\n");
    for t in tables.tables() {
        let f = sparsity_report(t, &configs)?;
        out.push_str(&format!("{}\t{}\t{f}\n", t.metric(), configs.len()));
    }
    let mut settings = matrix_settings(&args.tables);
    settings["configs"] = json!(args.configs);
    emit(
        args.out.output.as_deref(),
        &out,
        &RunManifest::new("sparsity", settings, None, inputs),
    )
}

pub fn confidence_filter_cmd(args: &ConfidenceFilterArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let lex = load_lexicon(&mut inputs, &args.lexicon)?;
    let responses = read_responses(&mut inputs, &args.responses, &lex)?;
    let rated: Vec<(ConfigRecord, f64)> = responses
        .iter()
        .filter_map(|r| {
            let c = r.mean_confidence();
            if c.is_none() {
                log::warn!("skipping a configuration without confidence ratings");
            }
            Some((ConfigRecord::from_configuration(r.configuration(), &lex), c?))
        })
        .collect();
    let kept = confidence_filter(&rated)?;
    let settings = json!({ "responses": args.responses, "lexicon": args.lexicon });
    emit(
        args.out.output.as_deref(),
        &to_json(&kept)?,
        &RunManifest::new("confidence-filter", settings, None, inputs),
    )
}

pub fn confidence_test_cmd(args: &ConfidenceTestArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let lex = load_lexicon(&mut inputs, &args.lexicon)?;
    let responses = read_responses(&mut inputs, &args.responses, &lex)?;
    let ratings = |role| -> Vec<f64> {
        responses
            .iter()
            .filter(|r| r.configuration().role() == role)
            .flat_map(|r| r.confidence().iter().map(|&c| c as f64))
            .collect()
    };
    let (s, l) = (ratings(Role::Speaker), ratings(Role::Listener));
    let t = confidence_ttest(&s, &l)?;
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let out = format!(
        "# speaker_n\tspeaker_mean\tlistener_n\tlistener_mean\tt\tdf\tp\n{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        s.len(),
        mean(&s),
        l.len(),
        mean(&l),
        t.t,
        t.df,
        t.p
    );
    let settings = json!({ "responses": args.responses, "lexicon": args.lexicon });
    emit(
        args.out.output.as_deref(),
        &out,
        &RunManifest::new("confidence-test", settings, None, inputs),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(choose(6, 3), 20);
        assert_eq!(choose(5, 0), 1);
        assert_eq!(choose(3, 4), 0);
        assert_eq!(choose(100, 50), 100891344545564193334812497256);
    }
}
