use std::fmt::Write as _;

use anyhow::{Context, Result};
use refgame_core::evaluation::{metric_rank_correlation, model_agreement, score_model, simulate_gameplay_with, ScoreReport};
use refgame_core::rsa::{Answer, Configuration, Role};
use serde_json::json;

use crate::args::{CompareArgs, Format, ScoreArgs, SimulateArgs};
use crate::commands::{
    agent_name, load_tables, matrix_settings, model_name, model_spec, models_or_literal, predict_agent, read_configs,
    read_responses, read_scenarios,
};
use crate::io::{emit, Inputs, RunManifest};

const ROLES: [Role; 2] = [Role::Listener, Role::Speaker];

fn title(role: Role) -> &'static str {
    match role {
        Role::Listener => "Listener",
        Role::Speaker => "Speaker",
    }
}

fn score_table(rows: &[(Role, String, ScoreReport)]) -> String {
    let width = rows.iter().map(|(_, m, _)| m.len()).max().unwrap_or(0).max(5) + 2;
    let mut s = String::new();
    let _ = writeln!(s, "{:width$}{:<20}Rank correlation", "", "Top answer");
    let _ = writeln!(s, "{:width$}{:<9}{:<11}{:<9}SEM", "", "Mean", "SEM", "Mean");
    let mut last = None;
    for (role, model, r) in rows {
        if last != Some(*role) {
            let _ = writeln!(s, "{}", title(*role));
            last = Some(*role);
        }
        let _ = writeln!(
            s,
            "  {:w$}{:<9.3}± {:<9.3}{:<9.3}± {:.3}",
            model,
            r.top_answer.mean,
            r.top_answer.sem,
            r.rank_correlation.mean,
            r.rank_correlation.sem,
            w = width - 2
        );
    }
    s
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let responses = read_responses(&mut inputs, &args.responses, tables.lexicon())?;
    let models = models_or_literal(&tables, &args.models);
    let mut rows = Vec::new();
    for role in ROLES {
        if !responses.iter().any(|r| r.configuration().role() == role) {
            continue;
        }
        for &m in &models {
            let report = score_model(&tables, &model_spec(m, role), &responses)
                .with_context(|| format!("scoring {} as {role}", model_name(m)))?;
            rows.push((role, model_name(m), report));
        }
    }
    let out = match args.format {
        Format::Tsv => {
            let mut s = String::from(
                "# role\tmodel\tn\ttop_answer_mean\ttop_answer_sem\trank_correlation_mean\trank_correlation_sem\n",
            );
            for (role, model, r) in &rows {
                let _ = writeln!(
                    s,
                    "{role}\t{model}\t{}\t{}\t{}\t{}\t{}",
                    r.top_answer.n, r.top_answer.mean, r.top_answer.sem, r.rank_correlation.mean, r.rank_correlation.sem
                );
            }
            s
        }
        Format::Table => score_table(&rows),
    };
    let mut settings = matrix_settings(&args.tables);
    settings["responses"] = json!(args.responses);
    settings["models"] = json!(models.iter().map(|&m| model_name(m)).collect::<Vec<_>>());
    settings["format"] = json!(args.format);
    emit(args.out.output.as_deref(), &out, &RunManifest::new("score", settings, None, inputs))
}

struct Block {
    measure: &'static str,
    role: Option<Role>,
    names: Vec<String>,
    values: Vec<Vec<f64>>,
}

fn matrix_table(blocks: &[Block]) -> String {
    let mut s = String::new();
    for b in blocks {
        let width = b.names.iter().map(String::len).max().unwrap_or(0).max(6) + 2;
        match b.role {
            Some(r) => {
                let _ = writeln!(s, "{} ({})", b.measure, title(r).to_lowercase());
            }
            None => {
                let _ = writeln!(s, "{}", b.measure);
            }
        }
        let _ = write!(s, "{:width$}", "");
        for n in &b.names {
            let _ = write!(s, "{n:>width$}");
        }
        s.push('\n');
        for (n, row) in b.names.iter().zip(&b.values) {
            let _ = write!(s, "{n:width$}");
            for v in row {
                let _ = write!(s, "{:>width$.3}", v);
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

pub fn compare(args: &CompareArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let configs = read_configs(&mut inputs, &args.configs, tables.lexicon())?;
    let models = models_or_literal(&tables, &args.models);
    let mut blocks = Vec::new();

    let metric_tables: Vec<_> = tables.tables().collect();
    let mut values = vec![vec![0.0; metric_tables.len()]; metric_tables.len()];
    for (i, a) in metric_tables.iter().enumerate() {
        for (j, b) in metric_tables.iter().enumerate() {
            values[i][j] = metric_rank_correlation(a, b)?;
        }
    }
    blocks.push(Block {
        measure: "metric-rank-correlation",
        role: None,
        names: metric_tables.iter().map(|t| t.metric().to_string()).collect(),
        values,
    });

    for role in ROLES {
        let subset: Vec<Configuration> = configs.iter().filter(|c| c.role() == role).cloned().collect();
        if subset.is_empty() {
            continue;
        }
        let n = models.len();
        let (mut top, mut rank) = (vec![vec![0.0; n]; n], vec![vec![0.0; n]; n]);
        for i in 0..n {
            for j in 0..n {
                let a = model_agreement(
                    &tables,
                    &model_spec(models[i], role),
                    &model_spec(models[j], role),
                    &subset,
                )?;
                top[i][j] = a.top_answer;
                rank[i][j] = a.rank_correlation;
            }
        }
        let names: Vec<String> = models.iter().map(|&m| model_name(m)).collect();
        blocks.push(Block {
            measure: "top-answer",
            role: Some(role),
            names: names.clone(),
            values: top,
        });
        blocks.push(Block {
            measure: "rank-correlation",
            role: Some(role),
            names,
            values: rank,
        });
    }

    let out = match args.format {
        Format::Tsv => {
            let mut s = String::from("# measure\trole\tmodel_a\tmodel_b\tvalue\n");
            for b in &blocks {
                let role = b.role.map_or("-".to_string(), |r| r.to_string());
                for (i, a) in b.names.iter().enumerate() {
                    for (j, c) in b.names.iter().enumerate() {
                        let _ = writeln!(s, "{}\t{role}\t{a}\t{c}\t{}", b.measure, b.values[i][j]);
                    }
                }
            }
            s
        }
        Format::Table => matrix_table(&blocks),
    };
    let mut settings = matrix_settings(&args.tables);
    settings["configs"] = json!(args.configs);
    settings["models"] = json!(models.iter().map(|&m| model_name(m)).collect::<Vec<_>>());
    settings["format"] = json!(args.format);
    emit(args.out.output.as_deref(), &out, &RunManifest::new("compare", settings, None, inputs))
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut inputs = Inputs::default();
    let tables = load_tables(&mut inputs, &args.tables)?;
    let lex = tables.lexicon();
    let scenarios = read_scenarios(&mut inputs, &args.scenarios, lex)?;
    let report = simulate_gameplay_with(
        &scenarios,
        |c| predict_agent(&tables, args.speaker, c),
        |c| predict_agent(&tables, args.listener, c),
    )?;
    let sem = report.sem.map_or("nan".to_string(), |s| s.to_string());
    let out = match args.format {
        Format::Tsv => {
            let mut s = String::from("# scenario\tnouns\tadjectives\ttarget\tsuccess\n");
            for row in &report.per_config {
                let sc = &scenarios[row.scenario];
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}",
                    row.scenario,
                    sc.noun_words(lex).join(","),
                    sc.adjective_words(lex).join(","),
                    Answer::Pair(row.target.0, row.target.1).describe(lex),
                    row.success
                );
            }
            let _ = writeln!(s, "# mean\t{}\tsem\t{sem}", report.mean);
            s
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<10}Average success", "Scenario");
            for (i, v) in report.per_scenario.iter().enumerate() {
                let _ = writeln!(s, "{i:<10}{v:.3}");
            }
            match report.sem {
                Some(e) => {
                    let _ = writeln!(s, "{:<10}{:.3} ± {e:.3}", "Mean", report.mean);
                }
                None => {
                    let _ = writeln!(s, "{:<10}{:.3}", "Mean", report.mean);
                }
            }
            s
        }
    };
    let mut settings = matrix_settings(&args.tables);
    settings["scenarios"] = json!(args.scenarios);
    settings["speaker"] = json!(agent_name(args.speaker));
    settings["listener"] = json!(agent_name(args.listener));
    settings["format"] = json!(args.format);
    emit(args.out.output.as_deref(), &out, &RunManifest::new("simulate", settings, None, inputs))
}
