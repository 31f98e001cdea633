//! Scoring model predictions against responses, comparing models with each
//! other, and measuring speaker-listener success.

mod compare;
mod gameplay;
mod scoring;

pub use compare::{confidence_ttest, metric_rank_correlation, model_agreement, Agreement, TTest};
pub use gameplay::{average_success, empirical_success, simulate_gameplay, simulate_gameplay_with, GameplayReport, SuccessRow};
pub use scoring::{
    aggregate, expected_top_answer, mean_sem, rank_correlation, score_model, top_answer, ConfigScore, MeanSem,
    ResponseRecord, ScoreReport,
};
