//! Command-line frontend for lamsym: the analysis pipeline, auxiliary commands and the
//! embedded example corpus.

pub mod analyze;
pub mod commands;
pub mod corpus;
pub mod error;

pub use analyze::{cmd_analyze, AnalysisReport, AnalyzeOptions, DEFAULT_WINDOW};
pub use commands::{
    cmd_check_integral, cmd_corpus, cmd_drift, cmd_equiv, cmd_multiplier, cmd_raise, EntryOutcome,
};
pub use corpus::CorpusEntry;
pub use error::{CliError, Result};
