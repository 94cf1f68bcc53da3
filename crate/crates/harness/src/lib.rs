//! Provider clients and the batch evaluation loop around `sbc-core`.
//!
//! For every requirement in a dataset and every configured model, the
//! pipeline asks the model for code, asks it again to reconstruct the
//! requirement from that code, and scores the reconstruction against the
//! original. Results are written as JSON Lines, one record per
//! (model, iteration, question).

pub mod pipeline;
pub mod providers;

pub use pipeline::{
    evaluate_pair, load_dataset, load_results, persist_results, resume_run, run_evaluation, DatasetError, Evaluator,
    PipelineError, RunConfig, RunSettings,
};
pub use providers::{
    make_mock_provider, ChatBackend, ChatClient, ChatExchange, EmbeddingBackend, EmbeddingClient, MockMode,
    MockProvider, PromptTemplate, ProviderConfig, ProviderError, ProviderSpec, RetryPolicy,
};
