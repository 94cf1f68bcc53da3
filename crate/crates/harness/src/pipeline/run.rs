use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sbc_core::keywords::{KeywordExtractor, Lexicon, RuleTagger};
use sbc_core::{score_pair_with, EvaluationResult, RequirementRecord, SbcBreakdown, SbcWeights, ScoreError, TripleKey};

use super::{load_results, PipelineError, RunConfig};
use crate::providers::{ChatClient, EmbeddingClient, ProviderError};

/// Text embedded once before a run to check the embedding provider is up.
const PROBE_TEXT: &str = "embedding provider probe";

#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub iterations: u32,
    pub weights: SbcWeights,
    pub concurrency_limit: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { iterations: 3, weights: SbcWeights::default(), concurrency_limit: 1 }
    }
}

/// Chat clients, an embedding client and the scoring setup for a run.
#[derive(Debug)]
pub struct Evaluator {
    chat: Vec<ChatClient>,
    embedder: EmbeddingClient,
    settings: RunSettings,
    extractor: KeywordExtractor,
}

impl Evaluator {
    pub fn new(chat: Vec<ChatClient>, embedder: EmbeddingClient, settings: RunSettings) -> Self {
        Self { chat, embedder, settings, extractor: KeywordExtractor::default() }
    }

    pub fn from_config(config: &RunConfig) -> Result<Self, PipelineError> {
        config.validate()?;
        let prompts = config.prompts.resolve();
        let chat = config
            .providers
            .iter()
            .map(|spec| ChatClient::from_spec(spec, prompts.clone(), config.retry))
            .collect::<Result<Vec<_>, _>>()
            .map_err(PipelineError::ProviderSetup)?;
        let embedder = EmbeddingClient::from_spec(&config.embedding_provider, config.retry)
            .map_err(PipelineError::ProviderSetup)?;
        let settings = RunSettings {
            iterations: config.iterations,
            weights: config.weights,
            concurrency_limit: config.concurrency_limit,
        };
        let mut evaluator = Self::new(chat, embedder, settings);
        if let Some(path) = &config.lexicon_path {
            let lexicon = Lexicon::load(path).map_err(|source| PipelineError::Io { path: path.clone(), source })?;
            evaluator.extractor = KeywordExtractor::new(RuleTagger::with_function_words(lexicon));
        }
        Ok(evaluator)
    }

    #[must_use]
    pub fn with_extractor(mut self, extractor: KeywordExtractor) -> Self {
        self.extractor = extractor;
        self
    }

    pub fn settings(&self) -> &RunSettings {
        &self.settings
    }

    /// Every (model, iteration, question) triple of a full run, sorted.
    pub fn planned_keys(&self, dataset: &[RequirementRecord]) -> Vec<TripleKey> {
        let mut keys: Vec<TripleKey> = self
            .chat
            .iter()
            .flat_map(|client| {
                (1..=self.settings.iterations).flat_map(move |iteration| {
                    dataset.iter().map(move |r| TripleKey {
                        model: client.name().to_string(),
                        iteration,
                        question_id: r.id,
                    })
                })
            })
            .collect();
        keys.sort();
        keys
    }

    /// Runs every triple. Per-question failures become error records; only
    /// an unreachable embedding provider aborts the run.
    pub fn run(&self, dataset: &[RequirementRecord]) -> Result<Vec<EvaluationResult>, PipelineError> {
        if self.chat.is_empty() {
            return Err(PipelineError::NoProviders);
        }
        self.probe()?;
        Ok(self.execute(dataset, |_| true))
    }

    /// Runs only the triples absent from `existing` and returns the merged,
    /// sorted result list.
    pub fn resume(
        &self,
        dataset: &[RequirementRecord],
        existing: Vec<EvaluationResult>,
    ) -> Result<Vec<EvaluationResult>, PipelineError> {
        if self.chat.is_empty() {
            return Err(PipelineError::NoProviders);
        }
        let planned: HashSet<TripleKey> = self.planned_keys(dataset).into_iter().collect();
        let requirements: BTreeMap<u64, &str> = dataset.iter().map(|r| (r.id, r.requirement.as_str())).collect();
        let mut done = HashSet::new();
        for record in &existing {
            let key = record.key();
            let describe = || format!("({}, iteration {}, question {})", key.model, key.iteration, key.question_id);
            if !planned.contains(&key)
                || requirements.get(&key.question_id) != Some(&record.input_requirements.as_str())
            {
                return Err(PipelineError::StaleResult(describe()));
            }
            if !done.insert(key.clone()) {
                return Err(PipelineError::DuplicateResult(describe()));
            }
        }
        let mut results = existing;
        if done.len() < planned.len() {
            self.probe()?;
            results.extend(self.execute(dataset, |key| !done.contains(key)));
        }
        sort_results(&mut results);
        Ok(results)
    }

    /// Reverse-generates `code` with the named provider (the first one if
    /// `provider` is `None`) and scores it against `requirement`.
    pub fn evaluate_pair(
        &self,
        requirement: &str,
        code: &str,
        provider: Option<&str>,
    ) -> Result<EvaluationResult, PipelineError> {
        if requirement.trim().is_empty() {
            return Err(PipelineError::Precondition("requirement"));
        }
        if code.trim().is_empty() {
            return Err(PipelineError::Precondition("code"));
        }
        let client = match provider {
            Some(name) => self
                .chat
                .iter()
                .find(|c| c.name() == name)
                .ok_or_else(|| PipelineError::UnknownProvider(name.to_string()))?,
            None => self.chat.first().ok_or(PipelineError::NoProviders)?,
        };
        let key = TripleKey { model: client.name().to_string(), iteration: 1, question_id: 0 };
        let record = RequirementRecord {
            id: 0,
            layer: sbc_core::Layer::Logic,
            technology: String::new(),
            requirement: requirement.to_string(),
        };
        let mut result = EvaluationResult::pending(&key, &record);
        result.generated_code = code.to_string();
        Ok(self.reverse_and_score(client, result))
    }

    /// Scores `reversed` against `original` with this run's embedder,
    /// weights and tagger.
    pub fn score_texts(&self, original: &str, reversed: &str) -> Result<SbcBreakdown, ScoreError<ProviderError>> {
        score_pair_with(original, reversed, &self.embedder, &self.settings.weights, &self.extractor)
    }

    fn probe(&self) -> Result<(), PipelineError> {
        self.embedder.embed(PROBE_TEXT).map(drop).map_err(PipelineError::EmbeddingUnavailable)
    }

    fn execute(&self, dataset: &[RequirementRecord], wanted: impl Fn(&TripleKey) -> bool) -> Vec<EvaluationResult> {
        let mut results = Vec::new();
        for client in &self.chat {
            for iteration in 1..=self.settings.iterations {
                let jobs: Vec<(TripleKey, &RequirementRecord)> = dataset
                    .iter()
                    .map(|r| (TripleKey { model: client.name().to_string(), iteration, question_id: r.id }, r))
                    .filter(|(key, _)| wanted(key))
                    .collect();
                results.extend(map_bounded(&jobs, self.settings.concurrency_limit, |(key, record)| {
                    self.evaluate_question(client, key, record)
                }));
            }
        }
        sort_results(&mut results);
        results
    }

    fn evaluate_question(&self, client: &ChatClient, key: &TripleKey, record: &RequirementRecord) -> EvaluationResult {
        let result = EvaluationResult::pending(key, record);
        match client.generate_code(&record.requirement, &record.technology) {
            Ok(generated) => {
                let result = EvaluationResult { generated_code: generated.text, ..result };
                self.reverse_and_score(client, result)
            }
            Err(e) => {
                let message = format!("question {}: code generation failed: {e}", record.id);
                result.with_error(message)
            }
        }
    }

    fn reverse_and_score(&self, client: &ChatClient, mut result: EvaluationResult) -> EvaluationResult {
        let qid = result.question_id;
        let reversed = match client.reverse_generate(&result.generated_code) {
            Ok(c) => c.text,
            Err(e) => return result.with_error(format!("question {qid}: reverse generation failed: {e}")),
        };
        result.reverse_generated_requirements = reversed;
        match self.score_texts(&result.input_requirements, &result.reverse_generated_requirements) {
            Ok(breakdown) => result.with_breakdown(breakdown),
            Err(e) => result.with_error(format!("question {qid}: scoring failed: {e}")),
        }
    }
}

fn sort_results(results: &mut [EvaluationResult]) {
    results.sort_by(|a, b| (&a.model, a.iteration, a.question_id).cmp(&(&b.model, b.iteration, b.question_id)));
}

/// Applies `f` to every item using at most `limit` threads, preserving order.
fn map_bounded<T: Sync, R: Send>(items: &[T], limit: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = limit.min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new(items.iter().map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(idx) else { break };
                let out = f(item);
                slots.lock().expect("result slots poisoned")[idx] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|slot| slot.expect("every slot is filled"))
        .collect()
}

pub fn run_evaluation(
    dataset: &[RequirementRecord],
    config: &RunConfig,
) -> Result<Vec<EvaluationResult>, PipelineError> {
    Evaluator::from_config(config)?.run(dataset)
}

pub fn resume_run(
    dataset: &[RequirementRecord],
    config: &RunConfig,
    existing_results: impl AsRef<Path>,
) -> Result<Vec<EvaluationResult>, PipelineError> {
    let existing = load_results(existing_results)?;
    Evaluator::from_config(config)?.resume(dataset, existing)
}

pub fn evaluate_pair(requirement: &str, code: &str, config: &RunConfig) -> Result<EvaluationResult, PipelineError> {
    Evaluator::from_config(config)?.evaluate_pair(requirement, code, None)
}
