use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use sbc_core::{Embedder, EmbeddingVector};
use serde::{Deserialize, Serialize};

use super::fence::strip_code_fences;
use super::http::{HttpChatBackend, HttpEmbeddingBackend};
use super::mock::make_mock_provider;
use super::retry::{RetryPolicy, RetryTiming};
use super::template::PromptTemplate;
use super::{
    ChatBackend, ChatMessage, ChatRequest, ChatTask, EmbeddingBackend, ProviderConfig, ProviderError, ProviderSpec,
    Role, Usage,
};

/// The two prompts of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSet {
    pub generate: PromptTemplate,
    pub reverse: PromptTemplate,
}

impl Default for PromptSet {
    fn default() -> Self {
        Self { generate: PromptTemplate::code_generation(), reverse: PromptTemplate::reverse_generation() }
    }
}

/// Audit record of one chat call.
#[derive(Debug, Clone, PartialEq)]
pub struct ChatExchange {
    pub model: String,
    pub temperature: f64,
    pub request_messages: Vec<ChatMessage>,
    /// Assistant message content as returned, before fence stripping.
    pub response_text: String,
    pub latency: Duration,
    pub raw_usage: Option<Usage>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub text: String,
    pub exchange: ChatExchange,
}

/// Chat model used for code generation and reverse generation.
#[derive(Clone)]
pub struct ChatClient {
    name: String,
    config: ProviderConfig,
    backend: Arc<dyn ChatBackend>,
    prompts: PromptSet,
    retry: RetryPolicy,
}

impl std::fmt::Debug for ChatClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChatClient").field("name", &self.name).field("config", &self.config).finish()
    }
}

impl ChatClient {
    /// Client with the default prompts and immediate retries.
    pub fn new(name: impl Into<String>, config: ProviderConfig, backend: Arc<dyn ChatBackend>) -> Self {
        let retry = RetryPolicy::immediate(config.max_retries);
        Self { name: name.into(), config, backend, prompts: PromptSet::default(), retry }
    }

    /// Builds the HTTP or mock backend described by `spec`.
    pub fn from_spec(spec: &ProviderSpec, prompts: PromptSet, timing: RetryTiming) -> Result<Self, ProviderError> {
        let backend: Arc<dyn ChatBackend> = match &spec.mock {
            Some(mode) => Arc::new(make_mock_provider(mode.clone())?),
            None => {
                if spec.config.model_name.is_empty() {
                    return Err(ProviderError::Config(format!("provider {:?} has no model_name", spec.name)));
                }
                Arc::new(HttpChatBackend::new(&spec.config)?)
            }
        };
        Ok(Self::new(spec.name.clone(), spec.config.clone(), backend)
            .with_prompts(prompts)
            .with_retry(RetryPolicy::new(spec.config.max_retries, timing)))
    }

    #[must_use]
    pub fn with_prompts(mut self, prompts: PromptSet) -> Self {
        self.prompts = prompts;
        self
    }

    #[must_use]
    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    fn model(&self) -> &str {
        if self.config.model_name.is_empty() {
            &self.name
        } else {
            &self.config.model_name
        }
    }

    fn exchange(
        &self,
        template: &PromptTemplate,
        bindings: &[(&str, &str)],
        task: ChatTask,
    ) -> Result<ChatExchange, ProviderError> {
        let prompt = template.render(bindings)?;
        let mut messages = Vec::with_capacity(2);
        if let Some(system) = prompt.system {
            messages.push(ChatMessage { role: Role::System, content: system });
        }
        messages.push(ChatMessage { role: Role::User, content: prompt.user });
        let request = ChatRequest {
            model: self.model().to_string(),
            messages,
            temperature: self.config.temperature,
            max_tokens: self.config.max_output_tokens,
            task,
        };
        let started = Instant::now();
        let reply = self.retry.run(|| self.backend.complete(&request))?;
        Ok(ChatExchange {
            model: request.model,
            temperature: request.temperature,
            request_messages: request.messages,
            response_text: reply.content,
            latency: started.elapsed(),
            raw_usage: reply.usage,
        })
    }

    /// Asks the model to implement `requirement` in `technology`. The reply's
    /// first markdown code fence, if any, is unwrapped.
    pub fn generate_code(&self, requirement: &str, technology: &str) -> Result<Completion, ProviderError> {
        if requirement.trim().is_empty() {
            return Err(ProviderError::EmptyInput("requirement"));
        }
        let task = ChatTask::GenerateCode { requirement: requirement.into(), technology: technology.into() };
        let exchange =
            self.exchange(&self.prompts.generate, &[("requirement", requirement), ("technology", technology)], task)?;
        let text = strip_code_fences(&exchange.response_text).to_string();
        if text.trim().is_empty() {
            return Err(ProviderError::EmptyGeneration);
        }
        Ok(Completion { text, exchange })
    }

    /// Asks the model which requirement `code` implements. The answer is
    /// whitespace-trimmed.
    pub fn reverse_generate(&self, code: &str) -> Result<Completion, ProviderError> {
        if code.trim().is_empty() {
            return Err(ProviderError::EmptyInput("code"));
        }
        let task = ChatTask::ReverseGenerate { code: code.into() };
        let exchange = self.exchange(&self.prompts.reverse, &[("code", code)], task)?;
        let text = exchange.response_text.trim().to_string();
        if text.is_empty() {
            return Err(ProviderError::EmptyGeneration);
        }
        Ok(Completion { text, exchange })
    }
}

/// Embedding endpoint. All vectors within one client's lifetime must share
/// the dimension of the first one.
pub struct EmbeddingClient {
    name: String,
    config: ProviderConfig,
    backend: Arc<dyn EmbeddingBackend>,
    retry: RetryPolicy,
    dimension: OnceLock<usize>,
}

impl std::fmt::Debug for EmbeddingClient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EmbeddingClient").field("name", &self.name).field("dimension", &self.dimension.get()).finish()
    }
}

impl EmbeddingClient {
    pub fn new(name: impl Into<String>, config: ProviderConfig, backend: Arc<dyn EmbeddingBackend>) -> Self {
        let retry = RetryPolicy::immediate(config.max_retries);
        Self { name: name.into(), config, backend, retry, dimension: OnceLock::new() }
    }

    pub fn from_spec(spec: &ProviderSpec, timing: RetryTiming) -> Result<Self, ProviderError> {
        let backend: Arc<dyn EmbeddingBackend> = match &spec.mock {
            Some(mode) => Arc::new(make_mock_provider(mode.clone())?),
            None => Arc::new(HttpEmbeddingBackend::new(&spec.config)?),
        };
        Ok(Self::new(spec.name.clone(), spec.config.clone(), backend)
            .with_retry(RetryPolicy::new(spec.config.max_retries, timing)))
    }

    #[must_use]
    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        if text.trim().is_empty() {
            return Err(ProviderError::EmptyInput("text to embed"));
        }
        let values = self.retry.run(|| self.backend.embed(&self.config.model_name, text))?;
        let vector = EmbeddingVector::new(values)?;
        let expected = *self.dimension.get_or_init(|| vector.dimension());
        if vector.dimension() != expected {
            return Err(ProviderError::DimensionDrift { expected, got: vector.dimension() });
        }
        Ok(vector)
    }
}

impl Embedder for EmbeddingClient {
    type Error = ProviderError;

    fn embed(&self, text: &str) -> Result<EmbeddingVector, ProviderError> {
        EmbeddingClient::embed(self, text)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::atomic::{AtomicUsize, Ordering};

    use super::*;
    use crate::providers::mock::{echo_code, FixtureTable, MockMode};
    use crate::providers::{ChatReply, MockProvider};

    fn fixture(pairs: &[(&str, &str)]) -> MockProvider {
        let table = FixtureTable::from_pairs(pairs.iter().copied()).unwrap();
        make_mock_provider(MockMode::Fixture { table }).unwrap()
    }

    fn client(mock: &MockProvider) -> ChatClient {
        ChatClient::new("mock", ProviderConfig::default(), Arc::new(mock.clone()))
    }

    #[test]
    fn fixture_generation() {
        let mock = fixture(&[("q1", "SELECT 1;")]);
        let c = client(&mock);
        assert_eq!(c.generate_code("q1", "SQL").unwrap().text, "SELECT 1;");
    }

    #[test]
    fn fenced_generation_is_unwrapped() {
        let mock = fixture(&[("q1", "```sql\nSELECT 1;\n```")]);
        let done = client(&mock).generate_code("q1", "SQL").unwrap();
        assert_eq!(done.text, "SELECT 1;");
        assert_eq!(done.exchange.response_text, "```sql\nSELECT 1;\n```");
    }

    #[test]
    fn empty_generation_is_distinguished() {
        let mock = fixture(&[("q1", "```\n\n```"), ("code", "   ")]);
        let c = client(&mock);
        assert!(matches!(c.generate_code("q1", "SQL"), Err(ProviderError::EmptyGeneration)));
        assert!(matches!(c.reverse_generate("code"), Err(ProviderError::EmptyGeneration)));
    }

    #[test]
    fn empty_inputs_are_rejected_before_calling() {
        let mock = fixture(&[]);
        let c = client(&mock);
        assert!(matches!(c.generate_code(" ", "SQL"), Err(ProviderError::EmptyInput("requirement"))));
        assert!(matches!(c.reverse_generate(""), Err(ProviderError::EmptyInput("code"))));
        assert!(mock.requests().is_empty());
    }

    #[test]
    fn reverse_generation_trims_and_echoes() {
        let mock = fixture(&[("code", "  canned reply\n")]);
        assert_eq!(client(&mock).reverse_generate("code").unwrap().text, "canned reply");
        let echo = make_mock_provider(MockMode::Echo).unwrap();
        let c = client(&echo);
        let code = c.generate_code("Build a login form", "React").unwrap().text;
        assert_eq!(code, echo_code("Build a login form", "React"));
        assert_eq!(c.reverse_generate(&code).unwrap().text, "Build a login form");
    }

    #[test]
    fn temperature_is_propagated() {
        let echo = make_mock_provider(MockMode::Echo).unwrap();
        let config = ProviderConfig { temperature: 0.0, ..Default::default() };
        let c = ChatClient::new("m", config, Arc::new(echo.clone()));
        let done = c.generate_code("r", "SQL").unwrap();
        assert_eq!(done.exchange.temperature, 0.0);
        let warm =
            ChatClient::new("m", ProviderConfig { temperature: 0.7, ..Default::default() }, Arc::new(echo.clone()));
        warm.generate_code("r", "SQL").unwrap();
        let temps: Vec<f64> = echo.requests().iter().map(|r| r.temperature).collect();
        assert_eq!(temps, [0.0, 0.7]);
    }

    #[test]
    fn prompts_are_rendered_into_messages() {
        let echo = make_mock_provider(MockMode::Echo).unwrap();
        let prompts = PromptSet {
            generate: PromptTemplate::new("You write {technology}.", "{requirement}"),
            ..PromptSet::default()
        };
        client(&echo).with_prompts(prompts).generate_code("Do it", "Go").unwrap();
        let messages = &echo.requests()[0].messages;
        assert_eq!(messages.len(), 2);
        assert_eq!(messages[0], ChatMessage { role: Role::System, content: "You write Go.".into() });
        assert_eq!(messages[1].content, "Do it");
    }

    struct Flaky {
        failures: usize,
        calls: AtomicUsize,
    }

    impl ChatBackend for Flaky {
        fn complete(&self, _: &ChatRequest) -> Result<ChatReply, ProviderError> {
            if self.calls.fetch_add(1, Ordering::SeqCst) < self.failures {
                Err(ProviderError::Transport("timed out".into()))
            } else {
                Ok(ChatReply { content: "ok".into(), usage: None })
            }
        }
    }

    #[test]
    fn retries_follow_max_retries() {
        let config = ProviderConfig { max_retries: 3, ..Default::default() };
        let ok = ChatClient::new("f", config.clone(), Arc::new(Flaky { failures: 3, calls: AtomicUsize::new(0) }));
        assert_eq!(ok.generate_code("r", "t").unwrap().text, "ok");
        let bad = ChatClient::new("f", config, Arc::new(Flaky { failures: 4, calls: AtomicUsize::new(0) }));
        assert!(matches!(bad.generate_code("r", "t"), Err(ProviderError::Transport(_))));
    }

    struct GrowingEmbedding(AtomicUsize);

    impl EmbeddingBackend for GrowingEmbedding {
        fn embed(&self, _: &str, _: &str) -> Result<Vec<f64>, ProviderError> {
            Ok(vec![1.0; 4 + self.0.fetch_add(1, Ordering::SeqCst)])
        }
    }

    #[test]
    fn embedding_dimension_drift_is_an_error() {
        let c = EmbeddingClient::new("e", ProviderConfig::default(), Arc::new(GrowingEmbedding(AtomicUsize::new(0))));
        assert_eq!(c.embed("a").unwrap().dimension(), 4);
        assert!(matches!(c.embed("b"), Err(ProviderError::DimensionDrift { expected: 4, got: 5 })));
    }

    #[test]
    fn hash_embedding_client() {
        let spec = ProviderSpec {
            name: "hash".into(),
            config: ProviderConfig::default(),
            mock: Some(MockMode::HashEmbedding { dimension: 32 }),
        };
        let c = EmbeddingClient::from_spec(&spec, RetryTiming::default()).unwrap();
        let v = c.embed("hello world").unwrap();
        assert_eq!(v, c.embed("hello world").unwrap());
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(c.embed("  "), Err(ProviderError::EmptyInput(_))));
    }

    #[test]
    fn http_spec_needs_model_name() {
        let spec = ProviderSpec { name: "x".into(), config: ProviderConfig::default(), mock: None };
        assert!(ChatClient::from_spec(&spec, PromptSet::default(), RetryTiming::default()).is_err());
    }
}
