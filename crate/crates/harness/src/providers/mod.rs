//! Chat-completion and embedding providers.
//!
//! Backends speak one request at a time ([`ChatBackend`],
//! [`EmbeddingBackend`]); the clients on top ([`ChatClient`],
//! [`EmbeddingClient`]) add prompt rendering, retries, fence stripping and
//! dimension checks. Both HTTP and mock backends plug into the same clients.

mod client;
mod fence;
mod http;
mod mock;
mod retry;
mod template;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use client::{ChatClient, ChatExchange, Completion, EmbeddingClient, PromptSet};
pub use fence::strip_code_fences;
pub use http::{HttpChatBackend, HttpEmbeddingBackend};
pub use mock::{echo_code, make_mock_provider, FixtureTable, MockMode, MockProvider, ECHO_MARKER};
pub use retry::{RetryPolicy, RetryTiming};
pub use template::{PromptTemplate, RenderedPrompt, TemplateError};

use sbc_core::MetricError;

pub const DEFAULT_API_KEY_ENV: &str = "SBC_API_KEY";

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed provider response: {0}")]
    MalformedResponse(String),
    #[error("model returned an empty generation")]
    EmptyGeneration,
    #[error("no fixture for {0:?}")]
    NoFixture(String),
    #[error("{0} must not be empty")]
    EmptyInput(&'static str),
    #[error("embedding dimension changed within a run: expected {expected}, got {got}")]
    DimensionDrift { expected: usize, got: usize },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(#[from] MetricError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("provider misconfigured: {0}")]
    Config(String),
}

impl ProviderError {
    /// Transport failures, rate limits and server errors are worth retrying.
    pub fn is_retryable(&self) -> bool {
        match self {
            ProviderError::Transport(_) => true,
            ProviderError::Status { status, .. } => *status == 408 || *status == 429 || *status >= 500,
            _ => false,
        }
    }
}

fn default_base_url() -> String {
    "http://localhost:8000/v1".into()
}

fn default_api_key_ref() -> String {
    DEFAULT_API_KEY_ENV.into()
}

fn default_max_output_tokens() -> u32 {
    2048
}

fn default_timeout_secs() -> u64 {
    120
}

fn default_max_retries() -> u32 {
    3
}

/// Connection and generation settings for one endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderConfig {
    #[serde(default = "default_base_url")]
    pub base_url: String,
    #[serde(default)]
    pub model_name: String,
    /// Name of the environment variable holding the API key.
    #[serde(default = "default_api_key_ref")]
    pub api_key_ref: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_output_tokens")]
    pub max_output_tokens: u32,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            base_url: default_base_url(),
            model_name: String::new(),
            api_key_ref: default_api_key_ref(),
            temperature: 0.0,
            max_output_tokens: default_max_output_tokens(),
            timeout_secs: default_timeout_secs(),
            max_retries: default_max_retries(),
        }
    }
}

impl ProviderConfig {
    pub fn validate(&self) -> Result<(), ProviderError> {
        let url = url::Url::parse(&self.base_url)
            .map_err(|e| ProviderError::Config(format!("base_url {:?} is not an absolute URL: {e}", self.base_url)))?;
        if url.cannot_be_a_base() {
            return Err(ProviderError::Config(format!("base_url {:?} cannot be a base URL", self.base_url)));
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(ProviderError::Config(format!("temperature {} must be >= 0", self.temperature)));
        }
        if self.max_output_tokens == 0 {
            return Err(ProviderError::Config("max_output_tokens must be positive".into()));
        }
        Ok(())
    }

    /// `{base_url}/{path}` with exactly one slash between them.
    pub fn endpoint(&self, path: &str) -> String {
        format!("{}/{}", self.base_url.trim_end_matches('/'), path)
    }

    pub fn api_key(&self) -> Option<String> {
        std::env::var(&self.api_key_ref).ok().filter(|k| !k.is_empty())
    }
}

/// A named provider entry of a run configuration. Entries with `mock` use a
/// built-in offline backend instead of HTTP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderSpec {
    pub name: String,
    #[serde(flatten)]
    pub config: ProviderConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mock: Option<MockMode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

/// Why a chat request is made. Not sent over the wire; mock backends use it
/// to answer without parsing prompts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChatTask {
    GenerateCode { requirement: String, technology: String },
    ReverseGenerate { code: String },
}

/// Body of a chat-completions request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
    #[serde(skip)]
    pub task: ChatTask,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
    #[serde(default)]
    pub total_tokens: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatReply {
    pub content: String,
    pub usage: Option<Usage>,
}

/// One attempt at a chat completion.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<ChatReply, ProviderError>;
}

/// One attempt at embedding a text.
pub trait EmbeddingBackend: Send + Sync {
    fn embed(&self, model: &str, text: &str) -> Result<Vec<f64>, ProviderError>;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults() {
        let c: ProviderConfig = serde_json::from_str(r#"{"model_name":"m"}"#).unwrap();
        assert_eq!(c.temperature, 0.0);
        assert_eq!(c.api_key_ref, "SBC_API_KEY");
        assert_eq!(c.max_retries, 3);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn config_validation() {
        let bad_url = ProviderConfig { base_url: "localhost/v1".into(), ..Default::default() };
        assert!(matches!(bad_url.validate(), Err(ProviderError::Config(_))));
        let bad_temp = ProviderConfig { temperature: -0.5, ..Default::default() };
        assert!(bad_temp.validate().is_err());
        let zero_tokens = ProviderConfig { max_output_tokens: 0, ..Default::default() };
        assert!(zero_tokens.validate().is_err());
    }

    #[test]
    fn endpoint_joining() {
        let c = ProviderConfig { base_url: "http://h:1/v1/".into(), ..Default::default() };
        assert_eq!(c.endpoint("chat/completions"), "http://h:1/v1/chat/completions");
    }

    #[test]
    fn retryable_classification() {
        assert!(ProviderError::Transport("x".into()).is_retryable());
        assert!(ProviderError::Status { status: 503, body: String::new() }.is_retryable());
        assert!(ProviderError::Status { status: 429, body: String::new() }.is_retryable());
        assert!(!ProviderError::Status { status: 400, body: String::new() }.is_retryable());
        assert!(!ProviderError::NoFixture("q".into()).is_retryable());
    }

    #[test]
    fn request_wire_format_omits_task() {
        let req = ChatRequest {
            model: "m".into(),
            messages: vec![ChatMessage { role: Role::User, content: "hi".into() }],
            temperature: 0.0,
            max_tokens: 16,
            task: ChatTask::ReverseGenerate { code: "x".into() },
        };
        assert_eq!(
            serde_json::to_string(&req).unwrap(),
            r#"{"model":"m","messages":[{"role":"user","content":"hi"}],"temperature":0.0,"max_tokens":16}"#
        );
    }
}
