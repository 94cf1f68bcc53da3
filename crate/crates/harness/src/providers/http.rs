use std::time::Duration;

use reqwest::blocking::{Client, RequestBuilder};
use serde::Deserialize;
use serde_json::json;

use super::{ChatBackend, ChatReply, ChatRequest, EmbeddingBackend, ProviderConfig, ProviderError, Usage};

fn build_client(config: &ProviderConfig) -> Result<Client, ProviderError> {
    config.validate()?;
    Client::builder()
        .timeout(Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| ProviderError::Config(format!("cannot build HTTP client: {e}")))
}

fn send(request: RequestBuilder, api_key: Option<&str>) -> Result<String, ProviderError> {
    let request = match api_key {
        Some(key) => request.bearer_auth(key),
        None => request,
    };
    let response = request.send().map_err(|e| ProviderError::Transport(e.to_string()))?;
    let status = response.status();
    let body = response.text().map_err(|e| ProviderError::Transport(e.to_string()))?;
    if !status.is_success() {
        return Err(ProviderError::Status { status: status.as_u16(), body });
    }
    Ok(body)
}

#[derive(Deserialize)]
struct ChatCompletionBody {
    choices: Vec<Choice>,
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: AssistantMessage,
}

#[derive(Deserialize)]
struct AssistantMessage {
    content: Option<String>,
}

/// `POST {base_url}/chat/completions`.
#[derive(Debug, Clone)]
pub struct HttpChatBackend {
    client: Client,
    url: String,
    api_key: Option<String>,
}

impl HttpChatBackend {
    pub fn new(config: &ProviderConfig) -> Result<Self, ProviderError> {
        Ok(Self { client: build_client(config)?, url: config.endpoint("chat/completions"), api_key: config.api_key() })
    }
}

pub(crate) fn parse_chat_completion(body: &str) -> Result<ChatReply, ProviderError> {
    let parsed: ChatCompletionBody =
        serde_json::from_str(body).map_err(|e| ProviderError::MalformedResponse(e.to_string()))?;
    let choice = parsed
        .choices
        .into_iter()
        .next()
        .ok_or_else(|| ProviderError::MalformedResponse("no choices in response".into()))?;
    Ok(ChatReply { content: choice.message.content.unwrap_or_default(), usage: parsed.usage })
}

impl ChatBackend for HttpChatBackend {
    fn complete(&self, request: &ChatRequest) -> Result<ChatReply, ProviderError> {
        let body = send(self.client.post(&self.url).json(request), self.api_key.as_deref())?;
        parse_chat_completion(&body)
    }
}

#[derive(Deserialize)]
struct EmbeddingBody {
    data: Vec<EmbeddingItem>,
}

#[derive(Deserialize)]
struct EmbeddingItem {
    embedding: Vec<f64>,
}

/// `POST {base_url}/embeddings`.
#[derive(Debug, Clone)]
pub struct HttpEmbeddingBackend {
    client: Client,
    url: String,
    api_key: Option<String>,
}

impl HttpEmbeddingBackend {
    pub fn new(config: &ProviderConfig) -> Result<Self, ProviderError> {
        Ok(Self { client: build_client(config)?, url: config.endpoint("embeddings"), api_key: config.api_key() })
    }
}

pub(crate) fn parse_embedding(body: &str) -> Result<Vec<f64>, ProviderError> {
    let parsed: EmbeddingBody =
        serde_json::from_str(body).map_err(|e| ProviderError::MalformedResponse(e.to_string()))?;
    parsed
        .data
        .into_iter()
        .next()
        .map(|item| item.embedding)
        .ok_or_else(|| ProviderError::MalformedResponse("no embedding in response".into()))
}

impl EmbeddingBackend for HttpEmbeddingBackend {
    fn embed(&self, model: &str, text: &str) -> Result<Vec<f64>, ProviderError> {
        let payload = json!({ "model": model, "input": text });
        let body = send(self.client.post(&self.url).json(&payload), self.api_key.as_deref())?;
        parse_embedding(&body)
    }
}
