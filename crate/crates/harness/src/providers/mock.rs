use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use sbc_core::HashEmbedder;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use super::{ChatBackend, ChatReply, ChatRequest, ChatTask, EmbeddingBackend, ProviderError};

/// Comment marker the echo generator writes in front of the requirement.
pub const ECHO_MARKER: &str = "SBC-REQUIREMENT:";

/// Prompt-to-reply table for the fixture mock. Code generation looks up the
/// requirement; reverse generation looks up the code.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FixtureTable(BTreeMap<String, String>);

impl FixtureTable {
    /// Fails on the first duplicated key.
    pub fn from_pairs<I, K, V>(pairs: I) -> Result<Self, ProviderError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut table = BTreeMap::new();
        for (k, v) in pairs {
            let k = k.into();
            if table.contains_key(&k) {
                return Err(ProviderError::Config(format!("duplicate fixture key {k:?}")));
            }
            table.insert(k, v.into());
        }
        Ok(Self(table))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }
}

impl<'de> Deserialize<'de> for FixtureTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct TableVisitor;

        impl<'de> Visitor<'de> for TableVisitor {
            type Value = FixtureTable;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map of prompt keys to canned replies")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<FixtureTable, A::Error> {
                let mut table = BTreeMap::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    if table.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate fixture key {k:?}")));
                    }
                    table.insert(k, v);
                }
                Ok(FixtureTable(table))
            }
        }

        deserializer.deserialize_map(TableVisitor)
    }
}

/// Offline provider behaviours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum MockMode {
    /// Generated code carries the requirement in a comment; reverse
    /// generation reads it back, so every round trip is exact.
    Echo,
    Fixture {
        table: FixtureTable,
    },
    HashEmbedding {
        dimension: usize,
    },
}

#[derive(Debug, Default)]
struct Counters {
    generate: AtomicUsize,
    reverse: AtomicUsize,
    embed: AtomicUsize,
}

#[derive(Debug)]
enum Behaviour {
    Echo,
    Fixture(FixtureTable),
    Hash(HashEmbedder),
}

/// Handle to a mock backend. Clones share call counters and the request log.
#[derive(Debug, Clone)]
pub struct MockProvider {
    behaviour: Arc<Behaviour>,
    counters: Arc<Counters>,
    requests: Arc<Mutex<Vec<ChatRequest>>>,
}

pub fn make_mock_provider(mode: MockMode) -> Result<MockProvider, ProviderError> {
    let behaviour = match mode {
        MockMode::Echo => Behaviour::Echo,
        MockMode::Fixture { table } => Behaviour::Fixture(table),
        MockMode::HashEmbedding { dimension } => {
            Behaviour::Hash(HashEmbedder::new(dimension).map_err(|e| ProviderError::Config(e.to_string()))?)
        }
    };
    Ok(MockProvider { behaviour: Arc::new(behaviour), counters: Arc::default(), requests: Arc::default() })
}

impl MockProvider {
    pub fn generate_calls(&self) -> usize {
        self.counters.generate.load(Ordering::SeqCst)
    }

    pub fn reverse_calls(&self) -> usize {
        self.counters.reverse.load(Ordering::SeqCst)
    }

    pub fn embed_calls(&self) -> usize {
        self.counters.embed.load(Ordering::SeqCst)
    }

    /// Every chat request received so far, in arrival order.
    pub fn requests(&self) -> Vec<ChatRequest> {
        self.requests.lock().expect("request log poisoned").clone()
    }
}

/// Code the echo generator emits for a requirement.
pub fn echo_code(requirement: &str, technology: &str) -> String {
    let quoted = serde_json::to_string(requirement).expect("strings always serialize");
    format!("// {ECHO_MARKER} {quoted}\n// technology: {technology}\nfn generated() {{}}\n")
}

fn echo_requirement(code: &str) -> Option<String> {
    code.lines()
        .find_map(|line| line.split_once(ECHO_MARKER))
        .and_then(|(_, rest)| serde_json::from_str(rest.trim()).ok())
}

impl ChatBackend for MockProvider {
    fn complete(&self, request: &ChatRequest) -> Result<ChatReply, ProviderError> {
        self.requests.lock().expect("request log poisoned").push(request.clone());
        let content = match (&request.task, self.behaviour.as_ref()) {
            (ChatTask::GenerateCode { requirement, technology }, Behaviour::Echo) => {
                self.counters.generate.fetch_add(1, Ordering::SeqCst);
                echo_code(requirement, technology)
            }
            (ChatTask::ReverseGenerate { code }, Behaviour::Echo) => {
                self.counters.reverse.fetch_add(1, Ordering::SeqCst);
                echo_requirement(code)
                    .ok_or_else(|| ProviderError::NoFixture(format!("no {ECHO_MARKER} line in code")))?
            }
            (ChatTask::GenerateCode { requirement, .. }, Behaviour::Fixture(table)) => {
                self.counters.generate.fetch_add(1, Ordering::SeqCst);
                table.get(requirement).ok_or_else(|| ProviderError::NoFixture(requirement.clone()))?.to_string()
            }
            (ChatTask::ReverseGenerate { code }, Behaviour::Fixture(table)) => {
                self.counters.reverse.fetch_add(1, Ordering::SeqCst);
                table.get(code).ok_or_else(|| ProviderError::NoFixture(code.clone()))?.to_string()
            }
            (_, Behaviour::Hash(_)) => {
                return Err(ProviderError::Config("hash_embedding mock cannot answer chat requests".into()))
            }
        };
        Ok(ChatReply { content, usage: None })
    }
}

impl EmbeddingBackend for MockProvider {
    fn embed(&self, _model: &str, text: &str) -> Result<Vec<f64>, ProviderError> {
        match self.behaviour.as_ref() {
            Behaviour::Hash(embedder) => {
                self.counters.embed.fetch_add(1, Ordering::SeqCst);
                Ok(embedder.vector(text).values().to_vec())
            }
            _ => Err(ProviderError::Config("only the hash_embedding mock produces embeddings".into())),
        }
    }
}
