//! Client for a remote three-class classifier service.
//!
//! Wire contract: `POST {"texts": [...]}` answered by
//! `{"verdicts": [{"relevant": bool, "label": "bullish"|"bearish"|"neutral"}, ...]}`
//! with one verdict per text, in order.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::label::{ClassifierVerdict, RawLabel, VerdictSource};
use super::{Classifier, SignalError};

/// Environment variable holding a bearer token for the classifier service.
pub const TOKEN_ENV: &str = "SOCIALSIG_CLASSIFIER_TOKEN";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalConfig {
    pub endpoint: String,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    /// First backoff delay; doubles on every further retry.
    #[serde(default = "default_backoff_ms")]
    pub backoff_ms: u64,
}

fn default_batch_size() -> usize {
    32
}
fn default_timeout() -> f64 {
    30.0
}
fn default_retries() -> u32 {
    3
}
fn default_backoff_ms() -> u64 {
    500
}

impl ExternalConfig {
    pub fn new(endpoint: &str) -> Self {
        ExternalConfig {
            endpoint: endpoint.to_owned(),
            batch_size: default_batch_size(),
            timeout_secs: default_timeout(),
            retries: default_retries(),
            backoff_ms: default_backoff_ms(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRequest {
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WireVerdict {
    pub relevant: bool,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResponse {
    pub verdicts: Vec<WireVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportError {
    /// Worth retrying: timeouts, refused connections, 5xx, 429.
    Transient(String),
    /// The service answered but not per contract.
    Protocol(String),
}

pub trait Transport: Send + Sync {
    fn post(&self, request: &ClassifyRequest) -> Result<ClassifyResponse, TransportError>;
}

/// Blocking HTTP transport.
pub struct HttpTransport {
    agent: ureq::Agent,
    endpoint: String,
    token: Option<String>,
}

impl HttpTransport {
    pub fn new(config: &ExternalConfig) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs_f64(config.timeout_secs.max(0.001))))
            .http_status_as_error(false)
            .build()
            .into();
        HttpTransport {
            agent,
            endpoint: config.endpoint.clone(),
            token: std::env::var(TOKEN_ENV).ok().filter(|t| !t.is_empty()),
        }
    }
}

impl Transport for HttpTransport {
    fn post(&self, request: &ClassifyRequest) -> Result<ClassifyResponse, TransportError> {
        let mut req = self.agent.post(&self.endpoint);
        if let Some(token) = &self.token {
            req = req.header("Authorization", &format!("Bearer {token}"));
        }
        let mut resp = req.send_json(request).map_err(|e| TransportError::Transient(e.to_string()))?;
        let status = resp.status();
        if status.is_server_error() || status.as_u16() == 429 {
            return Err(TransportError::Transient(format!("HTTP {status}")));
        }
        if !status.is_success() {
            return Err(TransportError::Protocol(format!("HTTP {status}")));
        }
        resp.body_mut().read_json::<ClassifyResponse>().map_err(|e| TransportError::Protocol(e.to_string()))
    }
}

pub struct ExternalClassifier<T: Transport = HttpTransport> {
    config: ExternalConfig,
    transport: T,
}

impl ExternalClassifier<HttpTransport> {
    pub fn http(config: ExternalConfig) -> Result<Self, SignalError> {
        let transport = HttpTransport::new(&config);
        Self::with_transport(config, transport)
    }
}

impl<T: Transport> ExternalClassifier<T> {
    pub fn with_transport(config: ExternalConfig, transport: T) -> Result<Self, SignalError> {
        if config.batch_size == 0 {
            return Err(SignalError::Config("classifier batch_size must be at least 1".into()));
        }
        if !(config.timeout_secs.is_finite() && config.timeout_secs > 0.0) {
            return Err(SignalError::Config("classifier timeout_secs must be positive".into()));
        }
        Ok(ExternalClassifier { config, transport })
    }

    pub fn config(&self) -> &ExternalConfig {
        &self.config
    }

    fn map_response(n: usize, resp: ClassifyResponse) -> Result<Vec<ClassifierVerdict>, SignalError> {
        if resp.verdicts.len() != n {
            return Err(SignalError::Protocol {
                range: (0, n),
                detail: format!("length mismatch: sent {n} texts, got {} verdicts", resp.verdicts.len()),
            });
        }
        resp.verdicts
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                if !v.relevant {
                    return Ok(ClassifierVerdict::irrelevant(VerdictSource::External));
                }
                let raw = v
                    .label
                    .as_deref()
                    .ok_or_else(|| "relevant verdict without label".to_owned())
                    .and_then(str::parse::<RawLabel>)
                    .map_err(|detail| SignalError::Protocol { range: (i, i + 1), detail })?;
                Ok(ClassifierVerdict::relevant(raw, VerdictSource::External))
            })
            .collect()
    }
}

impl<T: Transport> Classifier for ExternalClassifier<T> {
    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<ClassifierVerdict>, SignalError> {
        let n = texts.len();
        if n > self.config.batch_size {
            return Err(SignalError::Config(format!(
                "batch of {n} exceeds configured maximum {}",
                self.config.batch_size
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let request = ClassifyRequest { texts: texts.iter().map(|s| (*s).to_owned()).collect() };
        let mut delay = Duration::from_millis(self.config.backoff_ms);
        let mut attempt = 0u32;
        loop {
            match self.transport.post(&request) {
                Ok(resp) => return Self::map_response(n, resp),
                Err(TransportError::Protocol(detail)) => {
                    return Err(SignalError::Protocol { range: (0, n), detail });
                }
                Err(TransportError::Transient(detail)) => {
                    if attempt >= self.config.retries {
                        return Err(SignalError::Unavailable { range: (0, n), retries: attempt, detail });
                    }
                    attempt += 1;
                    std::thread::sleep(delay);
                    delay = delay.saturating_mul(2);
                }
            }
        }
    }

    fn max_batch(&self) -> usize {
        self.config.batch_size
    }
}

/// Classifies one batch against the service at `config.endpoint`.
pub fn external_classify(texts: &[&str], config: &ExternalConfig) -> Result<Vec<ClassifierVerdict>, SignalError> {
    ExternalClassifier::http(config.clone())?.classify_batch(texts)
}
