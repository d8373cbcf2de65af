//! Policy retrieval: fetch, extract visible text, cache.

mod cache;
mod extract;
mod transport;

use std::fmt;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use url::Url;

pub use cache::{CacheError, PolicyCache};
pub use extract::{extract_text, ExtractError, LINK_RATIO_LIMIT};
pub use transport::{
    HttpTransport, RawResponse, RecordedResponse, ReplayError, ReplayTransport, RobotsRules, Transport, TransportError,
    DEFAULT_USER_AGENT, MAX_REDIRECTS,
};

use crate::corpus::Pseudonym;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum InaccessibleReason {
    NetworkError {
        detail: String,
    },
    HttpError {
        code: u16,
    },
    EmptyAfterExtraction {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    NoUrl,
    /// Offline run and nothing cached for the URL.
    NoCache,
    RobotsDisallowed,
}

impl fmt::Display for InaccessibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NetworkError { detail } => write!(f, "network error: {detail}"),
            Self::HttpError { code } => write!(f, "HTTP error {code}"),
            Self::EmptyAfterExtraction { note: None } => f.write_str("no text after extraction"),
            Self::EmptyAfterExtraction { note: Some(n) } => write!(f, "no text after extraction ({n})"),
            Self::NoUrl => f.write_str("no policy URL"),
            Self::NoCache => f.write_str("offline and not cached"),
            Self::RobotsDisallowed => f.write_str("disallowed by robots.txt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyStatus {
    Accessible,
    Inaccessible(InaccessibleReason),
}

impl PolicyStatus {
    pub fn is_accessible(&self) -> bool {
        matches!(self, PolicyStatus::Accessible)
    }
}

mod base64_bytes {
    use base64::engine::general_purpose::STANDARD;
    use base64::Engine;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&STANDARD.encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let text = String::deserialize(d)?;
        STANDARD.decode(text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyDocument {
    pub app: Pseudonym,
    /// Requested URL or file path.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content_type: Option<String>,
    #[serde(with = "base64_bytes")]
    pub raw: Vec<u8>,
    pub text: String,
    pub fetched_at: DateTime<Utc>,
    pub status: PolicyStatus,
}

impl PolicyDocument {
    pub fn inaccessible(
        app: Pseudonym,
        source: impl Into<String>,
        reason: InaccessibleReason,
        at: DateTime<Utc>,
    ) -> Self {
        Self {
            app,
            source: source.into(),
            final_url: None,
            content_type: None,
            raw: Vec::new(),
            text: String::new(),
            fetched_at: at,
            status: PolicyStatus::Inaccessible(reason),
        }
    }

    /// Accessible ⇔ non-empty text.
    pub fn is_consistent(&self) -> bool {
        self.status.is_accessible() != self.text.is_empty()
    }

    /// Build from a response body, extracting text.
    pub fn from_body(
        app: Pseudonym,
        source: impl Into<String>,
        final_url: Option<String>,
        content_type: Option<String>,
        raw: Vec<u8>,
        at: DateTime<Utc>,
    ) -> Self {
        let (text, status) = match extract_text(&raw, content_type.as_deref().unwrap_or("text/html")) {
            Ok(t) => (t, PolicyStatus::Accessible),
            Err(ExtractError::EmptyAfterExtraction { note }) => {
                (String::new(), PolicyStatus::Inaccessible(InaccessibleReason::EmptyAfterExtraction { note }))
            }
        };
        Self { app, source: source.into(), final_url, content_type, raw, text, fetched_at: at, status }
    }
}

#[derive(Debug, Clone)]
pub struct FetchOptions {
    pub timeout: Duration,
    pub retries: u32,
    /// First retry delay; doubles on each further attempt.
    pub backoff: Duration,
    pub user_agent: String,
    pub respect_robots: bool,
}

impl Default for FetchOptions {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(20),
            retries: 2,
            backoff: Duration::from_millis(500),
            user_agent: DEFAULT_USER_AGENT.to_string(),
            respect_robots: true,
        }
    }
}

fn robots_allow(url: &Url, transport: &dyn Transport, opts: &FetchOptions) -> bool {
    let Ok(robots_url) = url.join("/robots.txt") else { return true };
    match transport.get(&robots_url, opts.timeout) {
        Ok(r) if (200..300).contains(&r.status) => {
            RobotsRules::parse(&String::from_utf8_lossy(&r.body), &opts.user_agent).allows(url.path())
        }
        _ => true,
    }
}

/// GET with bounded retries. Network failures, timeouts and 5xx responses
/// are retried; 4xx is final.
pub fn fetch_policy(
    url: &str,
    transport: &dyn Transport,
    opts: &FetchOptions,
) -> Result<RawResponse, InaccessibleReason> {
    let parsed =
        Url::parse(url).map_err(|e| InaccessibleReason::NetworkError { detail: format!("invalid URL: {e}") })?;
    if !matches!(parsed.scheme(), "http" | "https") {
        return Err(InaccessibleReason::NetworkError { detail: format!("unsupported scheme {}", parsed.scheme()) });
    }
    if opts.respect_robots && !robots_allow(&parsed, transport, opts) {
        return Err(InaccessibleReason::RobotsDisallowed);
    }
    let mut delay = opts.backoff;
    let mut attempt = 0;
    loop {
        let outcome = match transport.get(&parsed, opts.timeout) {
            Ok(r) if (200..300).contains(&r.status) => return Ok(r),
            Ok(r) if (400..500).contains(&r.status) => return Err(InaccessibleReason::HttpError { code: r.status }),
            Ok(r) => InaccessibleReason::HttpError { code: r.status },
            Err(e) => InaccessibleReason::NetworkError { detail: e.to_string() },
        };
        if attempt >= opts.retries {
            return Err(outcome);
        }
        attempt += 1;
        if !delay.is_zero() {
            std::thread::sleep(delay);
        }
        delay *= 2;
    }
}

/// Fetch and extract one app's policy. Never fails: problems become an
/// inaccessible document.
pub fn fetch_document(
    app: Pseudonym,
    url: Option<&str>,
    transport: &dyn Transport,
    opts: &FetchOptions,
    at: DateTime<Utc>,
) -> PolicyDocument {
    let Some(url) = url else {
        return PolicyDocument::inaccessible(app, "", InaccessibleReason::NoUrl, at);
    };
    match fetch_policy(url, transport, opts) {
        Ok(resp) => PolicyDocument::from_body(app, url, Some(resp.final_url), resp.content_type, resp.body, at),
        Err(reason) => PolicyDocument::inaccessible(app, url, reason, at),
    }
}

/// Read a local policy file; `.txt` is treated as plain text, anything else
/// as HTML.
pub fn load_local(app: Pseudonym, path: &std::path::Path, at: DateTime<Utc>) -> PolicyDocument {
    let source = path.display().to_string();
    match std::fs::read(path) {
        Ok(raw) => {
            let ct = match path.extension().and_then(|e| e.to_str()) {
                Some("txt") => "text/plain",
                Some("pdf") => "application/pdf",
                _ => "text/html",
            };
            PolicyDocument::from_body(app, source, None, Some(ct.to_string()), raw, at)
        }
        Err(e) => {
            PolicyDocument::inaccessible(app, source, InaccessibleReason::NetworkError { detail: e.to_string() }, at)
        }
    }
}
