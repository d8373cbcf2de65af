//! Where response bodies come from: live HTTP or recorded fixtures.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use url::Url;

pub const DEFAULT_USER_AGENT: &str = "praf-audit/0.1 (privacy policy research crawler)";
pub const MAX_REDIRECTS: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawResponse {
    pub status: u16,
    pub final_url: String,
    pub content_type: Option<String>,
    pub body: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("timed out")]
    Timeout,
    #[error("{0}")]
    Network(String),
}

pub trait Transport: Send + Sync {
    fn get(&self, url: &Url, timeout: Duration) -> Result<RawResponse, TransportError>;
}

/// Live HTTP(S) with at most [`MAX_REDIRECTS`] redirects.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(user_agent: &str) -> Self {
        let agent = ureq::Agent::config_builder()
            .max_redirects(MAX_REDIRECTS)
            .http_status_as_error(false)
            .user_agent(user_agent)
            .build()
            .into();
        Self { agent }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new(DEFAULT_USER_AGENT)
    }
}

const BODY_LIMIT: u64 = 20 * 1024 * 1024;

impl Transport for HttpTransport {
    fn get(&self, url: &Url, timeout: Duration) -> Result<RawResponse, TransportError> {
        use ureq::ResponseExt;
        let mut resp = self.agent.get(url.as_str()).config().timeout_global(Some(timeout)).build().call().map_err(
            |e| match e {
                ureq::Error::Timeout(_) => TransportError::Timeout,
                other => TransportError::Network(other.to_string()),
            },
        )?;
        let status = resp.status().as_u16();
        let final_url = resp.get_uri().to_string();
        let content_type = resp.headers().get("content-type").and_then(|v| v.to_str().ok()).map(str::to_string);
        let body = resp.body_mut().with_config().limit(BODY_LIMIT).read_to_vec().map_err(|e| match e {
            ureq::Error::Timeout(_) => TransportError::Timeout,
            other => TransportError::Network(other.to_string()),
        })?;
        Ok(RawResponse { status, final_url, content_type, body })
    }
}

/// One recorded response. `file` is relative to the manifest directory and
/// may be omitted for bodiless responses.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordedResponse {
    pub status: u16,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_url: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("replay manifest not found: {0}")]
    MissingManifest(PathBuf),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid replay manifest: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Serves responses from a directory holding `manifest.json` (URL → recorded
/// response). Unknown URLs fail as network errors.
pub struct ReplayTransport {
    dir: PathBuf,
    responses: BTreeMap<String, RecordedResponse>,
}

impl ReplayTransport {
    pub const MANIFEST: &'static str = "manifest.json";

    pub fn open(dir: &Path) -> Result<Self, ReplayError> {
        let path = dir.join(Self::MANIFEST);
        if !path.is_file() {
            return Err(ReplayError::MissingManifest(path));
        }
        let text = std::fs::read_to_string(&path).map_err(|source| ReplayError::Io { path, source })?;
        Ok(Self { dir: dir.to_path_buf(), responses: serde_json::from_str(&text)? })
    }

    pub fn urls(&self) -> impl Iterator<Item = &str> {
        self.responses.keys().map(String::as_str)
    }
}

impl Transport for ReplayTransport {
    fn get(&self, url: &Url, _timeout: Duration) -> Result<RawResponse, TransportError> {
        let rec = self
            .responses
            .get(url.as_str())
            .ok_or_else(|| TransportError::Network(format!("no recorded response for {url}")))?;
        let body = match &rec.file {
            Some(f) => std::fs::read(self.dir.join(f))
                .map_err(|e| TransportError::Network(format!("recorded body {f}: {e}")))?,
            None => Vec::new(),
        };
        Ok(RawResponse {
            status: rec.status,
            final_url: rec.final_url.clone().unwrap_or_else(|| url.to_string()),
            content_type: rec.content_type.clone(),
            body,
        })
    }
}

/// Disallow/Allow rules from robots.txt that apply to one user agent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RobotsRules {
    allow: Vec<String>,
    disallow: Vec<String>,
}

impl RobotsRules {
    /// Uses the most specific group naming a token of `user_agent`, falling
    /// back to `*`.
    pub fn parse(body: &str, user_agent: &str) -> Self {
        let product = user_agent.split(['/', ' ']).next().unwrap_or("").to_ascii_lowercase();
        let mut groups: Vec<(Vec<String>, RobotsRules)> = Vec::new();
        let mut open_agents = false;
        for line in body.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            let Some((field, value)) = line.split_once(':') else { continue };
            let field = field.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            match field.as_str() {
                "user-agent" => {
                    if !open_agents {
                        groups.push((Vec::new(), RobotsRules::default()));
                        open_agents = true;
                    }
                    if let Some(g) = groups.last_mut() {
                        g.0.push(value.to_ascii_lowercase());
                    }
                }
                "allow" | "disallow" => {
                    open_agents = false;
                    let Some((_, rules)) = groups.last_mut() else { continue };
                    if value.is_empty() {
                        continue;
                    }
                    if field == "allow" {
                        rules.allow.push(value);
                    } else {
                        rules.disallow.push(value);
                    }
                }
                _ => open_agents = false,
            }
        }
        let named = groups.iter().find(|(agents, _)| {
            !product.is_empty() && agents.iter().any(|a| a != "*" && product.starts_with(a.as_str()))
        });
        let fallback = groups.iter().find(|(agents, _)| agents.iter().any(|a| a == "*"));
        named.or(fallback).map(|(_, r)| r.clone()).unwrap_or_default()
    }

    /// Longest matching rule wins; ties favour Allow.
    pub fn allows(&self, path: &str) -> bool {
        let longest = |rules: &[String]| rules.iter().filter(|r| path.starts_with(r.as_str())).map(String::len).max();
        match (longest(&self.allow), longest(&self.disallow)) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(d)) => a >= d,
        }
    }
}
