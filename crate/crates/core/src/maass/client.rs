//! Thin HTTP client for a remote Maass-form catalog with an on-disk cache.
//!
//! `GET {base}/forms?t_min=..&t_max=..` must answer with catalog lines.
//! Responses are stored under `{cache}/{sha256(query)}.jsonl`; a cached
//! query never touches the network.

use super::{parse_records, LoadReport};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogQuery {
    pub t_min: f64,
    pub t_max: f64,
}

impl CatalogQuery {
    fn canonical(&self) -> String {
        format!("forms?t_min={:.12e}&t_max={:.12e}", self.t_min, self.t_max)
    }
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Clone, Debug)]
pub struct ClientConfig {
    pub base_url: String,
    pub cache_dir: PathBuf,
    pub offline: bool,
    /// Minimum spacing between requests.
    pub min_interval: Duration,
    pub max_attempts: u32,
    /// First retry delay; doubled after each failure.
    pub backoff: Duration,
    pub timeout: Duration,
}

impl ClientConfig {
    pub fn new(base_url: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        ClientConfig {
            base_url: base_url.into(),
            cache_dir: cache_dir.into(),
            offline: false,
            min_interval: Duration::from_secs(1),
            max_attempts: 4,
            backoff: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchReport {
    pub fetched: usize,
    pub cached: usize,
    pub attempts: u32,
}

pub struct CatalogClient {
    cfg: ClientConfig,
    agent: ureq::Agent,
    last_request: Mutex<Option<Instant>>,
    network_calls: AtomicUsize,
}

impl CatalogClient {
    pub fn new(cfg: ClientConfig) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(cfg.timeout).build();
        CatalogClient {
            cfg,
            agent,
            last_request: Mutex::new(None),
            network_calls: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &ClientConfig {
        &self.cfg
    }

    /// HTTP requests issued so far (including failed attempts).
    pub fn network_calls(&self) -> usize {
        self.network_calls.load(Ordering::SeqCst)
    }

    pub fn cache_path(&self, q: &CatalogQuery) -> PathBuf {
        self.cfg.cache_dir.join(format!("{}.jsonl", q.digest()))
    }

    /// Forms for a query, from cache when present.
    pub fn fetch(&self, q: &CatalogQuery) -> Result<(LoadReport, FetchReport)> {
        let path = self.cache_path(q);
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let rep = parse_records(&text);
            let n = rep.forms.len();
            return Ok((rep, FetchReport { fetched: 0, cached: n, attempts: 0 }));
        }
        if self.cfg.offline {
            return Err(Error::Fetch {
                attempts: 0,
                reason: format!("offline and {} is not cached", q.canonical()),
            });
        }
        let (body, attempts) = self.get_with_retry(q)?;
        let rep = parse_records(&body);
        std::fs::create_dir_all(&self.cfg.cache_dir)?;
        // write-then-rename so an interrupted run never leaves a partial cache entry
        let tmp = path.with_extension("part");
        std::fs::write(&tmp, &body)?;
        std::fs::rename(&tmp, &path)?;
        let n = rep.forms.len();
        Ok((rep, FetchReport { fetched: n, cached: 0, attempts }))
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = *last {
            let since = t.elapsed();
            if since < self.cfg.min_interval {
                std::thread::sleep(self.cfg.min_interval - since);
            }
        }
        *last = Some(Instant::now());
    }

    fn get_with_retry(&self, q: &CatalogQuery) -> Result<(String, u32)> {
        let url = format!("{}/{}", self.cfg.base_url.trim_end_matches('/'), q.canonical());
        let mut delay = self.cfg.backoff;
        let mut last_err = String::new();
        for attempt in 1..=self.cfg.max_attempts.max(1) {
            self.throttle();
            self.network_calls.fetch_add(1, Ordering::SeqCst);
            match self.agent.get(&url).call() {
                Ok(resp) => match resp.into_string() {
                    Ok(body) => return Ok((body, attempt)),
                    Err(e) => last_err = format!("reading body: {e}"),
                },
                // 4xx answers will not improve on retry
                Err(ureq::Error::Status(code, _)) if (400..500).contains(&code) && code != 429 => {
                    return Err(Error::Fetch {
                        attempts: attempt,
                        reason: format!("HTTP {code} for {url}"),
                    });
                }
                Err(e) => last_err = e.to_string(),
            }
            if attempt < self.cfg.max_attempts {
                std::thread::sleep(delay);
                delay *= 2;
            }
        }
        Err(Error::Fetch {
            attempts: self.cfg.max_attempts.max(1),
            reason: last_err,
        })
    }
}
