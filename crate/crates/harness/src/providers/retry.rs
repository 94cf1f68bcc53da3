use std::thread;
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProviderError;

/// Backoff timing shared by all providers of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryTiming {
    pub base_delay_ms: u64,
    pub factor: f64,
    /// Relative jitter; 0.2 spreads each delay over ±20%.
    pub jitter: f64,
}

impl Default for RetryTiming {
    fn default() -> Self {
        Self { base_delay_ms: 1000, factor: 2.0, jitter: 0.2 }
    }
}

/// Exponential backoff with jitter. Only retryable errors are retried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub timing: RetryTiming,
}

impl RetryPolicy {
    pub fn new(max_retries: u32, timing: RetryTiming) -> Self {
        Self { max_retries, timing }
    }

    /// No sleeping between attempts.
    pub fn immediate(max_retries: u32) -> Self {
        Self::new(max_retries, RetryTiming { base_delay_ms: 0, factor: 1.0, jitter: 0.0 })
    }

    /// Nominal delay before retry number `retry` (0-based), without jitter.
    pub fn nominal_delay(&self, retry: u32) -> Duration {
        let ms = self.timing.base_delay_ms as f64 * self.timing.factor.powi(retry as i32);
        Duration::from_secs_f64(ms.max(0.0) / 1000.0)
    }

    fn jittered_delay(&self, retry: u32) -> Duration {
        let nominal = self.nominal_delay(retry);
        if nominal.is_zero() || self.timing.jitter <= 0.0 {
            return nominal;
        }
        let spread = rand::thread_rng().gen_range(-self.timing.jitter..=self.timing.jitter);
        nominal.mul_f64((1.0 + spread).max(0.0))
    }

    /// Runs `op` until it succeeds, fails with a non-retryable error, or has
    /// failed `max_retries + 1` times.
    pub fn run<T>(&self, mut op: impl FnMut() -> Result<T, ProviderError>) -> Result<T, ProviderError> {
        let mut retry = 0;
        loop {
            match op() {
                Ok(value) => return Ok(value),
                Err(err) if err.is_retryable() && retry < self.max_retries => {
                    thread::sleep(self.jittered_delay(retry));
                    retry += 1;
                }
                Err(err) => return Err(err),
            }
        }
    }
}
