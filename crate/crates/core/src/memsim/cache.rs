use std::num::NonZeroUsize;

use lru::LruCache;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fully associative LRU cache for reads of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheConfig {
    pub line_bytes: usize,
    pub num_lines: usize,
}

impl Default for CacheConfig {
    fn default() -> Self {
        Self {
            line_bytes: 128,
            num_lines: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheReport {
    pub hits: u64,
    pub misses: u64,
}

impl CacheReport {
    pub fn accesses(&self) -> u64 {
        self.hits + self.misses
    }

    pub fn hit_rate(&self) -> f64 {
        if self.accesses() == 0 {
            0.0
        } else {
            self.hits as f64 / self.accesses() as f64
        }
    }
}

/// Replays reads of `x` (element indices, in issue order) through the cache.
pub fn simulate_texture_cache(
    trace: &[usize],
    config: &CacheConfig,
    element_bytes: usize,
) -> Result<CacheReport> {
    let capacity = NonZeroUsize::new(config.num_lines)
        .ok_or_else(|| Error::InvalidArgument("cache must hold at least one line".into()))?;
    if config.line_bytes == 0 || element_bytes == 0 {
        return Err(Error::InvalidArgument(
            "line and element sizes must be positive".into(),
        ));
    }
    let mut lines: LruCache<usize, ()> = LruCache::new(capacity);
    let mut report = CacheReport::default();
    for &i in trace {
        let line = i * element_bytes / config.line_bytes;
        if lines.get(&line).is_some() {
            report.hits += 1;
        } else {
            report.misses += 1;
            lines.put(line, ());
        }
    }
    Ok(report)
}
