//! Multi-threaded driver for the exhaustive search.
//!
//! The first `d` digits are fixed, with `d` the smallest depth giving at
//! least one prefix per worker; workers pull prefixes from a shared counter
//! and the partial results are merged by `pseq_core::search::finish`, which
//! sorts. The output is therefore identical for every worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use pseq_core::search::{finish, prefixes, search_prefix, SearchError, SearchResult, SearchSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct SearchRun {
    pub result: SearchResult,
    pub elapsed: Duration,
}

fn prefix_depth(p: u32, period: usize, jobs: usize) -> usize {
    let mut depth = 0;
    let mut count = 1usize;
    while count < jobs && depth < period {
        count = count.saturating_mul(p as usize);
        depth += 1;
    }
    depth
}

pub fn search_parallel(spec: &SearchSpec, jobs: usize) -> Result<SearchRun, SearchError> {
    let start = Instant::now();
    spec.validate()?;
    let jobs = jobs.max(1);
    let work = prefixes(spec.p, prefix_depth(spec.p, spec.period, jobs));
    let next = AtomicUsize::new(0);
    let parts = Mutex::new(Vec::with_capacity(work.len()));
    let first_error = Mutex::new(None);

    thread::scope(|scope| {
        for _ in 0..jobs.min(work.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(prefix) = work.get(i) else { break };
                match search_prefix(spec, prefix) {
                    Ok(part) => parts.lock().unwrap().push(part),
                    Err(e) => {
                        first_error.lock().unwrap().get_or_insert(e);
                        break;
                    }
                }
            });
        }
    });

    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    let result = finish(spec, parts.into_inner().unwrap());
    Ok(SearchRun {
        result,
        elapsed: start.elapsed(),
    })
}

/// Header line of a search result stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHeader {
    pub p: u32,
    #[serde(rename = "N")]
    pub n: usize,
    pub count: usize,
    pub canonicalized: bool,
    pub enumerated: u64,
    pub pruned: u64,
    /// `None` when timing is suppressed for reproducible output.
    pub elapsed_ms: Option<u64>,
    pub reason: Option<String>,
}

impl SearchHeader {
    pub fn new(spec: &SearchSpec, run: &SearchRun, with_timing: bool) -> Self {
        SearchHeader {
            p: spec.p,
            n: spec.period,
            count: run.result.sequences.len(),
            canonicalized: spec.canonicalize,
            enumerated: run.result.enumerated,
            pruned: run.result.pruned,
            elapsed_ms: with_timing.then_some(run.elapsed.as_millis() as u64),
            reason: run.result.reason.map(|r| r.code().to_string()),
        }
    }
}
