//! Exact combinatorial kernels: induced subgraph isomorphism (decision and
//! counting), automorphism groups, canonical forms and maximum common induced
//! subgraph.
//!
//! Searches that can blow up take a [`SearchBudget`]. Running out of budget
//! produces a timeout outcome carrying node telemetry; it never produces a
//! wrong Yes/No.

use std::time::Duration;

use serde::{Deserialize, Serialize};

mod automorphism;
mod canon;
mod induced;
mod mcis;

pub use automorphism::{automorphism_count, is_asymmetric};
pub use canon::{canonical_form, CANONICAL_FORM_MAX_N};
pub use induced::{contains_induced, count_induced_subsets, count_embeddings};
pub use mcis::{mcis_size, mcis_with_witness, McisOutcome, McisWitness};

/// Limits on a single search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Search-tree node limit; `None` is unlimited.
    pub max_nodes: Option<u64>,
    /// CPU-time limit of the searching thread, in milliseconds.
    pub cpu_ms: Option<u64>,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget {
        max_nodes: None,
        cpu_ms: None,
    };

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            cpu_ms: None,
        }
    }

    pub fn millis(cpu_ms: u64) -> Self {
        SearchBudget {
            max_nodes: None,
            cpu_ms: Some(cpu_ms),
        }
    }
}

/// Result of a decision search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome3 {
    Yes,
    No,
    Timeout { nodes: u64 },
}

/// Result of a counting search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Count {
    Exact { value: u64, nodes: u64 },
    Timeout { nodes: u64 },
}

impl Count {
    pub fn value(&self) -> Option<u64> {
        match *self {
            Count::Exact { value, .. } => Some(value),
            Count::Timeout { .. } => None,
        }
    }
}

/// CPU time consumed so far by the calling thread.
#[cfg(unix)]
fn thread_cpu_time() -> Duration {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid out-pointer and the clock id is a constant.
    unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    Duration::new(ts.tv_sec as u64, ts.tv_nsec as u32)
}

#[cfg(not(unix))]
fn thread_cpu_time() -> Duration {
    static START: std::sync::OnceLock<std::time::Instant> = std::sync::OnceLock::new();
    START.get_or_init(std::time::Instant::now).elapsed()
}

/// Node counter with a lazily checked clock.
pub(crate) struct Meter {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Duration>,
    exhausted: bool,
}

impl Meter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget
                .cpu_ms
                .map(|ms| thread_cpu_time() + Duration::from_millis(ms)),
            exhausted: false,
        }
    }

    /// Records one search node; returns `false` once the budget is spent.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
            return false;
        }
        if self.nodes & 0x3ff == 0 {
            if let Some(d) = self.deadline {
                if thread_cpu_time() >= d {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }

    #[inline]
    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }

    #[inline]
    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }
}
