//! Counters for runtime-checked guarantees.
//!
//! Every proven inequality the pipeline relies on is evaluated through an
//! [`Audit`]; a failure aborts the solve with [`Error::Assertion`] and the
//! per-label pass counts end up in the run report.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Audit {
    enabled: bool,
    counts: BTreeMap<&'static str, u64>,
}

impl Default for Audit {
    fn default() -> Self {
        Self::new(true)
    }
}

impl Audit {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            counts: BTreeMap::new(),
        }
    }

    /// Whether optional (expensive) checks should be evaluated at all.
    pub fn enabled(&self) -> bool {
        self.enabled
    }

    /// Records a passing check or fails with the lazily built detail.
    pub fn check(
        &mut self,
        label: &'static str,
        cond: bool,
        detail: impl FnOnce() -> String,
    ) -> Result<()> {
        if !cond {
            return Err(Error::assertion(label, detail()));
        }
        *self.counts.entry(label).or_insert(0) += 1;
        Ok(())
    }

    /// Like [`Audit::check`], but skips evaluation entirely when disabled.
    pub fn check_with(
        &mut self,
        label: &'static str,
        cond: impl FnOnce() -> bool,
        detail: impl FnOnce() -> String,
    ) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        self.check(label, cond(), detail)
    }

    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<&'static str, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn merge(&mut self, other: &Audit) {
        for (k, v) in &other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
    }
}
