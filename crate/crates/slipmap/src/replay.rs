//! Bounded experience replay buffer with surprise-based priorities.
//!
//! Entries carry a non-negative priority (the sample's negative
//! log-likelihood under its class model, offset so the floor is zero). When
//! the buffer is full the lowest-priority entry is evicted first, oldest
//! first on ties, so surprising measurements outlive well-predicted ones.

use serde::{Deserialize, Serialize};

use crate::rover::SlipSample;
use crate::segment::ClassLabel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferEntry {
    pub sample: SlipSample,
    pub priority: f64,
    /// Monotone insertion counter used for oldest-first tie-breaking.
    pub seq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayBuffer {
    capacity: usize,
    entries: Vec<BufferEntry>,
    next_seq: u64,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            entries: Vec::new(),
            next_seq: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BufferEntry] {
        &self.entries
    }

    pub fn total_priority(&self) -> f64 {
        self.entries.iter().map(|e| e.priority).sum()
    }

    /// Insert one sample; evicts the lowest-priority entry (oldest first on
    /// ties) once the buffer is full. The incoming sample competes too, so a
    /// sufficiently unsurprising sample is dropped immediately.
    pub fn insert(&mut self, sample: SlipSample, priority: f64) {
        debug_assert!(priority.is_finite() && priority >= 0.0);
        self.entries.push(BufferEntry {
            sample,
            priority: priority.max(0.0),
            seq: self.next_seq,
        });
        self.next_seq += 1;
        if self.entries.len() > self.capacity {
            let victim = self
                .entries
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (a.priority, a.seq)
                        .partial_cmp(&(b.priority, b.seq))
                        .unwrap()
                })
                .map(|(i, _)| i)
                .expect("buffer non-empty");
            self.entries.remove(victim);
        }
    }

    pub fn samples_for_class(&self, class: &ClassLabel) -> Vec<&SlipSample> {
        self.entries
            .iter()
            .filter(|e| &e.sample.class_observed == class)
            .map(|e| &e.sample)
            .collect()
    }

    /// Recompute every entry's priority, e.g. after the class models change.
    pub fn reprioritize(&mut self, priority_of: impl Fn(&SlipSample) -> f64) {
        for entry in &mut self.entries {
            entry.priority = priority_of(&entry.sample).max(0.0);
        }
    }
}
