use std::collections::VecDeque;

use rand::seq::index;
use rand::Rng;

use super::RlError;

/// Fixed-capacity FIFO of transitions with uniform sampling without
/// replacement.
#[derive(Debug, Clone)]
pub struct ReplayBuffer<T> {
    capacity: usize,
    items: VecDeque<T>,
}

impl<T> ReplayBuffer<T> {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "replay capacity must be positive");
        Self { capacity, items: VecDeque::with_capacity(capacity.min(1 << 16)) }
    }

    /// Appends a transition, evicting the oldest one when full.
    pub fn push(&mut self, item: T) {
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(item);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_ready(&self, batch_size: usize) -> bool {
        self.items.len() >= batch_size
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.items.iter()
    }

    /// Samples `batch_size` distinct stored transitions.
    pub fn sample<R: Rng + ?Sized>(&self, batch_size: usize, rng: &mut R) -> Result<Vec<&T>, RlError> {
        if !self.is_ready(batch_size) {
            return Err(RlError::NotReady { size: self.items.len(), needed: batch_size });
        }
        Ok(index::sample(rng, self.items.len(), batch_size).into_iter().map(|i| &self.items[i]).collect())
    }
}
