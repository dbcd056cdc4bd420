use std::collections::VecDeque;

use crate::fingerprint::{FingerprintFn, Rolling};

/// Fingerprint of the characters a stream received at times `>= start`.
///
/// Keeps only the stream's own sampled characters inside the window, packed
/// as `time << 8 | symbol`, so that they can be dropped from the front.
#[derive(Clone, Debug)]
pub(crate) struct SampledWindow {
    roll: Rolling,
    ring: VecDeque<u64>,
}

impl SampledWindow {
    pub fn new() -> Self {
        SampledWindow {
            roll: Rolling::empty(),
            ring: VecDeque::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, f: &FingerprintFn, time: u64, sym: u8) {
        self.roll.push(f, sym);
        self.ring.push_back(time << 8 | sym as u64);
    }

    /// Drops every character that arrived before `start`.
    #[inline]
    pub fn expire(&mut self, f: &FingerprintFn, inv_x: u64, start: u64) {
        while let Some(&e) = self.ring.front() {
            if e >> 8 >= start {
                break;
            }
            self.roll.pop_front(f, inv_x, e as u8);
            self.ring.pop_front();
        }
    }

    #[inline]
    pub fn fp(&self) -> u64 {
        self.roll.fp
    }

    /// Fingerprint state plus one word per buffered character.
    pub fn resident_words(&self) -> usize {
        2 + self.ring.len()
    }
}
