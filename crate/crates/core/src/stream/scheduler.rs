//! Reports, at every time step, the handles that are active at that time.
//!
//! Handle `h` with phase `phi` over residue list `S` is active at time `i`
//! iff `(i + phi) mod p` is in `S`. Each handle sits in the bucket of its next
//! active time, together with a cursor into `S`; reporting a handle advances
//! the cursor to the next residue and moves the handle to the next bucket.

use std::collections::HashMap;

#[derive(Clone, Copy, Debug)]
struct Handle {
    list: u32,
    cursor: u32,
}

#[derive(Clone, Debug)]
pub struct Scheduler {
    p: u64,
    lists: Vec<Vec<u64>>,
    handles: Vec<Handle>,
    buckets: HashMap<u64, Vec<u32>>,
}

/// A handle reported at some time, with the index of its active residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Active {
    pub handle: u32,
    pub cursor: u32,
}

impl Scheduler {
    /// `lists` must be sorted subsets of `[p]`.
    pub fn new(p: u64, lists: Vec<Vec<u64>>) -> Self {
        debug_assert!(lists.iter().all(|l| l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|&r| r < p)));
        Scheduler {
            p,
            lists,
            handles: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    pub fn list(&self, id: usize) -> &[u64] {
        &self.lists[id]
    }

    /// Registers a handle whose first report is at or after `start`.
    pub fn add(&mut self, list: usize, phase: u64, start: u64) -> u32 {
        let id = self.handles.len() as u32;
        let residues = &self.lists[list];
        let mut h = Handle { list: list as u32, cursor: 0 };
        if !residues.is_empty() {
            let r = (start % self.p + phase % self.p) % self.p;
            let idx = residues.partition_point(|&b| b < r);
            let at = if idx < residues.len() {
                h.cursor = idx as u32;
                start + (residues[idx] - r)
            } else {
                start + (self.p - r) + residues[0]
            };
            self.buckets.entry(at).or_default().push(id);
        }
        self.handles.push(h);
        id
    }

    /// Appends the handles active at time `i` to `out` and reschedules them.
    ///
    /// Must be called for consecutive `i` without skipping a time at which a
    /// handle is due.
    pub fn advance(&mut self, i: u64, out: &mut Vec<Active>) {
        let Some(due) = self.buckets.remove(&i) else {
            return;
        };
        let p = self.p;
        for &id in &due {
            let h = &mut self.handles[id as usize];
            let residues = &self.lists[h.list as usize];
            out.push(Active { handle: id, cursor: h.cursor });
            let cur = h.cursor as usize;
            let next = if cur + 1 == residues.len() { 0 } else { cur + 1 };
            let gap = if residues.len() == 1 {
                p
            } else {
                (residues[next] + p - residues[cur]) % p
            };
            h.cursor = next as u32;
            self.buckets.entry(i + gap).or_default().push(id);
        }
    }

    pub fn num_handles(&self) -> usize {
        self.handles.len()
    }

    /// Words held: residue lists, handles, and bucket entries with keys.
    pub fn resident_words(&self) -> usize {
        let lists: usize = self.lists.iter().map(Vec::len).sum();
        let buckets: usize = self.buckets.values().map(|b| b.len().div_ceil(2) + 1).sum();
        lists + self.handles.len() + buckets
    }
}
