use std::collections::BTreeMap;

/// A finite-support function `Z -> Z` stored as sorted nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseFunc {
    entries: Vec<(i64, i64)>,
}

impl SparseFunc {
    pub fn zero() -> Self {
        SparseFunc::default()
    }

    /// Builds from arbitrary pairs; duplicate indices are summed and zeros dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut acc: BTreeMap<i64, i64> = BTreeMap::new();
        for (i, v) in pairs {
            *acc.entry(i).or_insert(0) += v;
        }
        SparseFunc {
            entries: acc.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    /// Builds from entries that are already strictly increasing in index.
    pub fn from_sorted(entries: Vec<(i64, i64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseFunc {
            entries: entries.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    /// `f(offset + j) = values[j]`.
    pub fn from_dense(offset: i64, values: &[i64]) -> Self {
        SparseFunc {
            entries: values
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(j, &v)| (offset + j as i64, v))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(i64, i64)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: i64) -> i64 {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.last().map(|e| e.0)
    }

    /// Dense values over `[lo, hi]`.
    pub fn to_dense(&self, lo: i64, hi: i64) -> Vec<i64> {
        let mut out = vec![0; (hi - lo + 1).max(0) as usize];
        for &(i, v) in &self.entries {
            if i >= lo && i <= hi {
                out[(i - lo) as usize] = v;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_input() {
        let f = SparseFunc::from_pairs([(3, 1), (-2, 5), (3, -1), (0, 2)]);
        assert_eq!(f.entries(), &[(-2, 5), (0, 2)]);
        assert_eq!(f.get(0), 2);
        assert_eq!(f.get(3), 0);
        assert_eq!(f.to_dense(-2, 1), vec![5, 0, 2, 0]);
        assert_eq!(SparseFunc::from_dense(-1, &[0, 4, 0]).entries(), &[(0, 4)]);
    }
}
