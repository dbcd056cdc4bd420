//! Longest common extension queries over `T P` via a suffix array.

/// Suffix array by induced sorting. Symbols must be `< upper + 1`.
pub fn suffix_array(s: &[u32], upper: u32) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ => {}
    }
    if n < 16 {
        let mut sa: Vec<u32> = (0..n as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        return sa;
    }
    const NONE: u32 = u32::MAX;
    let upper = upper as usize;
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] { ls[i + 1] } else { s[i] < s[i + 1] };
    }
    let mut sum_l = vec![0usize; upper + 2];
    let mut sum_s = vec![0usize; upper + 2];
    for i in 0..n {
        if !ls[i] {
            sum_s[s[i] as usize] += 1;
        } else {
            sum_l[s[i] as usize + 1] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        if i < upper {
            sum_l[i + 1] += sum_s[i];
        }
    }

    let mut sa = vec![NONE; n];
    let mut buf = vec![0usize; upper + 2];
    let induce = |lms: &[u32], sa: &mut Vec<u32>, buf: &mut Vec<usize>| {
        sa.iter_mut().for_each(|x| *x = NONE);
        buf[..=upper].copy_from_slice(&sum_s[..=upper]);
        for &d in lms {
            let d = d as usize;
            if d == n {
                continue;
            }
            let c = s[d] as usize;
            sa[buf[c]] = d as u32;
            buf[c] += 1;
        }
        buf[..=upper].copy_from_slice(&sum_l[..=upper]);
        let c = s[n - 1] as usize;
        sa[buf[c]] = (n - 1) as u32;
        buf[c] += 1;
        for i in 0..n {
            let v = sa[i];
            if v != NONE && v >= 1 && !ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize;
                sa[buf[c]] = v - 1;
                buf[c] += 1;
            }
        }
        buf[..=upper].copy_from_slice(&sum_l[..=upper]);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != NONE && v >= 1 && ls[v as usize - 1] {
                let c = s[v as usize - 1] as usize + 1;
                buf[c] -= 1;
                sa[buf[c]] = v - 1;
            }
        }
    };

    let mut lms_map = vec![NONE; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();
    induce(&lms, &mut sa, &mut buf);

    if m > 0 {
        let sorted_lms: Vec<u32> = sa.iter().copied().filter(|&v| lms_map[v as usize] != NONE).collect();
        let mut rec = vec![0u32; m];
        let mut rec_upper = 0u32;
        rec[lms_map[sorted_lms[0] as usize] as usize] = 0;
        for i in 1..m {
            let (mut l, mut r) = (sorted_lms[i - 1] as usize, sorted_lms[i] as usize);
            let next = |x: usize| {
                let id = lms_map[x] as usize;
                if id + 1 < m {
                    lms[id + 1] as usize
                } else {
                    n
                }
            };
            let (end_l, end_r) = (next(l), next(r));
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec[lms_map[sorted_lms[i] as usize] as usize] = rec_upper;
        }
        let rec_sa = suffix_array(&rec, rec_upper);
        let order: Vec<u32> = rec_sa.iter().map(|&i| lms[i as usize]).collect();
        induce(&order, &mut sa, &mut buf);
    }
    sa
}

/// `lcp[r] = LCP(suffix sa[r], suffix sa[r + 1])`.
pub fn lcp_array(s: &[u32], sa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut rank = vec![0u32; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i as usize] = r as u32;
    }
    let mut lcp = vec![0u32; n.saturating_sub(1)];
    let mut h = 0usize;
    for i in 0..n {
        h = h.saturating_sub(1);
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r - 1] = h as u32;
    }
    lcp
}

const BLOCK: usize = 32;

/// Range minimum over a fixed array: sparse table on block minima plus scans.
#[derive(Clone, Debug)]
struct RangeMin {
    a: Vec<u32>,
    table: Vec<Vec<u32>>,
}

impl RangeMin {
    fn new(a: Vec<u32>) -> Self {
        let blocks: Vec<u32> = a.chunks(BLOCK).map(|c| *c.iter().min().unwrap()).collect();
        let mut table = vec![blocks];
        let mut w = 1;
        while 2 * w <= table[0].len() {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - w).map(|i| prev[i].min(prev[i + w])).collect();
            table.push(next);
            w *= 2;
        }
        RangeMin { a, table }
    }

    /// Minimum of `a[lo..hi]`, `lo < hi`.
    fn query(&self, lo: usize, hi: usize) -> u32 {
        let (bl, bh) = (lo.div_ceil(BLOCK), hi / BLOCK);
        if bl >= bh {
            return *self.a[lo..hi].iter().min().unwrap();
        }
        let mut best = u32::MAX;
        if lo < bl * BLOCK {
            best = *self.a[lo..bl * BLOCK].iter().min().unwrap();
        }
        if bh * BLOCK < hi {
            best = best.min(*self.a[bh * BLOCK..hi].iter().min().unwrap());
        }
        let len = bh - bl;
        let lvl = (usize::BITS - 1 - len.leading_zeros()) as usize;
        let t = &self.table[lvl];
        best.min(t[bl]).min(t[bh - (1 << lvl)])
    }
}

/// LCE queries between suffixes of `T` and `P`, built over `T · sep · P`.
#[derive(Clone, Debug)]
pub struct LceIndex {
    n: usize,
    m: usize,
    rank: Vec<u32>,
    rmq: RangeMin,
}

impl LceIndex {
    pub fn build(t: &[u8], p: &[u8]) -> Self {
        let (n, m) = (t.len(), p.len());
        // Symbols shifted by one so a unique separator 0 never matches.
        let s: Vec<u32> = t
            .iter()
            .map(|&c| c as u32 + 1)
            .chain(std::iter::once(0))
            .chain(p.iter().map(|&c| c as u32 + 1))
            .collect();
        let sa = suffix_array(&s, 256);
        let lcp = lcp_array(&s, &sa);
        let mut rank = vec![0u32; s.len()];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        LceIndex {
            n,
            m,
            rank,
            rmq: RangeMin::new(lcp),
        }
    }

    fn lce_raw(&self, a: usize, b: usize) -> usize {
        let total = self.rank.len();
        if a == b {
            return total - a;
        }
        let (ra, rb) = (self.rank[a] as usize, self.rank[b] as usize);
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.rmq.query(lo, hi) as usize
    }

    /// LCE of `T[i..]` and `P[j..]`.
    pub fn lce_tp(&self, i: usize, j: usize) -> usize {
        if i >= self.n || j >= self.m {
            return 0;
        }
        self.lce_raw(i, self.n + 1 + j).min(self.n - i).min(self.m - j)
    }

    /// LCE of `T[i..]` and `T[j..]`.
    pub fn lce_tt(&self, i: usize, j: usize) -> usize {
        if i >= self.n || j >= self.n {
            return 0;
        }
        self.lce_raw(i, j).min(self.n - i.max(j))
    }

    /// LCE of `P[i..]` and `P[j..]`.
    pub fn lce_pp(&self, i: usize, j: usize) -> usize {
        if i >= self.m || j >= self.m {
            return 0;
        }
        self.lce_raw(self.n + 1 + i, self.n + 1 + j).min(self.m - i.max(j))
    }

    pub fn text_len(&self) -> usize {
        self.n
    }

    pub fn pattern_len(&self) -> usize {
        self.m
    }
}

pub fn lce_build(t: &[u8], p: &[u8]) -> LceIndex {
    LceIndex::build(t, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kangaroo {
    Count(usize),
    ExceedsCap,
}

/// Mismatches between `P` and `T[i..i+m]` if fewer than `cap`, using at most
/// `cap` LCE jumps.
pub fn kangaroo_count(idx: &LceIndex, i: usize, cap: usize) -> Kangaroo {
    let m = idx.pattern_len();
    let mut j = 0;
    let mut d = 0;
    loop {
        j += idx.lce_tp(i + j, j);
        if j >= m {
            return Kangaroo::Count(d);
        }
        d += 1;
        if d >= cap {
            return Kangaroo::ExceedsCap;
        }
        j += 1;
        if j >= m {
            return Kangaroo::Count(d);
        }
    }
}
