//! Bit vectors packed into 64-bit words.

/// A fixed-length bit vector. Bits past `len` are always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PackedSignature {
    words: Vec<u64>,
    len: usize,
}

impl PackedSignature {
    pub fn zeros(len: usize) -> Self {
        PackedSignature {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_words(words: Vec<u64>, len: usize) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut s = PackedSignature { words, len };
        s.clear_padding();
        s
    }

    fn clear_padding(&mut self) {
        if self.len % 64 != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << (self.len % 64)) - 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        if bit {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &PackedSignature) {
        assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn hamming(&self, other: &PackedSignature) -> u32 {
        assert_eq!(self.len, other.len);
        xor_popcount(&self.words, &other.words)
    }
}

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn xor_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Row-major matrix of equal-length packed bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRows {
    words: Vec<u64>,
    stride: usize,
    rows: usize,
    bits: usize,
}

impl BitRows {
    pub fn zeros(rows: usize, bits: usize) -> Self {
        let stride = words_for(bits);
        BitRows {
            words: vec![0; rows * stride],
            stride,
            rows,
            bits,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn set(&mut self, r: usize, bit: usize) {
        self.words[r * self.stride + bit / 64] |= 1 << (bit % 64);
    }

    #[inline]
    pub fn get(&self, r: usize, bit: usize) -> bool {
        self.words[r * self.stride + bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn signature(&self, r: usize) -> PackedSignature {
        PackedSignature::from_words(self.row(r).to_vec(), self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_stays_clear() {
        let s = PackedSignature::from_words(vec![u64::MAX, u64::MAX], 70);
        assert_eq!(s.count_ones(), 70);
        let mut z = PackedSignature::zeros(70);
        z.set(69, true);
        z.flip(3);
        assert!(z.get(69) && z.get(3) && !z.get(4));
        assert_eq!(z.hamming(&s), 68);
    }
}
