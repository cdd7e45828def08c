//! Small helpers over `u64` word slices used as dense bitsets.

#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub fn test(words: &[u64], i: usize) -> bool {
    (words[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub fn set(words: &mut [u64], i: usize) {
    words[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub fn clear(words: &mut [u64], i: usize) {
    words[i >> 6] &= !(1u64 << (i & 63));
}

#[inline]
pub fn count(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Mask with the low `n` bits set, laid out over `words_for(n)` words.
pub fn full(n: usize) -> Vec<u64> {
    let mut out = vec![u64::MAX; words_for(n)];
    if n % 64 != 0 {
        if let Some(last) = out.last_mut() {
            *last = (1u64 << (n % 64)) - 1;
        }
    }
    out
}

/// Iterator over the indices of set bits, ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

pub fn ones(words: &[u64]) -> Ones<'_> {
    Ones {
        words,
        idx: 0,
        cur: words.first().copied().unwrap_or(0),
    }
}
