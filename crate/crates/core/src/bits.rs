//! Small helpers for `u64` element sets.

/// Iterates the indices of the set bits of `mask`, lowest first.
#[inline]
pub fn iter(mask: u64) -> BitIter {
    BitIter(mask)
}

#[derive(Clone, Copy, Debug)]
pub struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for BitIter {}

#[inline]
pub fn bit(i: usize) -> u64 {
    1u64 << i
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn contains(mask: u64, i: usize) -> bool {
    mask >> i & 1 == 1
}
