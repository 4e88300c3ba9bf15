//! Partitions of `0..n` in canonical form, and a union-find to build them.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::bits;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partitions of different sets: {left} vs {right} elements")]
    SizeMismatch { left: usize, right: usize },
    #[error("class ids are not canonical at element {0}")]
    NotCanonical(usize),
    #[error("blocks do not partition 0..{n}: element {element} {problem}")]
    BadBlocks {
        n: usize,
        element: usize,
        problem: &'static str,
    },
}

/// A partition stored as `class[x]` = least element of the class of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    class: Vec<u8>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{}", self.format_blocks(None))
    }
}

impl Partition {
    /// `Δ`: all singletons.
    pub fn discrete(n: usize) -> Self {
        Partition {
            class: (0..n as u8).collect(),
        }
    }

    /// `∇`: a single class.
    pub fn indiscrete(n: usize) -> Self {
        Partition { class: vec![0; n] }
    }

    pub fn from_class_ids(class: Vec<u8>) -> Result<Self, PartitionError> {
        for (x, &c) in class.iter().enumerate() {
            let c = c as usize;
            if c > x || class[c] as usize != c {
                return Err(PartitionError::NotCanonical(x));
            }
        }
        Ok(Partition { class })
    }

    /// Builds a partition from blocks; every element must appear exactly once.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self, PartitionError> {
        let mut seen = 0u64;
        let mut uf = UnionFind::new(n);
        for b in blocks {
            let b = b.as_ref();
            for &x in b {
                if x >= n {
                    return Err(PartitionError::BadBlocks {
                        n,
                        element: x,
                        problem: "is out of range",
                    });
                }
                if bits::contains(seen, x) {
                    return Err(PartitionError::BadBlocks {
                        n,
                        element: x,
                        problem: "is repeated",
                    });
                }
                seen |= bits::bit(x);
                uf.union(b[0], x);
            }
        }
        if seen != bits::full(n) {
            let x = (!seen & bits::full(n)).trailing_zeros() as usize;
            return Err(PartitionError::BadBlocks {
                n,
                element: x,
                problem: "is missing",
            });
        }
        Ok(uf.into_partition())
    }

    /// From block bitmasks covering `0..n`.
    pub fn from_masks(n: usize, blocks: &[u64]) -> Self {
        let mut class = vec![0u8; n];
        for &b in blocks {
            let rep = b.trailing_zeros() as u8;
            for x in bits::iter(b) {
                class[x] = rep;
            }
        }
        Partition { class }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.class.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    /// Least element of the class of `x`.
    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class[x] as usize
    }

    pub fn class_ids(&self) -> &[u8] {
        &self.class
    }

    #[inline]
    pub fn same(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn num_classes(&self) -> usize {
        self.class
            .iter()
            .enumerate()
            .filter(|&(x, &c)| c as usize == x)
            .count()
    }

    pub fn is_discrete(&self) -> bool {
        self.class.iter().enumerate().all(|(x, &c)| c as usize == x)
    }

    pub fn is_indiscrete(&self) -> bool {
        self.class.iter().all(|&c| c == 0)
    }

    /// The class of `x` as a bitset.
    pub fn block_of(&self, x: usize) -> u64 {
        let c = self.class[x];
        self.class
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d == c)
            .fold(0, |m, (y, _)| m | bits::bit(y))
    }

    /// All classes as bitsets, ordered by least element.
    pub fn blocks(&self) -> Vec<u64> {
        let mut out: Vec<u64> = Vec::new();
        let mut slot = vec![usize::MAX; self.len()];
        for (x, &c) in self.class.iter().enumerate() {
            let c = c as usize;
            if c == x {
                slot[x] = out.len();
                out.push(0);
            }
            out[slot[c]] |= bits::bit(x);
        }
        out
    }

    /// `self ⊆ other` as equivalence relations.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len() && (0..self.len()).all(|x| other.same(x, self.class_of(x)))
    }

    /// Common refinement. Panics on a size mismatch; see [`partition_meet`].
    pub fn meet(&self, other: &Partition) -> Partition {
        partition_meet(self, other).expect("partition sizes differ")
    }

    /// Join in the equivalence lattice. Panics on a size mismatch; see
    /// [`partition_join_in_eq`].
    pub fn join(&self, other: &Partition) -> Partition {
        partition_join_in_eq(self, other).expect("partition sizes differ")
    }

    /// `{(f(a), f(b)) : a θ b}` for a permutation `f`.
    pub fn image(&self, f: &[usize]) -> Partition {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for x in 0..n {
            uf.union(f[x], f[self.class_of(x)]);
        }
        uf.into_partition()
    }

    /// `θ ∩ S²`, on the elements of `set` renumbered in increasing order.
    pub fn restrict(&self, set: u64) -> Partition {
        let elems: Vec<usize> = bits::iter(set).collect();
        let mut uf = UnionFind::new(elems.len());
        for i in 0..elems.len() {
            for j in 0..i {
                if self.same(elems[i], elems[j]) {
                    uf.union(i, j);
                }
            }
        }
        uf.into_partition()
    }

    /// Canonical family order: finer partitions first, then class ids.
    pub fn family_cmp(&self, other: &Partition) -> Ordering {
        other
            .num_classes()
            .cmp(&self.num_classes())
            .then_with(|| self.class.cmp(&other.class))
    }

    /// `[[0,a],[b],...]` with optional labels.
    pub fn format_blocks(&self, labels: Option<&[String]>) -> String {
        let blocks: Vec<String> = self
            .blocks()
            .into_iter()
            .map(|b| {
                let names: Vec<String> = bits::iter(b)
                    .map(|x| match labels {
                        Some(l) => l[x].clone(),
                        None => x.to_string(),
                    })
                    .collect();
                format!("[{}]", names.join(","))
            })
            .collect();
        format!("[{}]", blocks.join(","))
    }
}

pub fn partition_meet(p: &Partition, q: &Partition) -> Result<Partition, PartitionError> {
    if p.len() != q.len() {
        return Err(PartitionError::SizeMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let n = p.len();
    let mut class = vec![0u8; n];
    let mut first: std::collections::HashMap<(u8, u8), u8> = std::collections::HashMap::new();
    for x in 0..n {
        let key = (p.class[x], q.class[x]);
        class[x] = *first.entry(key).or_insert(x as u8);
    }
    Ok(Partition { class })
}

pub fn partition_join_in_eq(p: &Partition, q: &Partition) -> Result<Partition, PartitionError> {
    if p.len() != q.len() {
        return Err(PartitionError::SizeMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    let mut uf = UnionFind::new(p.len());
    for x in 0..p.len() {
        uf.union(x, p.class_of(x));
        uf.union(x, q.class_of(x));
    }
    Ok(uf.into_partition())
}

/// Union-find over `0..n` with path halving.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u8).collect(),
        }
    }

    pub fn from_partition(p: &Partition) -> Self {
        UnionFind {
            parent: p.class.clone(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    /// Merges the classes of `x` and `y`; false if already merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let a = self.find(x);
        let b = self.find(y);
        if a == b {
            return false;
        }
        // keep the smaller index as root
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo as u8;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let class = (0..n).map(|x| self.find(x) as u8).collect();
        Partition { class }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        let d = Partition::discrete(4);
        let t = Partition::indiscrete(4);
        let p = Partition::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        assert_eq!(p.meet(&d), d);
        assert_eq!(p.join(&t), t);
        assert!(d.refines(&p) && p.refines(&t) && !t.refines(&p));
        assert_eq!(p.num_classes(), 3);
        assert_eq!(p.blocks(), vec![0b0101, 0b0010, 0b1000]);
    }

    #[test]
    fn join_chains_through_shared_element() {
        let a = Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        let b = Partition::from_blocks(3, &[vec![1, 2], vec![0]]).unwrap();
        assert!(a.join(&b).is_indiscrete());
        assert!(a.meet(&b).is_discrete());
    }

    #[test]
    fn size_mismatch() {
        let a = Partition::discrete(3);
        let b = Partition::discrete(4);
        assert_eq!(
            partition_meet(&a, &b),
            Err(PartitionError::SizeMismatch { left: 3, right: 4 })
        );
        assert!(partition_join_in_eq(&a, &b).is_err());
    }

    #[test]
    fn blocks_validation() {
        assert!(Partition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_blocks(2, &[vec![0, 5]]).is_err());
        assert!(Partition::from_class_ids(vec![0, 0, 1]).is_err());
        assert!(Partition::from_class_ids(vec![0, 0, 2]).is_ok());
    }

    #[test]
    fn image_and_restrict() {
        let p = Partition::from_blocks(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let rev = [3, 2, 1, 0];
        let q = p.image(&rev);
        assert_eq!(
            q,
            Partition::from_blocks(4, &[vec![2, 3], vec![0], vec![1]]).unwrap()
        );
        assert_eq!(q.image(&rev), p);
        assert_eq!(
            p.restrict(0b1011),
            Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap()
        );
        assert_eq!(p.format_blocks(None), "[[0,1],[2],[3]]");
    }

    #[test]
    fn family_order_puts_discrete_first() {
        let d = Partition::discrete(3);
        let t = Partition::indiscrete(3);
        let p = Partition::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
        let mut v = vec![t.clone(), p.clone(), d.clone()];
        v.sort_by(|a, b| a.family_cmp(b));
        assert_eq!(v, vec![d, p, t]);
    }
}
