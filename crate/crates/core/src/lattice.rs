//! Finite lattices on the index set `0..n`.
//!
//! A [`FiniteLattice`] is built once from an order relation and then never
//! changes: the meet and join tables, the cover relation and the bounds are
//! all derived at construction time. Element sets are `u64` bitsets, which
//! caps the element count at [`MAX_ELEMENTS`].

use std::fmt;

use thiserror::Error;

use crate::bits;

/// Hard cap on the number of elements: one subset must fit in a machine word.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderAxiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
}

impl fmt::Display for OrderAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderAxiom::Reflexivity => "reflexivity",
            OrderAxiom::Antisymmetry => "antisymmetry",
            OrderAxiom::Transitivity => "transitivity",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Meet,
    Join,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("a lattice must have at least one element")]
    Empty,
    #[error("{0} elements exceeds the supported maximum of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("order matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("not a partial order: {axiom} fails at ({}, {}, {})", witness.0, witness.1, witness.2)]
    NotAPartialOrder {
        axiom: OrderAxiom,
        witness: (usize, usize, usize),
    },
    #[error("not a lattice: elements {} and {} have no {}", pair.0, pair.1, match bound { Bound::Meet => "meet", Bound::Join => "join" })]
    NotALattice { bound: Bound, pair: (usize, usize) },
    #[error("labels: expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
}

/// A prime interval `[lo, hi]` (so `lo ≺ hi`), flagged when it is a narrows:
/// `lo` meet-irreducible and `hi` join-irreducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
    pub is_narrows: bool,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteLattice {
    n: usize,
    up: Vec<u64>,
    down: Vec<u64>,
    meet: Vec<u8>,
    join: Vec<u8>,
    upper_covers: Vec<u64>,
    lower_covers: Vec<u64>,
    bottom: usize,
    top: usize,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("n", &self.n)
            .field("covers", &self.covers())
            .field("labels", &self.labels)
            .finish()
    }
}

impl FiniteLattice {
    /// Validates a square boolean order matrix (`matrix[x][y]` means `x ≤ y`).
    pub fn validate(matrix: &[Vec<bool>]) -> Result<Self, LatticeError> {
        let n = matrix.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut up = vec![0u64; n];
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(LatticeError::NotSquare {
                    row: x,
                    len: row.len(),
                    n,
                });
            }
            for (y, &le) in row.iter().enumerate() {
                if le {
                    up[x] |= bits::bit(y);
                }
            }
        }
        Self::from_up_sets(up)
    }

    /// Builds a lattice from the reflexive-transitive closure of `edges`
    /// (pairs `(x, y)` meaning `x ≤ y`).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, LatticeError> {
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        let mut up: Vec<u64> = (0..n).map(bits::bit).collect();
        for &(x, y) in edges {
            up[x] |= bits::bit(y);
        }
        transitive_closure(&mut up);
        Self::from_up_sets(up)
    }

    /// Builds a lattice from principal filters: bit `y` of `up[x]` means `x ≤ y`.
    pub fn from_up_sets(up: Vec<u64>) -> Result<Self, LatticeError> {
        let n = up.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge(n));
        }
        check_partial_order(&up)?;

        let mut down = vec![0u64; n];
        for x in 0..n {
            for y in bits::iter(up[x]) {
                down[y] |= bits::bit(x);
            }
        }

        let mut meet = vec![0u8; n * n];
        let mut join = vec![0u8; n * n];
        for x in 0..n {
            for y in x..n {
                let m =
                    greatest(&up, &down, down[x] & down[y]).ok_or(LatticeError::NotALattice {
                        bound: Bound::Meet,
                        pair: (x, y),
                    })?;
                let j = least(&up, &down, up[x] & up[y]).ok_or(LatticeError::NotALattice {
                    bound: Bound::Join,
                    pair: (x, y),
                })?;
                meet[x * n + y] = m as u8;
                meet[y * n + x] = m as u8;
                join[x * n + y] = j as u8;
                join[y * n + x] = j as u8;
            }
        }

        let mut upper_covers = vec![0u64; n];
        let mut lower_covers = vec![0u64; n];
        for x in 0..n {
            for y in bits::iter(up[x] & !bits::bit(x)) {
                if up[x] & down[y] == bits::bit(x) | bits::bit(y) {
                    upper_covers[x] |= bits::bit(y);
                    lower_covers[y] |= bits::bit(x);
                }
            }
        }

        let all = bits::full(n);
        let bottom = (0..n)
            .find(|&x| up[x] == all)
            .expect("finite lattice has a bottom");
        let top = (0..n)
            .find(|&x| down[x] == all)
            .expect("finite lattice has a top");

        Ok(FiniteLattice {
            n,
            up,
            down,
            meet,
            join,
            upper_covers,
            lower_covers,
            bottom,
            top,
            labels: None,
        })
    }

    pub fn with_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n {
            return Err(LatticeError::LabelCount {
                expected: self.n,
                got: labels.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: lattices are non-empty.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    #[inline]
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        bits::contains(self.up[x], y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    /// `[x)` as a bitset.
    #[inline]
    pub fn up_set(&self, x: usize) -> u64 {
        self.up[x]
    }

    /// `(x]` as a bitset.
    #[inline]
    pub fn down_set(&self, x: usize) -> u64 {
        self.down[x]
    }

    #[inline]
    pub fn upper_covers(&self, x: usize) -> u64 {
        self.upper_covers[x]
    }

    #[inline]
    pub fn lower_covers(&self, x: usize) -> u64 {
        self.lower_covers[x]
    }

    #[inline]
    pub fn covers_pair(&self, x: usize, y: usize) -> bool {
        bits::contains(self.upper_covers[x], y)
    }

    /// The interval `[x, y]` as a bitset (empty unless `x ≤ y`).
    pub fn interval(&self, x: usize, y: usize) -> u64 {
        self.up[x] & self.down[y]
    }

    pub fn up_sets(&self) -> &[u64] {
        &self.up
    }

    /// All pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| bits::iter(self.upper_covers[x]).map(move |y| (x, y)))
            .collect()
    }

    pub fn order_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|x| (0..self.n).map(|y| self.leq(x, y)).collect())
            .collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Labels for every element, falling back to indices.
    pub fn label_list(&self) -> Vec<String> {
        (0..self.n).map(|x| self.label(x)).collect()
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| self.down[x].count_ones());
        let mut h = vec![0usize; self.n];
        for &x in &order {
            h[x] = bits::iter(self.lower_covers[x])
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Meet-irreducible elements: at most one upper cover.
    pub fn meet_irreducibles(&self) -> u64 {
        (0..self.n)
            .filter(|&x| self.upper_covers[x].count_ones() <= 1)
            .fold(0, |m, x| m | bits::bit(x))
    }

    /// Join-irreducible elements: at most one lower cover.
    pub fn join_irreducibles(&self) -> u64 {
        (0..self.n)
            .filter(|&x| self.lower_covers[x].count_ones() <= 1)
            .fold(0, |m, x| m | bits::bit(x))
    }

    pub fn irreducibles(&self) -> (u64, u64) {
        (self.meet_irreducibles(), self.join_irreducibles())
    }

    /// Every prime interval, with its narrows flag.
    pub fn prime_intervals(&self) -> Vec<Interval> {
        let (mi, ji) = self.irreducibles();
        self.covers()
            .into_iter()
            .map(|(lo, hi)| Interval {
                lo,
                hi,
                is_narrows: bits::contains(mi, lo) && bits::contains(ji, hi),
            })
            .collect()
    }

    /// `Nrw(L)`.
    pub fn narrows(&self) -> Vec<Interval> {
        self.prime_intervals()
            .into_iter()
            .filter(|i| i.is_narrows)
            .collect()
    }

    /// The dual lattice on the same indices.
    pub fn dual(&self) -> FiniteLattice {
        let n = self.n;
        let mut meet = vec![0u8; n * n];
        let mut join = vec![0u8; n * n];
        meet.copy_from_slice(&self.join);
        join.copy_from_slice(&self.meet);
        FiniteLattice {
            n,
            up: self.down.clone(),
            down: self.up.clone(),
            meet,
            join,
            upper_covers: self.lower_covers.clone(),
            lower_covers: self.upper_covers.clone(),
            bottom: self.top,
            top: self.bottom,
            labels: self.labels.clone(),
        }
    }

    pub fn is_modular(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for z in bits::iter(self.up[x]) {
                for y in 0..n {
                    if self.join(x, self.meet(y, z)) != self.meet(self.join(x, y), z) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.meet(x, self.join(y, z)) != self.join(self.meet(x, y), self.meet(x, z))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|x| self.upper_covers[x].count_ones() <= 1)
    }

    /// Relabels elements: old element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> FiniteLattice {
        assert_eq!(perm.len(), self.n, "permutation length");
        let n = self.n;
        let map_set = |s: u64| bits::iter(s).fold(0u64, |m, x| m | bits::bit(perm[x]));
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        let mut uc = vec![0u64; n];
        let mut lc = vec![0u64; n];
        let mut meet = vec![0u8; n * n];
        let mut join = vec![0u8; n * n];
        for x in 0..n {
            up[perm[x]] = map_set(self.up[x]);
            down[perm[x]] = map_set(self.down[x]);
            uc[perm[x]] = map_set(self.upper_covers[x]);
            lc[perm[x]] = map_set(self.lower_covers[x]);
            for y in 0..n {
                meet[perm[x] * n + perm[y]] = perm[self.meet(x, y)] as u8;
                join[perm[x] * n + perm[y]] = perm[self.join(x, y)] as u8;
            }
        }
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); n];
            for x in 0..n {
                out[perm[x]] = l[x].clone();
            }
            out
        });
        FiniteLattice {
            n,
            up,
            down,
            meet,
            join,
            upper_covers: uc,
            lower_covers: lc,
            bottom: perm[self.bottom],
            top: perm[self.top],
            labels,
        }
    }

    /// The subposet on `elems` (listed in the order that defines the new
    /// indices). Fails if the subset is not a lattice under the induced order.
    pub fn induced(&self, elems: &[usize]) -> Result<FiniteLattice, LatticeError> {
        let up: Vec<u64> = elems
            .iter()
            .map(|&x| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|&(_, &y)| self.leq(x, y))
                    .fold(0u64, |m, (j, _)| m | bits::bit(j))
            })
            .collect();
        let lat = FiniteLattice::from_up_sets(up)?;
        match &self.labels {
            Some(l) => lat.with_labels(elems.iter().map(|&x| l[x].clone())),
            None => Ok(lat),
        }
    }

    /// Whether `set` is closed under meet and join.
    pub fn is_sublattice(&self, set: u64) -> bool {
        bits::iter(set).all(|x| {
            bits::iter(set).all(|y| {
                bits::contains(set, self.meet(x, y)) && bits::contains(set, self.join(x, y))
            })
        })
    }

    /// Whether `set` is convex: `x, z ∈ set` and `x ≤ y ≤ z` imply `y ∈ set`.
    pub fn is_convex(&self, set: u64) -> bool {
        bits::iter(set)
            .all(|x| bits::iter(set & self.up[x]).all(|z| self.interval(x, z) & !set == 0))
    }
}

fn transitive_closure(up: &mut [u64]) {
    let n = up.len();
    // Warshall on bit rows.
    for k in 0..n {
        for x in 0..n {
            if bits::contains(up[x], k) {
                up[x] |= up[k];
            }
        }
    }
}

fn check_partial_order(up: &[u64]) -> Result<(), LatticeError> {
    let n = up.len();
    for x in 0..n {
        if !bits::contains(up[x], x) {
            return Err(LatticeError::NotAPartialOrder {
                axiom: OrderAxiom::Reflexivity,
                witness: (x, x, x),
            });
        }
        if up[x] >> n != 0 {
            // Stray bits beyond n.
            let y = bits::iter(up[x] >> n).next().unwrap() + n;
            return Err(LatticeError::NotAPartialOrder {
                axiom: OrderAxiom::Reflexivity,
                witness: (x, y, y),
            });
        }
    }
    for x in 0..n {
        for y in bits::iter(up[x] & !bits::bit(x)) {
            if bits::contains(up[y], x) {
                return Err(LatticeError::NotAPartialOrder {
                    axiom: OrderAxiom::Antisymmetry,
                    witness: (x, y, x),
                });
            }
            let missing = up[y] & !up[x];
            if missing != 0 {
                let z = missing.trailing_zeros() as usize;
                return Err(LatticeError::NotAPartialOrder {
                    axiom: OrderAxiom::Transitivity,
                    witness: (x, y, z),
                });
            }
        }
    }
    Ok(())
}

/// Greatest element of `set`, if `set` has one.
fn greatest(up: &[u64], down: &[u64], set: u64) -> Option<usize> {
    bits::iter(set).find(|&g| down[g] & set == set && up[g] & set == bits::bit(g))
}

/// Least element of `set`, if `set` has one.
fn least(up: &[u64], down: &[u64], set: u64) -> Option<usize> {
    bits::iter(set).find(|&g| up[g] & set == set && down[g] & set == bits::bit(g))
}
