//! Canonical labeling of small posets, optionally carrying an involution.
//!
//! Elements are first split into cells by an isomorphism-invariant colour
//! (heights, depths, cover counts, then iterated neighbourhood refinement).
//! A backtracking search then places elements position by position, taking
//! each position from its cell, and keeps the labeling whose relation words
//! are lexicographically smallest. Interchangeable elements (twins whose
//! transposition is an automorphism) are only tried once per node.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::bits;
use crate::lattice::FiniteLattice;

/// A canonical form: equal iff the structures are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: u8,
    up: Vec<u64>,
    invol: Option<Vec<u8>>,
}

impl CanonicalForm {
    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Principal filters in canonical labeling.
    pub fn up_sets(&self) -> &[u64] {
        &self.up
    }

    pub fn involution(&self) -> Option<Vec<usize>> {
        self.invol
            .as_ref()
            .map(|v| v.iter().map(|&x| x as usize).collect())
    }

    /// Row-major order matrix bits, then the involution table if present.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len();
        let mut out = vec![self.n];
        let mut acc = 0u8;
        let mut filled = 0;
        for x in 0..n {
            for y in 0..n {
                acc = acc << 1 | bits::contains(self.up[x], y) as u8;
                filled += 1;
                if filled == 8 {
                    out.push(acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(acc << (8 - filled));
        }
        if let Some(inv) = &self.invol {
            out.extend_from_slice(inv);
        }
        out
    }

    /// Cover pairs in canonical labeling.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in bits::iter(self.up[x] & !bits::bit(x)) {
                if bits::iter(self.up[x] & !bits::bit(x) & !bits::bit(y))
                    .all(|z| !bits::contains(self.up[z], y))
                {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.to_bytes() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Result of canonicalization: `perm[x]` is the canonical index of `x`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub perm: Vec<usize>,
    pub form: CanonicalForm,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Word {
    below: u64,
    above: u64,
    inv: u8,
}

const UNPLACED: usize = usize::MAX;
const INV_LATER: u8 = u8::MAX;

struct Search<'a> {
    n: usize,
    up: &'a [u64],
    sup: Vec<u64>,
    sdown: Vec<u64>,
    invol: Option<&'a [usize]>,
    colour: Vec<usize>,
    cell_of_pos: Vec<usize>,
    placed: Vec<usize>,
    pos_of: Vec<usize>,
    words: Vec<Word>,
    best_words: Vec<Word>,
    best_placed: Vec<usize>,
    have_best: bool,
}

impl Search<'_> {
    fn word(&self, k: usize, c: usize) -> Word {
        let mut below = 0u64;
        let mut above = 0u64;
        for (j, &e) in self.placed[..k].iter().enumerate() {
            if bits::contains(self.sdown[c], e) {
                below |= bits::bit(j);
            }
            if bits::contains(self.sup[c], e) {
                above |= bits::bit(j);
            }
        }
        let inv = match self.invol {
            None => 0,
            Some(inv) => {
                let t = inv[c];
                if t == c {
                    k as u8
                } else if self.pos_of[t] != UNPLACED {
                    self.pos_of[t] as u8
                } else {
                    INV_LATER
                }
            }
        };
        Word { below, above, inv }
    }

    fn twins(&self, x: usize, y: usize) -> bool {
        if self.sup[x] != self.sup[y] || self.sdown[x] != self.sdown[y] {
            return false;
        }
        match self.invol {
            None => true,
            Some(inv) => inv[x] == y || (inv[x] == x && inv[y] == y),
        }
    }

    fn run(&mut self, k: usize) {
        let state = if self.have_best {
            self.words[..k].cmp(&self.best_words[..k])
        } else {
            Ordering::Less
        };
        if state == Ordering::Greater {
            return;
        }
        if k == self.n {
            if state == Ordering::Less {
                self.best_words.copy_from_slice(&self.words);
                self.best_placed.copy_from_slice(&self.placed);
                self.have_best = true;
            }
            return;
        }
        let cell = self.cell_of_pos[k];
        let candidates: Vec<usize> = (0..self.n)
            .filter(|&x| self.colour[x] == cell && self.pos_of[x] == UNPLACED)
            .collect();
        let mut tried: Vec<usize> = Vec::with_capacity(candidates.len());
        for &c in &candidates {
            if tried.iter().any(|&t| self.twins(t, c)) {
                continue;
            }
            tried.push(c);
            let w = self.word(k, c);
            if self.have_best && self.words[..k] == self.best_words[..k] && w > self.best_words[k] {
                continue;
            }
            self.placed[k] = c;
            self.pos_of[c] = k;
            self.words[k] = w;
            self.run(k + 1);
            self.pos_of[c] = UNPLACED;
            self.placed[k] = UNPLACED;
        }
    }
}

/// Canonically labels the poset given by principal filters `up`, with an
/// optional involution that the labeling must respect.
pub fn labeling(up: &[u64], invol: Option<&[usize]>) -> Labeling {
    let n = up.len();
    assert!(n <= crate::lattice::MAX_ELEMENTS);
    let mut down = vec![0u64; n];
    for x in 0..n {
        for y in bits::iter(up[x]) {
            down[y] |= bits::bit(x);
        }
    }
    let sup: Vec<u64> = (0..n).map(|x| up[x] & !bits::bit(x)).collect();
    let sdown: Vec<u64> = (0..n).map(|x| down[x] & !bits::bit(x)).collect();
    let ucov: Vec<u64> = (0..n)
        .map(|x| {
            bits::iter(sup[x])
                .filter(|&y| sup[x] & sdown[y] == 0)
                .fold(0u64, |m, y| m | bits::bit(y))
        })
        .collect();
    let mut lcov = vec![0u64; n];
    for x in 0..n {
        for y in bits::iter(ucov[x]) {
            lcov[y] |= bits::bit(x);
        }
    }

    let colour = refine_colours(n, &sup, &sdown, &ucov, &lcov, invol);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| colour[x]);
    let cell_of_pos: Vec<usize> = order.iter().map(|&x| colour[x]).collect();

    let dummy = Word {
        below: 0,
        above: 0,
        inv: 0,
    };
    let mut search = Search {
        n,
        up,
        sup,
        sdown,
        invol,
        colour,
        cell_of_pos,
        placed: vec![UNPLACED; n],
        pos_of: vec![UNPLACED; n],
        words: vec![dummy; n],
        best_words: vec![dummy; n],
        best_placed: vec![UNPLACED; n],
        have_best: false,
    };
    search.run(0);

    let mut perm = vec![0usize; n];
    for (pos, &x) in search.best_placed.iter().enumerate() {
        perm[x] = pos;
    }
    let mut cup = vec![0u64; n];
    for x in 0..n {
        cup[perm[x]] = bits::iter(search.up[x]).fold(0u64, |m, y| m | bits::bit(perm[y]));
    }
    let cinv = invol.map(|inv| {
        let mut out = vec![0u8; n];
        for x in 0..n {
            out[perm[x]] = perm[inv[x]] as u8;
        }
        out
    });
    Labeling {
        perm,
        form: CanonicalForm {
            n: n as u8,
            up: cup,
            invol: cinv,
        },
    }
}

fn refine_colours(
    n: usize,
    sup: &[u64],
    sdown: &[u64],
    ucov: &[u64],
    lcov: &[u64],
    invol: Option<&[usize]>,
) -> Vec<usize> {
    // height / depth by longest chains
    let mut by_down: Vec<usize> = (0..n).collect();
    by_down.sort_by_key(|&x| sdown[x].count_ones());
    let mut height = vec![0usize; n];
    for &x in &by_down {
        height[x] = bits::iter(lcov[x])
            .map(|y| height[y] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut depth = vec![0usize; n];
    for &x in by_down.iter().rev() {
        depth[x] = bits::iter(ucov[x]).map(|y| depth[y] + 1).max().unwrap_or(0);
    }

    let inv_relation = |x: usize| -> u8 {
        match invol {
            None => 0,
            Some(inv) => {
                let t = inv[x];
                if t == x {
                    1
                } else if bits::contains(sup[x], t) {
                    2
                } else if bits::contains(sdown[x], t) {
                    3
                } else {
                    4
                }
            }
        }
    };

    let initial: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            vec![
                height[x],
                depth[x],
                sdown[x].count_ones() as usize,
                sup[x].count_ones() as usize,
                lcov[x].count_ones() as usize,
                ucov[x].count_ones() as usize,
                inv_relation(x) as usize,
            ]
        })
        .collect();
    let mut colour = rank(&initial);
    let mut classes = count_distinct(&colour);
    loop {
        let sigs: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let mut s = vec![colour[x]];
                let mut u: Vec<usize> = bits::iter(ucov[x]).map(|y| colour[y]).collect();
                u.sort_unstable();
                let mut l: Vec<usize> = bits::iter(lcov[x]).map(|y| colour[y]).collect();
                l.sort_unstable();
                let mut above: Vec<usize> = bits::iter(sup[x]).map(|y| colour[y]).collect();
                above.sort_unstable();
                s.push(usize::MAX);
                s.extend(u);
                s.push(usize::MAX);
                s.extend(l);
                s.push(usize::MAX);
                s.extend(above);
                if let Some(inv) = invol {
                    s.push(usize::MAX);
                    s.push(colour[inv[x]]);
                }
                s
            })
            .collect();
        let next = rank(&sigs);
        let c = count_distinct(&next);
        colour = next;
        if c == classes {
            break;
        }
        classes = c;
    }
    colour
}

fn rank(sigs: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    let index: HashMap<&Vec<usize>, usize> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    sigs.iter().map(|s| index[s]).collect()
}

fn count_distinct(colour: &[usize]) -> usize {
    let mut c = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

pub fn canonical_labeling(l: &FiniteLattice) -> Labeling {
    labeling(l.up_sets(), None)
}

/// `canonical_form(L)`: equal for two lattices iff they are isomorphic.
pub fn canonical_form(l: &FiniteLattice) -> CanonicalForm {
    canonical_labeling(l).form
}

/// The lattice relabeled into canonical order.
pub fn canonicalize(l: &FiniteLattice) -> FiniteLattice {
    l.permuted(&canonical_labeling(l).perm)
}

/// An order isomorphism `f` (with `x ≤ y ⟺ f(x) ≤ f(y)`), if one exists.
pub fn is_isomorphic(l: &FiniteLattice, m: &FiniteLattice) -> Option<Vec<usize>> {
    if l.len() != m.len() {
        return None;
    }
    let a = canonical_labeling(l);
    let b = canonical_labeling(m);
    if a.form != b.form {
        return None;
    }
    let mut inv_b = vec![0usize; m.len()];
    for (x, &p) in b.perm.iter().enumerate() {
        inv_b[p] = x;
    }
    Some(a.perm.iter().map(|&p| inv_b[p]).collect())
}
