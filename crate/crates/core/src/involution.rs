//! Lattices with involution, Brouwer complements and class predicates.

use std::fmt;

use thiserror::Error;

use crate::bits;
use crate::canon::{self, CanonicalForm};
use crate::lattice::{FiniteLattice, LatticeError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("involution has {got} entries, lattice has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },
    #[error("not an involution at element {0}")]
    NotInvolutive(usize),
    #[error("not antitone: {0} ≤ {1} but {1}' ≰ {0}'")]
    NotAntitone(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The Brouwer complement axioms, plus the antiortholattice condition
/// checked when the trivial complement is requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrouwerAxiom {
    /// `a ∧ a∼ = 0`
    Disjoint,
    /// `a ≤ a∼∼`
    Expansive,
    /// `a∼′ = a∼∼`
    Compatible,
    /// `a ≤ b` implies `b∼ ≤ a∼`
    Antitone,
    /// `a ∧ a′ = 0` only for `a ∈ {0, 1}`
    Antiortho,
}

impl fmt::Display for BrouwerAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BrouwerAxiom::Disjoint => "a ∧ a∼ = 0",
            BrouwerAxiom::Expansive => "a ≤ a∼∼",
            BrouwerAxiom::Compatible => "a∼′ = a∼∼",
            BrouwerAxiom::Antitone => "a ≤ b ⇒ b∼ ≤ a∼",
            BrouwerAxiom::Antiortho => "a ∧ a′ = 0 ⇒ a ∈ {0,1}",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BrouwerError {
    #[error("not a pseudo-Kleene algebra: {0} ∧ {0}' ≰ {1} ∨ {1}'")]
    NotPseudoKleene(usize, usize),
    #[error("Brouwer complement has {got} entries, lattice has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Brouwer axiom {axiom} fails at ({}, {})", witness.0, witness.1)]
    BrouwerAxiomFails {
        axiom: BrouwerAxiom,
        witness: (usize, usize),
    },
}

/// A lattice with an involution `x ↦ x′`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvolutionLattice {
    lattice: FiniteLattice,
    inv: Vec<usize>,
}

/// Membership in the negative, fixed and positive cones; elements
/// incomparable to their involute land in `incomparable`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Cones {
    pub n: u64,
    pub z: u64,
    pub p: u64,
    pub incomparable: u64,
}

impl Cones {
    pub fn nz(&self) -> u64 {
        self.n | self.z
    }

    pub fn pz(&self) -> u64 {
        self.p | self.z
    }
}

/// Class membership of an i-lattice or BZ-lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Flags {
    pub i_lattice: bool,
    pub bounded: bool,
    pub pseudo_kleene: bool,
    pub de_morgan: bool,
    pub kleene: bool,
    pub paraorthomodular: bool,
    pub bz: bool,
    pub antiortholattice: bool,
    pub orthomodular: bool,
}

impl Flags {
    pub fn names(&self) -> Vec<&'static str> {
        [
            (self.i_lattice, "i-lattice"),
            (self.bounded, "bounded-i"),
            (self.pseudo_kleene, "pseudo-Kleene"),
            (self.de_morgan, "De Morgan"),
            (self.kleene, "Kleene"),
            (self.paraorthomodular, "paraorthomodular"),
            (self.bz, "BZ"),
            (self.antiortholattice, "antiortholattice"),
            (self.orthomodular, "orthomodular"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join(", "))
    }
}

impl InvolutionLattice {
    /// Validates `inv` as an involution of `lattice`.
    pub fn attach(lattice: FiniteLattice, inv: Vec<usize>) -> Result<Self, InvolutionError> {
        let n = lattice.len();
        if inv.len() != n {
            return Err(InvolutionError::LengthMismatch {
                expected: n,
                got: inv.len(),
            });
        }
        for x in 0..n {
            if inv[x] >= n || inv[inv[x]] != x {
                return Err(InvolutionError::NotInvolutive(x));
            }
        }
        for x in 0..n {
            for y in bits::iter(lattice.up_set(x)) {
                if !lattice.leq(inv[y], inv[x]) {
                    return Err(InvolutionError::NotAntitone(x, y));
                }
            }
        }
        Ok(InvolutionLattice { lattice, inv })
    }

    pub(crate) fn from_parts_unchecked(lattice: FiniteLattice, inv: Vec<usize>) -> Self {
        debug_assert!(Self::attach(lattice.clone(), inv.clone()).is_ok());
        InvolutionLattice { lattice, inv }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn involution(&self) -> &[usize] {
        &self.inv
    }

    /// `M′` for an element set.
    pub fn inv_set(&self, set: u64) -> u64 {
        bits::iter(set).fold(0, |m, x| m | bits::bit(self.inv[x]))
    }

    pub fn with_labels<S: Into<String>>(
        self,
        labels: impl IntoIterator<Item = S>,
    ) -> Result<Self, LatticeError> {
        Ok(InvolutionLattice {
            lattice: self.lattice.with_labels(labels)?,
            inv: self.inv,
        })
    }

    /// `K(L)`: `a ∧ a′ ≤ b ∨ b′` for all `a, b`; returns the first failing pair.
    pub fn pseudo_kleene_witness(&self) -> Option<(usize, usize)> {
        let l = &self.lattice;
        let n = l.len();
        for a in 0..n {
            let lo = l.meet(a, self.inv[a]);
            for b in 0..n {
                if !l.leq(lo, l.join(b, self.inv[b])) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_pseudo_kleene(&self) -> bool {
        self.pseudo_kleene_witness().is_none()
    }

    /// `a ≤ b` and `a′ ∧ b = 0` imply `a = b`.
    pub fn is_paraorthomodular(&self) -> bool {
        let l = &self.lattice;
        (0..l.len()).all(|a| {
            bits::iter(l.up_set(a) & !bits::bit(a)).all(|b| l.meet(self.inv[a], b) != l.bottom())
        })
    }

    /// Elements `a` with `a ∧ a′ = 0`.
    pub fn disjoint_from_involute(&self) -> u64 {
        let l = &self.lattice;
        (0..l.len())
            .filter(|&a| l.meet(a, self.inv[a]) == l.bottom())
            .fold(0, |m, a| m | bits::bit(a))
    }

    fn antiortho_witness(&self) -> Option<usize> {
        let l = &self.lattice;
        let bounds = bits::bit(l.bottom()) | bits::bit(l.top());
        bits::iter(self.disjoint_from_involute() & !bounds).next()
    }

    /// Pseudo-Kleene with `a ∧ a′ = 0` only at the bounds.
    pub fn admits_trivial_brouwer(&self) -> bool {
        self.is_pseudo_kleene() && self.antiortho_witness().is_none()
    }

    pub fn cones(&self) -> Cones {
        let l = &self.lattice;
        let mut c = Cones::default();
        for x in 0..l.len() {
            let y = self.inv[x];
            let b = bits::bit(x);
            if x == y {
                c.z |= b;
            } else if l.leq(x, y) {
                c.n |= b;
            } else if l.leq(y, x) {
                c.p |= b;
            } else {
                c.incomparable |= b;
            }
        }
        c
    }

    pub fn classify(&self) -> Flags {
        let distributive = self.lattice.is_distributive();
        let pk = self.is_pseudo_kleene();
        let orthomodular =
            self.is_paraorthomodular() && pk && check_brouwer(self, &self.inv).is_ok();
        Flags {
            i_lattice: true,
            bounded: true,
            pseudo_kleene: pk,
            de_morgan: distributive,
            kleene: distributive && pk,
            paraorthomodular: self.is_paraorthomodular(),
            bz: false,
            antiortholattice: pk && self.antiortho_witness().is_none(),
            orthomodular,
        }
    }

    /// Relabels: old element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> InvolutionLattice {
        let mut inv = vec![0usize; self.len()];
        for x in 0..self.len() {
            inv[perm[x]] = perm[self.inv[x]];
        }
        InvolutionLattice {
            lattice: self.lattice.permuted(perm),
            inv,
        }
    }

    /// Canonical form of the lattice together with its involution.
    pub fn canonical_labeling(&self) -> canon::Labeling {
        canon::labeling(self.lattice.up_sets(), Some(&self.inv))
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_labeling().form
    }

    pub fn canonicalize(&self) -> InvolutionLattice {
        self.permuted(&self.canonical_labeling().perm)
    }

    /// An isomorphism commuting with the involutions, if one exists.
    pub fn is_isomorphic(&self, other: &InvolutionLattice) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let a = self.canonical_labeling();
        let b = other.canonical_labeling();
        if a.form != b.form {
            return None;
        }
        let mut back = vec![0usize; other.len()];
        for (x, &p) in b.perm.iter().enumerate() {
            back[p] = x;
        }
        Some(a.perm.iter().map(|&p| back[p]).collect())
    }

    /// Whether `set` is closed under `∨`, `∧` and `′`.
    pub fn is_i_sublattice(&self, set: u64) -> bool {
        set != 0 && self.inv_set(set) == set && self.lattice.is_sublattice(set)
    }

    /// The i-sublattice on `set`, indices in increasing order.
    pub fn restrict(&self, set: u64) -> Option<InvolutionLattice> {
        if !self.is_i_sublattice(set) {
            return None;
        }
        let elems: Vec<usize> = bits::iter(set).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let sub = self.lattice.induced(&elems).ok()?;
        let inv = elems.iter().map(|&x| pos[self.inv[x]]).collect();
        Some(InvolutionLattice { lattice: sub, inv })
    }
}

/// An i-lattice carrying a Brouwer complement `x ↦ x∼`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BzLattice {
    base: InvolutionLattice,
    brouwer: Vec<usize>,
}

fn check_brouwer(base: &InvolutionLattice, br: &[usize]) -> Result<(), BrouwerError> {
    let l = base.lattice();
    let n = l.len();
    if br.len() != n {
        return Err(BrouwerError::LengthMismatch {
            expected: n,
            got: br.len(),
        });
    }
    let fail = |axiom, a, b| {
        Err(BrouwerError::BrouwerAxiomFails {
            axiom,
            witness: (a, b),
        })
    };
    for a in 0..n {
        if br[a] >= n {
            return fail(BrouwerAxiom::Disjoint, a, a);
        }
    }
    for a in 0..n {
        if l.meet(a, br[a]) != l.bottom() {
            return fail(BrouwerAxiom::Disjoint, a, a);
        }
        if !l.leq(a, br[br[a]]) {
            return fail(BrouwerAxiom::Expansive, a, a);
        }
        if base.inv(br[a]) != br[br[a]] {
            return fail(BrouwerAxiom::Compatible, a, a);
        }
        for b in bits::iter(l.up_set(a)) {
            if !l.leq(br[b], br[a]) {
                return fail(BrouwerAxiom::Antitone, a, b);
            }
        }
    }
    Ok(())
}

impl BzLattice {
    /// Validates a Brouwer complement on a pseudo-Kleene algebra.
    pub fn attach(base: InvolutionLattice, brouwer: Vec<usize>) -> Result<Self, BrouwerError> {
        if let Some((a, b)) = base.pseudo_kleene_witness() {
            return Err(BrouwerError::NotPseudoKleene(a, b));
        }
        check_brouwer(&base, &brouwer)?;
        Ok(BzLattice { base, brouwer })
    }

    /// `0∼ = 1` and `a∼ = 0` otherwise; requires an antiortholattice.
    pub fn trivial(base: InvolutionLattice) -> Result<Self, BrouwerError> {
        if let Some((a, b)) = base.pseudo_kleene_witness() {
            return Err(BrouwerError::NotPseudoKleene(a, b));
        }
        if let Some(a) = base.antiortho_witness() {
            return Err(BrouwerError::BrouwerAxiomFails {
                axiom: BrouwerAxiom::Antiortho,
                witness: (a, base.inv(a)),
            });
        }
        let brouwer = trivial_brouwer_map(base.lattice());
        check_brouwer(&base, &brouwer)?;
        Ok(BzLattice { base, brouwer })
    }

    pub fn base(&self) -> &InvolutionLattice {
        &self.base
    }

    pub fn lattice(&self) -> &FiniteLattice {
        self.base.lattice()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.base.inv(x)
    }

    #[inline]
    pub fn brouwer(&self, x: usize) -> usize {
        self.brouwer[x]
    }

    pub fn brouwer_map(&self) -> &[usize] {
        &self.brouwer
    }

    pub fn has_trivial_brouwer(&self) -> bool {
        self.brouwer == trivial_brouwer_map(self.lattice())
    }

    pub fn classify(&self) -> Flags {
        let mut f = self.base.classify();
        f.bz = true;
        f.antiortholattice = f.antiortholattice && self.has_trivial_brouwer();
        f.orthomodular = f.paraorthomodular && self.brouwer == self.base.inv;
        f
    }

    pub fn permuted(&self, perm: &[usize]) -> BzLattice {
        let mut br = vec![0usize; self.len()];
        for x in 0..self.len() {
            br[perm[x]] = perm[self.brouwer[x]];
        }
        BzLattice {
            base: self.base.permuted(perm),
            brouwer: br,
        }
    }
}

fn trivial_brouwer_map(l: &FiniteLattice) -> Vec<usize> {
    (0..l.len())
        .map(|a| if a == l.bottom() { l.top() } else { l.bottom() })
        .collect()
}

/// Every Brouwer complement the i-lattice admits (empty unless it is
/// pseudo-Kleene).
pub fn brouwer_complements(base: &InvolutionLattice) -> Vec<Vec<usize>> {
    if !base.is_pseudo_kleene() {
        return Vec::new();
    }
    let l = base.lattice();
    let n = l.len();
    let options: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&c| l.meet(a, c) == l.bottom()).collect())
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    // by increasing down-set size
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (l.down_set(x).count_ones(), x));
    fn go(
        k: usize,
        order: &[usize],
        options: &[Vec<usize>],
        l: &FiniteLattice,
        base: &InvolutionLattice,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == order.len() {
            if check_brouwer(base, cur).is_ok() {
                out.push(cur.clone());
            }
            return;
        }
        let a = order[k];
        for &c in &options[a] {
            let ok = order[..k]
                .iter()
                .all(|&b| (!l.leq(b, a) || l.leq(c, cur[b])) && (!l.leq(a, b) || l.leq(cur[b], c)));
            if ok {
                cur[a] = c;
                go(k + 1, order, options, l, base, cur, out);
            }
        }
    }
    go(0, &order, &options, l, base, &mut cur, &mut out);
    out.sort();
    out
}

/// Every order-reversing permutation of period at most two, sorted.
pub fn involutions_of(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    let up_count: Vec<u32> = (0..n).map(|x| l.up_set(x).count_ones()).collect();
    let down_count: Vec<u32> = (0..n).map(|x| l.down_set(x).count_ones()).collect();
    let uc: Vec<u32> = (0..n).map(|x| l.upper_covers(x).count_ones()).collect();
    let lc: Vec<u32> = (0..n).map(|x| l.lower_covers(x).count_ones()).collect();
    let compatible = |x: usize, y: usize| {
        up_count[x] == down_count[y]
            && down_count[x] == up_count[y]
            && uc[x] == lc[y]
            && lc[x] == uc[y]
    };

    const FREE: usize = usize::MAX;
    let mut sigma = vec![FREE; n];
    let mut out = Vec::new();

    fn consistent(l: &FiniteLattice, sigma: &[usize], x: usize, y: usize) -> bool {
        // σ(x) = y must reverse the order against every assigned z
        (0..sigma.len()).all(|z| {
            let s = sigma[z];
            s == usize::MAX || (l.leq(x, z) == l.leq(s, y) && l.leq(z, x) == l.leq(y, s))
        })
    }

    fn go(
        l: &FiniteLattice,
        sigma: &mut Vec<usize>,
        compatible: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(x) = sigma.iter().position(|&s| s == usize::MAX) else {
            out.push(sigma.clone());
            return;
        };
        for y in 0..sigma.len() {
            if sigma[y] != usize::MAX || !compatible(x, y) {
                continue;
            }
            if !consistent(l, sigma, x, y) {
                continue;
            }
            sigma[x] = y;
            if y != x {
                if !consistent(l, sigma, y, x) {
                    sigma[x] = usize::MAX;
                    continue;
                }
                sigma[y] = x;
            }
            go(l, sigma, compatible, out);
            sigma[x] = usize::MAX;
            if y != x {
                sigma[y] = usize::MAX;
            }
        }
    }

    go(l, &mut sigma, &compatible, &mut out);
    debug_assert!(out.iter().all(|s| s.iter().all(|&v| v != FREE)));
    out.sort();
    out
}
