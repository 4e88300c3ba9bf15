//! Congruences of lattices, i-lattices and BZ-lattices.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::bits;
use crate::involution::{BzLattice, InvolutionLattice};
use crate::lattice::FiniteLattice;
use crate::partition::{Partition, UnionFind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("{kind} family: {detail}")]
    CharacterizationMismatch { kind: FamilyKind, detail: String },
    #[error("partition {0} is not a congruence of the structure")]
    NotACongruence(String),
    #[error("partition has {got} elements, structure has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("no congruence of the whole structure restricts to {0}")]
    NoExtension(String),
    #[error("element set {0:#x} is not an i-sublattice")]
    NotAnISublattice(u64),
    #[error("family has {0} members, more than fit in a lattice value")]
    TooManyMembers(usize),
}

/// The signature whose congruences a family holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    Lattice,
    Involution,
    Bz,
}

/// Which bounds a family keeps as singleton classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fixed {
    None,
    Bottom,
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyKind {
    pub signature: Signature,
    pub fixed: Fixed,
}

impl FamilyKind {
    pub const LATTICE: FamilyKind = FamilyKind {
        signature: Signature::Lattice,
        fixed: Fixed::None,
    };
    pub const INVOLUTION: FamilyKind = FamilyKind {
        signature: Signature::Involution,
        fixed: Fixed::None,
    };
    pub const BZ: FamilyKind = FamilyKind {
        signature: Signature::Bz,
        fixed: Fixed::None,
    };
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.signature {
            Signature::Lattice => "con",
            Signature::Involution => "i",
            Signature::Bz => "bz",
        };
        match (self.signature, self.fixed) {
            (Signature::Lattice, Fixed::None) => f.write_str("lattice"),
            (_, Fixed::None) => f.write_str(base),
            (_, Fixed::Bottom) => write!(f, "{base}0"),
            (_, Fixed::Bounds) => write!(f, "{base}01"),
        }
    }
}

/// A congruence lattice: deduplicated members in canonical order
/// (finer first), ordered by refinement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceFamily {
    kind: FamilyKind,
    n: usize,
    members: Vec<Partition>,
}

impl CongruenceFamily {
    fn new(kind: FamilyKind, n: usize, mut members: Vec<Partition>) -> Self {
        members.sort_by(|a, b| a.family_cmp(b));
        members.dedup();
        CongruenceFamily { kind, n, members }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Size of the underlying element set.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.members.iter()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.members.binary_search_by(|m| m.family_cmp(p)).ok()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index_of(p).is_some()
    }

    /// The least member.
    pub fn bottom(&self) -> &Partition {
        &self.members[0]
    }

    /// The greatest member.
    pub fn top(&self) -> &Partition {
        self.members.last().expect("families are non-empty")
    }

    /// Minimal members strictly above the least one.
    pub fn atoms(&self) -> Vec<Partition> {
        let bottom = self.bottom();
        let above: Vec<&Partition> = self.members.iter().filter(|m| *m != bottom).collect();
        above
            .iter()
            .filter(|m| !above.iter().any(|o| o != *m && o.refines(m)))
            .map(|m| (*m).clone())
            .collect()
    }

    /// Exactly one atom.
    pub fn is_subdirectly_irreducible(&self) -> bool {
        self.atoms().len() == 1
    }

    /// Whether the family is a Boolean lattice: with `k` atoms it has
    /// `2^k` members, each the join of a distinct set of atoms.
    pub fn is_boolean(&self) -> bool {
        boolean_members(&self.members)
    }

    /// Whether the family is `B ⊕ L_2` for a Boolean lattice `B`.
    pub fn is_boolean_plus_top(&self) -> bool {
        self.len() >= 2 && boolean_members(&self.members[..self.len() - 1])
    }
    /// Members whose bottom class (and top class) is a singleton.
    pub fn restricted_to_bounds(&self, l: &FiniteLattice, fixed: Fixed) -> CongruenceFamily {
        let keep = |p: &Partition| match fixed {
            Fixed::None => true,
            Fixed::Bottom => p.block_of(l.bottom()).count_ones() == 1,
            Fixed::Bounds => {
                p.block_of(l.bottom()).count_ones() == 1 && p.block_of(l.top()).count_ones() == 1
            }
        };
        let members = self.members.iter().filter(|p| keep(p)).cloned().collect();
        CongruenceFamily::new(
            FamilyKind {
                signature: self.kind.signature,
                fixed,
            },
            self.n,
            members,
        )
    }

    /// `x ≤ y` in the family iff member `x` refines member `y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.members[x].refines(&self.members[y])
    }

    /// The family as an abstract lattice (indices follow member order).
    pub fn to_lattice(&self) -> Result<FiniteLattice, CongruenceError> {
        let m = self.len();
        if m > crate::lattice::MAX_ELEMENTS {
            return Err(CongruenceError::TooManyMembers(m));
        }
        let up: Vec<u64> = (0..m)
            .map(|x| {
                (0..m)
                    .filter(|&y| self.leq(x, y))
                    .fold(0u64, |s, y| s | bits::bit(y))
            })
            .collect();
        Ok(FiniteLattice::from_up_sets(up).expect("congruence families are lattices"))
    }
}

fn boolean_members(members: &[Partition]) -> bool {
    let bottom = &members[0];
    let above: Vec<&Partition> = members[1..].iter().collect();
    let atoms: Vec<&Partition> = above
        .iter()
        .filter(|m| !above.iter().any(|o| o != *m && o.refines(m)))
        .copied()
        .collect();
    let k = atoms.len();
    if k >= 63 || members.len() != 1usize << k {
        return false;
    }
    let mut seen = HashSet::new();
    for s in 0u64..1 << k {
        let j = bits::iter(s).fold(bottom.clone(), |acc, i| acc.join(atoms[i]));
        if !members.contains(&j) || !seen.insert(j) {
            return false;
        }
    }
    true
}

/// Closes the union-find under lattice translations, starting from the
/// pairs queued in `work`.
fn close(l: &FiniteLattice, uf: &mut UnionFind, mut work: VecDeque<(usize, usize)>) {
    let n = l.len();
    while let Some((x, y)) = work.pop_front() {
        for z in 0..n {
            for (u, v) in [(l.join(x, z), l.join(y, z)), (l.meet(x, z), l.meet(y, z))] {
                if uf.union(u, v) {
                    work.push_back((u, v));
                }
            }
        }
    }
}

/// Smallest lattice congruence containing all `pairs`.
pub fn congruence_generated(l: &FiniteLattice, pairs: &[(usize, usize)]) -> Partition {
    let mut uf = UnionFind::new(l.len());
    let mut work = VecDeque::new();
    for &(a, b) in pairs {
        if uf.union(a, b) {
            work.push_back((a, b));
        }
    }
    close(l, &mut uf, work);
    uf.into_partition()
}

/// `Cg(a, b)`.
pub fn principal_congruence(l: &FiniteLattice, a: usize, b: usize) -> Partition {
    congruence_generated(l, &[(a, b)])
}

/// Whether `p` is compatible with `∨` and `∧`.
pub fn is_congruence(l: &FiniteLattice, p: &Partition) -> bool {
    if p.len() != l.len() {
        return false;
    }
    let n = l.len();
    (0..n).all(|x| {
        let r = p.class_of(x);
        x == r
            || (0..n)
                .all(|z| p.same(l.join(x, z), l.join(r, z)) && p.same(l.meet(x, z), l.meet(r, z)))
    })
}

/// `θ = θ′`.
pub fn is_involution_invariant(il: &InvolutionLattice, p: &Partition) -> bool {
    (0..p.len()).all(|x| p.same(il.inv(x), il.inv(p.class_of(x))))
}

/// Compatible with the Brouwer complement.
pub fn is_brouwer_compatible(bz: &BzLattice, p: &Partition) -> bool {
    (0..p.len()).all(|x| p.same(bz.brouwer(x), bz.brouwer(p.class_of(x))))
}

/// `θ′`: the image of `θ` under the involution.
pub fn prime_of(p: &Partition, il: &InvolutionLattice) -> Partition {
    p.image(il.involution())
}

/// `Con(L)`: join-closure of `Δ` and the principal congruences of covers.
pub fn all_congruences(l: &FiniteLattice) -> CongruenceFamily {
    let mut gens: Vec<Partition> = l
        .covers()
        .into_iter()
        .map(|(a, b)| principal_congruence(l, a, b))
        .collect();
    gens.sort_by(|a, b| a.family_cmp(b));
    gens.dedup();
    let members = join_closure(l.len(), &gens);
    CongruenceFamily::new(FamilyKind::LATTICE, l.len(), members)
}

/// All joins of subsets of `gens` (the empty join is `Δ`).
fn join_closure(n: usize, gens: &[Partition]) -> Vec<Partition> {
    let delta = Partition::discrete(n);
    let mut seen: HashSet<Partition> = HashSet::new();
    seen.insert(delta.clone());
    let mut queue = VecDeque::from([delta]);
    let mut out = Vec::new();
    while let Some(m) = queue.pop_front() {
        for g in gens {
            if g.refines(&m) {
                continue;
            }
            let j = m.join(g);
            if seen.insert(j.clone()) {
                queue.push_back(j);
            }
        }
        out.push(m);
    }
    out
}

/// `Cg_I(a, b) = Cg(a, b) ∨ Cg(a′, b′)`.
pub fn i_principal_congruence(il: &InvolutionLattice, a: usize, b: usize) -> Partition {
    let l = il.lattice();
    let theta = principal_congruence(l, a, b).join(&principal_congruence(l, il.inv(a), il.inv(b)));
    debug_assert!(is_congruence(l, &theta) && is_involution_invariant(il, &theta));
    theta
}

/// `Cg_I(θ) = θ ∨ θ′` for a lattice congruence `θ`.
pub fn i_congruence_generated(il: &InvolutionLattice, theta: &Partition) -> Partition {
    theta.join(&prime_of(theta, il))
}

/// `Con_I(L)`, cross-checked against the `θ ∨ θ′` and `θ ∩ θ′` images.
pub fn i_congruences(il: &InvolutionLattice) -> Result<CongruenceFamily, CongruenceError> {
    i_congruences_from(il, &all_congruences(il.lattice()))
}

/// As [`i_congruences`], reusing a computed `Con(L)`.
pub fn i_congruences_from(
    il: &InvolutionLattice,
    con: &CongruenceFamily,
) -> Result<CongruenceFamily, CongruenceError> {
    let n = il.len();
    let fixed: Vec<Partition> = con
        .iter()
        .filter(|p| is_involution_invariant(il, p))
        .cloned()
        .collect();
    let mut joins = Vec::with_capacity(con.len());
    let mut meets = Vec::with_capacity(con.len());
    for p in con.iter() {
        let q = prime_of(p, il);
        joins.push(p.join(&q));
        meets.push(p.meet(&q));
    }
    let family = CongruenceFamily::new(FamilyKind::INVOLUTION, n, fixed);
    for (name, image) in [("θ ∨ θ′", joins), ("θ ∩ θ′", meets)] {
        let other = CongruenceFamily::new(FamilyKind::INVOLUTION, n, image);
        if other != family {
            return Err(CongruenceError::CharacterizationMismatch {
                kind: FamilyKind::INVOLUTION,
                detail: format!(
                    "{} invariant congruences but {} in the {name} image",
                    family.len(),
                    other.len()
                ),
            });
        }
    }
    Ok(family)
}

/// `Con_BZ(L)`; for antiortholattices cross-checked against
/// `Con_BI01(L) ∪ {∇}`.
pub fn bz_congruences(bz: &BzLattice) -> Result<CongruenceFamily, CongruenceError> {
    let ifam = i_congruences(bz.base())?;
    bz_congruences_from(bz, &ifam)
}

pub fn bz_congruences_from(
    bz: &BzLattice,
    ifam: &CongruenceFamily,
) -> Result<CongruenceFamily, CongruenceError> {
    let n = bz.len();
    let members: Vec<Partition> = ifam
        .iter()
        .filter(|p| is_brouwer_compatible(bz, p))
        .cloned()
        .collect();
    let family = CongruenceFamily::new(FamilyKind::BZ, n, members);
    if bz.classify().antiortholattice {
        let mut expected: Vec<Partition> = ifam
            .restricted_to_bounds(bz.lattice(), Fixed::Bounds)
            .members()
            .to_vec();
        expected.push(Partition::indiscrete(n));
        let expected = CongruenceFamily::new(FamilyKind::BZ, n, expected);
        if expected != family {
            return Err(CongruenceError::CharacterizationMismatch {
                kind: FamilyKind::BZ,
                detail: format!(
                    "{} Brouwer-compatible congruences, but {} in Con_BI01 ∪ {{∇}}",
                    family.len(),
                    expected.len()
                ),
            });
        }
    }
    Ok(family)
}

/// Members with a singleton bottom class.
pub fn con0(l: &FiniteLattice, family: &CongruenceFamily) -> CongruenceFamily {
    family.restricted_to_bounds(l, Fixed::Bottom)
}

/// Members with singleton bottom and top classes.
pub fn con01(l: &FiniteLattice, family: &CongruenceFamily) -> CongruenceFamily {
    family.restricted_to_bounds(l, Fixed::Bounds)
}

fn check_size(n: usize, p: &Partition) -> Result<(), CongruenceError> {
    if p.len() != n {
        return Err(CongruenceError::SizeMismatch {
            expected: n,
            got: p.len(),
        });
    }
    Ok(())
}

/// `L/θ` with classes numbered by least element; labels of merged
/// elements are joined with `|`.
pub fn quotient(l: &FiniteLattice, theta: &Partition) -> Result<FiniteLattice, CongruenceError> {
    check_size(l.len(), theta)?;
    if !is_congruence(l, theta) {
        return Err(CongruenceError::NotACongruence(
            theta.format_blocks(l.labels()),
        ));
    }
    let blocks = theta.blocks();
    let up: Vec<u64> = blocks
        .iter()
        .map(|&b| {
            let r = b.trailing_zeros() as usize;
            blocks
                .iter()
                .enumerate()
                .filter(|&(_, &c)| {
                    let s = c.trailing_zeros() as usize;
                    theta.same(l.join(r, s), s)
                })
                .fold(0u64, |m, (j, _)| m | bits::bit(j))
        })
        .collect();
    let q = FiniteLattice::from_up_sets(up).expect("quotient of a lattice is a lattice");
    match l.labels() {
        Some(labels) => {
            let names: Vec<String> = blocks
                .iter()
                .map(|&b| {
                    bits::iter(b)
                        .map(|x| labels[x].as_str())
                        .collect::<Vec<_>>()
                        .join("|")
                })
                .collect();
            Ok(q.with_labels(names).expect("merged labels are distinct"))
        }
        None => Ok(q),
    }
}

fn class_index(theta: &Partition, blocks: &[u64]) -> Vec<usize> {
    let mut index = vec![0usize; theta.len()];
    for (i, &b) in blocks.iter().enumerate() {
        for x in bits::iter(b) {
            index[x] = i;
        }
    }
    index
}

/// `L/θ` as an i-lattice, with `(x/θ)′ = x′/θ`.
pub fn quotient_i(
    il: &InvolutionLattice,
    theta: &Partition,
) -> Result<InvolutionLattice, CongruenceError> {
    check_size(il.len(), theta)?;
    if !is_involution_invariant(il, theta) {
        return Err(CongruenceError::NotACongruence(
            theta.format_blocks(il.lattice().labels()),
        ));
    }
    let q = quotient(il.lattice(), theta)?;
    let blocks = theta.blocks();
    let index = class_index(theta, &blocks);
    let inv = blocks
        .iter()
        .map(|&b| index[il.inv(b.trailing_zeros() as usize)])
        .collect();
    Ok(InvolutionLattice::from_parts_unchecked(q, inv))
}

/// `L/θ` as a BZ-lattice.
pub fn quotient_bz(bz: &BzLattice, theta: &Partition) -> Result<BzLattice, CongruenceError> {
    check_size(bz.len(), theta)?;
    if !is_brouwer_compatible(bz, theta) {
        return Err(CongruenceError::NotACongruence(
            theta.format_blocks(bz.lattice().labels()),
        ));
    }
    let base = quotient_i(bz.base(), theta)?;
    let blocks = theta.blocks();
    let index = class_index(theta, &blocks);
    let br = blocks
        .iter()
        .map(|&b| index[bz.brouwer(b.trailing_zeros() as usize)])
        .collect();
    Ok(BzLattice::attach(base, br).expect("quotients of BZ-lattices are BZ-lattices"))
}

/// A member of `Con_I(L)` whose restriction to the i-sublattice `set` is
/// `sigma` (a partition of `set` renumbered in increasing order).
pub fn cep_extend(
    il: &InvolutionLattice,
    set: u64,
    sigma: &Partition,
) -> Result<Partition, CongruenceError> {
    if !il.is_i_sublattice(set) {
        return Err(CongruenceError::NotAnISublattice(set));
    }
    check_size(set.count_ones() as usize, sigma)?;
    let family = i_congruences(il)?;
    family
        .iter()
        .find(|theta| theta.restrict(set) == *sigma)
        .cloned()
        .ok_or_else(|| CongruenceError::NoExtension(sigma.format_blocks(None)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FiniteLattice {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteLattice::from_edges(n, &edges).unwrap()
    }

    fn ichain(n: usize) -> InvolutionLattice {
        InvolutionLattice::attach(chain(n), (0..n).rev().collect()).unwrap()
    }

    fn n5() -> FiniteLattice {
        FiniteLattice::from_edges(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn principal_in_chain_is_one_block() {
        let l = chain(6);
        assert!(principal_congruence(&l, 3, 3).is_discrete());
        let p = principal_congruence(&l, 2, 3);
        assert_eq!(p.num_classes(), 5);
        assert_eq!(p.block_of(2), 0b1100);
    }

    #[test]
    fn n5_principal_matches_intersection() {
        let l = n5();
        let con = all_congruences(&l);
        assert_eq!(con.len(), 5);
        for (a, b) in l.covers() {
            let meet = con
                .iter()
                .filter(|p| p.same(a, b))
                .fold(Partition::indiscrete(5), |acc, p| acc.meet(p));
            assert_eq!(principal_congruence(&l, a, b), meet);
        }
    }

    #[test]
    fn chain_counts() {
        for n in 1..=8 {
            let il = ichain(n);
            assert_eq!(all_congruences(il.lattice()).len(), 1 << (n - 1));
            assert_eq!(i_congruences(&il).unwrap().len(), 1 << (n / 2));
            if n >= 2 {
                let bz = BzLattice::trivial(il).unwrap();
                assert_eq!(bz_congruences(&bz).unwrap().len(), (1 << (n / 2 - 1)) + 1);
            }
        }
    }

    #[test]
    fn narrows_quotient_sizes_in_chains() {
        let il = ichain(6);
        // 2 ≺ 3 = 2′
        assert_eq!(i_principal_congruence(&il, 2, 3).num_classes(), 5);
        let il = ichain(7);
        // 2 ≺ 3 = 3′
        let p = i_principal_congruence(&il, 2, 3);
        assert_eq!(p.num_classes(), 5);
        assert_eq!(p.block_of(3), 0b11100);
    }

    #[test]
    fn family_bounds_and_atoms() {
        let con = all_congruences(&chain(4));
        assert!(con.bottom().is_discrete());
        assert!(con.top().is_indiscrete());
        assert_eq!(con.atoms().len(), 3);
        assert!(con.is_boolean());
        assert!(!con.is_subdirectly_irreducible());
        let lat = con.to_lattice().unwrap();
        assert_eq!(lat.len(), 8);
        assert!(lat.is_distributive());
    }

    #[test]
    fn quotients() {
        let l = chain(5);
        let q = quotient(&l, &Partition::discrete(5)).unwrap();
        assert_eq!(q.order_matrix(), l.order_matrix());
        assert_eq!(quotient(&l, &Partition::indiscrete(5)).unwrap().len(), 1);
        let bad = Partition::from_blocks(5, &[vec![0, 2], vec![1], vec![3], vec![4]]).unwrap();
        assert!(matches!(
            quotient(&l, &bad),
            Err(CongruenceError::NotACongruence(_))
        ));
        let il = ichain(5);
        let theta = i_principal_congruence(&il, 0, 1);
        let qi = quotient_i(&il, &theta).unwrap();
        assert_eq!(qi.len(), 3);
        assert_eq!(qi.involution(), &[2, 1, 0]);
    }

    #[test]
    fn labelled_quotient() {
        let l = chain(3).with_labels(["0", "m", "1"]).unwrap();
        let q = quotient(&l, &principal_congruence(&l, 0, 1)).unwrap();
        assert_eq!(q.label_list(), vec!["0|m", "1"]);
    }

    #[test]
    fn extension_in_boolean_square() {
        let sq = FiniteLattice::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let b = InvolutionLattice::attach(sq, vec![3, 2, 1, 0]).unwrap();
        let diag = 0b1001;
        let ext = cep_extend(&b, diag, &Partition::discrete(2)).unwrap();
        assert!(ext.restrict(diag).is_discrete());
        let nabla = cep_extend(&b, diag, &Partition::indiscrete(2)).unwrap();
        assert!(nabla.is_indiscrete());
        assert!(matches!(
            cep_extend(&b, 0b0011, &Partition::discrete(2)),
            Err(CongruenceError::NotAnISublattice(_))
        ));
    }

    #[test]
    fn con0_con01() {
        let il = ichain(5);
        let ifam = i_congruences(&il).unwrap();
        let l = il.lattice();
        let c01 = con01(l, &ifam);
        assert_eq!(c01.len(), 2);
        assert!(c01
            .iter()
            .all(|p| p.block_of(0) == 1 && p.block_of(4) == 1 << 4));
        assert_eq!(con0(l, &all_congruences(l)).len(), 8);
        assert_eq!(c01.kind().to_string(), "i01");
    }
}
