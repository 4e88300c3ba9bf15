//! Exhaustive census of small lattices and i-lattices, and checks of the
//! extremal congruence-count theorems against it.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits;
use crate::canon::{self, CanonicalForm};
use crate::congruence::{
    all_congruences, bz_congruences_from, con01, i_congruences_from, CongruenceError,
};
use crate::constructions::{self as cons, ConstructionError};
use crate::involution::{involutions_of, BzLattice, InvolutionLattice};
use crate::lattice::FiniteLattice;

pub const DEFAULT_CAP: usize = 9;
pub const HARD_CAP: usize = 10;
pub const THREADS_ENV: &str = "LATCON_THREADS";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CensusError {
    #[error("census size {n} is outside 1..={cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("{theorem} violated at n = {n}: {detail}")]
    TheoremViolated {
        theorem: &'static str,
        n: usize,
        detail: String,
    },
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// A rayon pool sized by `LATCON_THREADS` (all cores when unset or 0).
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

fn check_cap(n: usize, cap: usize) -> Result<(), CensusError> {
    let cap = cap.min(HARD_CAP);
    if n == 0 || n > cap {
        return Err(CensusError::CapExceeded { n, cap });
    }
    Ok(())
}

/// Children of a meet-semilattice with 0: one new maximal element above
/// each down-set `D` such that every `D ∩ ↓y` has a greatest element.
fn extend(parent: &CanonicalForm) -> Vec<CanonicalForm> {
    let up = parent.up_sets();
    let m = up.len();
    let down: Vec<u64> = (0..m)
        .map(|x| {
            (0..m)
                .filter(|&y| bits::contains(up[y], x))
                .fold(0, |s, y| s | bits::bit(y))
        })
        .collect();
    let bottom = (0..m)
        .find(|&x| up[x] == bits::full(m))
        .expect("semilattice has a bottom");
    let mut out = Vec::new();
    for d in 0u64..1 << m {
        if !bits::contains(d, bottom) || bits::iter(d).any(|x| down[x] & !d != 0) {
            continue;
        }
        let has_meets = (0..m).all(|y| {
            let below = d & down[y];
            bits::iter(below).any(|z| below & !down[z] == 0)
        });
        if !has_meets {
            continue;
        }
        let mut child: Vec<u64> = up.to_vec();
        for x in bits::iter(d) {
            child[x] |= bits::bit(m);
        }
        child.push(bits::bit(m));
        out.push(canon::labeling(&child, None).form);
    }
    out
}

/// Every `n`-element lattice once up to isomorphism, canonically labelled
/// and sorted by canonical form.
pub fn enumerate_lattices(n: usize, cap: usize) -> Result<Vec<FiniteLattice>, CensusError> {
    check_cap(n, cap)?;
    if n == 1 {
        return Ok(vec![
            FiniteLattice::from_up_sets(vec![1]).expect("one-element lattice")
        ]);
    }
    // lattices of size n are meet-semilattices of size n - 1 with a top added
    let mut level = vec![canon::labeling(&[1], None).form];
    for _ in 2..n {
        let mut next: Vec<CanonicalForm> = level.par_iter().flat_map_iter(extend).collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }
    let mut out: Vec<(CanonicalForm, FiniteLattice)> = level
        .par_iter()
        .map(|s| {
            let m = s.len();
            let mut up: Vec<u64> = s.up_sets().iter().map(|&u| u | bits::bit(m)).collect();
            up.push(bits::bit(m));
            let l = FiniteLattice::from_up_sets(up).expect("semilattice plus top is a lattice");
            let lab = canon::canonical_labeling(&l);
            (lab.form, l.permuted(&lab.perm))
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, l)| l).collect())
}

/// Every `n`-element i-lattice once up to i-isomorphism, canonically
/// labelled, sorted by lattice form and then by i-lattice form.
pub fn enumerate_i_lattices(n: usize, cap: usize) -> Result<Vec<InvolutionLattice>, CensusError> {
    let lattices = enumerate_lattices(n, cap)?;
    Ok(i_lattices_over(&lattices))
}

fn i_lattices_over(lattices: &[FiniteLattice]) -> Vec<InvolutionLattice> {
    lattices
        .par_iter()
        .flat_map_iter(|l| {
            let mut seen: Vec<(CanonicalForm, InvolutionLattice)> = involutions_of(l)
                .into_iter()
                .map(|inv| {
                    let il =
                        InvolutionLattice::attach(l.clone(), inv).expect("enumerated involution");
                    let lab = il.canonical_labeling();
                    (lab.form, il.permuted(&lab.perm))
                })
                .collect();
            seen.sort_by(|a, b| a.0.cmp(&b.0));
            seen.dedup_by(|a, b| a.0 == b.0);
            seen.into_iter().map(|(_, il)| il)
        })
        .collect()
}

/// Congruence data of one lattice class.
#[derive(Clone, Debug)]
pub struct LatticeEntry {
    pub lattice: FiniteLattice,
    pub form: CanonicalForm,
    pub con: u64,
    pub con_boolean: bool,
}

/// Congruence data of a BZ-lattice with trivial Brouwer complement.
#[derive(Clone, Copy, Debug)]
pub struct BzEntry {
    pub con_bz: u64,
    pub boolean_plus_top: bool,
    pub con_i01_boolean: bool,
}

/// Congruence data of one i-lattice class.
#[derive(Clone, Debug)]
pub struct IEntry {
    pub structure: InvolutionLattice,
    pub form: CanonicalForm,
    pub con: u64,
    pub con_boolean: bool,
    pub con_i: u64,
    pub con_i_boolean: bool,
    pub con_i_atoms: usize,
    pub pseudo_kleene: bool,
    pub modular: bool,
    pub distributive: bool,
    /// Present when the structure is an antiortholattice whose 0 is
    /// meet-irreducible.
    pub bz: Option<BzEntry>,
}

impl IEntry {
    pub fn kleene(&self) -> bool {
        self.pseudo_kleene && self.distributive
    }
}

/// All lattice and i-lattice classes of one size with their congruence
/// counts.
#[derive(Clone, Debug)]
pub struct Survey {
    pub n: usize,
    pub lattices: Vec<LatticeEntry>,
    pub i_lattices: Vec<IEntry>,
}

fn zero_meet_irreducible(l: &FiniteLattice) -> bool {
    bits::contains(l.meet_irreducibles(), l.bottom())
}

fn survey_lattice(l: &FiniteLattice) -> Result<(LatticeEntry, Vec<IEntry>), CensusError> {
    let con = all_congruences(l);
    let entry = LatticeEntry {
        lattice: l.clone(),
        form: canon::canonical_form(l),
        con: con.len() as u64,
        con_boolean: con.is_boolean(),
    };
    let modular = l.is_modular();
    let distributive = l.is_distributive();
    let mut ientries = Vec::new();
    for il in i_lattices_over(std::slice::from_ref(l)) {
        let icon = all_congruences(il.lattice());
        let ci = i_congruences_from(&il, &icon)?;
        let bz = if il.admits_trivial_brouwer() && zero_meet_irreducible(l) && l.len() >= 2 {
            let b = BzLattice::trivial(il.clone()).expect("admits the trivial complement");
            let cb = bz_congruences_from(&b, &ci)?;
            Some(BzEntry {
                con_bz: cb.len() as u64,
                boolean_plus_top: cb.is_boolean_plus_top(),
                con_i01_boolean: con01(il.lattice(), &ci).is_boolean(),
            })
        } else {
            None
        };
        ientries.push(IEntry {
            form: il.canonical_form(),
            pseudo_kleene: il.is_pseudo_kleene(),
            structure: il,
            con: con.len() as u64,
            con_boolean: entry.con_boolean,
            con_i: ci.len() as u64,
            con_i_boolean: ci.is_boolean(),
            con_i_atoms: ci.atoms().len(),
            modular,
            distributive,
            bz,
        });
    }
    Ok((entry, ientries))
}

/// Enumerates size `n` and computes every congruence count the theorem
/// checks need.
pub fn survey(n: usize, cap: usize) -> Result<Survey, CensusError> {
    let lattices = enumerate_lattices(n, cap)?;
    let parts: Vec<(LatticeEntry, Vec<IEntry>)> = lattices
        .par_iter()
        .map(survey_lattice)
        .collect::<Result<_, _>>()?;
    let mut out = Survey {
        n,
        lattices: Vec::new(),
        i_lattices: Vec::new(),
    };
    for (e, is) in parts {
        out.lattices.push(e);
        out.i_lattices.extend(is);
    }
    Ok(out)
}

/// [`survey`] inside the pool sized by `LATCON_THREADS`.
pub fn survey_pooled(n: usize, cap: usize) -> Result<Survey, CensusError> {
    thread_pool().install(|| survey(n, cap))
}

/// Per-size summary of the i-lattice census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub n: usize,
    pub lattice_class_count: usize,
    pub i_lattice_class_count: usize,
    /// `|Con_I|` → number of i-lattice classes.
    pub histogram: BTreeMap<u64, u64>,
    pub max_i_congruences: u64,
    pub extremal_witnesses: Vec<String>,
    pub runner_up: Option<u64>,
    pub runner_up_witnesses: Vec<String>,
    pub pseudo_kleene_max: Option<u64>,
    pub pseudo_kleene_witnesses: Vec<String>,
}

fn top_two<'a>(entries: impl Iterator<Item = &'a IEntry> + Clone) -> (Option<u64>, Option<u64>) {
    let values: BTreeSet<u64> = entries.map(|e| e.con_i).collect();
    let mut it = values.into_iter().rev();
    (it.next(), it.next())
}

fn witnesses<'a>(entries: impl Iterator<Item = &'a IEntry>, value: Option<u64>) -> Vec<String> {
    let mut out: Vec<String> = entries
        .filter(|e| Some(e.con_i) == value)
        .map(|e| e.form.to_string())
        .collect();
    out.sort();
    out
}

impl Survey {
    pub fn record(&self) -> CensusRecord {
        let mut histogram = BTreeMap::new();
        for e in &self.i_lattices {
            *histogram.entry(e.con_i).or_insert(0) += 1;
        }
        let (max, second) = top_two(self.i_lattices.iter());
        let pk = self.i_lattices.iter().filter(|e| e.pseudo_kleene);
        let (pk_max, _) = top_two(pk.clone());
        CensusRecord {
            n: self.n,
            lattice_class_count: self.lattices.len(),
            i_lattice_class_count: self.i_lattices.len(),
            histogram,
            max_i_congruences: max.unwrap_or(0),
            extremal_witnesses: witnesses(self.i_lattices.iter(), max),
            runner_up: second,
            runner_up_witnesses: witnesses(self.i_lattices.iter(), second),
            pseudo_kleene_max: pk_max,
            pseudo_kleene_witnesses: witnesses(pk, pk_max),
        }
    }
}

fn violated(theorem: &'static str, n: usize, detail: String) -> CensusError {
    CensusError::TheoremViolated { theorem, n, detail }
}

/// `a/2^s` compared against `b/2^t` without fractions: sign of `a·2^t − b·2^s`.
fn scaled_cmp(a: u64, s: u32, b: u64, t: u32) -> std::cmp::Ordering {
    ((a as u128) << t).cmp(&((b as u128) << s))
}

/// `c` against `num · 2^(n − shift)`.
fn cmp_pow(c: u64, num: u64, n: usize, shift: u32) -> std::cmp::Ordering {
    scaled_cmp(c, n as u32, num, shift)
}

fn iff(a: bool, b: bool) -> bool {
    a == b
}

fn lattice_forms(ls: impl IntoIterator<Item = FiniteLattice>) -> HashSet<CanonicalForm> {
    ls.into_iter().map(|l| canon::canonical_form(&l)).collect()
}

fn chain_padded_family(
    n: usize,
    middle: &FiniteLattice,
) -> Result<HashSet<CanonicalForm>, CensusError> {
    let m = middle.len();
    let mut out = Vec::new();
    if n >= m {
        for k in 1..=n + 1 - m {
            out.push(cons::chain_padded(k, middle, n - m + 2 - k)?);
        }
    }
    Ok(lattice_forms(out))
}

/// Lattices ranked by congruence count: the ten bullets of the lattice
/// theorem, with the witness shapes built independently.
pub fn verify_lattice_theorem(s: &Survey) -> Result<(), CensusError> {
    use std::cmp::Ordering::*;
    const NAME: &str = "lattice congruence-count theorem";
    let n = s.n;
    let chain = canon::canonical_form(&cons::chain_lattice(n)?);
    let square = cons::boolean_cube(2)?.into_lattice();
    let sq_family = chain_padded_family(n, &square)?;
    let n5_family = chain_padded_family(n, cons::n5().lattice())?;
    let mut fourth = chain_padded_family(n, cons::l2_times_l3().lattice())?;
    if n >= 7 {
        for r in 1..=n - 6 {
            for t in 1..=n - 5 - r {
                let lower = cons::chain_padded(r, &square, t)?;
                let l = cons::ordinal_sum(&lower, &square)?.lattice;
                let l = cons::ordinal_sum(&l, &cons::chain_lattice(n - r - t - 4)?)?.lattice;
                fourth.insert(canon::canonical_form(&l));
            }
        }
    }
    let mut fifth = chain_padded_family(n, cons::l3_hsum_l5().lattice())?;
    fifth.extend(chain_padded_family(n, cons::l4_hsum_l4().lattice())?);

    for e in &s.lattices {
        let c = e.con;
        let at = |num: u64, shift: u32| cmp_pow(c, num, n, shift);
        let checks: [(&str, bool); 10] = [
            ("c ≤ 2^(n−1)", at(1, 1) != Greater),
            (
                "c = 2^(n−1) ⟺ chain ⟺ Boolean",
                iff(at(1, 1) == Equal, e.form == chain)
                    && iff(
                        at(1, 1) == Equal,
                        e.con_boolean
                            && c.is_power_of_two()
                            && c.trailing_zeros() as usize == n - 1,
                    ),
            ),
            (
                "c < 2^(n−1) ⟺ n ≥ 4 and c ≤ 2^(n−2)",
                iff(at(1, 1) == Less, n >= 4 && at(1, 2) != Greater),
            ),
            (
                "c = 2^(n−2) ⟺ square shape ⟺ Boolean",
                iff(at(1, 2) == Equal, n >= 4 && sq_family.contains(&e.form))
                    && iff(
                        at(1, 2) == Equal,
                        n >= 2 && e.con_boolean && c.trailing_zeros() as usize + 2 == n,
                    ),
            ),
            (
                "c < 2^(n−2) ⟺ n ≥ 5 and c ≤ 5·2^(n−5)",
                iff(at(1, 2) == Less, n >= 5 && at(5, 5) != Greater),
            ),
            (
                "c = 5·2^(n−5) ⟺ N5 shape",
                iff(at(5, 5) == Equal, n >= 5 && n5_family.contains(&e.form)),
            ),
            (
                "n ≥ 6: c < 5·2^(n−5) ⟺ c ≤ 2^(n−3)",
                n < 6 || iff(at(5, 5) == Less, at(1, 3) != Greater),
            ),
            (
                "c = 2^(n−3) ⟺ product or double-square shape",
                iff(at(1, 3) == Equal, n >= 6 && fourth.contains(&e.form)),
            ),
            (
                "n ≥ 6: c < 2^(n−3) ⟺ c ≤ 7·2^(n−6)",
                n < 6 || iff(at(1, 3) == Less, at(7, 6) != Greater),
            ),
            (
                "c = 7·2^(n−6) ⟺ horizontal-sum shape",
                iff(at(7, 6) == Equal, n >= 6 && fifth.contains(&e.form)),
            ),
        ];
        if let Some((bullet, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(violated(
                NAME,
                n,
                format!("{bullet} fails for {} with |Con| = {c}", e.form),
            ));
        }
    }
    Ok(())
}

fn i_form(il: &InvolutionLattice) -> CanonicalForm {
    il.canonical_form()
}

struct Sandwiches {
    chain: CanonicalForm,
    boolean: Option<CanonicalForm>,
    hsum: Option<CanonicalForm>,
}

fn sandwiches(n: usize) -> Result<Sandwiches, CensusError> {
    let even = n % 2 == 0 && n >= 4;
    let boolean = even
        .then(|| cons::chain_sandwich(n / 2 - 1, &cons::boolean_cube(2)?).map(|l| i_form(&l)))
        .transpose()?;
    let hsum = even
        .then(|| cons::chain_sandwich(n / 2 - 1, &cons::l3_hsum_l3()).map(|l| i_form(&l)))
        .transpose()?;
    Ok(Sandwiches {
        chain: i_form(&cons::chain(n)?),
        boolean,
        hsum,
    })
}

/// The i-lattice maximum theorem, bullet by bullet, plus the exact set of
/// extremal witnesses.
pub fn verify_max_theorem(s: &Survey) -> Result<CensusRecord, CensusError> {
    use std::cmp::Ordering::*;
    const NAME: &str = "i-lattice maximum theorem";
    let n = s.n;
    let k = n / 2;
    let w = sandwiches(n)?;
    for e in &s.i_lattices {
        let c = e.con_i;
        let big = e.con;
        // c against 2^k and 2^(k−1); |Con| against 2^(n−1), 2^(n−2), 2^(n−3)
        let c_vs = |num: u64, shift: u32| scaled_cmp(c, k as u32, num, shift);
        let l_vs = |num: u64, shift: u32| cmp_pow(big, num, n, shift);
        let is_chain = e.form == w.chain;
        let is_bool = Some(&e.form) == w.boolean.as_ref();
        let is_hsum = Some(&e.form) == w.hsum.as_ref();
        let con_pk_ok = iff(
            c_vs(1, 0) == Equal,
            l_vs(1, 1) == Equal || l_vs(1, 2) == Equal,
        );
        let mut checks: Vec<(&str, bool)> = vec![
            ("|Con_I| ≤ 2^⌊n/2⌋", c_vs(1, 0) != Greater),
            (
                "max ⟺ Con_I Boolean with ⌊n/2⌋ atoms",
                iff(c_vs(1, 0) == Equal, e.con_i_boolean && e.con_i_atoms == k),
            ),
            (
                "max ⟺ chain or Boolean sandwich",
                iff(c_vs(1, 0) == Equal, is_chain || is_bool),
            ),
            (
                "max ⟺ |Con| = 2^(n−1) or (not ⊞ sandwich and |Con| = 2^(n−2))",
                iff(
                    c_vs(1, 0) == Equal,
                    l_vs(1, 1) == Equal || (n >= 2 && !is_hsum && l_vs(1, 2) == Equal),
                ),
            ),
            (
                "Con ≅ L_2^(n−1) or L_2^(n−2) matches the counts",
                iff(
                    l_vs(1, 1) == Equal || l_vs(1, 2) == Equal,
                    e.con_boolean && (l_vs(1, 1) == Equal || l_vs(1, 2) == Equal),
                ),
            ),
            (
                "below max ⟺ ⊞ sandwich or |Con| < 2^(n−2)",
                iff(c_vs(1, 0) == Less, is_hsum || l_vs(1, 2) == Less),
            ),
        ];
        if e.pseudo_kleene {
            checks.push(("pseudo-Kleene: max ⟺ |Con| ∈ {2^(n−1), 2^(n−2)}", con_pk_ok));
            checks.push((
                "pseudo-Kleene: max ⟺ chain or Boolean sandwich",
                iff(c_vs(1, 0) == Equal, is_chain || is_bool),
            ));
            checks.push((
                "pseudo-Kleene: below max ⟺ |Con| < 2^(n−2) ⟺ |Con| ≤ 2^(n−3)",
                iff(c_vs(1, 0) == Less, l_vs(1, 2) == Less)
                    && iff(l_vs(1, 2) == Less, l_vs(1, 3) != Greater),
            ));
        }
        if e.con_i_boolean {
            checks.push((
                "Boolean Con_I: below max ⟺ ≤ 2^(⌊n/2⌋−1) ⟺ ⊞ sandwich or |Con| ≤ 2^(n−3)",
                iff(c_vs(1, 0) == Less, c_vs(1, 1) != Greater)
                    && iff(c_vs(1, 0) == Less, is_hsum || l_vs(1, 3) != Greater),
            ));
            if e.pseudo_kleene {
                checks.push((
                    "pseudo-Kleene with Boolean Con_I: below max ⟺ |Con| ≤ 2^(n−3)",
                    iff(c_vs(1, 0) == Less, l_vs(1, 3) != Greater),
                ));
            }
        }
        if e.modular && !e.con_i_boolean {
            checks.push(("modular i-lattices have Boolean Con_I", false));
        }
        if let Some((bullet, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(violated(
                NAME,
                n,
                format!(
                    "{bullet} fails for {} with |Con| = {big}, |Con_I| = {c}",
                    e.form
                ),
            ));
        }
    }
    let record = s.record();
    if record.max_i_congruences != 1 << k {
        return Err(violated(
            NAME,
            n,
            format!(
                "maximum is {}, expected {}",
                record.max_i_congruences,
                1u64 << k
            ),
        ));
    }
    let mut expected = vec![w.chain.to_string()];
    expected.extend(w.boolean.as_ref().map(|f| f.to_string()));
    expected.sort();
    if record.extremal_witnesses != expected {
        return Err(violated(
            NAME,
            n,
            format!(
                "extremal witnesses {:?}, expected {:?}",
                record.extremal_witnesses, expected
            ),
        ));
    }
    if record.pseudo_kleene_witnesses != expected {
        return Err(violated(
            NAME,
            n,
            format!(
                "pseudo-Kleene extremal witnesses {:?}, expected {:?}",
                record.pseudo_kleene_witnesses, expected
            ),
        ));
    }
    Ok(record)
}

/// The BZ corollary over antiortholattices with 0 meet-irreducible.
pub fn verify_bz_theorem(s: &Survey) -> Result<Option<u64>, CensusError> {
    use std::cmp::Ordering::*;
    const NAME: &str = "BZ maximum corollary";
    let n = s.n;
    if n < 2 {
        return Ok(None);
    }
    let k = n / 2;
    let w = sandwiches(n)?;
    let mut best: Option<u64> = None;
    let mut attained = Vec::new();
    for e in &s.i_lattices {
        let Some(bz) = e.bz else { continue };
        let b = bz.con_bz;
        // b − 1 against 2^(k−1) and 2^(k−2)
        let b_vs = |shift: u32| scaled_cmp(b.saturating_sub(1), k as u32, 1, shift);
        let c_vs = |shift: u32| scaled_cmp(e.con_i, k as u32, 1, shift);
        let l_vs = |shift: u32| cmp_pow(e.con, 1, n, shift);
        let is_sandwich = n >= 6 && Some(&e.form) == w.boolean.as_ref();
        let is_max = b_vs(1) == Equal;
        let mut checks: Vec<(&str, bool)> = vec![
            ("|Con_BZ| ≤ 2^(⌊n/2⌋−1) + 1", b >= 1 && b_vs(1) != Greater),
            (
                "max ⟺ Con_BZ ≅ L_2^(⌊n/2⌋−1) ⊕ L_2",
                iff(
                    is_max,
                    bz.boolean_plus_top
                        && (b - 1).is_power_of_two()
                        && (b - 1).trailing_zeros() as usize + 1 == k,
                ),
            ),
            (
                "max ⟺ |Con_I| = 2^⌊n/2⌋ ⟺ Con_I Boolean",
                iff(is_max, c_vs(0) == Equal) && iff(is_max, e.con_i_boolean && e.con_i_atoms == k),
            ),
            (
                "max ⟺ chain or Boolean sandwich",
                iff(is_max, e.form == w.chain || is_sandwich),
            ),
            (
                "max ⟺ |Con| ∈ {2^(n−1), 2^(n−2)}",
                iff(is_max, l_vs(1) == Equal || l_vs(2) == Equal),
            ),
            (
                "below max ⟺ |Con| ≤ 2^(n−3)",
                iff(!is_max, l_vs(3) != Greater),
            ),
        ];
        if bz.boolean_plus_top || e.modular {
            checks.push(("Boolean-plus-top or modular: below max ⟺ ≤ 2^(⌊n/2⌋−2) + 1 ⟺ |Con_I| ≤ 2^(⌊n/2⌋−1)",
                iff(!is_max, b_vs(2) != Greater) && iff(!is_max, c_vs(1) != Greater)));
        }
        if let Some((bullet, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Err(violated(
                NAME,
                n,
                format!(
                    "{bullet} fails for {} with |Con| = {}, |Con_I| = {}, |Con_BZ| = {b}",
                    e.form, e.con, e.con_i
                ),
            ));
        }
        if best.is_none_or(|m| b > m) {
            best = Some(b);
            attained.clear();
        }
        if Some(b) == best {
            attained.push(e.form.to_string());
        }
    }
    let expected_max = (1u64 << (k - 1)) + 1;
    if best != Some(expected_max) {
        return Err(violated(
            NAME,
            n,
            format!("maximum is {best:?}, expected {expected_max}"),
        ));
    }
    let mut expected = vec![w.chain.to_string()];
    if n >= 6 {
        expected.extend(w.boolean.as_ref().map(|f| f.to_string()));
    }
    expected.sort();
    attained.sort();
    if attained != expected {
        return Err(violated(
            NAME,
            n,
            format!("witnesses {attained:?}, expected {expected:?}"),
        ));
    }
    Ok(best)
}

/// Second-largest values found for each class the closing remark names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondLargest {
    pub n: usize,
    pub modular: Option<u64>,
    pub modular_pseudo_kleene: Option<u64>,
    pub kleene: Option<u64>,
    pub bz_modular: Option<u64>,
    pub bz_distributive: Option<u64>,
}

fn second<I: Iterator<Item = u64>>(values: I) -> Option<u64> {
    let set: BTreeSet<u64> = values.collect();
    set.into_iter().rev().nth(1)
}

/// Second-largest congruence counts of modular, modular pseudo-Kleene,
/// Kleene and BZ classes, with the example structures attaining them.
pub fn verify_second_largest(s: &Survey) -> Result<SecondLargest, CensusError> {
    const NAME: &str = "second-largest remark";
    let n = s.n;
    let k = n / 2;
    let ie = &s.i_lattices;
    let out = SecondLargest {
        n,
        modular: second(ie.iter().filter(|e| e.modular).map(|e| e.con_i)),
        modular_pseudo_kleene: second(
            ie.iter()
                .filter(|e| e.modular && e.pseudo_kleene)
                .map(|e| e.con_i),
        ),
        kleene: second(ie.iter().filter(|e| e.kleene()).map(|e| e.con_i)),
        bz_modular: second(
            ie.iter()
                .filter(|e| e.modular)
                .filter_map(|e| e.bz.map(|b| b.con_bz)),
        ),
        bz_distributive: second(
            ie.iter()
                .filter(|e| e.distributive)
                .filter_map(|e| e.bz.map(|b| b.con_bz)),
        ),
    };
    let i_expected = k.checked_sub(1).map(|e| 1u64 << e);
    let bz_expected = k.checked_sub(2).map(|e| (1u64 << e) + 1);
    let mut checks: Vec<(&str, Option<u64>, Option<u64>)> = Vec::new();
    if n >= 5 {
        checks.push(("modular", out.modular, i_expected));
        checks.push((
            "modular pseudo-Kleene",
            out.modular_pseudo_kleene,
            i_expected,
        ));
    }
    if n >= 6 {
        checks.push(("Kleene", out.kleene, i_expected));
    }
    if n >= 7 {
        checks.push(("BZ modular", out.bz_modular, bz_expected));
    }
    if n >= 8 {
        checks.push(("BZ distributive", out.bz_distributive, bz_expected));
    }
    for (class, got, want) in checks {
        if got != want {
            return Err(violated(
                NAME,
                n,
                format!("{class}: second largest {got:?}, expected {want:?}"),
            ));
        }
    }
    let mut examples: Vec<(&str, InvolutionLattice)> = Vec::new();
    if n >= 5 && n % 2 == 1 {
        examples.push((
            "chain-padded M3",
            cons::chain_sandwich((n - 3) / 2, &cons::m3())?,
        ));
    }
    if n >= 6 && n % 2 == 0 {
        examples.push(("chain-padded L2×L3", cons::e_n(n)?));
    }
    if n >= 7 && n % 2 == 1 {
        let m = cons::ordinal_sum(
            &cons::chain_lattice((n - 5) / 2)?,
            cons::boolean_cube(2)?.lattice(),
        )?
        .lattice;
        examples.push((
            "chain-padded double square",
            cons::i_ordinal_triple(&m, &cons::chain(1)?)?,
        ));
    }
    for (name, ex) in examples {
        let form = ex.canonical_form();
        let found = ie.iter().find(|e| e.form == form);
        match found {
            Some(e) if Some(e.con_i) == i_expected => {}
            Some(e) => {
                return Err(violated(
                    NAME,
                    n,
                    format!("{name} has |Con_I| = {}, expected {i_expected:?}", e.con_i),
                ))
            }
            None => {
                return Err(violated(
                    NAME,
                    n,
                    format!("{name} is missing from the census"),
                ))
            }
        }
    }
    Ok(out)
}
