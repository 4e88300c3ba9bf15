//! Ordinal sums, horizontal sums, products, and the named structures.
//!
//! Sums number their elements summand by summand, each summand bottom to
//! top along a fixed linear extension (fewest elements below first, ties by
//! index); an identified element keeps the index it got in the earlier
//! summand. Products number `(x, y)` as `x * |M| + y`.

use std::collections::HashSet;

use thiserror::Error;

use crate::bits;
use crate::involution::{InvolutionError, InvolutionLattice};
use crate::lattice::{FiniteLattice, LatticeError, MAX_ELEMENTS};
use crate::partition::{Partition, UnionFind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("horizontal sums need non-trivial summands")]
    TrivialSummand,
    #[error("the horizontal sum of equivalences is undefined when a summand is ∇")]
    ForbiddenTop,
    #[error("partition has {got} elements, summand has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("unknown structure {0:?}")]
    UnknownName(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
}

/// A binary sum with the embeddings of both summands.
#[derive(Clone, Debug)]
pub struct Sum {
    pub lattice: FiniteLattice,
    /// `left[x]`: index in the sum of element `x` of the first summand.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// The same, with involutions glued summand-wise.
#[derive(Clone, Debug)]
pub struct ISum {
    pub lattice: InvolutionLattice,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

fn linear_extension(l: &FiniteLattice) -> Vec<usize> {
    let mut order: Vec<usize> = (0..l.len()).collect();
    order.sort_by_key(|&x| (l.down_set(x).count_ones(), x));
    order
}

fn check_size(n: usize) -> Result<(), ConstructionError> {
    if n > MAX_ELEMENTS {
        return Err(LatticeError::TooLarge(n).into());
    }
    Ok(())
}

fn merge_labels(n: usize, parts: &[(&FiniteLattice, &[usize])]) -> Option<Vec<String>> {
    let mut out: Vec<Option<String>> = vec![None; n];
    for (l, map) in parts {
        let labels = l.labels()?;
        for (x, &t) in map.iter().enumerate() {
            if out[t].is_none() {
                out[t] = Some(labels[x].clone());
            }
        }
    }
    let out: Vec<String> = out.into_iter().collect::<Option<_>>()?;
    let unique: HashSet<&String> = out.iter().collect();
    (unique.len() == n).then_some(out)
}

fn assemble(
    n: usize,
    edges: Vec<(usize, usize)>,
    parts: &[(&FiniteLattice, &[usize])],
) -> Result<FiniteLattice, ConstructionError> {
    let lat = FiniteLattice::from_edges(n, &edges)?;
    Ok(match merge_labels(n, parts) {
        Some(labels) => lat.with_labels(labels)?,
        None => lat,
    })
}

/// `L ⊕ M`: `M` stacked on `L`, identifying `1^L = 0^M`.
pub fn ordinal_sum(l: &FiniteLattice, m: &FiniteLattice) -> Result<Sum, ConstructionError> {
    let n = l.len() + m.len() - 1;
    check_size(n)?;
    let mut left = vec![0usize; l.len()];
    for (i, &x) in linear_extension(l).iter().enumerate() {
        left[x] = i;
    }
    let mut right = vec![0usize; m.len()];
    right[m.bottom()] = left[l.top()];
    let mut next = l.len();
    for &y in &linear_extension(m) {
        if y != m.bottom() {
            right[y] = next;
            next += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = l
        .covers()
        .into_iter()
        .map(|(a, b)| (left[a], left[b]))
        .collect();
    edges.extend(m.covers().into_iter().map(|(a, b)| (right[a], right[b])));
    let lattice = assemble(n, edges, &[(l, &left), (m, &right)])?;
    Ok(Sum {
        lattice,
        left,
        right,
    })
}

/// `L ⊞ M`: bottoms and tops identified.
pub fn horizontal_sum(l: &FiniteLattice, m: &FiniteLattice) -> Result<Sum, ConstructionError> {
    if l.is_trivial() || m.is_trivial() {
        return Err(ConstructionError::TrivialSummand);
    }
    let n = l.len() + m.len() - 2;
    check_size(n)?;
    let mut left = vec![0usize; l.len()];
    for (i, &x) in linear_extension(l).iter().enumerate() {
        left[x] = i;
    }
    let mut right = vec![0usize; m.len()];
    right[m.bottom()] = left[l.bottom()];
    right[m.top()] = left[l.top()];
    let mut next = l.len();
    for &y in &linear_extension(m) {
        if y != m.bottom() && y != m.top() {
            right[y] = next;
            next += 1;
        }
    }
    let mut edges: Vec<(usize, usize)> = l
        .covers()
        .into_iter()
        .map(|(a, b)| (left[a], left[b]))
        .collect();
    edges.extend(m.covers().into_iter().map(|(a, b)| (right[a], right[b])));
    let lattice = assemble(n, edges, &[(l, &left), (m, &right)])?;
    Ok(Sum {
        lattice,
        left,
        right,
    })
}

/// `L × M` with the componentwise order.
pub fn direct_product(
    l: &FiniteLattice,
    m: &FiniteLattice,
) -> Result<FiniteLattice, ConstructionError> {
    let (p, q) = (l.len(), m.len());
    let n = p * q;
    check_size(n)?;
    let mut edges = Vec::new();
    for x in 0..p {
        for y in 0..q {
            for x2 in bits::iter(l.upper_covers(x)) {
                edges.push((x * q + y, x2 * q + y));
            }
            for y2 in bits::iter(m.upper_covers(y)) {
                edges.push((x * q + y, x * q + y2));
            }
        }
    }
    let lat = FiniteLattice::from_edges(n, &edges)?;
    match (l.labels(), m.labels()) {
        (Some(a), Some(b)) => {
            let labels = (0..n).map(|i| format!("({},{})", a[i / q], b[i % q]));
            Ok(lat.with_labels(labels)?)
        }
        _ => Ok(lat),
    }
}

/// `A ⊞ B` with `x′` taken in the summand containing `x`.
pub fn i_horizontal_sum(
    a: &InvolutionLattice,
    b: &InvolutionLattice,
) -> Result<ISum, ConstructionError> {
    let s = horizontal_sum(a.lattice(), b.lattice())?;
    let mut inv = vec![0usize; s.lattice.len()];
    for x in 0..a.len() {
        inv[s.left[x]] = s.left[a.inv(x)];
    }
    for y in 0..b.len() {
        inv[s.right[y]] = s.right[b.inv(y)];
    }
    let lattice = InvolutionLattice::attach(s.lattice, inv)?;
    Ok(ISum {
        lattice,
        left: s.left,
        right: s.right,
    })
}

/// `K_1 ⊞ ... ⊞ K_t`, left to right.
pub fn i_horizontal_sum_all(
    parts: &[InvolutionLattice],
) -> Result<InvolutionLattice, ConstructionError> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| ConstructionError::BadParameter("empty horizontal sum".into()))?;
    let mut acc = first.clone();
    for p in rest {
        acc = i_horizontal_sum(&acc, p)?.lattice;
    }
    Ok(acc)
}

/// `A × B` with the componentwise involution.
pub fn i_direct_product(
    a: &InvolutionLattice,
    b: &InvolutionLattice,
) -> Result<InvolutionLattice, ConstructionError> {
    let lat = direct_product(a.lattice(), b.lattice())?;
    let q = b.len();
    let inv = (0..lat.len())
        .map(|i| a.inv(i / q) * q + b.inv(i % q))
        .collect();
    Ok(InvolutionLattice::attach(lat, inv)?)
}

/// `M ⊕ K ⊕ M^d`, the involution exchanging each `x ∈ M` with its copy
/// in `M^d` and acting as `′` on `K`.
pub fn i_ordinal_triple(
    m: &FiniteLattice,
    k: &InvolutionLattice,
) -> Result<InvolutionLattice, ConstructionError> {
    let m = m.clone().without_labels();
    let k_lat = k.lattice().clone().without_labels();
    let s1 = ordinal_sum(&m, &k_lat)?;
    let s2 = ordinal_sum(&s1.lattice, &m.dual())?;
    let m_map: Vec<usize> = s1.left.iter().map(|&x| s2.left[x]).collect();
    let k_map: Vec<usize> = s1.right.iter().map(|&x| s2.left[x]).collect();
    let md_map = s2.right;
    let mut inv = vec![0usize; s2.lattice.len()];
    for x in 0..m.len() {
        inv[m_map[x]] = md_map[x];
        inv[md_map[x]] = m_map[x];
    }
    for y in 0..k.len() {
        inv[k_map[y]] = k_map[k.inv(y)];
    }
    Ok(InvolutionLattice::attach(s2.lattice, inv)?)
}

/// `α ⊕ β` on `L ⊕ M`.
pub fn cong_ordinal_sum(
    sum: &Sum,
    alpha: &Partition,
    beta: &Partition,
) -> Result<Partition, ConstructionError> {
    glue(sum, alpha, beta)
}

/// `δ ⊞ ε` on `L ⊞ M`, for `δ ≠ ∇_L` and `ε ≠ ∇_M`.
pub fn cong_horizontal_sum(
    sum: &Sum,
    delta: &Partition,
    eps: &Partition,
) -> Result<Partition, ConstructionError> {
    if delta.is_indiscrete() || eps.is_indiscrete() {
        return Err(ConstructionError::ForbiddenTop);
    }
    glue(sum, delta, eps)
}

fn glue(sum: &Sum, a: &Partition, b: &Partition) -> Result<Partition, ConstructionError> {
    for (p, map) in [(a, &sum.left), (b, &sum.right)] {
        if p.len() != map.len() {
            return Err(ConstructionError::SizeMismatch {
                expected: map.len(),
                got: p.len(),
            });
        }
    }
    let mut uf = UnionFind::new(sum.lattice.len());
    for x in 0..a.len() {
        uf.union(sum.left[x], sum.left[a.class_of(x)]);
    }
    for y in 0..b.len() {
        uf.union(sum.right[y], sum.right[b.class_of(y)]);
    }
    Ok(uf.into_partition())
}

/// `α × β` on `L × M` (numbered as in [`direct_product`]).
pub fn cong_product(alpha: &Partition, beta: &Partition) -> Partition {
    let q = beta.len();
    let n = alpha.len() * q;
    let class = (0..n)
        .map(|i| (alpha.class_of(i / q) * q + beta.class_of(i % q)) as u8)
        .collect();
    Partition::from_class_ids(class).expect("product of canonical partitions is canonical")
}

pub fn chain_lattice(n: usize) -> Result<FiniteLattice, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParameter(
            "chains need at least one element".into(),
        ));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(FiniteLattice::from_edges(n, &edges)?)
}

/// `L_n` with its unique involution.
pub fn chain(n: usize) -> Result<InvolutionLattice, ConstructionError> {
    let l = chain_lattice(n)?;
    Ok(InvolutionLattice::attach(l, (0..n).rev().collect())?)
}

/// `L_2^k` with the Boolean complement; element `s` is the subset with bitmask `s`.
pub fn boolean_cube(k: usize) -> Result<InvolutionLattice, ConstructionError> {
    if k > 6 {
        return Err(ConstructionError::BadParameter(format!(
            "cube dimension {k} exceeds 6"
        )));
    }
    let n = 1usize << k;
    let up = (0..n as u64)
        .map(|s| {
            (0..n as u64)
                .filter(|&t| t & s == s)
                .fold(0u64, |m, t| m | bits::bit(t as usize))
        })
        .collect();
    let lat = FiniteLattice::from_up_sets(up)?;
    Ok(InvolutionLattice::attach(
        lat,
        (0..n).map(|s| (n - 1) ^ s).collect(),
    )?)
}

fn labelled(labels: &[&str], edges: &[(usize, usize)], inv: &[usize]) -> InvolutionLattice {
    let lat = FiniteLattice::from_edges(labels.len(), edges)
        .and_then(|l| l.with_labels(labels.iter().copied()))
        .expect("catalog lattice");
    InvolutionLattice::attach(lat, inv.to_vec()).expect("catalog involution")
}

/// `M_3 = L_3 ⊞ L_2²`: `a` fixed, `b ↔ b′`.
pub fn m3() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "b'", "1"],
        &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        &[4, 1, 3, 2, 0],
    )
}

/// `N_5 = L_3 ⊞ L_4`.
pub fn n5() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "b'", "1"],
        &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4)],
        &[4, 1, 3, 2, 0],
    )
}

/// The benzene ring: chains `0 < a < b′ < 1` and `0 < b < a′ < 1`.
pub fn b6() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "a'", "b'", "1"],
        &[(0, 1), (1, 4), (4, 5), (0, 2), (2, 3), (3, 5)],
        &[5, 3, 4, 1, 2, 0],
    )
}

/// `L_3 ⊞ L_3`: both atoms fixed.
pub fn l3_hsum_l3() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "1"],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
        &[3, 1, 2, 0],
    )
}

/// `L_4 ⊞ L_4`: chains `0 < a < a′ < 1` and `0 < b < b′ < 1`.
pub fn l4_hsum_l4() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "a'", "b'", "1"],
        &[(0, 1), (1, 3), (3, 5), (0, 2), (2, 4), (4, 5)],
        &[5, 3, 4, 1, 2, 0],
    )
}

/// `L_3 ⊞ L_5`.
pub fn l3_hsum_l5() -> InvolutionLattice {
    labelled(
        &["0", "a", "b", "c", "b'", "1"],
        &[(0, 1), (1, 5), (0, 2), (2, 3), (3, 4), (4, 5)],
        &[5, 1, 4, 3, 2, 0],
    )
}

/// `L_3 ⊞ (L_2 × L_3)`.
pub fn l3_hsum_l2xl3() -> InvolutionLattice {
    let prod = i_direct_product(&chain(2).unwrap(), &chain(3).unwrap()).unwrap();
    i_horizontal_sum(&chain(3).unwrap(), &prod).unwrap().lattice
}

/// `L_2 × L_3` with the product involution.
pub fn l2_times_l3() -> InvolutionLattice {
    i_direct_product(&chain(2).unwrap(), &chain(3).unwrap()).unwrap()
}

/// `L_4 × L_5`.
pub fn l4_times_l5() -> InvolutionLattice {
    i_direct_product(&chain(4).unwrap(), &chain(5).unwrap()).unwrap()
}

/// `L_2² ⊕ L_2 ⊕ L_2²`, Boolean halves exchanged by the involution.
pub fn paper_m() -> InvolutionLattice {
    i_ordinal_triple(boolean_cube(2).unwrap().lattice(), &chain(2).unwrap()).unwrap()
}

/// `L_4 ⊞ L_4 ⊞ L_4`.
pub fn paper_h() -> InvolutionLattice {
    let c = chain(4).unwrap();
    i_horizontal_sum_all(&[c.clone(), c.clone(), c]).unwrap()
}

/// `(M_3 ⊞ L_4) ⊕ L_2³ ⊕ (M_3 ⊞ L_4)`, 20 elements.
pub fn paper_l() -> InvolutionLattice {
    let side = horizontal_sum(m3().lattice(), &chain_lattice(4).unwrap())
        .unwrap()
        .lattice;
    i_ordinal_triple(&side, &boolean_cube(3).unwrap()).unwrap()
}

fn even_at_least(n: usize, min: usize, name: &str) -> Result<(), ConstructionError> {
    if n % 2 != 0 || n < min {
        return Err(ConstructionError::BadParameter(format!(
            "{name} needs an even size of at least {min}, got {n}"
        )));
    }
    Ok(())
}

/// `E_n = L_{n/2−2} ⊕ (L_2 × L_3) ⊕ L_{n/2−2}`, `n` even, `n ≥ 6`.
pub fn e_n(n: usize) -> Result<InvolutionLattice, ConstructionError> {
    even_at_least(n, 6, "E_n")?;
    i_ordinal_triple(&chain_lattice(n / 2 - 2)?, &l2_times_l3())
}

/// `E_{k,n} = L_{n/2−k/2−2} ⊕ L_2² ⊕ L_k ⊕ L_2² ⊕ L_{n/2−k/2−2}`, with
/// `k` even, `2 ≤ k ≤ n − 6`.
pub fn e_kn(k: usize, n: usize) -> Result<InvolutionLattice, ConstructionError> {
    even_at_least(n, 8, "E_{k,n}")?;
    if k % 2 != 0 || k < 2 || k + 6 > n {
        return Err(ConstructionError::BadParameter(format!(
            "E_{{k,n}} needs k even with 2 ≤ k ≤ n − 6, got k = {k}, n = {n}"
        )));
    }
    let bottom = ordinal_sum(
        &chain_lattice(n / 2 - k / 2 - 2)?,
        boolean_cube(2)?.lattice(),
    )?
    .lattice;
    let m = ordinal_sum(&bottom, &chain_lattice(k / 2)?)?.lattice;
    i_ordinal_triple(&m, &chain(2)?)
}

/// `F_n = L_{n/2−2} ⊕ B_6 ⊕ L_{n/2−2}`, `n` even, `n ≥ 6`.
pub fn f_n(n: usize) -> Result<InvolutionLattice, ConstructionError> {
    even_at_least(n, 6, "F_n")?;
    i_ordinal_triple(&chain_lattice(n / 2 - 2)?, &b6())
}

/// `G_n = L_{n/2−3} ⊕ H ⊕ L_{n/2−3}`, `n` even, `n ≥ 8`.
pub fn g_n(n: usize) -> Result<InvolutionLattice, ConstructionError> {
    even_at_least(n, 8, "G_n")?;
    i_ordinal_triple(&chain_lattice(n / 2 - 3)?, &paper_h())
}

/// Chain sandwich `L_k ⊕ K ⊕ L_k` as an i-lattice.
pub fn chain_sandwich(
    k: usize,
    middle: &InvolutionLattice,
) -> Result<InvolutionLattice, ConstructionError> {
    i_ordinal_triple(&chain_lattice(k)?, middle)
}

/// `L_a ⊕ M ⊕ L_b` as a plain lattice.
pub fn chain_padded(
    a: usize,
    middle: &FiniteLattice,
    b: usize,
) -> Result<FiniteLattice, ConstructionError> {
    let lower = ordinal_sum(&chain_lattice(a)?, middle)?.lattice;
    Ok(ordinal_sum(&lower, &chain_lattice(b)?)?.lattice)
}

/// A row of the worked-example table.
#[derive(Clone, Debug)]
pub struct ExampleRow {
    pub name: String,
    pub structure: InvolutionLattice,
    /// Expected `|Con|`, when the table gives it.
    pub con: Option<u64>,
    pub con_i: u64,
}

/// The worked examples with their expected congruence counts, followed by
/// the parametric families at a few sizes.
pub fn paper_examples() -> Vec<ExampleRow> {
    let row = |name: &str, s: InvolutionLattice, con: Option<u64>, con_i: u64| ExampleRow {
        name: name.to_string(),
        structure: s,
        con,
        con_i,
    };
    let mut rows = vec![
        row("L2xL3", l2_times_l3(), Some(8), 4),
        row("B6", b6(), Some(7), 5),
        row("M", paper_m(), Some(32), 8),
        row("H", paper_h(), Some(9), 9),
        row("L4xL5", l4_times_l5(), Some(128), 16),
        row("L", paper_l(), Some(72), 24),
    ];
    for n in [6usize, 8, 10, 12] {
        rows.push(row(
            &format!("E_{n}"),
            e_n(n).unwrap(),
            None,
            1 << (n / 2 - 1),
        ));
        rows.push(row(
            &format!("F_{n}"),
            f_n(n).unwrap(),
            None,
            5 << (n / 2 - 3),
        ));
        if n >= 8 {
            rows.push(row(
                &format!("G_{n}"),
                g_n(n).unwrap(),
                None,
                9 << (n / 2 - 4),
            ));
            for k in (2..=n - 6).step_by(2) {
                rows.push(row(
                    &format!("E_{k},{n}"),
                    e_kn(k, n).unwrap(),
                    None,
                    1 << (n / 2 - 1),
                ));
            }
        }
    }
    rows
}

/// Looks up a catalog entry by name, with numeric parameters where needed.
pub fn catalog(name: &str, params: &[usize]) -> Result<InvolutionLattice, ConstructionError> {
    let want = |k: usize| -> Result<(), ConstructionError> {
        if params.len() != k {
            return Err(ConstructionError::BadParameter(format!(
                "{name} takes {k} parameter(s), got {}",
                params.len()
            )));
        }
        Ok(())
    };
    let key = name.to_ascii_lowercase();
    match key.as_str() {
        "chain" => {
            want(1)?;
            chain(params[0])
        }
        "boolean" | "cube" => {
            want(1)?;
            boolean_cube(params[0])
        }
        "e" | "e_n" => {
            want(1)?;
            e_n(params[0])
        }
        "ekn" | "e_kn" => {
            want(2)?;
            e_kn(params[0], params[1])
        }
        "f" | "f_n" => {
            want(1)?;
            f_n(params[0])
        }
        "g" | "g_n" => {
            want(1)?;
            g_n(params[0])
        }
        _ => {
            want(0)?;
            match key.as_str() {
                "m3" => Ok(m3()),
                "n5" => Ok(n5()),
                "b6" => Ok(b6()),
                "l3+l3" | "l3hl3" => Ok(l3_hsum_l3()),
                "l4+l4" | "l4hl4" => Ok(l4_hsum_l4()),
                "l3+l5" | "l3hl5" => Ok(l3_hsum_l5()),
                "l3+l2xl3" | "l3hl2xl3" => Ok(l3_hsum_l2xl3()),
                "l2xl3" => Ok(l2_times_l3()),
                "l4xl5" => Ok(l4_times_l5()),
                "m" => Ok(paper_m()),
                "h" => Ok(paper_h()),
                "l" => Ok(paper_l()),
                _ => Err(ConstructionError::UnknownName(name.to_string())),
            }
        }
    }
}

/// Names accepted by [`catalog`], with their parameters.
pub const CATALOG_NAMES: &[&str] = &[
    "chain N",
    "boolean K",
    "M3",
    "N5",
    "B6",
    "L3hL3",
    "L4hL4",
    "L3hL5",
    "L3hL2xL3",
    "L2xL3",
    "L4xL5",
    "M",
    "H",
    "L",
    "E N",
    "EKN K N",
    "F N",
    "G N",
];
