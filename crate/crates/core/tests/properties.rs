use std::sync::OnceLock;

use latcon::census::{enumerate_i_lattices, DEFAULT_CAP};
use latcon::congruence::{all_congruences, i_congruences, is_congruence, prime_of, quotient};
use latcon::involution::InvolutionLattice;
use latcon::partition::{partition_join_in_eq, partition_meet, Partition};
use proptest::prelude::*;

fn pool() -> &'static [InvolutionLattice] {
    static POOL: OnceLock<Vec<InvolutionLattice>> = OnceLock::new();
    POOL.get_or_init(|| {
        (1..=7)
            .flat_map(|n| enumerate_i_lattices(n, DEFAULT_CAP).unwrap())
            .collect()
    })
}

fn partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n, n).prop_map(move |v| {
        let mut ids = vec![0u8; n];
        for x in 0..n {
            ids[x] = (0..n).find(|&y| v[y] == v[x]).unwrap() as u8;
        }
        Partition::from_class_ids(ids).unwrap()
    })
}

fn three(n: usize) -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (partition(n), partition(n), partition(n))
}

#[test]
fn eq4_has_fifteen_partitions() {
    let mut seen = std::collections::HashSet::new();
    for code in 0..4usize.pow(4) {
        let v: Vec<usize> = (0..4).map(|i| code / 4usize.pow(i) % 4).collect();
        let ids = (0..4)
            .map(|x| (0..4).find(|&y| v[y] == v[x]).unwrap() as u8)
            .collect();
        seen.insert(Partition::from_class_ids(ids).unwrap());
    }
    assert_eq!(seen.len(), 15);
}

proptest! {
    #[test]
    fn partition_lattice_laws((p, q, r) in (1usize..=8).prop_flat_map(three)) {
        prop_assert_eq!(p.meet(&q), q.meet(&p));
        prop_assert_eq!(p.join(&q), q.join(&p));
        prop_assert_eq!(p.meet(&q.meet(&r)), p.meet(&q).meet(&r));
        prop_assert_eq!(p.join(&q.join(&r)), p.join(&q).join(&r));
        prop_assert_eq!(p.meet(&p.join(&q)), p.clone());
        prop_assert_eq!(p.join(&p.meet(&q)), p.clone());
        prop_assert!(p.meet(&q).refines(&p) && p.refines(&p.join(&q)));
        prop_assert_eq!(partition_meet(&p, &q).unwrap(), p.meet(&q));
        prop_assert_eq!(partition_join_in_eq(&p, &q).unwrap(), p.join(&q));
    }

    #[test]
    fn prime_is_an_involution_on_con(i in 0usize..64, j in 0usize..1024) {
        let il = &pool()[i % pool().len()];
        let con = all_congruences(il.lattice());
        let theta = &con.members()[j % con.len()];
        let p = prime_of(theta, il);
        prop_assert!(con.contains(&p));
        prop_assert_eq!(&prime_of(&p, il), theta);
        let ci = i_congruences(il).unwrap();
        prop_assert!(ci.contains(&theta.join(&p)) && ci.contains(&theta.meet(&p)));
    }

    #[test]
    fn quotients_are_lattices_with_matching_congruences(i in 0usize..64, j in 0usize..1024) {
        let il = &pool()[i % pool().len()];
        let l = il.lattice();
        let con = all_congruences(l);
        let theta = &con.members()[j % con.len()];
        prop_assert!(is_congruence(l, theta));
        let q = quotient(l, theta).unwrap();
        prop_assert_eq!(q.len(), theta.num_classes());
        let above = con.iter().filter(|p| theta.refines(p)).count();
        prop_assert_eq!(all_congruences(&q).len(), above);
    }

    #[test]
    fn isomorphism_survives_renumbering(
        (i, perm) in (0usize..64).prop_flat_map(|i| {
            let n = pool()[i % pool().len()].len();
            (Just(i), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        })
    ) {
        let il = &pool()[i % pool().len()];
        let moved = il.permuted(&perm);
        prop_assert_eq!(moved.canonical_form(), il.canonical_form());
        let iso = il.is_isomorphic(&moved).unwrap();
        for x in 0..il.len() {
            prop_assert_eq!(moved.inv(iso[x]), iso[il.inv(x)]);
        }
    }
}
