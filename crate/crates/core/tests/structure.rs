use proptest::prelude::*;
use uaforge_core::algebra::{all_subuniverses, quotient, sg_closure, FiniteAlgebra, Signature};
use uaforge_core::analysis::{homs, is_homomorphism, HomKind};
use uaforge_core::congruence::{congruence_lattice, is_congruence, principal_congruence, Partition};
use uaforge_core::Elem;

/// Random algebra with one unary and one binary operation.
fn arb_algebra(max: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(0..n, n),
            proptest::collection::vec(0..n, n * n),
        )
            .prop_map(move |(u, b)| {
                let sig = Signature::new([("u", 1), ("b", 2)]).unwrap();
                FiniteAlgebra::new("R", sig, n, vec![u, b]).unwrap()
            })
    })
}

fn closed(alg: &FiniteAlgebra, set: &[Elem]) -> bool {
    let has = |e: Elem| set.contains(&e);
    set.iter().all(|&a| has(alg.apply1(0, a)) && set.iter().all(|&b| has(alg.apply2(1, a, b))))
}

/// All partitions of `0..n`, by restricted growth strings.
fn all_partitions(n: usize) -> Vec<Partition> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            let mut first = Vec::new();
            let pairs: Vec<(Elem, Elem)> = prefix
                .iter()
                .enumerate()
                .map(|(i, &blk)| {
                    if blk == first.len() {
                        first.push(i);
                    }
                    (i, first[blk])
                })
                .collect();
            out.push(Partition::from_pairs(n, &pairs).unwrap());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for blk in 0..=next {
            prefix.push(blk);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

#[test]
fn partition_enumeration_matches_bell_numbers() {
    let counts: Vec<usize> = (1..=5).map(|n| all_partitions(n).len()).collect();
    assert_eq!(counts, [1, 2, 5, 15, 52]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sg_is_a_closure_operator(alg in arb_algebra(6), gens in proptest::collection::vec(0usize..6, 0..4)) {
        let gens: Vec<Elem> = gens.into_iter().map(|g| g % alg.size()).collect();
        let s = sg_closure(&alg, &gens).unwrap();
        prop_assert!(gens.iter().all(|&g| s.contains(g)));
        prop_assert!(closed(&alg, &s.elements));
        prop_assert_eq!(&sg_closure(&alg, &s.elements).unwrap(), &s);
        let bigger = sg_closure(&alg, &[gens.as_slice(), &[0]].concat()).unwrap();
        prop_assert!(s.is_subset(&bigger));
    }

    #[test]
    fn subuniverses_match_brute_force(alg in arb_algebra(5)) {
        let n = alg.size();
        let mut expected: Vec<Vec<Elem>> = (1u32..1 << n)
            .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|set| closed(&alg, set))
            .collect();
        let mut got: Vec<Vec<Elem>> = all_subuniverses(&alg).unwrap().into_iter().map(|s| s.elements).collect();
        expected.sort();
        got.sort();
        prop_assert_eq!(&got, &expected);
        for a in &got {
            for b in &got {
                let meet: Vec<Elem> = a.iter().copied().filter(|e| b.contains(e)).collect();
                prop_assert!(meet.is_empty() || got.contains(&meet));
            }
        }
    }

    #[test]
    fn congruences_match_brute_force(alg in arb_algebra(5)) {
        let lat = congruence_lattice(&alg).unwrap();
        let mut expected: Vec<Partition> = all_partitions(alg.size())
            .into_iter()
            .filter(|p| is_congruence(&alg, p).unwrap())
            .collect();
        let mut got = lat.congruences.clone();
        expected.sort_by(|a, b| a.reps().cmp(b.reps()));
        got.sort_by(|a, b| a.reps().cmp(b.reps()));
        prop_assert_eq!(&got, &expected);
        prop_assert!(lat.is_closed());
    }

    #[test]
    fn principal_congruence_is_least(alg in arb_algebra(5), a in 0usize..5, b in 0usize..5) {
        let (a, b) = (a % alg.size(), b % alg.size());
        let p = principal_congruence(&alg, a, b).unwrap();
        prop_assert!(p.related(a, b));
        prop_assert!(is_congruence(&alg, &p).unwrap());
        for q in congruence_lattice(&alg).unwrap().congruences.iter().filter(|q| q.related(a, b)) {
            prop_assert!(p.leq(q));
        }
    }

    #[test]
    fn quotient_map_is_a_homomorphism(alg in arb_algebra(5), a in 0usize..5, b in 0usize..5) {
        let (a, b) = (a % alg.size(), b % alg.size());
        let theta = principal_congruence(&alg, a, b).unwrap();
        let q = quotient(&alg, &theta).unwrap();
        prop_assert_eq!(q.size(), theta.num_blocks());
        let index = theta.block_index();
        prop_assert!(is_homomorphism(&alg, &q, &index).unwrap());
    }

    #[test]
    fn homs_match_brute_force(a in arb_algebra(3), b in arb_algebra(3)) {
        let (m, n) = (a.size(), b.size());
        let mut expected = Vec::new();
        for code in 0..n.pow(m as u32) {
            let map: Vec<Elem> = (0..m).map(|i| code / n.pow(i as u32) % n).collect();
            if is_homomorphism(&a, &b, &map).unwrap() {
                expected.push(map);
            }
        }
        let mut got = homs(&a, &b, HomKind::All).unwrap().maps;
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }
}
