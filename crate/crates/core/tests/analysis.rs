use std::collections::BTreeSet;

use uaforge_core::algebra::{quotient, sg_closure, subalgebra, FiniteAlgebra};
use uaforge_core::analysis::{
    all_pass, all_subalgebras, atom_permutation_automorphism, check_amalgamation, check_embedding_rigidity,
    check_epic_subalgebras, check_fixing_automorphisms, class_of, compose, find_isomorphism, homs, hs_classify,
    is_homomorphism, is_isomorphic, iso_representatives, HomKind,
};
use uaforge_core::catalog::{self, PowersetShape};
use uaforge_core::congruence::congruence_lattice;

const HEYTING: [&str; 5] = ["meet", "join", "imp", "zero", "one"];

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn assert_group(alg: &FiniteAlgebra) {
    let auts = homs(alg, alg, HomKind::Bijective).unwrap();
    let id: Vec<usize> = alg.universe().collect();
    assert!(auts.contains(&id));
    for f in &auts.maps {
        for g in &auts.maps {
            assert!(auts.contains(&compose(f, g)));
        }
        assert!(auts.maps.iter().any(|g| compose(f, g) == id));
    }
}

#[test]
fn automorphism_counts() {
    let a3 = catalog::build_an(3).unwrap();
    let b3 = catalog::build_bn(3).unwrap();
    assert_eq!(homs(&a3, &a3, HomKind::Bijective).unwrap().len(), 6);
    assert_eq!(homs(&b3, &b3, HomKind::Bijective).unwrap().len(), 6);
    assert_group(&a3);
    assert_group(&b3);
}

#[test]
fn every_emitted_map_commutes() {
    let a3 = catalog::build_an(3).unwrap();
    let a2 = catalog::build_an(2).unwrap();
    let b3 = catalog::build_bn(3).unwrap();
    for (x, y) in [(&a2, &a3), (&a3, &a2), (&a3, &a3), (&b3, &b3)] {
        let all = homs(x, y, HomKind::All).unwrap();
        let id: Vec<usize> = x.universe().collect();
        if x.size() == y.size() && x == y {
            assert!(all.contains(&id));
        }
        for m in &all.maps {
            assert!(is_homomorphism(x, y, m).unwrap());
        }
        let inj = homs(x, y, HomKind::Injective).unwrap();
        assert!(inj.maps.iter().all(|m| all.contains(m)));
    }
}

#[test]
fn hom_enumeration_matches_brute_force_on_small_algebras() {
    let a1 = catalog::build_an(1).unwrap();
    let a2 = catalog::build_an(2).unwrap();
    for (x, y) in [(&a1, &a2), (&a2, &a1), (&a2, &a2)] {
        let mut brute = Vec::new();
        let mut map = vec![0; x.size()];
        loop {
            if is_homomorphism(x, y, &map).unwrap() {
                brute.push(map.clone());
            }
            let mut i = map.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                map[i] += 1;
                if map[i] < y.size() {
                    break;
                }
                map[i] = 0;
            }
            if map.iter().all(|&v| v == 0) {
                break;
            }
        }
        let found: BTreeSet<Vec<usize>> = homs(x, y, HomKind::All).unwrap().maps.into_iter().collect();
        assert_eq!(found, brute.into_iter().collect());
    }
}

#[test]
fn atom_generated_subalgebra_of_b3() {
    let b3 = catalog::build_bn(3).unwrap();
    let shape = PowersetShape::new(3).unwrap();
    let a = shape.atom(0);
    let sub = sg_closure(&b3, &[a]).unwrap();
    let expected: BTreeSet<usize> = [0, a, 0b110, shape.e(), shape.top()].into_iter().collect();
    assert_eq!(sub.elements.iter().copied().collect::<BTreeSet<_>>(), expected);
    let (c, _) = subalgebra(&b3, &sub).unwrap();
    let reduct = c.reduct(&HEYTING).unwrap();
    let a2 = catalog::build_an(2).unwrap();
    assert!(find_isomorphism(&reduct, &a2).unwrap().is_some());
}

#[test]
fn isomorphism_spot_checks() {
    let a = catalog::build_section2_a();
    let am = catalog::build_a_minus_a4();
    let b = catalog::build_theta_and_b().unwrap().1;
    assert!(is_isomorphic(&a, &a).unwrap());
    assert!(!is_isomorphic(&am, &b).unwrap());
    let a1 = catalog::build_an(1).unwrap();
    let three_chain = congruence_lattice(&a1).unwrap();
    assert_eq!(three_chain.len(), 3);
}

#[test]
fn fsi_members_of_hs_a3() {
    let a3 = catalog::build_an(3).unwrap();
    let hs = hs_classify(&a3).unwrap();
    let fsi: Vec<FiniteAlgebra> = hs.fsi_classes().into_iter().map(|c| hs.classes[c].clone()).collect();
    assert_eq!(fsi.len(), 4);
    for n in 0..=3 {
        let an = catalog::build_an(n).unwrap();
        assert!(class_of(&fsi, &an).unwrap().is_some(), "A{n}");
    }
}

#[test]
fn si_members_of_hs_a() {
    let a = catalog::build_section2_a();
    let am = catalog::build_a_minus_a4();
    let b = catalog::build_theta_and_b().unwrap().1;
    let hs = hs_classify(&a).unwrap();
    let si: Vec<FiniteAlgebra> = hs.si_classes().into_iter().map(|c| hs.classes[c].clone()).collect();
    assert_eq!(si.len(), 3);
    for x in [&a, &am, &b] {
        assert!(class_of(&si, x).unwrap().is_some(), "{}", x.name());
    }
}

#[test]
fn fsi_members_of_hs_b3_are_its_subalgebras() {
    let b3 = catalog::build_bn(3).unwrap();
    let hs = hs_classify(&b3).unwrap();
    let fsi: Vec<FiniteAlgebra> = hs.fsi_classes().into_iter().map(|c| hs.classes[c].clone()).collect();
    let is_b3 = iso_representatives(all_subalgebras(&b3).unwrap().into_iter().map(|(s, _)| s)).unwrap();
    assert_eq!(fsi.len(), is_b3.len());
    for s in &is_b3 {
        assert!(class_of(&fsi, s).unwrap().is_some());
    }
}

#[test]
fn congruences_ignore_the_new_symbols_on_b3_subalgebras() {
    let b3 = catalog::build_bn(3).unwrap();
    for (c, _) in all_subalgebras(&b3).unwrap() {
        let full = congruence_lattice(&c).unwrap();
        let reduct = congruence_lattice(&c.reduct(&HEYTING).unwrap()).unwrap();
        assert_eq!(full.congruences, reduct.congruences);
    }
}

#[test]
fn b3_structure_checks() {
    let b3 = catalog::build_bn(3).unwrap();
    let shape = PowersetShape::new(3).unwrap();
    assert!(all_pass(&check_embedding_rigidity(&b3).unwrap()));
    assert!(all_pass(&check_fixing_automorphisms(&b3, &[shape.e()]).unwrap()));
    let epic = check_epic_subalgebras(&b3).unwrap();
    assert!(!epic.is_empty());
    assert!(all_pass(&epic), "{epic:?}");
}

#[test]
fn b3_family_amalgamates() {
    let b3 = catalog::build_bn(3).unwrap();
    let mut members = iso_representatives(all_subalgebras(&b3).unwrap().into_iter().map(|(s, _)| s)).unwrap();
    members.push(FiniteAlgebra::trivial(b3.signature().clone()));
    let report = check_amalgamation(&members).unwrap();
    assert!(!report.is_empty());
    assert!(all_pass(&report));
}

#[test]
fn atom_permutations_of_a3() {
    let a3 = catalog::build_an(3).unwrap();
    let shape = PowersetShape::new(3).unwrap();
    let id = atom_permutation_automorphism(&a3, &[0, 1, 2]).unwrap();
    assert_eq!(id.map, a3.universe().collect::<Vec<_>>());
    let swap = atom_permutation_automorphism(&a3, &[1, 0, 2]).unwrap();
    assert!(swap.automorphism);
    for fixed in [0, shape.e(), shape.top()] {
        assert_eq!(swap.map[fixed], fixed);
    }
    for sigma in permutations(3) {
        assert!(atom_permutation_automorphism(&a3, &sigma).unwrap().automorphism);
    }
    assert!(atom_permutation_automorphism(&a3, &[0, 0, 1]).is_err());
}

#[test]
fn atom_swap_breaks_the_expansion() {
    let b3 = catalog::build_bn(3).unwrap();
    let shape = PowersetShape::new(3).unwrap();
    let (c, _) = subalgebra(&b3, &sg_closure(&b3, &[shape.atom(0)]).unwrap()).unwrap();
    let reduct = c.reduct(&HEYTING).unwrap();
    assert!(atom_permutation_automorphism(&reduct, &[1, 0]).unwrap().automorphism);
    assert!(!atom_permutation_automorphism(&c, &[1, 0]).unwrap().automorphism);
}

#[test]
fn quotient_maps_are_surjective_homomorphisms() {
    let am = catalog::build_a_minus_a4();
    let a3 = catalog::build_an(3).unwrap();
    for alg in [&am, &a3] {
        for theta in congruence_lattice(alg).unwrap().congruences {
            let q = quotient(alg, &theta).unwrap();
            let map = theta.block_index();
            assert!(is_homomorphism(alg, &q, &map).unwrap());
            assert_eq!(map.iter().copied().collect::<BTreeSet<_>>().len(), q.size());
        }
    }
}
