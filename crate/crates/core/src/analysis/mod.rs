//! Homomorphisms, isomorphism classes and the structural checks built on them.

mod checks;
mod classify;
mod hom;

pub use checks::{
    all_pass, atom_permutation_automorphism, check_amalgamation, check_embedding_rigidity,
    check_epic_subalgebras, check_fixing_automorphisms, AtomPermutation, ReportEntry, Status,
};
pub use classify::{all_subalgebras, class_of, hs_classify, iso_representatives, HsClassification, HsMember};
pub use hom::{
    compose, find_isomorphism, generating_set, homomorphism_violation, homs, is_homomorphism,
    is_isomorphic, HomKind, HomSet, HOM_GUARD,
};
