//! Homomorphic images of subalgebras, bucketed into isomorphism classes.

use rayon::prelude::*;

use super::hom::find_isomorphism;
use crate::algebra::{all_subuniverses, quotient, subalgebra, Elem, FiniteAlgebra};
use crate::congruence::{congruence_lattice, Partition};
use crate::error::Result;

/// One member `S/θ` of `HS(A)`.
#[derive(Debug, Clone)]
pub struct HsMember {
    /// Universe of `S`, as elements of `A`.
    pub subuniverse: Vec<Elem>,
    /// Congruence of the subalgebra on `subuniverse` (dense indices).
    pub congruence: Partition,
    pub algebra: FiniteAlgebra,
    pub si: bool,
    pub fsi: bool,
    /// Index into [`HsClassification::classes`].
    pub class: usize,
}

#[derive(Debug, Clone)]
pub struct HsClassification {
    pub members: Vec<HsMember>,
    /// One representative per isomorphism class, in order of first appearance.
    pub classes: Vec<FiniteAlgebra>,
}

impl HsClassification {
    fn classes_where(&self, pred: impl Fn(&HsMember) -> bool) -> Vec<usize> {
        let mut out: Vec<usize> = self.members.iter().filter(|m| pred(m)).map(|m| m.class).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Classes containing a finitely subdirectly irreducible member.
    pub fn fsi_classes(&self) -> Vec<usize> {
        self.classes_where(|m| m.fsi)
    }

    pub fn si_classes(&self) -> Vec<usize> {
        self.classes_where(|m| m.si)
    }
}

/// Index of the class of `alg` among `reps`, if any.
pub fn class_of(reps: &[FiniteAlgebra], alg: &FiniteAlgebra) -> Result<Option<usize>> {
    for (i, r) in reps.iter().enumerate() {
        if find_isomorphism(r, alg)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Deduplicates up to isomorphism, keeping the first of each class.
pub fn iso_representatives(algs: impl IntoIterator<Item = FiniteAlgebra>) -> Result<Vec<FiniteAlgebra>> {
    let mut reps: Vec<FiniteAlgebra> = Vec::new();
    for a in algs {
        if class_of(&reps, &a)?.is_none() {
            reps.push(a);
        }
    }
    Ok(reps)
}

/// Every subalgebra of `alg`, in the order of [`all_subuniverses`].
pub fn all_subalgebras(alg: &FiniteAlgebra) -> Result<Vec<(FiniteAlgebra, Vec<Elem>)>> {
    all_subuniverses(alg)?
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| subalgebra(alg, s))
        .collect()
}

/// Every quotient of every subalgebra, with SI/FSI flags and isomorphism classes.
pub fn hs_classify(alg: &FiniteAlgebra) -> Result<HsClassification> {
    let subs = all_subalgebras(alg)?;
    let per_sub: Vec<Vec<(Vec<Elem>, Partition, FiniteAlgebra, bool, bool)>> = subs
        .par_iter()
        .map(|(sub, idx)| {
            let con = congruence_lattice(sub)?;
            con.congruences
                .iter()
                .map(|theta| {
                    let q = quotient(sub, theta)?.with_name(format!("{}/{}", sub.name(), theta));
                    let qcon = congruence_lattice(&q)?;
                    Ok((idx.clone(), theta.clone(), q, qcon.is_si(), qcon.is_fsi()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut classes: Vec<FiniteAlgebra> = Vec::new();
    let mut members = Vec::new();
    for (subuniverse, congruence, algebra, si, fsi) in per_sub.into_iter().flatten() {
        let class = match class_of(&classes, &algebra)? {
            Some(c) => c,
            None => {
                classes.push(algebra.clone());
                classes.len() - 1
            }
        };
        members.push(HsMember {
            subuniverse,
            congruence,
            algebra,
            si,
            fsi,
            class,
        });
    }
    Ok(HsClassification { members, classes })
}
