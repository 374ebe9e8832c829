//! Amalgamation, epic-subalgebra, rigidity and atom-permutation checks.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::classify::all_subalgebras;
use super::hom::{compose, homs, is_homomorphism, HomKind};
use crate::algebra::{all_subuniverses, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::lattice::LatticeView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// One line of an analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub check: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub status: Status,
}

impl ReportEntry {
    fn new(check: &str, instance: String, witness: Option<Value>, ok: bool) -> Self {
        ReportEntry {
            check: check.to_string(),
            instance,
            witness,
            status: Status::from_bool(ok),
        }
    }
}

pub fn all_pass(entries: &[ReportEntry]) -> bool {
    entries.iter().all(|e| e.status == Status::Pass)
}

/// Every span of embeddings `B <- A -> C` among `catalog`, each with an amalgam
/// `(D, p, q)` drawn from `catalog` when one exists.
pub fn check_amalgamation(catalog: &[FiniteAlgebra]) -> Result<Vec<ReportEntry>> {
    let k = catalog.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let flat: Vec<Vec<Vec<Elem>>> = pairs
        .par_iter()
        .map(|&(i, j)| homs(&catalog[i], &catalog[j], HomKind::Injective).map(|h| h.maps))
        .collect::<Result<_>>()?;
    let emb = |i: usize, j: usize| &flat[i * k + j];
    let mut out = Vec::new();
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for f in emb(a, b) {
                    for g in emb(a, c) {
                        let found = (0..k).find_map(|d| {
                            emb(b, d).iter().find_map(|p| {
                                let pf = compose(p, f);
                                emb(c, d)
                                    .iter()
                                    .find(|q| compose(q, g) == pf)
                                    .map(|q| (d, p, q))
                            })
                        });
                        let instance = format!(
                            "{} <- {} -> {} with f={:?}, g={:?}",
                            catalog[b].name(),
                            catalog[a].name(),
                            catalog[c].name(),
                            f,
                            g
                        );
                        let witness = found.map(|(d, p, q)| json!({"target": catalog[d].name(), "p": p, "q": q}));
                        let ok = witness.is_some();
                        out.push(ReportEntry::new("amalgamation", instance, witness, ok));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// For every proper subalgebra `A` of every subalgebra `C` of `big`, an
/// endomorphism of `big` fixing `A` pointwise and moving some element of `C`.
pub fn check_epic_subalgebras(big: &FiniteAlgebra) -> Result<Vec<ReportEntry>> {
    let subs = all_subuniverses(big)?;
    let ends = homs(big, big, HomKind::All)?;
    let mut out = Vec::new();
    for c in &subs {
        for a in subs.iter().filter(|a| a.len() < c.len() && a.is_subset(c)) {
            let found = ends.maps.iter().find_map(|h| {
                if a.elements.iter().all(|&x| h[x] == x) {
                    c.elements.iter().find(|&&b| h[b] != b).map(|&b| (h, b))
                } else {
                    None
                }
            });
            let instance = format!("{} <= {}", names(big, &a.elements), names(big, &c.elements));
            let witness = found.map(|(h, b)| json!({"endomorphism": h, "moved": big.element_name(b)}));
            let ok = witness.is_some();
            out.push(ReportEntry::new("epic-subalgebra", instance, witness, ok));
        }
    }
    Ok(out)
}

/// For every subalgebra `A` of `big` and every pair of embeddings `g, h: A -> big`,
/// an automorphism `i` of `big` with `g = i ∘ h`.
pub fn check_embedding_rigidity(big: &FiniteAlgebra) -> Result<Vec<ReportEntry>> {
    let auts = homs(big, big, HomKind::Bijective)?;
    let subs = all_subalgebras(big)?;
    subs.par_iter()
        .map(|(sub, idx)| {
            let embs = homs(sub, big, HomKind::Injective)?;
            let mut missing = None;
            'pairs: for g in &embs.maps {
                for h in &embs.maps {
                    if !auts.maps.iter().any(|i| compose(i, h) == *g) {
                        missing = Some(json!({"g": g, "h": h}));
                        break 'pairs;
                    }
                }
            }
            let instance = format!("{} ({} embeddings)", names(big, idx), embs.len());
            let ok = missing.is_none();
            Ok(ReportEntry::new("embedding-rigidity", instance, missing, ok))
        })
        .collect()
}

/// For every subalgebra `A` of `big` and every `b` outside `A` and `skip`, an
/// automorphism fixing `A` pointwise and moving `b`.
pub fn check_fixing_automorphisms(big: &FiniteAlgebra, skip: &[Elem]) -> Result<Vec<ReportEntry>> {
    let auts = homs(big, big, HomKind::Bijective)?;
    let mut out = Vec::new();
    for a in all_subuniverses(big)? {
        for b in big.universe().filter(|b| !a.contains(*b) && !skip.contains(b)) {
            let found = auts
                .maps
                .iter()
                .find(|h| h[b] != b && a.elements.iter().all(|&x| h[x] == x));
            let instance = format!("fix {} move {}", names(big, &a.elements), big.element_name(b));
            let witness = found.map(|h| json!({"automorphism": h}));
            let ok = witness.is_some();
            out.push(ReportEntry::new("fixing-automorphism", instance, witness, ok));
        }
    }
    Ok(out)
}

/// The map induced by permuting atoms, `a ↦ ⋁ σ[at(a)]` with the top fixed.
#[derive(Debug, Clone, Serialize)]
pub struct AtomPermutation {
    pub map: Vec<Elem>,
    /// Whether the map is a bijective homomorphism of the whole algebra.
    pub automorphism: bool,
}

/// `sigma[i]` is the index (among the ascending atoms) that atom `i` goes to.
pub fn atom_permutation_automorphism(alg: &FiniteAlgebra, sigma: &[usize]) -> Result<AtomPermutation> {
    let view = LatticeView::new(alg)?;
    let atoms = view.atoms();
    let mut seen = vec![false; atoms.len()];
    if sigma.len() != atoms.len() || !sigma.iter().all(|&s| s < atoms.len() && !std::mem::replace(&mut seen[s], true)) {
        return Err(Error::Parameter(format!(
            "{sigma:?} is not a permutation of {} atoms",
            atoms.len()
        )));
    }
    let top = view.top();
    let mut map = Vec::with_capacity(alg.size());
    for a in alg.universe() {
        if a == top {
            map.push(top);
            continue;
        }
        let below: Vec<usize> = (0..atoms.len()).filter(|&i| view.leq(atoms[i], a)).collect();
        if view.join_all(below.iter().map(|&i| atoms[i])) != a {
            return Err(Error::Parameter(format!(
                "{} is not a join of atoms",
                alg.element_name(a)
            )));
        }
        map.push(view.join_all(below.iter().map(|&i| atoms[sigma[i]])));
    }
    let mut hit = vec![false; alg.size()];
    map.iter().for_each(|&y| hit[y] = true);
    let automorphism = hit.iter().all(|&h| h) && is_homomorphism(alg, alg, &map)?;
    Ok(AtomPermutation { map, automorphism })
}

fn names(alg: &FiniteAlgebra, elems: &[Elem]) -> String {
    let items: Vec<String> = elems.iter().map(|&e| alg.element_name(e)).collect();
    format!("{{{}}}", items.join(", "))
}
