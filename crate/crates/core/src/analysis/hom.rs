//! Homomorphism enumeration by backtracking over a generating set.

use serde::Serialize;

use crate::algebra::{closure_in_order, for_each_tuple, Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// Largest source algebra for which [`homs`] will run.
pub const HOM_GUARD: usize = 24;

const UNSET: Elem = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomKind {
    All,
    Injective,
    Bijective,
}

/// Every homomorphism of one kind between two algebras, in a deterministic order.
#[derive(Debug, Clone, Serialize)]
pub struct HomSet {
    pub source: String,
    pub target: String,
    pub kind: HomKind,
    pub maps: Vec<Vec<Elem>>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn contains(&self, map: &[Elem]) -> bool {
        self.maps.iter().any(|m| m == map)
    }
}

/// Whether `map` (indexed by elements of `a`) commutes with every operation.
pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> Result<bool> {
    Ok(homomorphism_violation(a, b, map)?.is_none())
}

/// The first operation and argument tuple at which `map` fails to commute.
pub fn homomorphism_violation(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    map: &[Elem],
) -> Result<Option<(String, Vec<Elem>)>> {
    if map.len() != a.size() {
        return Err(Error::NotHomomorphism(format!(
            "map has {} entries for {} elements",
            map.len(),
            a.size()
        )));
    }
    for &y in map {
        b.check_elem(y)?;
    }
    let ops = a.matching_ops(b)?;
    for (op, &bop) in ops.iter().enumerate() {
        let mut bad = None;
        let mut image = Vec::new();
        for_each_tuple(a.size(), a.arity(op), |args| {
            if bad.is_none() {
                image.clear();
                image.extend(args.iter().map(|&x| map[x]));
                if map[a.apply(op, args)] != b.apply(bop, &image) {
                    bad = Some(args.to_vec());
                }
            }
        });
        if let Some(args) = bad {
            return Ok(Some((a.signature().symbols()[op].name.clone(), args)));
        }
    }
    Ok(None)
}

/// A generating set: repeatedly add the least element not yet generated.
pub fn generating_set(alg: &FiniteAlgebra) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut covered = vec![false; alg.size()];
    loop {
        for e in closure_in_order(alg, &gens) {
            covered[e] = true;
        }
        match covered.iter().position(|c| !c) {
            Some(g) => gens.push(g),
            None => return gens,
        }
    }
}

/// All homomorphisms of the given kind from `a` to `b`.
pub fn homs(a: &FiniteAlgebra, b: &FiniteAlgebra, kind: HomKind) -> Result<HomSet> {
    let maps = search(a, b, kind, None, None)?;
    Ok(HomSet {
        source: a.name().to_string(),
        target: b.name().to_string(),
        kind,
        maps,
    })
}

/// An isomorphism from `a` to `b`, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Vec<Elem>>> {
    if a.size() != b.size() {
        return Ok(None);
    }
    if !a.signature().same_symbols(b.signature()) {
        return Ok(None);
    }
    let pa = profiles(a, &(0..a.signature().len()).collect::<Vec<_>>());
    let pb = profiles(b, &a.matching_ops(b)?);
    let (mut sa, mut sb) = (pa.clone(), pb.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let allowed: Vec<Vec<bool>> = pa.iter().map(|p| pb.iter().map(|q| p == q).collect()).collect();
    Ok(search(a, b, HomKind::Bijective, Some(&allowed), Some(1))?.pop())
}

pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

/// Per element: how often each operation outputs it, and whether it is idempotent
/// for each operation of positive arity.
fn profiles(alg: &FiniteAlgebra, ops: &[usize]) -> Vec<Vec<usize>> {
    let n = alg.size();
    let mut out = vec![Vec::new(); n];
    for &op in ops {
        let arity = alg.arity(op);
        let mut hits = vec![0; n];
        for &v in alg.table(op) {
            hits[v] += 1;
        }
        for e in 0..n {
            out[e].push(hits[e]);
            if arity > 0 {
                out[e].push(usize::from(alg.apply(op, &vec![e; arity]) == e));
            }
        }
    }
    out
}

#[derive(Clone)]
struct State {
    map: Vec<Elem>,
    order: Vec<Elem>,
    used: Vec<bool>,
    processed: usize,
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    ops: Vec<(usize, usize, usize)>,
    injective: bool,
    allowed: Option<&'a [Vec<bool>]>,
    gens: Vec<Elem>,
}

fn search(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    kind: HomKind,
    allowed: Option<&[Vec<bool>]>,
    limit: Option<usize>,
) -> Result<Vec<Vec<Elem>>> {
    if a.size() > HOM_GUARD {
        return Err(Error::SizeGuard {
            size: a.size(),
            limit: HOM_GUARD,
        });
    }
    let matched = a.matching_ops(b)?;
    if kind == HomKind::Bijective && a.size() != b.size() {
        return Ok(Vec::new());
    }
    let s = Search {
        a,
        b,
        ops: matched.iter().enumerate().map(|(op, &bop)| (op, bop, a.arity(op))).collect(),
        injective: kind != HomKind::All,
        allowed,
        gens: generating_set(a),
    };
    let mut state = State {
        map: vec![UNSET; a.size()],
        order: Vec::new(),
        used: vec![false; b.size()],
        processed: 0,
    };
    for &(op, bop, arity) in &s.ops {
        if arity == 0 && !s.assign(&mut state, a.table(op)[0], b.table(bop)[0]) {
            return Ok(Vec::new());
        }
    }
    let mut out = Vec::new();
    if s.propagate(&mut state) {
        s.extend(state, 0, &mut out, limit.unwrap_or(usize::MAX));
    }
    Ok(out)
}

impl Search<'_> {
    fn assign(&self, st: &mut State, x: Elem, y: Elem) -> bool {
        if st.map[x] != UNSET {
            return st.map[x] == y;
        }
        if self.allowed.is_some_and(|al| !al[x][y]) || (self.injective && st.used[y]) {
            return false;
        }
        st.map[x] = y;
        st.used[y] = true;
        st.order.push(x);
        true
    }

    /// Applies every operation to tuples of mapped elements until the map is
    /// closed, failing on any conflict.
    fn propagate(&self, st: &mut State) -> bool {
        let mut args = Vec::new();
        let mut image = Vec::new();
        while st.processed < st.order.len() {
            let k = st.processed;
            for &(op, bop, arity) in &self.ops {
                if arity == 0 {
                    continue;
                }
                let mut found = Vec::new();
                for_each_tuple(k + 1, arity, |idx| {
                    if idx.contains(&k) {
                        args.clear();
                        args.extend(idx.iter().map(|&i| st.order[i]));
                        image.clear();
                        image.extend(args.iter().map(|&x| st.map[x]));
                        found.push((self.a.apply(op, &args), self.b.apply(bop, &image)));
                    }
                });
                for (x, y) in found {
                    if !self.assign(st, x, y) {
                        return false;
                    }
                }
            }
            st.processed += 1;
        }
        true
    }

    fn extend(&self, st: State, at: usize, out: &mut Vec<Vec<Elem>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let Some(&g) = self.gens.get(at) else {
            debug_assert!(st.map.iter().all(|&y| y != UNSET));
            out.push(st.map);
            return;
        };
        if st.map[g] != UNSET {
            return self.extend(st, at + 1, out, limit);
        }
        for y in self.b.universe() {
            let mut next = st.clone();
            if self.assign(&mut next, g, y) && self.propagate(&mut next) {
                self.extend(next, at + 1, out, limit);
                if out.len() >= limit {
                    return;
                }
            }
        }
    }
}

/// `outer ∘ inner` as maps on element indices.
pub fn compose(outer: &[Elem], inner: &[Elem]) -> Vec<Elem> {
    inner.iter().map(|&x| outer[x]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn chain_has_only_identity_automorphism() {
        let a = catalog::build_section2_a();
        let auts = homs(&a, &a, HomKind::Bijective).unwrap();
        assert_eq!(auts.maps, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn a3_automorphisms_are_atom_permutations() {
        let a3 = catalog::build_an(3).unwrap();
        let auts = homs(&a3, &a3, HomKind::Bijective).unwrap();
        assert_eq!(auts.len(), 6);
        for m in &auts.maps {
            assert!(is_homomorphism(&a3, &a3, m).unwrap());
        }
    }

    #[test]
    fn no_homs_when_constants_conflict() {
        let a1 = catalog::build_an(1).unwrap();
        let trivial = FiniteAlgebra::trivial(a1.signature().clone());
        assert_eq!(homs(&trivial, &a1, HomKind::All).unwrap().len(), 0);
        assert_eq!(homs(&a1, &trivial, HomKind::All).unwrap().len(), 1);
    }

    #[test]
    fn isomorphism_needs_equal_sizes() {
        let b = catalog::build_theta_and_b().unwrap().1;
        let am = catalog::build_a_minus_a4();
        assert!(!is_isomorphic(&am, &b).unwrap());
        assert!(is_isomorphic(&am, &am).unwrap());
    }
}
