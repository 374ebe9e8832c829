//! Partitions, congruence generation and congruence lattices.

use std::collections::HashSet;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::algebra::{for_each_tuple, Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// Largest algebra for which [`congruence_lattice`] will run.
pub const CONGRUENCE_GUARD: usize = 24;

/// An equivalence relation in canonical form: `rep[i]` is the least element of
/// the block of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    rep: Vec<Elem>,
}

struct UnionFind {
    parent: Vec<Elem>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn from_partition(p: &Partition) -> Self {
        UnionFind {
            parent: p.rep.clone(),
        }
    }

    fn find(&mut self, mut x: Elem) -> Elem {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Merges the blocks of `a` and `b`; the smaller root wins. Returns whether
    /// anything changed.
    fn union(&mut self, a: Elem, b: Elem) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let rep = (0..self.parent.len()).map(|i| self.find(i)).collect();
        Partition { rep }
    }
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            rep: (0..n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    pub fn from_rep(rep: Vec<Elem>) -> Result<Self> {
        for (i, &r) in rep.iter().enumerate() {
            if r > i || rep[r] != r {
                return Err(Error::InvalidPartition(format!(
                    "rep[{i}] = {r} is not a least representative"
                )));
            }
        }
        Ok(Partition { rep })
    }

    /// Blocks must be disjoint; elements not mentioned become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<Elem>]) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut uf = UnionFind::new(n);
        for block in blocks {
            for &e in block {
                if e >= n {
                    return Err(Error::ElementOutOfRange { elem: e, size: n });
                }
                if std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidPartition(format!("{e} appears twice")));
                }
                uf.union(block[0], e);
            }
        }
        Ok(uf.into_partition())
    }

    /// The least equivalence relation containing `pairs`.
    pub fn from_pairs(n: usize, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= n {
                    return Err(Error::ElementOutOfRange { elem: e, size: n });
                }
            }
            uf.union(a, b);
        }
        Ok(uf.into_partition())
    }

    pub fn size(&self) -> usize {
        self.rep.len()
    }

    pub fn rep(&self, i: Elem) -> Elem {
        self.rep[i]
    }

    pub fn reps(&self) -> &[Elem] {
        &self.rep
    }

    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.rep[a] == self.rep[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.rep.iter().enumerate().filter(|(i, &r)| *i == r).count()
    }

    pub fn is_identity(&self) -> bool {
        self.rep.iter().enumerate().all(|(i, &r)| i == r)
    }

    pub fn is_full(&self) -> bool {
        self.rep.iter().all(|&r| r == 0)
    }

    /// Blocks sorted by least element, each sorted ascending.
    pub fn blocks(&self) -> Vec<Vec<Elem>> {
        let index = self.block_index();
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (e, &b) in index.iter().enumerate() {
            blocks[b].push(e);
        }
        blocks
    }

    /// Maps each element to the position of its block in [`Partition::blocks`].
    pub fn block_index(&self) -> Vec<usize> {
        let mut next = 0;
        let mut of_rep = vec![usize::MAX; self.rep.len()];
        self.rep
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                if i == r {
                    of_rep[i] = next;
                    next += 1;
                }
                of_rep[r]
            })
            .collect()
    }

    /// `self ⊆ other` as relations.
    pub fn leq(&self, other: &Partition) -> bool {
        self.rep
            .iter()
            .enumerate()
            .all(|(i, &r)| other.rep[i] == other.rep[r])
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::from_partition(self);
        for (i, &r) in other.rep.iter().enumerate() {
            uf.union(i, r);
        }
        uf.into_partition()
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let n = self.rep.len();
        let mut first: std::collections::HashMap<(Elem, Elem), Elem> = Default::default();
        let rep = (0..n)
            .map(|i| *first.entry((self.rep[i], other.rep[i])).or_insert(i))
            .collect();
        Partition { rep }
    }

    /// Restriction to a subset, re-indexed by position in `elements`.
    pub fn restrict(&self, elements: &[Elem]) -> Partition {
        let pairs: Vec<(Elem, Elem)> = elements
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| {
                elements
                    .iter()
                    .enumerate()
                    .skip(i + 1)
                    .filter(move |(_, &b)| self.related(a, b))
                    .map(move |(j, _)| (i, j))
            })
            .collect();
        Partition::from_pairs(elements.len(), &pairs).expect("indices in range")
    }

    /// Block-list rendering with element display names.
    pub fn display_with(&self, alg: &FiniteAlgebra) -> String {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let names: Vec<String> = b.iter().map(|&e| alg.element_name(e)).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        blocks.join(" ")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                format!("[{}]", items.join(","))
            })
            .collect();
        write!(f, "[{}]", blocks.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self.blocks();
        let mut seq = serializer.serialize_seq(Some(blocks.len()))?;
        for b in &blocks {
            seq.serialize_element(b)?;
        }
        seq.end()
    }
}

fn check_size(alg: &FiniteAlgebra, part: &Partition) -> Result<()> {
    if part.size() != alg.size() {
        return Err(Error::PartitionSize {
            expected: alg.size(),
            found: part.size(),
        });
    }
    Ok(())
}

/// Calls `f(x, y)` for every basic translation image `(p(a), p(b))`: one
/// argument position of one operation receives `a` resp. `b`, the others range
/// over the universe.
fn for_each_translation(alg: &FiniteAlgebra, a: Elem, b: Elem, mut f: impl FnMut(Elem, Elem)) {
    let n = alg.size();
    let mut args_a = Vec::new();
    let mut args_b = Vec::new();
    for op in 0..alg.signature().len() {
        let arity = alg.arity(op);
        for pos in 0..arity {
            for_each_tuple(n, arity - 1, |rest| {
                args_a.clear();
                args_a.extend_from_slice(&rest[..pos]);
                args_a.push(a);
                args_a.extend_from_slice(&rest[pos..]);
                args_b.clone_from(&args_a);
                args_b[pos] = b;
                f(alg.apply(op, &args_a), alg.apply(op, &args_b));
            });
        }
    }
}

/// Whether `part` is compatible with every operation of `alg`.
pub fn is_congruence(alg: &FiniteAlgebra, part: &Partition) -> Result<bool> {
    check_size(alg, part)?;
    for (a, &r) in part.reps().iter().enumerate() {
        if a == r {
            continue;
        }
        let mut ok = true;
        for_each_translation(alg, a, r, |x, y| ok &= part.related(x, y));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The least congruence containing all `pairs`.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Result<Partition> {
    let mut uf = UnionFind::new(alg.size());
    let mut work = Vec::new();
    for &(a, b) in pairs {
        alg.check_elem(a)?;
        alg.check_elem(b)?;
        if uf.union(a, b) {
            work.push((a, b));
        }
    }
    while let Some((a, b)) = work.pop() {
        for_each_translation(alg, a, b, |x, y| {
            if uf.union(x, y) {
                work.push((x, y));
            }
        });
    }
    Ok(uf.into_partition())
}

/// `Cg(a, b)`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: Elem, b: Elem) -> Result<Partition> {
    congruence_generated(alg, &[(a, b)])
}

/// All congruences of an algebra with their refinement order.
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    /// Finest first: sorted by block count descending, then by representative array.
    pub congruences: Vec<Partition>,
    /// `leq[i][j]` iff congruence `i` refines congruence `j`.
    pub leq: Vec<Vec<bool>>,
}

/// Every congruence, as the join-closure of the principal congruences.
pub fn congruence_lattice(alg: &FiniteAlgebra) -> Result<CongruenceLattice> {
    if alg.size() > CONGRUENCE_GUARD {
        return Err(Error::SizeGuard {
            size: alg.size(),
            limit: CONGRUENCE_GUARD,
        });
    }
    let n = alg.size();
    let mut seen: HashSet<Partition> = HashSet::new();
    let mut principals = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = principal_congruence(alg, a, b)?;
            if seen.insert(p.clone()) {
                principals.push(p);
            }
        }
    }
    let identity = Partition::identity(n);
    let mut all = vec![identity.clone()];
    seen.insert(identity);
    all.extend(principals.iter().cloned());
    let mut i = 0;
    while i < all.len() {
        for p in &principals {
            let j = all[i].join(p);
            if seen.insert(j.clone()) {
                all.push(j);
            }
        }
        i += 1;
    }
    Ok(CongruenceLattice::from_congruences(all))
}

impl CongruenceLattice {
    fn from_congruences(mut congruences: Vec<Partition>) -> Self {
        congruences.sort_by(|a, b| {
            b.num_blocks()
                .cmp(&a.num_blocks())
                .then_with(|| a.reps().cmp(b.reps()))
        });
        let leq = congruences
            .iter()
            .map(|a| congruences.iter().map(|b| a.leq(b)).collect())
            .collect();
        CongruenceLattice { congruences, leq }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.congruences.iter().position(|q| q == p)
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index_of(p).is_some()
    }

    pub fn identity(&self) -> &Partition {
        &self.congruences[0]
    }

    pub fn full(&self) -> &Partition {
        self.congruences.last().expect("nonempty")
    }

    /// Least member containing the pair `(a, b)`.
    pub fn least_containing(&self, a: Elem, b: Elem) -> Option<&Partition> {
        self.congruences
            .iter()
            .enumerate()
            .filter(|(_, p)| p.related(a, b))
            .find(|(i, _)| {
                self.congruences
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| q.related(a, b))
                    .all(|(j, _)| self.leq[*i][j])
            })
            .map(|(_, p)| p)
    }

    /// Least congruence above the identity, when there is exactly one.
    pub fn monolith(&self) -> Option<&Partition> {
        let nonid: Vec<usize> = (1..self.len()).collect();
        nonid
            .iter()
            .find(|&&i| nonid.iter().all(|&j| self.leq[i][j]))
            .map(|&i| &self.congruences[i])
    }

    pub fn is_simple(&self) -> bool {
        self.len() == 2
    }

    /// Subdirectly irreducible: nontrivial with a monolith.
    pub fn is_si(&self) -> bool {
        self.len() > 1 && self.monolith().is_some()
    }

    /// Finitely subdirectly irreducible: nontrivial and the identity is not the
    /// meet of two strictly larger congruences.
    pub fn is_fsi(&self) -> bool {
        if self.len() <= 1 {
            return false;
        }
        let id = self.identity();
        for i in 1..self.len() {
            for j in i + 1..self.len() {
                if self.congruences[i].meet(&self.congruences[j]) == *id {
                    return false;
                }
            }
        }
        true
    }

    /// Whether every pairwise join and meet is again a member.
    pub fn is_closed(&self) -> bool {
        let members: HashSet<&Partition> = self.congruences.iter().collect();
        self.congruences.iter().all(|a| {
            self.congruences
                .iter()
                .all(|b| members.contains(&a.join(b)) && members.contains(&a.meet(b)))
        })
    }
}

pub fn is_si(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(congruence_lattice(alg)?.is_si())
}

pub fn is_fsi(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(congruence_lattice(alg)?.is_fsi())
}

pub fn is_simple(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(congruence_lattice(alg)?.is_simple())
}
