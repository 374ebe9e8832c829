use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// Largest algebra for which [`all_subuniverses`] will run.
pub const SUBUNIVERSE_GUARD: usize = 24;

/// A subset of a universe, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subuniverse {
    pub elements: Vec<Elem>,
    /// Whether the set is closed under every operation (and contains the constants).
    pub closed: bool,
}

impl Subuniverse {
    /// Wraps an arbitrary subset and records whether it is closed.
    pub fn check(alg: &FiniteAlgebra, elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let set: BTreeSet<Elem> = elements.into_iter().collect();
        for &e in &set {
            alg.check_elem(e)?;
        }
        let elements: Vec<Elem> = set.into_iter().collect();
        let closed = first_unclosed_op(alg, &elements).is_none();
        Ok(Subuniverse { elements, closed })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_subset(&self, other: &Subuniverse) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn mask(&self) -> u64 {
        self.elements.iter().fold(0, |m, &e| m | (1 << e))
    }
}

fn first_unclosed_op(alg: &FiniteAlgebra, elements: &[Elem]) -> Option<usize> {
    let mut member = vec![false; alg.size()];
    for &e in elements {
        member[e] = true;
    }
    (0..alg.signature().len()).find(|&op| {
        let arity = alg.arity(op);
        let mut ok = true;
        super::for_each_tuple(elements.len(), arity, |idx| {
            if ok {
                let args: Vec<Elem> = idx.iter().map(|&i| elements[i]).collect();
                ok = member[alg.apply(op, &args)];
            }
        });
        !ok
    })
}

/// Closes `seed` under all operations. Returns elements in discovery order.
///
/// Semi-naive: when the `k`-th element is processed, only tuples over the first
/// `k + 1` elements that use it are evaluated.
pub(crate) fn closure_in_order(alg: &FiniteAlgebra, seed: &[Elem]) -> Vec<Elem> {
    let mut member = vec![false; alg.size()];
    let mut order = Vec::new();
    let push = |e: Elem, member: &mut Vec<bool>, order: &mut Vec<Elem>| {
        if !member[e] {
            member[e] = true;
            order.push(e);
        }
    };
    for c in alg.constants() {
        push(c, &mut member, &mut order);
    }
    for &g in seed {
        push(g, &mut member, &mut order);
    }
    let ops: Vec<(usize, usize)> = (0..alg.signature().len())
        .map(|op| (op, alg.arity(op)))
        .filter(|&(_, a)| a > 0)
        .collect();
    let mut k = 0;
    let mut args = Vec::new();
    while k < order.len() {
        for &(op, arity) in &ops {
            let mut found = Vec::new();
            super::for_each_tuple(k + 1, arity, |idx| {
                if idx.contains(&k) {
                    args.clear();
                    args.extend(idx.iter().map(|&i| order[i]));
                    found.push(alg.apply(op, &args));
                }
            });
            for e in found {
                push(e, &mut member, &mut order);
            }
        }
        k += 1;
    }
    order
}

/// The subuniverse generated by `generators`.
pub fn sg_closure(alg: &FiniteAlgebra, generators: &[Elem]) -> Result<Subuniverse> {
    for &g in generators {
        alg.check_elem(g)?;
    }
    let mut elements = closure_in_order(alg, generators);
    elements.sort_unstable();
    Ok(Subuniverse {
        elements,
        closed: true,
    })
}

/// The induced subalgebra on a closed subset, re-indexed densely in ascending
/// order. The second component maps new indices to old ones.
pub fn subalgebra(alg: &FiniteAlgebra, sub: &Subuniverse) -> Result<(FiniteAlgebra, Vec<Elem>)> {
    let elements = &sub.elements;
    if elements.is_empty() {
        return Err(Error::Format("empty subuniverse".into()));
    }
    for &e in elements {
        alg.check_elem(e)?;
    }
    if let Some(op) = first_unclosed_op(alg, elements) {
        return Err(Error::NotClosed {
            symbol: alg.signature().symbols()[op].name.clone(),
        });
    }
    let mut new_index = vec![usize::MAX; alg.size()];
    for (i, &e) in elements.iter().enumerate() {
        new_index[e] = i;
    }
    let mut old_args = Vec::new();
    let tables = (0..alg.signature().len())
        .map(|op| {
            super::build_table(elements.len(), alg.arity(op), |args| {
                old_args.clear();
                old_args.extend(args.iter().map(|&a| elements[a]));
                new_index[alg.apply(op, &old_args)]
            })
        })
        .collect();
    let name = if elements.len() == alg.size() {
        alg.name().to_string()
    } else {
        format!("Sub({})", alg.name())
    };
    let names = elements.iter().map(|&e| alg.element_name(e)).collect();
    let sub_alg =
        FiniteAlgebra::new(name, alg.signature().clone(), elements.len(), tables)?
            .with_element_names(names)?;
    Ok((sub_alg, elements.clone()))
}

/// Every nonempty subuniverse, each once, sorted by size then lexicographically.
///
/// Explores by one-point extension: starting from `Sg(∅)` (or from each singleton
/// when there are no constants), every known subuniverse is extended by each
/// outside element and re-closed.
pub fn all_subuniverses(alg: &FiniteAlgebra) -> Result<Vec<Subuniverse>> {
    if alg.size() > SUBUNIVERSE_GUARD {
        return Err(Error::SizeGuard {
            size: alg.size(),
            limit: SUBUNIVERSE_GUARD,
        });
    }
    let mut seen: HashSet<u64> = HashSet::new();
    let mut found = Vec::new();
    let mut queue = VecDeque::new();
    let bottom = closure_in_order(alg, &[]);
    let starts: Vec<Vec<Elem>> = if bottom.is_empty() {
        alg.universe().map(|e| closure_in_order(alg, &[e])).collect()
    } else {
        vec![bottom]
    };
    for mut s in starts {
        s.sort_unstable();
        let sub = Subuniverse {
            elements: s,
            closed: true,
        };
        if seen.insert(sub.mask()) {
            queue.push_back(sub.clone());
            found.push(sub);
        }
    }
    while let Some(sub) = queue.pop_front() {
        for x in alg.universe().filter(|&x| !sub.contains(x)) {
            let mut seed = sub.elements.clone();
            seed.push(x);
            let mut elements = closure_in_order(alg, &seed);
            elements.sort_unstable();
            let ext = Subuniverse {
                elements,
                closed: true,
            };
            if seen.insert(ext.mask()) {
                queue.push_back(ext.clone());
                found.push(ext);
            }
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.elements.cmp(&b.elements)));
    Ok(found)
}
