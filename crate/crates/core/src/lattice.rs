//! Order-theoretic helpers for algebras with a lattice reduct.

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

pub const MEET: &str = "meet";
pub const JOIN: &str = "join";
pub const IMP: &str = "imp";
pub const ZERO: &str = "zero";
pub const ONE: &str = "one";

/// Lattice operations of an algebra, looked up by the conventional symbol names.
#[derive(Debug, Clone, Copy)]
pub struct LatticeView<'a> {
    alg: &'a FiniteAlgebra,
    meet: usize,
    join: usize,
    imp: Option<usize>,
    zero: Elem,
    one: Elem,
}

impl<'a> LatticeView<'a> {
    /// Requires `meet` and `join`. Bounds default to the least and greatest
    /// elements of the induced order when `zero`/`one` are not symbols.
    pub fn new(alg: &'a FiniteAlgebra) -> Result<Self> {
        let meet = alg
            .op_index(MEET)
            .ok_or_else(|| Error::UnknownSymbol(MEET.into()))?;
        let join = alg
            .op_index(JOIN)
            .ok_or_else(|| Error::UnknownSymbol(JOIN.into()))?;
        let mut view = LatticeView {
            alg,
            meet,
            join,
            imp: alg.op_index(IMP),
            zero: 0,
            one: 0,
        };
        view.zero = match alg.constant(ZERO) {
            Some(z) => z,
            None => alg.universe().fold(0, |acc, e| view.meet(acc, e)),
        };
        view.one = match alg.constant(ONE) {
            Some(o) => o,
            None => alg.universe().fold(0, |acc, e| view.join(acc, e)),
        };
        Ok(view)
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.alg
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.alg.apply2(self.meet, a, b)
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.alg.apply2(self.join, a, b)
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) == a
    }

    pub fn bottom(&self) -> Elem {
        self.zero
    }

    pub fn top(&self) -> Elem {
        self.one
    }

    /// Relative pseudocomplement, when the algebra has `imp`.
    pub fn imp(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.imp.map(|op| self.alg.apply2(op, a, b))
    }

    /// `a -> 0`.
    pub fn neg(&self, a: Elem) -> Option<Elem> {
        self.imp(a, self.zero)
    }

    /// Join of a finite family; the empty join is the bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.zero, |acc, e| self.join(acc, e))
    }

    /// Meet of a finite family; the empty meet is the top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.one, |acc, e| self.meet(acc, e))
    }

    /// Minimal elements above the bottom, ascending by index.
    pub fn atoms(&self) -> Vec<Elem> {
        self.atoms_within(&self.alg.universe().collect::<Vec<_>>())
    }

    /// Atoms of the sublattice on `elements` (which must contain the bottom).
    pub fn atoms_within(&self, elements: &[Elem]) -> Vec<Elem> {
        elements
            .iter()
            .copied()
            .filter(|&a| {
                a != self.zero
                    && !elements
                        .iter()
                        .any(|&b| b != self.zero && b != a && self.leq(b, a))
            })
            .collect()
    }

    pub fn atoms_below(&self, a: Elem) -> Vec<Elem> {
        self.atoms().into_iter().filter(|&p| self.leq(p, a)).collect()
    }

    /// Elements in a linear order from bottom to top, if the order is a chain.
    pub fn chain_order(&self) -> Option<Vec<Elem>> {
        let mut elems: Vec<Elem> = self.alg.universe().collect();
        for &a in &elems {
            for &b in &elems {
                if !self.leq(a, b) && !self.leq(b, a) {
                    return None;
                }
            }
        }
        elems.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.leq(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Some(elems)
    }

    /// Largest element strictly below the top, when unique.
    pub fn second_largest(&self) -> Option<Elem> {
        let coatoms: Vec<Elem> = self
            .alg
            .universe()
            .filter(|&a| {
                a != self.one
                    && !self
                        .alg
                        .universe()
                        .any(|b| b != self.one && b != a && self.leq(a, b))
            })
            .collect();
        match coatoms.as_slice() {
            [c] if self.alg.universe().all(|b| b == self.one || self.leq(b, *c)) => Some(*c),
            _ => None,
        }
    }

    /// A triple `(a, b, c)` violating `a ∧ c ≤ b ⟺ c ≤ a → b`, if any.
    pub fn residuation_violation(&self) -> Option<(Elem, Elem, Elem)> {
        let imp = self.imp?;
        let n = self.alg.size();
        for a in 0..n {
            for b in 0..n {
                let ab = self.alg.apply2(imp, a, b);
                for c in 0..n {
                    if self.leq(self.meet(a, c), b) != self.leq(c, ab) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Whether the algebra's meet/join satisfy the lattice axioms and
    /// distributivity. Quadratic-to-cubic; meant for small catalog checks.
    pub fn is_distributive_lattice(&self) -> bool {
        let n = self.alg.size();
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return false;
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a)
                    || self.join(a, b) != self.join(b, a)
                    || self.meet(a, self.join(a, b)) != a
                {
                    return false;
                }
                for c in 0..n {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c))
                        || self.meet(a, self.meet(b, c)) != self.meet(self.meet(a, b), c)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    /// Four-element Boolean algebra on bitmasks 0..4.
    fn b4() -> FiniteAlgebra {
        let sig = Signature::new([(MEET, 2), (JOIN, 2), (IMP, 2), (ZERO, 0), (ONE, 0)]).unwrap();
        FiniteAlgebra::from_fn("B4", sig, 4, |op, a| match op {
            0 => a[0] & a[1],
            1 => a[0] | a[1],
            2 => (!a[0] & 3) | a[1],
            3 => 0,
            _ => 3,
        })
        .unwrap()
    }

    #[test]
    fn boolean_algebra_structure() {
        let alg = b4();
        let l = LatticeView::new(&alg).unwrap();
        assert_eq!(l.atoms(), vec![1, 2]);
        assert_eq!(l.atoms_below(3), vec![1, 2]);
        assert_eq!(l.join_all([]), 0);
        assert_eq!(l.meet_all([]), 3);
        assert_eq!(l.neg(1), Some(2));
        assert!(l.residuation_violation().is_none());
        assert!(l.is_distributive_lattice());
        assert!(l.chain_order().is_none());
        assert_eq!(l.second_largest(), None);
    }

    #[test]
    fn broken_implication_is_caught() {
        let alg = b4();
        let mut tables = alg.tables().to_vec();
        tables[2][0] = 0; // 0 -> 0 should be 1
        let bad = FiniteAlgebra::new("bad", alg.signature().clone(), 4, tables).unwrap();
        assert!(LatticeView::new(&bad).unwrap().residuation_violation().is_some());
    }
}
