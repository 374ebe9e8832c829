//! Powerset Boolean algebras with a new top, and the operations `f_{k,n}` on them.

use std::collections::BTreeMap;

use crate::algebra::{Elem, FiniteAlgebra, Signature, Term};
use crate::error::{Error, Result};
use crate::lattice::{IMP, JOIN, MEET, ONE, ZERO};
use crate::logic::{expand_by_definitions, Formula, OpDefinition, PartialFunctionTable, Vars};

/// Largest `n` accepted by [`build_an`].
pub const MAX_N: usize = 5;

/// Element indices of `A_n`: masks `0..2^n` for subsets of the `n` atoms, then the top.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowersetShape {
    pub n: usize,
}

impl PowersetShape {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::SizeGuard {
                size: (1 << n) + 1,
                limit: (1 << MAX_N) + 1,
            });
        }
        Ok(PowersetShape { n })
    }

    pub fn size(&self) -> usize {
        (1 << self.n) + 1
    }

    pub fn top(&self) -> Elem {
        1 << self.n
    }

    /// The second largest element: the full subset.
    pub fn e(&self) -> Elem {
        (1 << self.n) - 1
    }

    pub fn atom(&self, i: usize) -> Elem {
        1 << i
    }

    pub fn atoms(&self) -> Vec<Elem> {
        (0..self.n).map(|i| self.atom(i)).collect()
    }

    /// Number of atoms below `a` (undefined for the top, reported as `n`).
    pub fn atom_count(&self, a: Elem) -> usize {
        if a == self.top() {
            self.n
        } else {
            a.count_ones() as usize
        }
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        b == self.top() || (a != self.top() && a & b == a)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        match (a == self.top(), b == self.top()) {
            (true, _) => b,
            (_, true) => a,
            _ => a & b,
        }
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        if a == self.top() || b == self.top() {
            self.top()
        } else {
            a | b
        }
    }

    pub fn imp(&self, a: Elem, b: Elem) -> Elem {
        if self.leq(a, b) {
            self.top()
        } else if a == self.top() {
            b
        } else {
            (self.e() & !a) | b
        }
    }

    pub fn name(&self, a: Elem) -> String {
        if a == self.top() {
            "1".into()
        } else if a == 0 {
            "0".into()
        } else if a == self.e() {
            "e".into()
        } else {
            let idx: Vec<String> = (0..self.n).filter(|i| a >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", idx.join(","))
        }
    }

    /// The relation `phi_{k,n}` should define: `b = 1` when `a` is `0`, `e` or `1`
    /// or has at most `k` atoms below it, and `b = e` for the remaining `a`.
    pub fn phi_kn_relation(&self, k: usize, a: Elem, b: Elem) -> bool {
        let middle = a != 0 && a != self.e() && a != self.top();
        if middle && self.atom_count(a) > k {
            b == self.e()
        } else {
            b == self.top()
        }
    }
}

pub fn heyting_signature() -> Signature {
    Signature::new([(MEET, 2), (JOIN, 2), (IMP, 2), (ZERO, 0), (ONE, 0)]).expect("distinct symbols")
}

/// `A_n`: the powerset of an `n`-element set with a new top adjoined.
pub fn build_an(n: usize) -> Result<FiniteAlgebra> {
    let shape = PowersetShape::new(n)?;
    let alg = FiniteAlgebra::from_fn(format!("A{n}"), heyting_signature(), shape.size(), |op, args| match op {
        0 => shape.meet(args[0], args[1]),
        1 => shape.join(args[0], args[1]),
        2 => shape.imp(args[0], args[1]),
        3 => 0,
        _ => shape.top(),
    })?;
    alg.with_element_names((0..shape.size()).map(|a| shape.name(a)).collect())
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Parameter(format!("n must be at least 3, got {n}")));
    }
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!("k must satisfy 1 <= k <= n-1 = {}, got {k}", n - 1)));
    }
    Ok(())
}

fn neg(t: Term) -> Term {
    Term::app(IMP, vec![t, Term::constant(ZERO)])
}

fn join(a: Term, b: Term) -> Term {
    Term::app(JOIN, vec![a, b])
}

fn meet(a: Term, b: Term) -> Term {
    Term::app(MEET, vec![a, b])
}

fn imp(a: Term, b: Term) -> Term {
    Term::app(IMP, vec![a, b])
}

fn d(t: Term) -> Term {
    join(t.clone(), neg(t))
}

fn join_all(items: impl IntoIterator<Item = Term>) -> Term {
    let mut it = items.into_iter();
    let first = it.next().expect("nonempty join");
    it.fold(first, join)
}

/// Meet of `neg(z_i /\ z_j)` over `i < j` in `range`; the empty meet is `one`.
fn disjointness(z: &[Term], range: std::ops::RangeInclusive<usize>) -> Term {
    let idx: Vec<usize> = range.collect();
    let mut parts = Vec::new();
    for (p, &i) in idx.iter().enumerate() {
        for &j in &idx[p + 1..] {
            parts.push(neg(meet(z[i - 1].clone(), z[j - 1].clone())));
        }
    }
    if parts.is_empty() {
        Term::constant(ONE)
    } else {
        let mut it = parts.into_iter();
        let first = it.next().unwrap();
        it.fold(first, meet)
    }
}

/// The conjunction `psi_{m,n}(x, w, z_1..z_{n+1})` as a list of equations.
pub fn build_psi_mn(m: usize, n: usize, x: usize, w: usize, z: &[usize]) -> Result<Formula> {
    check_kn(m, n)?;
    if z.len() != n + 1 {
        return Err(Error::Parameter(format!("psi needs {} z-variables, got {}", n + 1, z.len())));
    }
    let xt = Term::Var(x);
    let zt: Vec<Term> = z.iter().map(|&v| Term::Var(v)).collect();
    let s = join_all(zt.iter().cloned());
    let mut conj: Vec<Formula> = zt.iter().map(|zi| Formula::Eq(d(xt.clone()), d(zi.clone()))).collect();
    conj.push(Formula::Eq(
        join(d(xt.clone()), neg(neg(join(xt.clone(), s.clone())))),
        Term::Var(w),
    ));
    let left = meet(imp(s.clone(), xt.clone()), disjointness(&zt, 1..=m + 1));
    let right = meet(imp(s, neg(xt)), disjointness(&zt, m + 2..=n + 1));
    conj.push(Formula::Eq(join(left, right), Term::constant(ONE)));
    Ok(Formula::And(conj))
}

/// `phi_{k,n}(x, y)` as the definition of the unary symbol `f{k}`.
///
/// Variables: `x`, `y`, then `z_m_i` for each block `m`, then `w_1..w_k`.
pub fn build_phi_kn(k: usize, n: usize) -> Result<OpDefinition> {
    check_kn(k, n)?;
    let mut vars = Vars::new();
    let x = vars.intern("x");
    let y = vars.intern("y");
    let z: Vec<Vec<usize>> = (1..=k)
        .map(|m| (1..=n + 1).map(|i| vars.intern(&format!("z_{m}_{i}"))).collect())
        .collect();
    let w: Vec<usize> = (1..=k).map(|m| vars.intern(&format!("w_{m}"))).collect();
    let mut gamma = vec![Formula::Eq(Term::Var(y), join_all(w.iter().map(|&v| Term::Var(v))))];
    for m in 1..=k {
        gamma.push(build_psi_mn(m, n, x, w[m - 1], &z[m - 1])?);
    }
    let mut bound: Vec<usize> = z.into_iter().flatten().collect();
    bound.extend(&w);
    let phi = Formula::exists(bound, Formula::And(gamma));
    OpDefinition::new(format!("f{k}"), phi, vars, vec![x], y)
}

/// The value table of `f_{k,n}` on `A_n`.
pub fn build_fkn_table(n: usize, k: usize) -> Result<PartialFunctionTable> {
    check_kn(k, n)?;
    let shape = PowersetShape::new(n)?;
    let values: BTreeMap<Vec<Elem>, Elem> = (0..shape.size())
        .map(|a| {
            let v = if a == 0 || a == shape.e() || a == shape.top() || shape.atom_count(a) <= k {
                shape.top()
            } else {
                shape.e()
            };
            (vec![a], v)
        })
        .collect();
    Ok(PartialFunctionTable {
        symbol: format!("f{k}"),
        arity: 1,
        size: shape.size(),
        values,
    })
}

/// Expands `alg` by the total operations the definitions induce on it.
pub fn pp_expand(alg: &FiniteAlgebra, defs: &[OpDefinition]) -> Result<FiniteAlgebra> {
    let refs: Vec<&OpDefinition> = defs.iter().collect();
    let name = if defs.is_empty() {
        alg.name().to_string()
    } else {
        let syms: Vec<&str> = defs.iter().map(|d| d.symbol.as_str()).collect();
        format!("{}[{}]", alg.name(), syms.join(","))
    };
    expand_by_definitions(alg, &name, &refs)
}

/// `B_n`: `A_n` expanded by `f_{1,n}, ..., f_{n-1,n}`, each computed from its formula.
pub fn build_bn(n: usize) -> Result<FiniteAlgebra> {
    if n < 3 {
        return Err(Error::Parameter(format!("B_n needs n >= 3, got {n}")));
    }
    let an = build_an(n)?;
    let defs = (1..n).map(|k| build_phi_kn(k, n)).collect::<Result<Vec<_>>>()?;
    Ok(pp_expand(&an, &defs)?.with_name(format!("B{n}")))
}

/// `B_n` assembled from the closed-form tables of `f_{k,n}` instead of the formulas.
pub fn build_bn_from_tables(n: usize) -> Result<FiniteAlgebra> {
    if n < 3 {
        return Err(Error::Parameter(format!("B_n needs n >= 3, got {n}")));
    }
    let an = build_an(n)?;
    let ops = (1..n)
        .map(|k| {
            let t = build_fkn_table(n, k)?;
            Ok((t.symbol.clone(), 1, t.to_table()?))
        })
        .collect::<Result<Vec<_>>>()?;
    an.expand(format!("B{n}"), ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeView;

    #[test]
    fn implication_rule() {
        let s = PowersetShape::new(3).unwrap();
        assert_eq!(s.imp(0b001, 0b010), 0b110);
        assert_eq!(s.imp(s.e(), 0), 0);
        assert_eq!(s.imp(0, 0), s.top());
        assert_eq!(s.imp(s.top(), 0b011), 0b011);
        assert_eq!(s.name(0b011), "{0,1}");
        assert_eq!(s.name(s.e()), "e");
    }

    #[test]
    fn an_is_heyting() {
        for n in 0..=4 {
            let a = build_an(n).unwrap();
            let view = LatticeView::new(&a).unwrap();
            assert!(view.is_distributive_lattice());
            assert_eq!(view.residuation_violation(), None, "A{n}");
        }
        assert!(build_an(6).is_err());
    }

    #[test]
    fn phi_shape() {
        let def = build_phi_kn(1, 3).unwrap();
        match &def.formula {
            Formula::Exists(vs, _) => assert_eq!(vs.len(), 5),
            other => panic!("{other:?}"),
        }
        let def = build_phi_kn(2, 4).unwrap();
        assert!(matches!(&def.formula, Formula::Exists(vs, _) if vs.len() == 12));
        assert!(build_phi_kn(3, 3).is_err());
        assert!(build_phi_kn(0, 3).is_err());
        assert!(build_phi_kn(1, 2).is_err());
    }

    #[test]
    fn fkn_values() {
        let t = build_fkn_table(3, 1).unwrap();
        assert_eq!(t.get(&[0b001]), Some(8));
        assert_eq!(t.get(&[0b011]), Some(7));
        let t = build_fkn_table(3, 2).unwrap();
        assert_eq!(t.get(&[7]), Some(8));
        assert_eq!(t.get(&[0b011]), Some(8));
    }
}
