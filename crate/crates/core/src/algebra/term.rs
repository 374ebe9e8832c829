use std::collections::BTreeSet;

use super::{Elem, FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// Algebraic term over indexed variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Checks symbols and arities against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(sym, args) => {
                let expected = sig
                    .arity(sym)
                    .ok_or_else(|| Error::UnknownSymbol(sym.clone()))?;
                if expected != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: sym.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

/// Evaluates `t` in `alg` under `env`, where `env[i]` is the value of variable `i`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, env: &[Option<Elem>]) -> Result<Elem> {
    let resolved = ResolvedTerm::resolve(t, alg)?;
    let mut dense = Vec::with_capacity(env.len());
    for v in env {
        match v {
            Some(e) => {
                alg.check_elem(*e)?;
                dense.push(*e);
            }
            None => dense.push(usize::MAX),
        }
    }
    for v in t.vars() {
        if dense.get(v).is_none_or(|&e| e == usize::MAX) {
            return Err(Error::UnassignedVariable(format!("#{v}")));
        }
    }
    Ok(resolved.eval(alg, &dense))
}

/// A term with symbols resolved to operation indices of one algebra.
#[derive(Debug, Clone)]
pub(crate) enum ResolvedTerm {
    Var(usize),
    Const(Elem),
    Op(usize, Vec<ResolvedTerm>),
}

impl ResolvedTerm {
    pub(crate) fn resolve(t: &Term, alg: &FiniteAlgebra) -> Result<ResolvedTerm> {
        t.check(alg.signature())?;
        Ok(Self::resolve_checked(t, alg))
    }

    fn resolve_checked(t: &Term, alg: &FiniteAlgebra) -> ResolvedTerm {
        match t {
            Term::Var(v) => ResolvedTerm::Var(*v),
            Term::App(sym, args) => {
                let op = alg.op_index(sym).expect("checked");
                if args.is_empty() {
                    ResolvedTerm::Const(alg.table(op)[0])
                } else {
                    ResolvedTerm::Op(
                        op,
                        args.iter().map(|a| Self::resolve_checked(a, alg)).collect(),
                    )
                }
            }
        }
    }

    /// Evaluation against a dense environment; every variable must be set.
    #[inline]
    pub(crate) fn eval(&self, alg: &FiniteAlgebra, env: &[Elem]) -> Elem {
        match self {
            ResolvedTerm::Var(v) => env[*v],
            ResolvedTerm::Const(c) => *c,
            ResolvedTerm::Op(op, args) => {
                let size = alg.size();
                let idx = args.iter().fold(0, |acc, a| acc * size + a.eval(alg, env));
                alg.table(*op)[idx]
            }
        }
    }
}
