use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{Elem, Signature, Term};
use crate::error::{Error, Result};

/// First-order formula over algebraic terms. Variables are indices into a [`Vars`] table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Exists(Vec<usize>, Box<Formula>),
    Forall(Vec<usize>, Box<Formula>),
}

/// Interned variable names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vars {
    names: Vec<String>,
}

impl Vars {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `name`, adding it if new.
    pub fn intern(&mut self, name: &str) -> usize {
        match self.index(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> String {
        self.names.get(i).cloned().unwrap_or_else(|| format!("v{i}"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Assignment vector with the named variables set.
    pub fn assignment(&self, values: &[(&str, Elem)]) -> Result<Vec<Option<Elem>>> {
        let mut env = vec![None; self.len()];
        for (name, e) in values {
            let i = self
                .index(name)
                .ok_or_else(|| Error::UnassignedVariable(format!("{name} (not in formula)")))?;
            env[i] = Some(*e);
        }
        Ok(env)
    }
}

impl Formula {
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    pub fn exists(vars: Vec<usize>, body: Formula) -> Formula {
        Formula::Exists(vars, Box::new(body))
    }

    pub fn forall(vars: Vec<usize>, body: Formula) -> Formula {
        Formula::Forall(vars, Box::new(body))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Eq(l, r) => {
                let mut vs = BTreeSet::new();
                l.collect_vars(&mut vs);
                r.collect_vars(&mut vs);
                out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
            }
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out));
            }
            Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                let mark = bound.len();
                bound.extend_from_slice(vs);
                body.collect_free(bound, out);
                bound.truncate(mark);
            }
        }
    }

    /// Variables bound by some quantifier, in order of first binding.
    pub fn bound_vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut Vec<usize>) {
        match self {
            Formula::Eq(..) => {}
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_bound(out)),
            Formula::Implies(l, r) => {
                l.collect_bound(out);
                r.collect_bound(out);
            }
            Formula::Not(f) => f.collect_bound(out),
            Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
                for v in vs {
                    if !out.contains(v) {
                        out.push(*v);
                    }
                }
                body.collect_bound(out);
            }
        }
    }

    /// Checks every term against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Eq(l, r) => {
                l.check(sig)?;
                r.check(sig)
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|f| f.check(sig)),
            Formula::Implies(l, r) => {
                l.check(sig)?;
                r.check(sig)
            }
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.check(sig),
        }
    }

    /// Renders in the text syntax accepted by [`super::parse_formula`].
    pub fn display<'a>(&'a self, vars: &'a Vars) -> impl fmt::Display + 'a {
        Printer { f: self, vars }
    }
}

/// Built from equations using only conjunction and existential quantification.
pub fn is_pp(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) => true,
        Formula::And(fs) => fs.iter().all(is_pp),
        Formula::Exists(_, body) => is_pp(body),
        _ => false,
    }
}

struct Printer<'a> {
    f: &'a Formula,
    vars: &'a Vars,
}

impl fmt::Display for Printer<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(out, self.f, self.vars)
    }
}

fn write_term(out: &mut fmt::Formatter<'_>, t: &Term, vars: &Vars) -> fmt::Result {
    match t {
        Term::Var(v) => write!(out, "{}", vars.name(*v)),
        Term::App(sym, args) if args.is_empty() => write!(out, "{sym}"),
        Term::App(sym, args) => {
            write!(out, "{sym}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write_term(out, a, vars)?;
            }
            write!(out, ")")
        }
    }
}

fn is_tight(f: &Formula) -> bool {
    matches!(f, Formula::Eq(..) | Formula::Not(_))
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula, vars: &Vars) -> fmt::Result {
    if is_tight(f) {
        write_formula(out, f, vars)
    } else {
        write!(out, "(")?;
        write_formula(out, f, vars)?;
        write!(out, ")")
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, vars: &Vars) -> fmt::Result {
    match f {
        Formula::Eq(l, r) => {
            write_term(out, l, vars)?;
            write!(out, " = ")?;
            write_term(out, r, vars)
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let sep = if matches!(f, Formula::And(_)) { " /\\ " } else { " \\/ " };
            for (i, g) in fs.iter().enumerate() {
                if i > 0 {
                    write!(out, "{sep}")?;
                }
                write_operand(out, g, vars)?;
            }
            Ok(())
        }
        Formula::Implies(l, r) => {
            write_operand(out, l, vars)?;
            write!(out, " -> ")?;
            write_operand(out, r, vars)
        }
        Formula::Not(g) => {
            write!(out, "!")?;
            write_operand(out, g, vars)
        }
        Formula::Exists(vs, body) | Formula::Forall(vs, body) => {
            let q = if matches!(f, Formula::Exists(..)) { "exists" } else { "forall" };
            write!(out, "{q}")?;
            for v in vs {
                write!(out, " {}", vars.name(*v))?;
            }
            write!(out, ". ")?;
            write_formula(out, body, vars)
        }
    }
}
