use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::eval::{Evaluator, Strategy};
use super::formula::{Formula, Vars};
use super::parser::parse_formula;
use crate::algebra::{for_each_tuple, Elem, FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// A formula read as the graph of an operation: `formula(args, result)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpDefinition {
    pub symbol: String,
    pub formula: Formula,
    pub vars: Vars,
    pub args: Vec<usize>,
    pub result: usize,
}

impl OpDefinition {
    /// Free variables of `formula` must be among `args` and `result`.
    pub fn new(symbol: impl Into<String>, formula: Formula, vars: Vars, args: Vec<usize>, result: usize) -> Result<Self> {
        let mut designated = args.clone();
        designated.push(result);
        let mut seen = designated.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != designated.len() {
            return Err(Error::Parameter("designated variables must be distinct".into()));
        }
        if let Some(v) = formula.free_vars().into_iter().find(|v| !designated.contains(v)) {
            return Err(Error::UnassignedVariable(vars.name(v)));
        }
        Ok(OpDefinition {
            symbol: symbol.into(),
            formula,
            vars,
            args,
            result,
        })
    }

    /// Parses `src` and designates variables by name.
    pub fn parse(symbol: impl Into<String>, src: &str, sig: &Signature, args: &[&str], result: &str) -> Result<Self> {
        let mut vars = Vars::new();
        let arg_ids: Vec<usize> = args.iter().map(|a| vars.intern(a)).collect();
        let out = vars.intern(result);
        let formula = parse_formula(src, sig, &mut vars)?;
        Self::new(symbol, formula, vars, arg_ids, out)
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

/// A tuple with two distinct witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub tuple: Vec<Elem>,
    pub first: Elem,
    pub second: Elem,
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::NotFunctional {
            tuple: v.tuple,
            first: v.first,
            second: v.second,
        }
    }
}

/// The partial operation a functional formula induces on one algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFunctionTable {
    pub symbol: String,
    pub arity: usize,
    pub size: usize,
    pub values: BTreeMap<Vec<Elem>, Elem>,
}

impl PartialFunctionTable {
    pub fn get(&self, args: &[Elem]) -> Option<Elem> {
        self.values.get(args).copied()
    }

    pub fn domain(&self) -> Vec<Vec<Elem>> {
        self.values.keys().cloned().collect()
    }

    pub fn is_total(&self) -> bool {
        self.missing().is_none()
    }

    /// First tuple (lexicographically) without a value.
    pub fn missing(&self) -> Option<Vec<Elem>> {
        let mut first = None;
        for_each_tuple(self.size, self.arity, |t| {
            if first.is_none() && !self.values.contains_key(t) {
                first = Some(t.to_vec());
            }
        });
        first
    }

    /// Dense table in row-major order, if total.
    pub fn to_table(&self) -> Result<Vec<Elem>> {
        if let Some(t) = self.missing() {
            return Err(Error::NotTotal(t));
        }
        Ok(self.values.values().copied().collect())
    }

    pub fn display_with<'a>(&'a self, alg: &'a FiniteAlgebra) -> impl fmt::Display + 'a {
        TableDisplay { table: self, alg }
    }
}

struct TableDisplay<'a> {
    table: &'a PartialFunctionTable,
    alg: &'a FiniteAlgebra,
}

impl fmt::Display for TableDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (args, v) in &self.table.values {
            let names: Vec<String> = args.iter().map(|&a| self.alg.element_name(a)).collect();
            writeln!(
                f,
                "{}({}) = {}",
                self.table.symbol,
                names.join(","),
                self.alg.element_name(*v)
            )?;
        }
        Ok(())
    }
}

fn check_arity(def: &OpDefinition, arity: usize) -> Result<()> {
    if def.arity() != arity {
        return Err(Error::ArityMismatch {
            symbol: def.symbol.clone(),
            expected: arity,
            found: def.arity(),
        });
    }
    Ok(())
}

/// Walks every argument tuple, calling `visit(tuple, witnesses)` with up to
/// `limit` witnesses; stops when `visit` returns false.
fn scan(
    alg: &FiniteAlgebra,
    def: &OpDefinition,
    limit: usize,
    mut visit: impl FnMut(&[Elem], &[Elem]) -> bool,
) -> Result<()> {
    let ev = Evaluator::new(alg, &def.formula, &def.vars, Strategy::Decomposed)?;
    let mut env = vec![usize::MAX; ev.width()];
    let mut stop = false;
    for_each_tuple(alg.size(), def.arity(), |tuple| {
        if stop {
            return;
        }
        for (&v, &a) in def.args.iter().zip(tuple) {
            env[v] = a;
        }
        let mut found = Vec::new();
        for b in alg.universe() {
            env[def.result] = b;
            if ev.eval_dense(&mut env) {
                found.push(b);
                if found.len() == limit {
                    break;
                }
            }
        }
        stop = !visit(tuple, &found);
    });
    Ok(())
}

/// Lexicographically first tuple with two witnesses, if any.
pub fn functional_violation(alg: &FiniteAlgebra, def: &OpDefinition) -> Result<Option<Violation>> {
    let mut out = None;
    scan(alg, def, 2, |tuple, found| {
        if found.len() > 1 {
            out = Some(Violation {
                tuple: tuple.to_vec(),
                first: found[0],
                second: found[1],
            });
            return false;
        }
        true
    })?;
    Ok(out)
}

/// Whether `def` has at most one witness per tuple in every algebra.
pub fn check_functional(algs: &[&FiniteAlgebra], def: &OpDefinition, arity: usize) -> Result<bool> {
    check_arity(def, arity)?;
    for alg in algs {
        if functional_violation(alg, def)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The partial operation defined by `def`; fails on the first non-functional tuple.
pub fn induced_partial_function(alg: &FiniteAlgebra, def: &OpDefinition) -> Result<PartialFunctionTable> {
    let mut values = BTreeMap::new();
    let mut violation = None;
    scan(alg, def, 2, |tuple, found| match found {
        [] => true,
        [b] => {
            values.insert(tuple.to_vec(), *b);
            true
        }
        _ => {
            violation = Some(Violation {
                tuple: tuple.to_vec(),
                first: found[0],
                second: found[1],
            });
            false
        }
    })?;
    if let Some(v) = violation {
        return Err(v.into());
    }
    Ok(PartialFunctionTable {
        symbol: def.symbol.clone(),
        arity: def.arity(),
        size: alg.size(),
        values,
    })
}

/// Adds the operations defined by `defs`, which must be total and functional.
pub fn expand_by_definitions(alg: &FiniteAlgebra, name: &str, defs: &[&OpDefinition]) -> Result<FiniteAlgebra> {
    let mut ops = Vec::new();
    for def in defs {
        let table = induced_partial_function(alg, def)?.to_table()?;
        ops.push((def.symbol.clone(), def.arity(), table));
    }
    alg.expand(name, ops)
}
