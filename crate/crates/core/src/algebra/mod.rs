//! Finite algebras stored as dense operation tables.
//!
//! The universe of an algebra of size `n` is always `{0, .., n-1}`. The table of an
//! `r`-ary symbol is a flat row-major array of length `n^r`, so the value at
//! `(a_1, .., a_r)` lives at index `((a_1 * n + a_2) * n + ..) * n + a_r`.

mod io;
mod product;
mod sub;
mod term;

pub use io::{from_json, load, save, to_json, AlgebraFile, OperationFile};
pub use product::{direct_product, quotient, PRODUCT_SIZE_LIMIT};
pub use sub::{all_subuniverses, sg_closure, subalgebra, Subuniverse, SUBUNIVERSE_GUARD};
pub use term::{eval_term, Term};
pub(crate) use term::ResolvedTerm;
pub(crate) use sub::closure_in_order;

use std::fmt;

use crate::error::{Error, Result};

/// An element of a finite universe.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of operation symbols with their arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<OpSymbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut sig = Signature::default();
        for (name, arity) in symbols {
            sig.push(name, arity)?;
        }
        Ok(sig)
    }

    pub fn push(&mut self, name: impl Into<String>, arity: usize) -> Result<usize> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::DuplicateSymbol(name));
        }
        self.symbols.push(OpSymbol { name, arity });
        Ok(self.symbols.len() - 1)
    }

    pub fn symbols(&self) -> &[OpSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }

    /// Same symbols with the same arities, in any order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.len() == other.len()
            && self
                .symbols
                .iter()
                .all(|s| other.arity(&s.name) == Some(s.arity))
    }

    /// Restriction to the named symbols, keeping this signature's order.
    pub fn restrict(&self, keep: &[&str]) -> Result<Signature> {
        for name in keep {
            if self.index_of(name).is_none() {
                return Err(Error::UnknownSymbol(name.to_string()));
            }
        }
        Ok(Signature {
            symbols: self
                .symbols
                .iter()
                .filter(|s| keep.contains(&s.name.as_str()))
                .cloned()
                .collect(),
        })
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A finite algebra. Immutable once constructed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    element_names: Option<Vec<String>>,
    tables: Vec<Vec<Elem>>,
}

/// Number of entries in a table of the given arity, or `None` on overflow.
pub fn table_len(size: usize, arity: usize) -> Option<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|a| size.checked_pow(a))
}

/// Builds a row-major table by evaluating `f` on every argument tuple.
pub fn build_table(size: usize, arity: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Vec<Elem> {
    let mut table = Vec::with_capacity(table_len(size, arity).unwrap_or(0));
    for_each_tuple(size, arity, |args| table.push(f(args)));
    table
}

/// Calls `f` on every tuple in `{0..size}^arity` in row-major order.
pub fn for_each_tuple(size: usize, arity: usize, mut f: impl FnMut(&[Elem])) {
    if arity > 0 && size == 0 {
        return;
    }
    let mut args = vec![0; arity];
    loop {
        f(&args);
        let mut pos = arity;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            args[pos] += 1;
            if args[pos] < size {
                break;
            }
            args[pos] = 0;
        }
    }
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<Elem>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::Format("an algebra needs at least one element".into()));
        }
        if tables.len() != signature.len() {
            return Err(Error::Format(format!(
                "{} tables for {} symbols",
                tables.len(),
                signature.len()
            )));
        }
        for (sym, table) in signature.symbols().iter().zip(&tables) {
            let expected = table_len(size, sym.arity).ok_or(Error::SizeGuard {
                size,
                limit: usize::MAX,
            })?;
            if table.len() != expected {
                return Err(Error::TableLength {
                    symbol: sym.name.clone(),
                    expected,
                    found: table.len(),
                });
            }
            if let Some(&value) = table.iter().find(|&&v| v >= size) {
                return Err(Error::TableValue {
                    symbol: sym.name.clone(),
                    value,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            size,
            element_names: None,
            tables,
        })
    }

    /// Builds every table from a single function `f(symbol index, args)`.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        mut f: impl FnMut(usize, &[Elem]) -> Elem,
    ) -> Result<Self> {
        let tables = signature
            .symbols()
            .iter()
            .enumerate()
            .map(|(op, sym)| build_table(size, sym.arity, |args| f(op, args)))
            .collect();
        Self::new(name, signature, size, tables)
    }

    /// The one-element algebra over `signature`.
    pub fn trivial(signature: Signature) -> Self {
        Self::from_fn("trivial", signature, 1, |_, _| 0).expect("one-element tables are valid")
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::Format(format!(
                "{} element names for {} elements",
                names.len(),
                self.size
            )));
        }
        self.element_names = Some(names);
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn universe(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.element_names.as_deref()
    }

    /// Display name of `e`, falling back to its index.
    pub fn element_name(&self, e: Elem) -> String {
        match &self.element_names {
            Some(names) if e < names.len() => names[e].clone(),
            _ => e.to_string(),
        }
    }

    /// Looks up an element by display name, then as a decimal index.
    pub fn element_by_name(&self, name: &str) -> Result<Elem> {
        let name = name.trim();
        if let Some(names) = &self.element_names {
            if let Some(i) = names.iter().position(|n| n == name) {
                return Ok(i);
            }
        }
        match name.parse::<usize>() {
            Ok(i) if i < self.size => Ok(i),
            _ => Err(Error::UnknownElement(name.to_string())),
        }
    }

    pub fn check_elem(&self, e: Elem) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                elem: e,
                size: self.size,
            })
        }
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.signature.index_of(name)
    }

    pub fn arity(&self, op: usize) -> usize {
        self.signature.symbols[op].arity
    }

    pub fn table(&self, op: usize) -> &[Elem] {
        &self.tables[op]
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.tables
    }

    /// Value of operation `op` at `args`. Panics on out-of-range input.
    #[inline]
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity(op));
        let idx = args.iter().fold(0, |acc, &a| acc * self.size + a);
        self.tables[op][idx]
    }

    #[inline]
    pub fn apply1(&self, op: usize, a: Elem) -> Elem {
        self.tables[op][a]
    }

    #[inline]
    pub fn apply2(&self, op: usize, a: Elem, b: Elem) -> Elem {
        self.tables[op][a * self.size + b]
    }

    /// Interpretation of a nullary symbol.
    pub fn constant(&self, name: &str) -> Option<Elem> {
        let op = self.op_index(name)?;
        (self.arity(op) == 0).then(|| self.tables[op][0])
    }

    /// Values of all nullary symbols, sorted and deduplicated.
    pub fn constants(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self
            .signature
            .symbols()
            .iter()
            .zip(&self.tables)
            .filter(|(s, _)| s.arity == 0)
            .map(|(_, t)| t[0])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Forgets every symbol not listed in `keep`.
    pub fn reduct(&self, keep: &[&str]) -> Result<FiniteAlgebra> {
        let signature = self.signature.restrict(keep)?;
        let tables = signature
            .symbols()
            .iter()
            .map(|s| self.tables[self.op_index(&s.name).unwrap()].clone())
            .collect();
        Ok(FiniteAlgebra {
            name: format!("{}|{}", self.name, keep.join(",")),
            signature,
            size: self.size,
            element_names: self.element_names.clone(),
            tables,
        })
    }

    /// Adds new operation symbols with the given tables.
    pub fn expand(
        &self,
        name: impl Into<String>,
        ops: impl IntoIterator<Item = (String, usize, Vec<Elem>)>,
    ) -> Result<FiniteAlgebra> {
        let mut signature = self.signature.clone();
        let mut tables = self.tables.clone();
        for (sym, arity, table) in ops {
            signature.push(sym, arity)?;
            tables.push(table);
        }
        let alg = FiniteAlgebra::new(name, signature, self.size, tables)?;
        Ok(FiniteAlgebra {
            element_names: self.element_names.clone(),
            ..alg
        })
    }

    /// Table of `op` in `other`, matched by symbol name.
    pub(crate) fn matching_ops(&self, other: &FiniteAlgebra) -> Result<Vec<usize>> {
        if !self.signature.same_symbols(&other.signature) {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.signature, other.signature
            )));
        }
        Ok(self
            .signature
            .symbols()
            .iter()
            .map(|s| other.op_index(&s.name).unwrap())
            .collect())
    }
}
