//! Text syntax for formulas.
//!
//! ```text
//! formula := quant | impl
//! quant   := ("exists" | "forall") ident+ "." formula
//! impl    := disj ("->" impl)?
//! disj    := conj ("\/" conj)*
//! conj    := neg ("/\" neg)*
//! neg     := "!" neg | quant | atom
//! atom    := term "=" term | "(" formula ")"
//! term    := ident | ident "(" term ("," term)* ")"
//! ```
//!
//! An identifier naming a nullary symbol is a constant, anything else without
//! parentheses is a variable. `neg(t)` abbreviates `imp(t, zero)` when the
//! signature has no `neg` of its own.

use super::formula::{Formula, Vars};
use crate::algebra::{Signature, Term};
use crate::error::{Error, Result};
use crate::lattice::{IMP, ZERO};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Equals,
    And,
    Or,
    Arrow,
    Bang,
    End,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Equals,
            b'!' => Tok::Bang,
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                i += 1;
                Tok::And
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 1;
                Tok::Or
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || matches!(bytes[i + 1], b'_' | b'\''))
                {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => {
                return Err(Error::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{}`", src[start..].chars().next().unwrap()),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
    vars: &'a mut Vars,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {:?}", self.peek()))
        }
    }

    fn is_quantifier(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == "exists" || s == "forall")
    }

    fn formula(&mut self) -> Result<Formula> {
        if self.is_quantifier() {
            self.quant()
        } else {
            self.implication()
        }
    }

    fn quant(&mut self) -> Result<Formula> {
        let universal = matches!(self.bump(), Tok::Ident(s) if s == "forall");
        let mut bound = Vec::new();
        while let Tok::Ident(name) = self.peek().clone() {
            if self.sig.index_of(&name).is_some() {
                return self.error(format!("`{name}` is an operation symbol, not a variable"));
            }
            self.bump();
            bound.push(self.vars.intern(&name));
        }
        if bound.is_empty() {
            return self.error("quantifier needs at least one variable");
        }
        self.expect(Tok::Dot, "`.` after quantified variables")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(bound, body)
        } else {
            Formula::exists(bound, body)
        })
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = if self.is_quantifier() {
                self.quant()?
            } else {
                self.implication()?
            };
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let first = self.conjunction()?;
        let mut items = vec![first];
        while *self.peek() == Tok::Or {
            self.bump();
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let first = self.negation()?;
        let mut items = vec![first];
        while *self.peek() == Tok::And {
            self.bump();
            items.push(self.negation()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn negation(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.negation()?));
        }
        if self.is_quantifier() {
            return self.quant();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let lhs = self.term()?;
        self.expect(Tok::Equals, "`=`")?;
        let rhs = self.term()?;
        Ok(Formula::Eq(lhs, rhs))
    }

    fn term(&mut self) -> Result<Term> {
        let at = self.offset();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            other => {
                self.pos -= usize::from(other != Tok::End);
                return self.error(format!("expected a term, found {other:?}"));
            }
        };
        if *self.peek() != Tok::LParen {
            return match self.sig.arity(&name) {
                Some(0) => Ok(Term::constant(name)),
                Some(arity) => Err(Error::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    found: 0,
                }),
                None if name == "exists" || name == "forall" => Err(Error::Syntax {
                    pos: at,
                    msg: format!("`{name}` is a keyword"),
                }),
                None => Ok(Term::Var(self.vars.intern(&name))),
            };
        }
        self.bump();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)` after arguments")?;
        self.application(name, args)
    }

    fn application(&self, name: String, args: Vec<Term>) -> Result<Term> {
        let arity = match self.sig.arity(&name) {
            Some(a) => a,
            None if name == "neg"
                && self.sig.arity(IMP) == Some(2)
                && self.sig.arity(ZERO) == Some(0) =>
            {
                if args.len() != 1 {
                    return Err(Error::ArityMismatch {
                        symbol: name,
                        expected: 1,
                        found: args.len(),
                    });
                }
                let arg = args.into_iter().next().unwrap();
                return Ok(Term::app(IMP, vec![arg, Term::constant(ZERO)]));
            }
            None => return Err(Error::UnknownSymbol(name)),
        };
        if arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: name,
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Term::App(name, args))
    }
}

/// Parses `src` against `sig`, interning variable names into `vars`.
pub fn parse_formula(src: &str, sig: &Signature, vars: &mut Vars) -> Result<Formula> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        vars,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {:?} after formula", p.peek()));
    }
    Ok(f)
}

/// Parses a single term.
pub fn parse_term(src: &str, sig: &Signature, vars: &mut Vars) -> Result<Term> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        vars,
    };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {:?} after term", p.peek()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig() -> Signature {
        Signature::new([
            ("plus", 2),
            ("dia", 1),
            ("imp", 2),
            ("zero", 0),
            ("one", 0),
        ])
        .unwrap()
    }

    fn parse(src: &str) -> Result<(Formula, Vars)> {
        let mut vars = Vars::new();
        let f = parse_formula(src, &sig(), &mut vars)?;
        Ok((f, vars))
    }

    #[test]
    fn existential_equation() {
        let (f, vars) = parse("exists z. plus(x,y) = dia(z)").unwrap();
        let (x, y, z) = (vars.index("x").unwrap(), vars.index("y").unwrap(), vars.index("z").unwrap());
        assert_eq!(
            f,
            Formula::exists(
                vec![z],
                Formula::Eq(
                    Term::app("plus", vec![Term::Var(x), Term::Var(y)]),
                    Term::app("dia", vec![Term::Var(z)])
                )
            )
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![x, y]);
    }

    #[test]
    fn connective_precedence() {
        let (f, _) = parse("(x = y /\\ y = z) -> x = z").unwrap();
        assert!(matches!(&f, Formula::Implies(l, _) if matches!(**l, Formula::And(ref v) if v.len() == 2)));
        let (g, _) = parse("!x = y /\\ x = x \\/ y = y").unwrap();
        match g {
            Formula::Or(items) => {
                assert!(matches!(&items[0], Formula::And(v) if matches!(v[0], Formula::Not(_))))
            }
            other => panic!("{other:?}"),
        }
        let (h, _) = parse("x = x -> y = y -> x = y").unwrap();
        assert!(matches!(h, Formula::Implies(_, r) if matches!(*r, Formula::Implies(..))));
    }

    #[test]
    fn constants_and_neg_sugar() {
        let (f, vars) = parse("neg(x) = one").unwrap();
        assert_eq!(vars.len(), 1);
        assert_eq!(
            f,
            Formula::Eq(
                Term::app("imp", vec![Term::Var(0), Term::constant("zero")]),
                Term::constant("one")
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("x = "), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x = y /\\"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x ? y"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("times(x,y) = x"), Err(Error::UnknownSymbol(s)) if s == "times"));
        assert!(matches!(parse("dia(x,y) = x"), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse("plus = x"), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse("exists . x = x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(x = x"), Err(Error::Syntax { .. })));
    }

    fn arb_term(depth: u32) -> BoxedStrategy<Term> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(Term::Var),
            Just(Term::constant("one")),
        ];
        leaf.prop_recursive(depth, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("plus", vec![a, b])),
                inner.prop_map(|a| Term::app("dia", vec![a])),
            ]
        })
        .boxed()
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = (arb_term(2), arb_term(2)).prop_map(|(a, b)| Formula::Eq(a, b));
        leaf.prop_recursive(3, 24, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
                proptest::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                inner.clone().prop_map(Formula::not),
                (0usize..3, inner.clone()).prop_map(|(v, b)| Formula::exists(vec![v], b)),
                (0usize..3, inner).prop_map(|(v, b)| Formula::forall(vec![v], b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printing_then_parsing_is_identity(f in arb_formula()) {
            let mut vars = Vars::new();
            for n in ["x", "y", "z"] {
                vars.intern(n);
            }
            let text = f.display(&vars).to_string();
            let mut again = vars.clone();
            let parsed = parse_formula(&text, &sig(), &mut again).unwrap();
            prop_assert_eq!(parsed, f);
        }
    }
}
