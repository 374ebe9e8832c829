//! The eight-element chain with extra operations, and the objects derived from it.

use crate::algebra::{quotient, sg_closure, subalgebra, Elem, FiniteAlgebra, Signature};
use crate::congruence::Partition;
use crate::error::Result;
use crate::lattice::{IMP, JOIN, MEET, ONE, ZERO};
use crate::logic::{expand_by_definitions, OpDefinition};

pub const ZERO_E: Elem = 0;
pub const A1: Elem = 1;
pub const A2: Elem = 2;
pub const A3: Elem = 3;
pub const A4: Elem = 4;
pub const A5: Elem = 5;
pub const A6: Elem = 6;
pub const TOP: Elem = 7;

pub const PLUS: &str = "plus";
pub const AST: &str = "ast";
pub const BOX: &str = "box";
pub const DIA: &str = "dia";
pub const CONST_A5: &str = "a5";
/// Symbol of the operation defined by [`phi`].
pub const G: &str = "g";

/// Source text of the pp formula `exists z. x + y = dia z`.
pub const PHI_SRC: &str = "exists z. plus(x,y) = dia(z)";

pub fn signature() -> Signature {
    Signature::new([
        (MEET, 2),
        (JOIN, 2),
        (IMP, 2),
        (ZERO, 0),
        (ONE, 0),
        (CONST_A5, 0),
        (PLUS, 2),
        (AST, 2),
        (BOX, 1),
        (DIA, 1),
    ])
    .expect("distinct symbols")
}

fn element_names() -> Vec<String> {
    let mut names = vec!["0".to_string()];
    names.extend((1..=6).map(|i| format!("a{i}")));
    names.push("1".into());
    names
}

fn plus(a: Elem, b: Elem) -> Elem {
    match (a, b) {
        (ZERO_E, A6 | TOP) => A6,
        (ZERO_E, A3) => A5,
        (ZERO_E, _) => A2,
        (_, A1) => A1,
        _ => A2,
    }
}

fn ast(a: Elem, b: Elem) -> Elem {
    if a == A4 && b == A6 {
        TOP
    } else {
        ZERO_E
    }
}

fn boxed(a: Elem) -> Elem {
    if a == A5 {
        TOP
    } else {
        ZERO_E
    }
}

fn dia(a: Elem) -> Elem {
    match a {
        ZERO_E | A6 | TOP => TOP,
        A1 | A2 => A1,
        A3 | A5 => A3,
        _ => A5,
    }
}

/// The algebra `A`: the Heyting chain `0 < a1 < ... < a6 < 1` with a constant
/// for `a5` and the operations `plus`, `ast`, `box`, `dia`.
pub fn build_section2_a() -> FiniteAlgebra {
    let sig = signature();
    let names: Vec<String> = sig.symbols().iter().map(|s| s.name.clone()).collect();
    FiniteAlgebra::from_fn("A", sig, 8, |op, args| match names[op].as_str() {
        MEET => args[0].min(args[1]),
        JOIN => args[0].max(args[1]),
        IMP => {
            if args[0] <= args[1] {
                TOP
            } else {
                args[1]
            }
        }
        ZERO => ZERO_E,
        ONE => TOP,
        CONST_A5 => A5,
        PLUS => plus(args[0], args[1]),
        AST => ast(args[0], args[1]),
        BOX => boxed(args[0]),
        _ => dia(args[0]),
    })
    .and_then(|a| a.with_element_names(element_names()))
    .expect("tables are in range")
}

/// The subalgebra on `A - {a4}`, indices re-numbered densely.
pub fn build_a_minus_a4() -> FiniteAlgebra {
    let a = build_section2_a();
    let sub = sg_closure(&a, &[]).expect("closure of the empty set");
    let (alg, _) = subalgebra(&a, &sub).expect("closed");
    alg.with_name("A-{a4}")
}

/// Gluing `a6` with `1` on `A - {a4}`.
pub fn theta() -> Partition {
    // Dense indices on A - {a4}: 0, a1, a2, a3, a5, a6, 1.
    Partition::from_blocks(7, &[vec![5, 6]]).expect("valid block")
}

/// `theta` and `B = (A - {a4})/theta`.
pub fn build_theta_and_b() -> Result<(Partition, FiniteAlgebra)> {
    let base = build_a_minus_a4();
    let th = theta();
    let b = quotient(&base, &th)?.with_name("B");
    Ok((th, b))
}

/// The formula `phi(x, y)`, read as a unary operation `g` from `x` to `y`.
pub fn phi() -> OpDefinition {
    OpDefinition::parse(G, PHI_SRC, &signature(), &["x"], "y").expect("well-formed")
}

/// `A` expanded by the operation `g` that `phi` defines on it.
pub fn build_a_expanded() -> Result<FiniteAlgebra> {
    let a = build_section2_a();
    expand_by_definitions(&a, "A[g]", &[&phi()])
}

/// The subalgebra of `A[g]` on `A - {a4}`.
pub fn build_c() -> Result<FiniteAlgebra> {
    let big = build_a_expanded()?;
    let sub = crate::algebra::Subuniverse::check(&big, (0..8).filter(|&e| e != A4))?;
    let (c, _) = subalgebra(&big, &sub)?;
    Ok(c.with_name("C"))
}

/// `C/theta`.
pub fn build_c_mod_theta() -> Result<FiniteAlgebra> {
    Ok(quotient(&build_c()?, &theta())?.with_name("C/theta"))
}
