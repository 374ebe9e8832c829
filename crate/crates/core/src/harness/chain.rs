//! Claims about the eight-element chain `A`, `A-{a4}`, `B` and the expansion by `g`.

use super::{names, Outcome};
use crate::algebra::{all_subuniverses, quotient, sg_closure, FiniteAlgebra};
use crate::analysis::{class_of, hs_classify, is_isomorphic};
use crate::catalog::{self, A1, A3, A4, A6, TOP, ZERO_E};
use crate::congruence::{congruence_lattice, is_congruence, principal_congruence, Partition};
use crate::error::Result;
use crate::lattice::LatticeView;
use crate::logic::{functional_violation, induced_partial_function, parse_formula, Evaluator, Strategy};

fn chains() -> Result<[FiniteAlgebra; 3]> {
    Ok([
        catalog::build_section2_a(),
        catalog::build_a_minus_a4(),
        catalog::build_theta_and_b()?.1,
    ])
}

pub(super) fn sg_empty(_: &super::Ctx) -> Result<Outcome> {
    let a = catalog::build_section2_a();
    let sub = sg_closure(&a, &[])?;
    let expected: Vec<usize> = a.universe().filter(|&e| e != A4).collect();
    Ok(Outcome::new(
        sub.elements == expected,
        1,
        format!("Sg(empty) = {}", names(&a, &sub.elements)),
    ))
}

pub(super) fn subalgebras(_: &super::Ctx) -> Result<Outcome> {
    let a = catalog::build_section2_a();
    let subs = all_subuniverses(&a)?;
    let listed: Vec<Vec<usize>> = subs.iter().map(|s| s.elements.clone()).collect();
    let expected = vec![a.universe().filter(|&e| e != A4).collect(), a.universe().collect::<Vec<_>>()];
    let shown: Vec<String> = subs.iter().map(|s| names(&a, &s.elements)).collect();
    Ok(Outcome::new(listed == expected, subs.len(), format!("S(A) = [{}]", shown.join(", "))))
}

pub(super) fn theta_congruence(_: &super::Ctx) -> Result<Outcome> {
    let base = catalog::build_a_minus_a4();
    let th = catalog::theta();
    let compatible = is_congruence(&base, &th)?;
    // a6 and 1 sit at dense indices 5 and 6 of A-{a4}.
    let least = principal_congruence(&base, 5, 6)? == th;
    let a = catalog::build_section2_a();
    let glue = Partition::from_blocks(a.size(), &[vec![A6, TOP]])?;
    let not_in_a = !is_congruence(&a, &glue)?;
    let full_in_a = principal_congruence(&a, A6, TOP)?.is_full();
    Ok(Outcome::new(
        compatible && least && not_in_a && full_in_a,
        4,
        format!(
            "theta = {} compatible: {compatible}, least: {least}; in A the same gluing is compatible: {}, Cg(a6,1) full: {full_in_a}",
            th.display_with(&base),
            !not_in_a
        ),
    ))
}

pub(super) fn simple_a(_: &super::Ctx) -> Result<Outcome> {
    let a = catalog::build_section2_a();
    let con = congruence_lattice(&a)?;
    Ok(Outcome::new(
        con.is_simple(),
        con.len(),
        format!("|Con(A)| = {}", con.len()),
    ))
}

pub(super) fn con_a_minus_a4(_: &super::Ctx) -> Result<Outcome> {
    let base = catalog::build_a_minus_a4();
    let (th, b) = catalog::build_theta_and_b()?;
    let con = congruence_lattice(&base)?;
    let expected = vec![Partition::identity(7), th, Partition::full(7)];
    let mut images_ok = true;
    for p in &con.congruences {
        let q = quotient(&base, p)?;
        images_ok &= q.is_trivial() || is_isomorphic(&q, &base)? || is_isomorphic(&q, &b)?;
    }
    let shown: Vec<String> = con.congruences.iter().map(|p| p.display_with(&base).to_string()).collect();
    Ok(Outcome::new(
        con.congruences == expected && images_ok,
        con.len(),
        format!("Con(A-{{a4}}) = [{}]", shown.join(", ")),
    ))
}

pub(super) fn chains_si(_: &super::Ctx) -> Result<Outcome> {
    let mut ok = true;
    let mut evidence = Vec::new();
    for c in chains()? {
        let view = LatticeView::new(&c)?;
        let second = view.second_largest();
        let con = congruence_lattice(&c)?;
        let monolith = con.monolith().cloned();
        let expected = match second {
            Some(s) => Some(principal_congruence(&c, s, view.top())?),
            None => None,
        };
        let good = view.chain_order().is_some() && con.is_si() && expected.is_some() && monolith == expected;
        ok &= good;
        evidence.push(format!(
            "{}: monolith {}",
            c.name(),
            monolith.map_or("none".into(), |m| m.display_with(&c).to_string())
        ));
    }
    Ok(Outcome::new(ok, 3, evidence.join("; ")))
}

pub(super) fn si_list(_: &super::Ctx) -> Result<Outcome> {
    let a = catalog::build_section2_a();
    let hs = hs_classify(&a)?;
    let si: Vec<FiniteAlgebra> = hs.si_classes().into_iter().map(|c| hs.classes[c].clone()).collect();
    let mut ok = si.len() == 3;
    for c in chains()? {
        ok &= class_of(&si, &c)?.is_some();
    }
    let shown: Vec<String> = si.iter().map(|s| format!("{} ({} elements)", s.name(), s.size())).collect();
    Ok(Outcome::new(
        ok,
        hs.members.len(),
        format!("SI classes of HS(A): {}", shown.join(", ")),
    ))
}

pub(super) fn phi_functional(_: &super::Ctx) -> Result<Outcome> {
    let def = catalog::phi();
    let mut ok = true;
    let mut instances = 0;
    let mut evidence = Vec::new();
    for (c, must_be_total) in chains()?.iter().zip([true, false, true]) {
        instances += c.size() * c.size();
        if let Some(v) = functional_violation(c, &def)? {
            ok = false;
            evidence.push(format!(
                "{}: witnesses {} and {} at {}",
                c.name(),
                c.element_name(v.first),
                c.element_name(v.second),
                names(c, &v.tuple)
            ));
            continue;
        }
        let table = induced_partial_function(c, &def)?;
        let note = match table.missing() {
            None => "total".to_string(),
            Some(t) => format!("undefined at x = {}", c.element_name(t[0])),
        };
        ok &= !must_be_total || table.is_total();
        evidence.push(format!("{}: functional, {note}", c.name()));
    }
    Ok(Outcome::new(ok, instances, evidence.join("; ")))
}

pub(super) fn phi_table(_: &super::Ctx) -> Result<Outcome> {
    let def = catalog::phi();
    let a = catalog::build_section2_a();
    let b = catalog::build_theta_and_b()?.1;
    let on_a = induced_partial_function(&a, &def)?;
    let on_b = induced_partial_function(&b, &def)?;
    let top_b = b.size() - 1;
    let ok_a = a.universe().all(|x| on_a.get(&[x]) == Some(if x == ZERO_E { A3 } else { A1 }));
    let a1_b = b.element_by_name("a1")?;
    let ok_b = b.universe().all(|x| on_b.get(&[x]) == Some(if x == 0 { top_b } else { a1_b }));
    Ok(Outcome::new(
        ok_a && ok_b,
        a.size() + b.size(),
        format!("on A: {}; on B: {}", super::one_line(&on_a, &a), super::one_line(&on_b, &b)),
    ))
}

pub(super) fn h_failure(_: &super::Ctx) -> Result<Outcome> {
    let c = catalog::build_c()?;
    let cq = catalog::build_c_mod_theta()?;
    let mut vars = catalog::phi().vars.clone();
    let src = format!("({}) -> {}(x) = y", catalog::PHI_SRC, catalog::G);
    let quasi = parse_formula(&src, c.signature(), &mut vars)?;
    let failures = |alg: &FiniteAlgebra| -> Result<Vec<(usize, usize)>> {
        let ev = Evaluator::new(alg, &quasi, &vars, Strategy::Decomposed)?;
        let mut out = Vec::new();
        for x in alg.universe() {
            for y in alg.universe() {
                if !ev.eval(&vars.assignment(&[("x", x), ("y", y)])?)? {
                    out.push((x, y));
                }
            }
        }
        Ok(out)
    };
    let in_c = failures(&c)?;
    let in_cq = failures(&cq)?;
    let g = cq.op_index(catalog::G).expect("expanded signature");
    let top = cq.size() - 1;
    let g0 = cq.apply1(g, 0);
    let ok = in_c.is_empty() && in_cq == vec![(0, top)] && g0 == cq.element_by_name("a3")?;
    let shown: Vec<String> = in_cq
        .iter()
        .map(|&(x, y)| format!("({}, {})", cq.element_name(x), cq.element_name(y)))
        .collect();
    Ok(Outcome::new(
        ok,
        c.size() * c.size() + cq.size() * cq.size(),
        format!(
            "failures in C: {}; failures in C/theta: [{}]; g(0) = {} in C/theta",
            in_c.len(),
            shown.join(", "),
            cq.element_name(g0)
        ),
    ))
}
