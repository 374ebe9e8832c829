//! Claims about `A_n`, the formulas `phi_{k,n}` and the expansion `B_n`.

use super::{names, Ctx, Outcome};
use crate::algebra::{all_subuniverses, for_each_tuple, sg_closure, subalgebra, FiniteAlgebra};
use crate::analysis::{
    all_subalgebras, atom_permutation_automorphism, check_amalgamation, check_embedding_rigidity,
    check_epic_subalgebras, check_fixing_automorphisms, class_of, compose, homs, hs_classify, iso_representatives,
    HomKind, ReportEntry, Status,
};
use crate::catalog::{self, PowersetShape};
use crate::congruence::congruence_lattice;
use crate::error::Result;
use crate::lattice::{LatticeView, IMP, JOIN, MEET, ONE, ZERO};
use crate::logic::{functional_violation, induced_partial_function, Evaluator, Strategy};

const HEYTING: [&str; 5] = [MEET, JOIN, IMP, ZERO, ONE];

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn from_report(entries: &[ReportEntry], what: &str) -> Outcome {
    let failed = entries.iter().find(|e| e.status == Status::Fail);
    let evidence = match failed {
        Some(f) => format!("{what}: no witness for {}", f.instance),
        None => format!("{what}: {} instances, each with a witness", entries.len()),
    };
    Outcome::new(failed.is_none(), entries.len(), evidence)
}

pub(super) fn heyting(ctx: &Ctx) -> Result<Outcome> {
    let mut algs = vec![
        catalog::build_section2_a(),
        catalog::build_a_minus_a4(),
        catalog::build_theta_and_b()?.1,
    ];
    for m in 0..=ctx.n {
        algs.push(catalog::build_an(m)?);
    }
    algs.push(ctx.bn()?.clone());
    let mut instances = 0;
    let mut bad = Vec::new();
    for alg in &algs {
        let view = LatticeView::new(alg)?;
        instances += alg.size().pow(3);
        if let Some((a, b, c)) = view.residuation_violation() {
            bad.push(format!(
                "{}: residuation fails at ({}, {}, {})",
                alg.name(),
                alg.element_name(a),
                alg.element_name(b),
                alg.element_name(c)
            ));
        }
        if !view.is_distributive_lattice() {
            bad.push(format!("{}: not a distributive lattice", alg.name()));
        }
    }
    let evidence = if bad.is_empty() {
        format!("{} algebras checked", algs.len())
    } else {
        bad.join("; ")
    };
    Ok(Outcome::new(bad.is_empty(), instances, evidence))
}

struct Identity {
    name: &'static str,
    failure: Option<String>,
}

pub(super) fn elementary_identities(ctx: &Ctx) -> Result<Outcome> {
    let mut ids: Vec<Identity> = [
        "a v b = 1 iff a = 1 or b = 1",
        "0 < a <= e iff a v !a = e",
        "a in {0,e,1} iff !!a = 1",
        "a != e or a = 0 iff !!a = a",
        "a = join of the atoms of B below a, for a != 1 in B <= A_n",
        "each atom b of B <= A_n lies below exactly one of a, !a",
        "meet of !a_i = 1 iff every a_i = 0 (up to three terms)",
        "a <= b iff a -> b = 1",
        "a <= b implies !!a <= !!b",
    ]
    .into_iter()
    .map(|name| Identity { name, failure: None })
    .collect();
    let mut instances = 0;
    for m in 0..=ctx.n {
        let alg = catalog::build_an(m)?;
        let v = LatticeView::new(&alg)?;
        let e = PowersetShape::new(m)?.e();
        let (zero, top) = (v.bottom(), v.top());
        let neg = |a| v.imp(a, zero).expect("Heyting signature");
        let name = |a| alg.element_name(a);
        let mut fail = |i: usize, ok: bool, at: &dyn Fn() -> String| {
            instances += 1;
            if !ok && ids[i].failure.is_none() {
                ids[i].failure = Some(format!("n = {m}, {}", at()));
            }
        };
        for a in alg.universe() {
            for b in alg.universe() {
                fail(0, (v.join(a, b) == top) == (a == top || b == top), &|| format!("a = {}, b = {}", name(a), name(b)));
                fail(7, v.leq(a, b) == (v.imp(a, b) == Some(top)), &|| format!("a = {}, b = {}", name(a), name(b)));
                fail(8, !v.leq(a, b) || v.leq(neg(neg(a)), neg(neg(b))), &|| format!("a = {}, b = {}", name(a), name(b)));
            }
            fail(1, (a != zero && v.leq(a, e)) == (v.join(a, neg(a)) == e), &|| format!("a = {}", name(a)));
            fail(2, [zero, e, top].contains(&a) == (neg(neg(a)) == top), &|| format!("a = {}", name(a)));
            fail(3, (a != e || a == zero) == (neg(neg(a)) == a), &|| format!("a = {}", name(a)));
        }
        for len in 1..=3 {
            for_each_tuple(alg.size(), len, |t| {
                let lhs = v.meet_all(t.iter().map(|&a| neg(a))) == top;
                fail(6, lhs == t.iter().all(|&a| a == zero), &|| format!("a = {}", names(&alg, t)));
            });
        }
        for sub in all_subuniverses(&alg)? {
            let atoms = v.atoms_within(&sub.elements);
            for &a in &sub.elements {
                if a != top {
                    let below = atoms.iter().copied().filter(|&p| v.leq(p, a));
                    fail(4, v.join_all(below) == a, &|| format!("B = {}, a = {}", names(&alg, &sub.elements), name(a)));
                }
                for &b in &atoms {
                    let (x, y) = (v.leq(b, a), v.leq(b, neg(a)));
                    fail(5, x != y, &|| {
                        format!("B = {}, a = {}, b = {}", names(&alg, &sub.elements), name(a), name(b))
                    });
                }
            }
        }
    }
    let failed: Vec<String> = ids
        .iter()
        .filter_map(|i| i.failure.as_ref().map(|f| format!("`{}` fails at {f}", i.name)))
        .collect();
    let evidence = if failed.is_empty() {
        format!("{} identities hold on A_0..A_{}", ids.len(), ctx.n)
    } else {
        failed.join("; ")
    };
    Ok(Outcome::new(failed.is_empty(), instances, evidence))
}

pub(super) fn phi_characterization(ctx: &Ctx) -> Result<Outcome> {
    let an = ctx.an()?;
    let shape = PowersetShape::new(ctx.n)?;
    let mut instances = 0;
    let mut mismatch = None;
    for k in 1..ctx.n {
        let def = catalog::build_phi_kn(k, ctx.n)?;
        let ev = Evaluator::new(an, &def.formula, &def.vars, Strategy::Decomposed)?;
        for a in an.universe() {
            for b in an.universe() {
                instances += 1;
                let got = ev.eval(&def.vars.assignment(&[("x", a), ("y", b)])?)?;
                if got != shape.phi_kn_relation(k, a, b) && mismatch.is_none() {
                    mismatch = Some(format!("k = {k}, a = {}, b = {}: evaluates to {got}", an.element_name(a), an.element_name(b)));
                }
            }
        }
    }
    // The naive evaluator is feasible on phi_{1,3}; both strategies must agree there.
    let a3 = catalog::build_an(3)?;
    let def = catalog::build_phi_kn(1, 3)?;
    let naive = Evaluator::new(&a3, &def.formula, &def.vars, Strategy::Naive)?;
    let fast = Evaluator::new(&a3, &def.formula, &def.vars, Strategy::Decomposed)?;
    let mut disagreement = None;
    for a in a3.universe() {
        for b in a3.universe() {
            instances += 1;
            let env = def.vars.assignment(&[("x", a), ("y", b)])?;
            if naive.eval(&env)? != fast.eval(&env)? && disagreement.is_none() {
                disagreement = Some((a, b));
            }
        }
    }
    let ok = mismatch.is_none() && disagreement.is_none();
    let evidence = match (&mismatch, disagreement) {
        (Some(m), _) => m.clone(),
        (None, Some((a, b))) => format!(
            "naive and decomposed evaluation of phi_{{1,3}} disagree at ({}, {})",
            a3.element_name(a),
            a3.element_name(b)
        ),
        (None, None) => format!(
            "all pairs match for k = 1..{}; naive and decomposed agree on phi_{{1,3}}",
            ctx.n - 1
        ),
    };
    Ok(Outcome::new(ok, instances, evidence))
}

pub(super) fn fkn_tables(ctx: &Ctx) -> Result<Outcome> {
    let an = ctx.an()?;
    let mut problems = Vec::new();
    let mut shown = Vec::new();
    for k in 1..ctx.n {
        let def = catalog::build_phi_kn(k, ctx.n)?;
        if let Some(v) = functional_violation(an, &def)? {
            problems.push(format!(
                "k = {k}: witnesses {} and {} at {}",
                an.element_name(v.first),
                an.element_name(v.second),
                names(an, &v.tuple)
            ));
            continue;
        }
        let table = induced_partial_function(an, &def)?;
        if let Some(t) = table.missing() {
            problems.push(format!("k = {k}: undefined at {}", names(an, &t)));
        } else if table != catalog::build_fkn_table(ctx.n, k)? {
            problems.push(format!("k = {k}: table {} differs", super::one_line(&table, an)));
        }
        shown.push(format!("f{k}: {}", super::one_line(&table, an)));
    }
    let ok = problems.is_empty();
    let evidence = if ok { shown.join("; ") } else { problems.join("; ") };
    Ok(Outcome::new(ok, (ctx.n - 1) * an.size() * an.size(), evidence))
}

fn fsi_classes(alg: &FiniteAlgebra) -> Result<(Vec<FiniteAlgebra>, usize)> {
    let hs = hs_classify(alg)?;
    let reps = hs.fsi_classes().into_iter().map(|c| hs.classes[c].clone()).collect();
    Ok((reps, hs.members.len()))
}

pub(super) fn fsi_an(ctx: &Ctx) -> Result<Outcome> {
    let (fsi, members) = fsi_classes(ctx.an()?)?;
    let mut ok = fsi.len() == ctx.n + 1;
    let mut missing = Vec::new();
    for m in 0..=ctx.n {
        if class_of(&fsi, &catalog::build_an(m)?)?.is_none() {
            ok = false;
            missing.push(format!("A{m}"));
        }
    }
    let sizes: Vec<String> = fsi.iter().map(|a| a.size().to_string()).collect();
    Ok(Outcome::new(
        ok,
        members,
        format!(
            "{} FSI classes of sizes [{}]{}",
            fsi.len(),
            sizes.join(", "),
            if missing.is_empty() { String::new() } else { format!("; missing {}", missing.join(", ")) }
        ),
    ))
}

pub(super) fn con_preserved(ctx: &Ctx) -> Result<Outcome> {
    let subs = all_subalgebras(ctx.bn()?)?;
    let mut bad = None;
    for (c, idx) in &subs {
        let full = congruence_lattice(c)?;
        let reduct = congruence_lattice(&c.reduct(&HEYTING)?)?;
        if full.congruences != reduct.congruences && bad.is_none() {
            bad = Some(format!(
                "C = {}: {} congruences, reduct has {}",
                names(ctx.bn()?, idx),
                full.len(),
                reduct.len()
            ));
        }
    }
    let ok = bad.is_none();
    Ok(Outcome::new(
        ok,
        subs.len(),
        bad.unwrap_or_else(|| format!("equal on all {} subalgebras", subs.len())),
    ))
}

pub(super) fn fsi_bn(ctx: &Ctx) -> Result<Outcome> {
    let bn = ctx.bn()?;
    let (fsi, members) = fsi_classes(bn)?;
    let subs = iso_representatives(all_subalgebras(bn)?.into_iter().map(|(s, _)| s))?;
    let mut ok = fsi.len() == subs.len();
    for s in &subs {
        ok &= class_of(&fsi, s)?.is_some();
    }
    Ok(Outcome::new(
        ok,
        members,
        format!(
            "{} FSI classes in HS(B{}), {} isomorphism types in S(B{})",
            fsi.len(),
            ctx.n,
            subs.len(),
            ctx.n
        ),
    ))
}

pub(super) fn atom_permutations(ctx: &Ctx) -> Result<Outcome> {
    let an = ctx.an()?;
    let bn = ctx.bn()?;
    let perms = permutations(ctx.n);
    let mut bad = None;
    for sigma in &perms {
        for alg in [an, bn] {
            if !atom_permutation_automorphism(alg, sigma)?.automorphism && bad.is_none() {
                bad = Some(format!("{sigma:?} on {}", alg.name()));
            }
        }
    }
    let aut_a = homs(an, an, HomKind::Bijective)?;
    let aut_b = homs(bn, bn, HomKind::Bijective)?;
    let identity: Vec<usize> = bn.universe().collect();
    let group = aut_b.contains(&identity)
        && aut_b.maps.iter().all(|f| {
            aut_b.maps.iter().all(|g| aut_b.contains(&compose(f, g)))
                && aut_b.maps.iter().any(|g| compose(f, g) == identity)
        });
    let ok = bad.is_none() && aut_a.len() == perms.len() && aut_b.len() == perms.len() && group;
    let evidence = match bad {
        Some(b) => format!("not an automorphism: {b}"),
        None => format!(
            "|aut(A{n})| = {}, |aut(B{n})| = {}, {} permutations, aut(B{n}) closed under composition and inverses: {group}",
            aut_a.len(),
            aut_b.len(),
            perms.len(),
            n = ctx.n
        ),
    };
    Ok(Outcome::new(ok, 2 * perms.len(), evidence))
}

pub(super) fn fixing_automorphisms(ctx: &Ctx) -> Result<Outcome> {
    let e = PowersetShape::new(ctx.n)?.e();
    Ok(from_report(&check_fixing_automorphisms(ctx.bn()?, &[e])?, "(A, b) pairs"))
}

pub(super) fn rigidity(ctx: &Ctx) -> Result<Outcome> {
    Ok(from_report(&check_embedding_rigidity(ctx.bn()?)?, "subalgebras"))
}

pub(super) fn amalgamation(ctx: &Ctx) -> Result<Outcome> {
    let bn = ctx.bn()?;
    let mut members = iso_representatives(all_subalgebras(bn)?.into_iter().map(|(s, _)| s))?;
    members.push(FiniteAlgebra::trivial(bn.signature().clone()));
    Ok(from_report(&check_amalgamation(&members)?, "spans"))
}

pub(super) fn epic(ctx: &Ctx) -> Result<Outcome> {
    Ok(from_report(&check_epic_subalgebras(ctx.bn()?)?, "pairs A < C"))
}

pub(super) fn non_equational(ctx: &Ctx) -> Result<Outcome> {
    let bn = ctx.bn()?;
    let shape = PowersetShape::new(ctx.n)?;
    let a = shape.atom(0);
    let not_a = shape.imp(a, 0);
    let sub = sg_closure(bn, &[a])?;
    let mut expected = vec![0, a, not_a, shape.e(), shape.top()];
    expected.sort_unstable();
    let f1 = bn.op_index("f1").expect("B_n has f1");
    let (fa, fna) = (bn.apply1(f1, a), bn.apply1(f1, not_a));
    let (c, _) = subalgebra(bn, &sub)?;
    let reduct = c.reduct(&HEYTING)?;
    let on_reduct = atom_permutation_automorphism(&reduct, &[1, 0])?.automorphism;
    let on_c = atom_permutation_automorphism(&c, &[1, 0])?.automorphism;
    let ok = sub.elements == expected && fa == shape.top() && fna == shape.e() && on_reduct && !on_c;
    Ok(Outcome::new(
        ok,
        1,
        format!(
            "Sg({}) = {}; f1({}) = {}, f1({}) = {}; swap is an automorphism of the reduct: {on_reduct}, of C: {on_c}",
            bn.element_name(a),
            names(bn, &sub.elements),
            bn.element_name(a),
            bn.element_name(fa),
            bn.element_name(not_a),
            bn.element_name(fna)
        ),
    ))
}
