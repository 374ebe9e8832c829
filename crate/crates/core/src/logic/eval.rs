use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use super::formula::{Formula, Vars};
use crate::algebra::{Elem, FiniteAlgebra, ResolvedTerm, Term};
use crate::error::{Error, Result};

const UNSET: Elem = usize::MAX;

/// How existential subformulas are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Plain enumeration of every quantified variable.
    Naive,
    /// Conjunctive bodies are split into components and hub-and-piece joins,
    /// with equations `v = t` used to compute `v` instead of enumerating it.
    Decomposed,
}

#[derive(Debug)]
enum Node {
    Eq(ResolvedTerm, ResolvedTerm),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Not(Box<Node>),
    Exists(Box<ExistsNode>),
    Forall(Vec<usize>, Box<Node>),
}

#[derive(Debug)]
struct ExistsNode {
    id: usize,
    vars: Vec<usize>,
    body: Node,
    conjuncts: Vec<Conjunct>,
    slots: Vec<Slot>,
    plan: Plan,
}

/// A shared subterm of an existential block. Children precede parents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Slot {
    Var(usize),
    Const(Elem),
    Op(usize, Vec<usize>),
}

#[derive(Debug)]
struct Conjunct {
    node: Node,
    /// Slots of both sides when the conjunct is an equation.
    eq: Option<(usize, usize)>,
    bound: Vec<usize>,
    outer: Vec<usize>,
    /// Ways to compute a bound variable from the others: `v = t` or `t = v`.
    solves: Vec<Solve>,
}

#[derive(Debug)]
struct Solve {
    var: usize,
    slot: usize,
    needs: Vec<usize>,
}

#[derive(Debug)]
struct Plan {
    ground: Vec<usize>,
    components: Vec<Search>,
    pieces: Vec<Piece>,
}

#[derive(Debug)]
struct Piece {
    interface: Vec<usize>,
    outer: Vec<usize>,
    search: Search,
}

#[derive(Debug, Default)]
struct Search {
    /// Slots depending only on variables outside the search.
    prelude: Vec<usize>,
    steps: Vec<Step>,
}

#[derive(Debug)]
struct Step {
    var: usize,
    solve: Option<usize>,
    compute: Vec<usize>,
    checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy)]
enum Check {
    Conjunct(usize),
    Piece(usize),
}

struct Interner<'a> {
    alg: &'a FiniteAlgebra,
    slots: Vec<Slot>,
    slot_vars: Vec<BTreeSet<usize>>,
    index: HashMap<Slot, usize>,
}

impl Interner<'_> {
    fn intern(&mut self, t: &Term) -> usize {
        let (slot, vars) = match t {
            Term::Var(v) => (Slot::Var(*v), BTreeSet::from([*v])),
            Term::App(sym, args) => {
                let op = self.alg.op_index(sym).expect("checked");
                if args.is_empty() {
                    (Slot::Const(self.alg.table(op)[0]), BTreeSet::new())
                } else {
                    let kids: Vec<usize> = args.iter().map(|a| self.intern(a)).collect();
                    let mut vars = BTreeSet::new();
                    kids.iter().for_each(|&k| vars.extend(&self.slot_vars[k]));
                    (Slot::Op(op, kids), vars)
                }
            }
        };
        if let Some(&i) = self.index.get(&slot) {
            return i;
        }
        self.slots.push(slot.clone());
        self.slot_vars.push(vars);
        self.index.insert(slot, self.slots.len() - 1);
        self.slots.len() - 1
    }

    fn descendants(&self, roots: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = roots.into_iter().collect();
        while let Some(s) = stack.pop() {
            if out.insert(s) {
                if let Slot::Op(_, kids) = &self.slots[s] {
                    stack.extend(kids);
                }
            }
        }
        out
    }
}

struct Compiler<'a> {
    alg: &'a FiniteAlgebra,
    next_id: usize,
}

impl Compiler<'_> {
    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Eq(l, r) => Node::Eq(
                ResolvedTerm::resolve(l, self.alg)?,
                ResolvedTerm::resolve(r, self.alg)?,
            ),
            Formula::And(fs) => Node::And(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| self.compile(g)).collect::<Result<_>>()?),
            Formula::Implies(l, r) => Node::Implies(Box::new(self.compile(l)?), Box::new(self.compile(r)?)),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::Forall(vs, body) => Node::Forall(vs.clone(), Box::new(self.compile(body)?)),
            Formula::Exists(vs, body) => self.compile_exists(vs, body)?,
        })
    }

    fn compile_exists(&mut self, vs: &[usize], body: &Formula) -> Result<Node> {
        let compiled_body = self.compile(body)?;
        let mut bound: Vec<usize> = Vec::new();
        let add = |vs: &[usize], bound: &mut Vec<usize>| {
            for v in vs {
                if !bound.contains(v) {
                    bound.push(*v);
                }
            }
        };
        add(vs, &mut bound);
        let mut inner = body;
        while let Formula::Exists(more, b) = inner {
            add(more, &mut bound);
            inner = b;
        }
        let mut flat = Vec::new();
        flatten_and(inner, &mut flat);
        let mut interner = Interner {
            alg: self.alg,
            slots: Vec::new(),
            slot_vars: Vec::new(),
            index: HashMap::new(),
        };
        let mut conjuncts = Vec::with_capacity(flat.len());
        for c in flat {
            let free = c.free_vars();
            let (b, o): (Vec<usize>, Vec<usize>) = free.iter().partition(|v| bound.contains(v));
            let mut eq = None;
            let mut solves = Vec::new();
            if let Formula::Eq(l, r) = c {
                let (ls, rs) = (interner.intern(l), interner.intern(r));
                eq = Some((ls, rs));
                for (side, other) in [(l, rs), (r, ls)] {
                    if let Term::Var(v) = side {
                        let ov = &interner.slot_vars[other];
                        if bound.contains(v) && !ov.contains(v) {
                            let needs = ov.iter().copied().filter(|u| bound.contains(u)).collect();
                            solves.push(Solve {
                                var: *v,
                                slot: other,
                                needs,
                            });
                        }
                    }
                }
            }
            conjuncts.push(Conjunct {
                node: self.compile(c)?,
                eq,
                bound: b,
                outer: o,
                solves,
            });
        }
        let plan = plan(&bound, &conjuncts, &interner);
        let id = self.next_id;
        self.next_id += 1;
        Ok(Node::Exists(Box::new(ExistsNode {
            id,
            vars: bound,
            body: compiled_body,
            conjuncts,
            slots: interner.slots,
            plan,
        })))
    }
}

fn flatten_and<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(fs) => fs.iter().for_each(|g| flatten_and(g, out)),
        other => out.push(other),
    }
}

/// Connected components of `vars`, where each link joins all its members.
fn components(vars: &[usize], links: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut parent: HashMap<usize, usize> = vars.iter().map(|&v| (v, v)).collect();
    fn find(p: &mut HashMap<usize, usize>, v: usize) -> usize {
        let mut r = v;
        while p[&r] != r {
            r = p[&r];
        }
        let mut c = v;
        while p[&c] != r {
            let next = p[&c];
            p.insert(c, r);
            c = next;
        }
        r
    }
    for link in links {
        let members: Vec<usize> = link.into_iter().filter(|v| parent.contains_key(v)).collect();
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent.insert(a.max(b), a.min(b));
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for &v in vars {
        let r = find(&mut parent, v);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(v),
            None => groups.push((r, vec![v])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

fn plan(bound: &[usize], conj: &[Conjunct], terms: &Interner) -> Plan {
    let ground = (0..conj.len()).filter(|&c| conj[c].bound.is_empty()).collect();
    // A bound variable occurring nowhere can take any value.
    let used: Vec<usize> = bound
        .iter()
        .copied()
        .filter(|v| conj.iter().any(|c| c.bound.contains(v)))
        .collect();
    let mut out = Plan {
        ground,
        components: Vec::new(),
        pieces: Vec::new(),
    };
    for group in components(&used, conj.iter().map(|c| c.bound.clone())) {
        let cids: Vec<usize> = (0..conj.len())
            .filter(|&c| conj[c].bound.iter().any(|v| group.contains(v)))
            .collect();
        let comp = plan_component(&group, &cids, conj, terms, &mut out.pieces);
        out.components.push(comp);
    }
    out
}

struct HubChoice {
    cost: (usize, usize),
    hub_vars: Vec<usize>,
    hub_conj: Vec<usize>,
    pieces: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>,
}

/// Either one search over the whole component, or a hub conjunct whose
/// variables are searched directly while the remaining sub-components are
/// precomputed as relations on the hub variables they touch.
fn plan_component(
    vars: &[usize],
    cids: &[usize],
    conj: &[Conjunct],
    terms: &Interner,
    pieces: &mut Vec<Piece>,
) -> Search {
    let outer_of = |cs: &[usize]| {
        let mut o: BTreeSet<usize> = BTreeSet::new();
        cs.iter().for_each(|&c| o.extend(&conj[c].outer));
        o
    };
    let comp_outer = outer_of(cids).len();
    let mut best: Option<HubChoice> = None;
    for &h in cids {
        let hub: Vec<usize> = vars.iter().copied().filter(|v| conj[h].bound.contains(v)).collect();
        let rest: Vec<usize> = vars.iter().copied().filter(|v| !hub.contains(v)).collect();
        if rest.is_empty() {
            continue;
        }
        let others: Vec<usize> = cids.iter().copied().filter(|&c| c != h).collect();
        let groups = components(
            &rest,
            others
                .iter()
                .map(|&c| conj[c].bound.iter().copied().filter(|v| !hub.contains(v)).collect()),
        );
        let mut hub_conj = vec![h];
        hub_conj.extend(others.iter().copied().filter(|&c| conj[c].bound.iter().all(|v| hub.contains(v))));
        let mut cost = hub.len();
        let mut key_width = 0;
        let mut parts = Vec::new();
        for inner in groups {
            let pc: Vec<usize> = others
                .iter()
                .copied()
                .filter(|&c| conj[c].bound.iter().any(|v| inner.contains(v)))
                .collect();
            let interface: Vec<usize> = hub
                .iter()
                .copied()
                .filter(|v| pc.iter().any(|&c| conj[c].bound.contains(v)))
                .collect();
            cost = cost.max(inner.len() + interface.len());
            key_width = key_width.max(outer_of(&pc).len());
            parts.push((inner, interface, pc));
        }
        // Worth it when pieces are smaller than the component, or when their
        // cache keys drop outer variables so results are reused across calls.
        let useful = cost < vars.len() || key_width < comp_outer;
        if useful && best.as_ref().is_none_or(|b| (cost, key_width) < b.cost) {
            best = Some(HubChoice {
                cost: (cost, key_width),
                hub_vars: hub,
                hub_conj,
                pieces: parts,
            });
        }
    }
    let Some(choice) = best else {
        return build_search(vars, &[], cids, &[], conj, terms);
    };
    let mut checks = Vec::new();
    for (inner, interface, pc) in choice.pieces {
        let mut order = inner.clone();
        order.extend(&interface);
        let search = build_search(&order, &interface, &pc, &[], conj, terms);
        checks.push((pieces.len(), interface.clone()));
        pieces.push(Piece {
            interface,
            outer: outer_of(&pc).into_iter().collect(),
            search,
        });
    }
    build_search(&choice.hub_vars, &[], &choice.hub_conj, &checks, conj, terms)
}

/// Greedy variable ordering: solve by equation when possible, otherwise pick the
/// variable that completes the most constraints. Variables in `last` are only
/// enumerated once everything else is assigned.
fn build_search(
    vars: &[usize],
    last: &[usize],
    cids: &[usize],
    pieces: &[(usize, Vec<usize>)],
    conj: &[Conjunct],
    terms: &Interner,
) -> Search {
    let mut assigned: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = vars.to_vec();
    let mut pending: Vec<usize> = cids.to_vec();
    let mut pending_pieces: Vec<(usize, Vec<usize>)> = pieces.to_vec();
    let mut raw_steps: Vec<(usize, Option<usize>, Vec<Check>)> = Vec::new();
    while !remaining.is_empty() {
        let mut solve = None;
        'find: for &c in &pending {
            for s in &conj[c].solves {
                if remaining.contains(&s.var) && s.needs.iter().all(|u| assigned.contains(u) || !vars.contains(u)) {
                    solve = Some((s.var, c, s.slot));
                    break 'find;
                }
            }
        }
        let var = match solve {
            Some((v, c, _)) => {
                pending.retain(|&d| d != c);
                v
            }
            None => {
                let free: Vec<usize> = remaining.iter().copied().filter(|v| !last.contains(v)).collect();
                let pool = if free.is_empty() { &remaining } else { &free };
                let score = |v: usize| {
                    let completes = pending
                        .iter()
                        .filter(|&&c| {
                            conj[c].bound.contains(&v)
                                && conj[c]
                                    .bound
                                    .iter()
                                    .all(|u| *u == v || assigned.contains(u) || !vars.contains(u))
                        })
                        .count();
                    let touches = pending.iter().filter(|&&c| conj[c].bound.contains(&v)).count();
                    (completes, touches)
                };
                let mut best = pool[0];
                for &v in pool.iter().skip(1) {
                    if score(v) > score(best) {
                        best = v;
                    }
                }
                best
            }
        };
        remaining.retain(|&v| v != var);
        assigned.push(var);
        let ready = |bound: &[usize]| bound.iter().all(|u| assigned.contains(u) || !vars.contains(u));
        let mut checks = Vec::new();
        pending.retain(|&c| {
            if ready(&conj[c].bound) {
                checks.push(Check::Conjunct(c));
                false
            } else {
                true
            }
        });
        pending_pieces.retain(|(p, iface)| {
            if ready(iface) {
                checks.push(Check::Piece(*p));
                false
            } else {
                true
            }
        });
        raw_steps.push((var, solve.map(|(_, _, slot)| slot), checks));
    }

    // Schedule each needed subterm at the step that assigns its last variable.
    let mut roots = Vec::new();
    for (_, solve, checks) in &raw_steps {
        roots.extend(solve);
        for ch in checks {
            if let Check::Conjunct(c) = ch {
                if let Some((l, r)) = conj[*c].eq {
                    roots.extend([l, r]);
                }
            }
        }
    }
    let level = |s: usize| {
        terms.slot_vars[s]
            .iter()
            .filter_map(|v| raw_steps.iter().position(|(sv, _, _)| sv == v))
            .max()
    };
    let mut prelude = Vec::new();
    let mut per_step: Vec<Vec<usize>> = vec![Vec::new(); raw_steps.len()];
    for s in terms.descendants(roots) {
        match level(s) {
            None => prelude.push(s),
            Some(i) => per_step[i].push(s),
        }
    }
    let steps = raw_steps
        .into_iter()
        .zip(per_step)
        .map(|((var, solve, checks), compute)| Step {
            var,
            solve,
            compute,
            checks,
        })
        .collect();
    Search { prelude, steps }
}

type PieceKey = (usize, usize, Vec<Elem>);

/// Evaluates one formula in one algebra, caching piece relations across calls.
pub struct Evaluator<'a> {
    alg: &'a FiniteAlgebra,
    root: Node,
    free: Vec<usize>,
    names: Vec<String>,
    width: usize,
    strategy: Strategy,
    cache: RefCell<HashMap<PieceKey, Rc<HashSet<Vec<Elem>>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(alg: &'a FiniteAlgebra, f: &Formula, vars: &Vars, strategy: Strategy) -> Result<Self> {
        f.check(alg.signature())?;
        let mut compiler = Compiler { alg, next_id: 0 };
        let root = compiler.compile(f)?;
        let free: Vec<usize> = f.free_vars().into_iter().collect();
        let widest = free
            .iter()
            .chain(f.bound_vars().iter())
            .copied()
            .max()
            .map_or(0, |m| m + 1);
        let width = widest.max(vars.len());
        Ok(Evaluator {
            alg,
            root,
            free,
            names: (0..width).map(|i| vars.name(i)).collect(),
            width,
            strategy,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.alg
    }

    pub fn free_vars(&self) -> &[usize] {
        &self.free
    }

    /// Truth value under `env` (indexed by variable). Every free variable must be set.
    pub fn eval(&self, env: &[Option<Elem>]) -> Result<bool> {
        let mut dense = vec![UNSET; self.width.max(env.len())];
        for (i, v) in env.iter().enumerate() {
            if let Some(e) = v {
                self.alg.check_elem(*e)?;
                dense[i] = *e;
            }
        }
        for &v in &self.free {
            if dense[v] == UNSET {
                return Err(Error::UnassignedVariable(self.names[v].clone()));
            }
        }
        Ok(self.holds(&self.root, &mut dense))
    }

    /// Like [`Evaluator::eval`] for callers that already hold a dense environment
    /// covering every free variable.
    pub(crate) fn eval_dense(&self, env: &mut [Elem]) -> bool {
        self.holds(&self.root, env)
    }

    pub(crate) fn width(&self) -> usize {
        self.width
    }

    fn holds(&self, node: &Node, env: &mut [Elem]) -> bool {
        match node {
            Node::Eq(l, r) => l.eval(self.alg, env) == r.eval(self.alg, env),
            Node::And(items) => items.iter().all(|n| self.holds(n, env)),
            Node::Or(items) => items.iter().any(|n| self.holds(n, env)),
            Node::Implies(l, r) => !self.holds(l, env) || self.holds(r, env),
            Node::Not(n) => !self.holds(n, env),
            Node::Forall(vs, body) => !self.enumerate(vs, env, &mut |env| !self.holds(body, env)),
            Node::Exists(ex) => match self.strategy {
                Strategy::Naive => self.enumerate(&ex.vars, env, &mut |env| self.holds(&ex.body, env)),
                Strategy::Decomposed => self.exists_decomposed(ex, env),
            },
        }
    }

    /// True when `found` holds for some assignment of `vs`. Restores `env`.
    fn enumerate(&self, vs: &[usize], env: &mut [Elem], found: &mut dyn FnMut(&mut [Elem]) -> bool) -> bool {
        let saved: Vec<Elem> = vs.iter().map(|&v| env[v]).collect();
        vs.iter().for_each(|&v| env[v] = 0);
        let n = self.alg.size();
        let mut hit = false;
        'outer: loop {
            if found(env) {
                hit = true;
                break;
            }
            for &v in vs.iter().rev() {
                env[v] += 1;
                if env[v] < n {
                    continue 'outer;
                }
                env[v] = 0;
            }
            break;
        }
        for (&v, s) in vs.iter().zip(saved) {
            env[v] = s;
        }
        hit
    }

    fn exists_decomposed(&self, ex: &ExistsNode, env: &mut [Elem]) -> bool {
        if !ex.plan.ground.iter().all(|&c| self.holds(&ex.conjuncts[c].node, env)) {
            return false;
        }
        ex.plan
            .components
            .iter()
            .all(|search| self.run(ex, search, env, &mut |_| true))
    }

    fn piece_relation(&self, ex: &ExistsNode, p: usize, env: &mut [Elem]) -> Rc<HashSet<Vec<Elem>>> {
        let piece = &ex.plan.pieces[p];
        let key = (ex.id, p, piece.outer.iter().map(|&v| env[v]).collect::<Vec<_>>());
        if let Some(rel) = self.cache.borrow().get(&key) {
            return Rc::clone(rel);
        }
        let mut rel = HashSet::new();
        let mut tuple = Vec::with_capacity(piece.interface.len());
        self.run(ex, &piece.search, env, &mut |env| {
            tuple.clear();
            tuple.extend(piece.interface.iter().map(|&v| env[v]));
            if !rel.contains(&tuple) {
                rel.insert(tuple.clone());
            }
            false
        });
        let rel = Rc::new(rel);
        self.cache.borrow_mut().insert(key, Rc::clone(&rel));
        rel
    }

    fn slot_value(&self, ex: &ExistsNode, s: usize, env: &[Elem], slots: &[Elem]) -> Elem {
        match &ex.slots[s] {
            Slot::Var(v) => env[*v],
            Slot::Const(c) => *c,
            Slot::Op(op, kids) => {
                let n = self.alg.size();
                let idx = kids.iter().fold(0, |acc, &k| acc * n + slots[k]);
                self.alg.table(*op)[idx]
            }
        }
    }

    /// Runs `search` to completion or until `leaf` returns true.
    fn run(
        &self,
        ex: &ExistsNode,
        search: &Search,
        env: &mut [Elem],
        leaf: &mut dyn FnMut(&mut [Elem]) -> bool,
    ) -> bool {
        let mut slots = vec![0; ex.slots.len()];
        for &s in &search.prelude {
            slots[s] = self.slot_value(ex, s, env, &slots);
        }
        self.descend(ex, search, 0, env, &mut slots, leaf)
    }

    fn settle(&self, ex: &ExistsNode, step: &Step, env: &mut [Elem], slots: &mut [Elem]) -> bool {
        for &s in &step.compute {
            slots[s] = self.slot_value(ex, s, env, slots);
        }
        step.checks.iter().all(|&ch| match ch {
            Check::Conjunct(c) => match ex.conjuncts[c].eq {
                Some((l, r)) => slots[l] == slots[r],
                None => self.holds(&ex.conjuncts[c].node, env),
            },
            Check::Piece(p) => {
                let rel = self.piece_relation(ex, p, env);
                let tuple: Vec<Elem> = ex.plan.pieces[p].interface.iter().map(|&v| env[v]).collect();
                rel.contains(&tuple)
            }
        })
    }

    fn descend(
        &self,
        ex: &ExistsNode,
        search: &Search,
        at: usize,
        env: &mut [Elem],
        slots: &mut [Elem],
        leaf: &mut dyn FnMut(&mut [Elem]) -> bool,
    ) -> bool {
        let Some(step) = search.steps.get(at) else {
            return leaf(env);
        };
        let saved = env[step.var];
        let mut hit = false;
        match step.solve {
            Some(slot) => {
                env[step.var] = slots[slot];
                hit = self.settle(ex, step, env, slots) && self.descend(ex, search, at + 1, env, slots, leaf);
            }
            None => {
                for val in 0..self.alg.size() {
                    env[step.var] = val;
                    if self.settle(ex, step, env, slots) && self.descend(ex, search, at + 1, env, slots, leaf) {
                        hit = true;
                        break;
                    }
                }
            }
        }
        env[step.var] = saved;
        hit
    }
}

/// Tarskian evaluation by plain enumeration.
pub fn eval_formula(alg: &FiniteAlgebra, f: &Formula, vars: &Vars, env: &[Option<Elem>]) -> Result<bool> {
    Evaluator::new(alg, f, vars, Strategy::Naive)?.eval(env)
}

/// Evaluation with decomposed existential search. Agrees with [`eval_formula`].
pub fn eval_exists_decomposed(alg: &FiniteAlgebra, f: &Formula, vars: &Vars, env: &[Option<Elem>]) -> Result<bool> {
    Evaluator::new(alg, f, vars, Strategy::Decomposed)?.eval(env)
}
