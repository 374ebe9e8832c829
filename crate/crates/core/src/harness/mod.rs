//! A registry of named checks over the catalog, each producing a [`ClaimResult`].
//!
//! Ids starting with `S2.` concern the eight-element chain and its relatives; ids
//! starting with `S3.` concern `A_n` and `B_n` and accept a parameter suffix
//! `?n=N` (default 3).

mod chain;
mod powerset;

use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::analysis::Status;
use crate::catalog;
use crate::error::{Error, Result};

/// Default size parameter for `S3.` claims.
pub const DEFAULT_N: usize = 3;
/// Size parameter used by deep runs.
pub const DEEP_N: usize = 4;

/// Outcome of one claim.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimResult {
    pub id: String,
    /// What the claim asserts.
    pub statement: String,
    pub status: Status,
    pub evidence: String,
    pub elapsed_ms: u64,
    /// Number of instances checked exhaustively.
    pub instances: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub claims: Vec<ClaimResult>,
    pub summary: Summary,
}

impl Report {
    pub fn new(claims: Vec<ClaimResult>) -> Self {
        let pass = claims.iter().filter(|c| c.status == Status::Pass).count();
        let summary = Summary {
            pass,
            fail: claims.len() - pass,
        };
        Report { claims, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) struct Outcome {
    ok: bool,
    evidence: String,
    instances: usize,
}

impl Outcome {
    pub(crate) fn new(ok: bool, instances: usize, evidence: impl Into<String>) -> Self {
        Outcome {
            ok,
            evidence: evidence.into(),
            instances,
        }
    }
}

/// Lazily built objects shared by the claims of one run.
pub(crate) struct Ctx {
    pub(crate) n: usize,
    an: OnceLock<Result<FiniteAlgebra>>,
    bn: OnceLock<Result<FiniteAlgebra>>,
}

impl Ctx {
    fn new(n: usize) -> Self {
        Ctx {
            n,
            an: OnceLock::new(),
            bn: OnceLock::new(),
        }
    }

    pub(crate) fn an(&self) -> Result<&FiniteAlgebra> {
        self.an
            .get_or_init(|| catalog::build_an(self.n))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub(crate) fn bn(&self) -> Result<&FiniteAlgebra> {
        self.bn
            .get_or_init(|| catalog::build_bn(self.n))
            .as_ref()
            .map_err(Clone::clone)
    }
}

struct Claim {
    id: &'static str,
    statement: &'static str,
    run: fn(&Ctx) -> Result<Outcome>,
}

const REGISTRY: &[Claim] = &[
    Claim { id: "S2.SG-EMPTY", statement: "the subuniverse of A generated by the empty set is A minus a4", run: chain::sg_empty },
    Claim { id: "S2.SUBALGS", statement: "A has exactly two subuniverses, A minus a4 and A", run: chain::subalgebras },
    Claim { id: "S2.THETA-CONG", statement: "gluing a6 with 1 is a congruence of A-{a4}, but generates the full relation on A", run: chain::theta_congruence },
    Claim { id: "S2.SIMPLE-A", statement: "A is simple", run: chain::simple_a },
    Claim { id: "S2.CON-A4", statement: "the homomorphic images of A-{a4} are itself, B and the trivial algebra", run: chain::con_a_minus_a4 },
    Claim { id: "S2.CHAIN-SI", statement: "each of A, A-{a4}, B is subdirectly irreducible with monolith Cg(second largest, 1)", run: chain::chains_si },
    Claim { id: "S2.SI-LIST", statement: "the SI members of HS(A) are A, A-{a4} and B up to isomorphism", run: chain::si_list },
    Claim { id: "S2.PHI-FUNC", statement: "exists z (x + y = dia z) is functional on A, A-{a4}, B and total on A and B", run: chain::phi_functional },
    Claim { id: "S2.PHI-TABLE", statement: "the operation defined on A is a3 at 0 and a1 elsewhere", run: chain::phi_table },
    Claim { id: "S2.H-FAIL", statement: "phi(x,y) -> g(x) = y holds in C but fails in C/theta, where g(0) = a3 differs from 1", run: chain::h_failure },
    Claim { id: "S3.HEYTING", statement: "every catalog Heyting algebra satisfies residuation and distributivity", run: powerset::heyting },
    Claim { id: "S3.EQ1-8", statement: "the elementary identities of A_0, ..., A_n", run: powerset::elementary_identities },
    Claim { id: "S3.PHI-CHAR", statement: "phi_{k,n}(a,b) holds iff b = 1 for a in {0,e,1} or with at most k atoms, and b = e otherwise", run: powerset::phi_characterization },
    Claim { id: "S3.FKN", statement: "phi_{k,n} defines the total operation f_{k,n} on A_n", run: powerset::fkn_tables },
    Claim { id: "S3.FSI-AN", statement: "the FSI members of HS(A_n) are A_0, ..., A_n up to isomorphism", run: powerset::fsi_an },
    Claim { id: "S3.CON-PRES", statement: "Con(C) equals the congruences of its Heyting reduct for every C in S(B_n)", run: powerset::con_preserved },
    Claim { id: "S3.FSI-BN", statement: "the FSI members of HS(B_n) are the subalgebras of B_n up to isomorphism", run: powerset::fsi_bn },
    Claim { id: "S3.AUT-SIGMA", statement: "every permutation of atoms induces an automorphism of A_n and of B_n", run: powerset::atom_permutations },
    Claim { id: "S3.AUT-FIX", statement: "for A <= B_n and b outside A and e, some automorphism fixes A and moves b", run: powerset::fixing_automorphisms },
    Claim { id: "S3.AUT-RIGID", statement: "any two embeddings of a subalgebra into B_n differ by an automorphism", run: powerset::rigidity },
    Claim { id: "S3.AMALG", statement: "spans of embeddings among IS(B_n) and the trivial algebra amalgamate", run: powerset::amalgamation },
    Claim { id: "S3.EPIC", statement: "B_n has no proper epic subalgebras relative to its endomorphisms", run: powerset::epic },
    Claim { id: "S3.NONEQ", statement: "on Sg(a) for an atom a, f_{1,n}(a) = 1 and f_{1,n}(not a) = e, so swapping a and not a breaks f_{1,n}", run: powerset::non_equational },
];

/// Every registered claim id, in report order.
pub fn claim_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|c| c.id).collect()
}

fn check_n(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(Error::Parameter(format!("n must be at least 3, got {n}")));
    }
    if n > DEEP_N {
        return Err(Error::Parameter(format!(
            "n = {n} is too large: B_n has 2^n + 1 elements and checks above n = {DEEP_N} exceed the enumeration guards"
        )));
    }
    Ok(n)
}

/// Splits `ID?n=N` into the claim and its size parameter.
fn parse_request(request: &str, default_n: usize) -> Result<(&'static Claim, usize)> {
    let (id, query) = match request.split_once('?') {
        Some((id, q)) => (id, Some(q)),
        None => (request, None),
    };
    let claim = REGISTRY
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))?;
    let n = match query {
        None => default_n,
        Some(q) => {
            if claim.id.starts_with("S2.") {
                return Err(Error::Parameter(format!("{id} takes no parameters")));
            }
            let value = q
                .strip_prefix("n=")
                .ok_or_else(|| Error::Parameter(format!("expected n=N, got `{q}`")))?;
            value
                .parse()
                .map_err(|_| Error::Parameter(format!("`{value}` is not a number")))?
        }
    };
    Ok((claim, check_n(n)?))
}

fn execute(claim: &Claim, ctx: &Ctx) -> ClaimResult {
    let start = Instant::now();
    let outcome = (claim.run)(ctx).unwrap_or_else(|e| Outcome::new(false, 0, format!("error: {e}")));
    let id = if claim.id.starts_with("S3.") {
        format!("{}?n={}", claim.id, ctx.n)
    } else {
        claim.id.to_string()
    };
    ClaimResult {
        id,
        statement: claim.statement.to_string(),
        status: Status::from_bool(outcome.ok),
        evidence: outcome.evidence,
        elapsed_ms: start.elapsed().as_millis() as u64,
        instances: outcome.instances,
    }
}

/// Runs one claim, given as `ID` or `ID?n=N`.
pub fn run_claim(request: &str) -> Result<ClaimResult> {
    run_claim_with(request, DEFAULT_N)
}

/// Like [`run_claim`], with the size used when the request names none.
pub fn run_claim_with(request: &str, default_n: usize) -> Result<ClaimResult> {
    let (claim, n) = parse_request(request, check_n(default_n)?)?;
    Ok(execute(claim, &Ctx::new(n)))
}

/// Runs every claim whose id starts with `filter`, in parallel. Results come back
/// in registry order.
pub fn run_all(filter: Option<&str>, n: usize) -> Result<Vec<ClaimResult>> {
    let ctx = Ctx::new(check_n(n)?);
    let selected: Vec<&Claim> = REGISTRY
        .iter()
        .filter(|c| filter.is_none_or(|f| c.id.starts_with(f)))
        .collect();
    Ok(selected.par_iter().map(|c| execute(c, &ctx)).collect())
}

pub(crate) fn names(alg: &FiniteAlgebra, elems: &[Elem]) -> String {
    let items: Vec<String> = elems.iter().map(|&e| alg.element_name(e)).collect();
    format!("{{{}}}", items.join(", "))
}

pub(crate) fn one_line(table: &crate::logic::PartialFunctionTable, alg: &FiniteAlgebra) -> String {
    table.display_with(alg).to_string().lines().collect::<Vec<_>>().join(", ")
}
