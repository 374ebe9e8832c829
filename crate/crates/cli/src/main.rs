use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uaforge_core::algebra::{load, sg_closure, Elem, FiniteAlgebra};
use uaforge_core::analysis::{homs, HomKind};
use uaforge_core::catalog;
use uaforge_core::congruence::{congruence_lattice, principal_congruence};
use uaforge_core::harness::{self, Report, DEEP_N, DEFAULT_N};
use uaforge_core::logic::{functional_violation, induced_partial_function, parse_formula, Evaluator, OpDefinition, Strategy};
use uaforge_core::{Error, Vars};

/// Finite universal algebra workbench.
#[derive(Parser)]
#[command(name = "uaforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a catalog object (algebra, partition or formula) as JSON.
    Build {
        /// Catalog id, e.g. sec2.B or An?n=3.
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Subuniverse generated by a list of elements.
    Sg {
        file: PathBuf,
        /// Comma-separated element names or indices; may be empty.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gens: String,
    },
    /// Congruence lattice, or one principal congruence.
    Con {
        file: PathBuf,
        /// Two elements `a,b`: print Cg(a, b) only.
        #[arg(long)]
        principal: Option<String>,
    },
    /// Truth value of a formula under an assignment.
    Eval {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        /// Comma-separated `var=element` pairs.
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Whether a formula defines a partial operation on each algebra.
    Functional {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        formula: String,
        /// Number of argument variables. The remaining free variable is the result.
        #[arg(long)]
        arity: usize,
        /// Result variable; defaults to the last free variable to appear.
        #[arg(long)]
        result: Option<String>,
    },
    /// Homomorphisms from A to B.
    Homs {
        a: PathBuf,
        /// Target algebra; defaults to A.
        b: Option<PathBuf>,
        #[arg(long, conflicts_with = "auto")]
        injective: bool,
        /// Bijective homomorphisms only.
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run registered claims.
    Check {
        /// One claim id, optionally with `?n=N`.
        id: Option<String>,
        /// Every registered claim (the default without an id).
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Only claims whose id starts with this prefix.
        #[arg(long, conflicts_with = "id")]
        filter: Option<String>,
        /// Use n = 4 instead of n = 3.
        #[arg(long)]
        deep: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).expect("writing to a String")
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = run(cli.command, &mut out);
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn elements(alg: &FiniteAlgebra, list: &str) -> Result<Vec<Elem>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| alg.element_by_name(s))
        .collect()
}

fn show_set(alg: &FiniteAlgebra, elems: &[Elem]) -> String {
    let items: Vec<String> = elems.iter().map(|&e| alg.element_name(e)).collect();
    format!("{{{}}}", items.join(", "))
}

fn show_map(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Elem]) -> String {
    let items: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{} -> {}", a.element_name(x), b.element_name(y)))
        .collect();
    items.join(", ")
}

/// Runs one command. `Ok(false)` means the command ran but reported a failure.
fn run(command: Command, out: &mut String) -> Result<bool, Error> {
    match command {
        Command::Build { id, output } => {
            let json = catalog::build(&id)?.to_json();
            match output {
                Some(path) => fs::write(&path, json).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?,
                None => out.push_str(&json),
            }
            Ok(true)
        }
        Command::Sg { file, gens } => {
            let alg = load(&file)?;
            let sub = sg_closure(&alg, &elements(&alg, &gens)?)?;
            say!(out, "{} ({} elements)", show_set(&alg, &sub.elements), sub.len());
            Ok(true)
        }
        Command::Con { file, principal } => {
            let alg = load(&file)?;
            if let Some(pair) = principal {
                let e = elements(&alg, &pair)?;
                let [a, b] = e[..] else {
                    return Err(Error::Parameter(format!("--principal needs two elements, got `{pair}`")));
                };
                say!(out, "{}", principal_congruence(&alg, a, b)?.display_with(&alg));
                return Ok(true);
            }
            let con = congruence_lattice(&alg)?;
            say!(out, "{} congruences", con.len());
            for p in &con.congruences {
                say!(out, "  {}", p.display_with(&alg));
            }
            say!(out, "simple: {}", con.is_simple());
            say!(out, "subdirectly irreducible: {}", con.is_si());
            say!(out, "finitely subdirectly irreducible: {}", con.is_fsi());
            match con.monolith() {
                Some(m) => say!(out, "monolith: {}", m.display_with(&alg)),
                None => say!(out, "monolith: none"),
            }
            Ok(true)
        }
        Command::Eval { file, formula, assign } => {
            let alg = load(&file)?;
            let mut vars = Vars::new();
            let f = parse_formula(&formula, alg.signature(), &mut vars)?;
            let mut pairs = Vec::new();
            for item in assign.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (name, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parameter(format!("expected var=element, got `{item}`")))?;
                pairs.push((name.trim(), alg.element_by_name(value)?));
            }
            for (name, _) in &pairs {
                vars.intern(name);
            }
            let ev = Evaluator::new(&alg, &f, &vars, Strategy::Decomposed)?;
            say!(out, "{}", ev.eval(&vars.assignment(&pairs)?)?);
            Ok(true)
        }
        Command::Functional {
            files,
            formula,
            arity,
            result,
        } => {
            let mut all_ok = true;
            for file in files {
                let alg = load(&file)?;
                let def = definition(&alg, &formula, arity, result.as_deref())?;
                if let Some(v) = functional_violation(&alg, &def)? {
                    all_ok = false;
                    say!(out, 
                        "{}: not functional at {}: {} and {}",
                        alg.name(),
                        show_set(&alg, &v.tuple),
                        alg.element_name(v.first),
                        alg.element_name(v.second)
                    );
                    continue;
                }
                let table = induced_partial_function(&alg, &def)?;
                let total = if table.is_total() { "total" } else { "partial" };
                say!(out, "{}: functional, {total}", alg.name());
                for line in table.display_with(&alg).to_string().lines() {
                    say!(out, "  {line}");
                }
            }
            Ok(all_ok)
        }
        Command::Homs {
            a,
            b,
            injective,
            auto,
            json,
        } => {
            let src = load(&a)?;
            let dst = match b {
                Some(p) => load(&p)?,
                None => src.clone(),
            };
            let kind = if auto {
                HomKind::Bijective
            } else if injective {
                HomKind::Injective
            } else {
                HomKind::All
            };
            let set = homs(&src, &dst, kind)?;
            if json {
                say!(out, "{}", serde_json::to_string_pretty(&set).expect("serializable"));
            } else {
                say!(out, "{} homomorphisms ({:?})", set.len(), kind);
                for m in &set.maps {
                    say!(out, "  {}", show_map(&src, &dst, m));
                }
            }
            Ok(true)
        }
        Command::Check {
            id,
            all: _,
            filter,
            deep,
            json,
        } => {
            let n = if deep { DEEP_N } else { DEFAULT_N };
            let results = match id {
                Some(id) => vec![harness::run_claim_with(&id, n)?],
                None => harness::run_all(filter.as_deref(), n)?,
            };
            let report = Report::new(results);
            if json {
                say!(out, "{}", report.to_json());
            } else {
                for c in &report.claims {
                    let status = serde_json::to_value(c.status).expect("serializable");
                    let status = status.as_str().unwrap_or("?").to_uppercase();
                    say!(out, "{status} {} ({} ms, {} instances): {}", c.id, c.elapsed_ms, c.instances, c.evidence);
                }
                say!(out, "{} passed, {} failed", report.summary.pass, report.summary.fail);
            }
            Ok(report.all_pass())
        }
    }
}

/// Reads `src` as a definition with `arity` argument variables.
fn definition(alg: &FiniteAlgebra, src: &str, arity: usize, result: Option<&str>) -> Result<OpDefinition, Error> {
    let mut vars = Vars::new();
    let f = parse_formula(src, alg.signature(), &mut vars)?;
    let free: Vec<usize> = f.free_vars().into_iter().collect();
    if free.len() != arity + 1 {
        return Err(Error::Parameter(format!(
            "formula has {} free variables, expected {}",
            free.len(),
            arity + 1
        )));
    }
    let result = match result {
        Some(name) => vars
            .index(name)
            .filter(|v| free.contains(v))
            .ok_or_else(|| Error::Parameter(format!("`{name}` is not a free variable")))?,
        None => *free.last().expect("at least one free variable"),
    };
    let args = free.into_iter().filter(|&v| v != result).collect();
    OpDefinition::new("f", f, vars, args, result)
}
