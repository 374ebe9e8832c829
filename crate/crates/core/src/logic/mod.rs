mod eval;
mod formula;
mod functional;
mod parser;

pub use eval::{eval_exists_decomposed, eval_formula, Evaluator, Strategy};
pub use formula::{is_pp, Formula, Vars};
pub use functional::{
    check_functional, expand_by_definitions, functional_violation, induced_partial_function, OpDefinition,
    PartialFunctionTable, Violation,
};
pub use parser::{parse_formula, parse_term};
