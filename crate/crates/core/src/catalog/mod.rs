//! Named algebras, partitions and formulas, addressable by string ids such as
//! `sec2.B` or `phi?k=1&n=3`.

mod powerset;
mod section2;

pub use powerset::{
    build_an, build_bn, build_bn_from_tables, build_fkn_table, build_phi_kn, build_psi_mn, heyting_signature,
    pp_expand, PowersetShape, MAX_N,
};
pub use section2::{
    build_a_expanded, build_a_minus_a4, build_c, build_c_mod_theta, build_section2_a, build_theta_and_b, phi,
    signature as section2_signature, theta, A1, A2, A3, A4, A5, A6, AST, BOX, CONST_A5, DIA, G, PHI_SRC, PLUS,
    TOP, ZERO_E,
};

use std::collections::BTreeMap;

use serde_json::json;

use crate::algebra::{to_json, FiniteAlgebra};
use crate::congruence::Partition;
use crate::error::{Error, Result};
use crate::logic::OpDefinition;

/// Every id accepted by [`build`], with the default parameters shown.
pub const CATALOG_IDS: &[&str] = &[
    "sec2.A",
    "sec2.A-minus-a4",
    "sec2.theta",
    "sec2.B",
    "sec2.phi",
    "sec2.A-exp",
    "sec2.C",
    "sec2.C-mod-theta",
    "An?n=3",
    "phi?k=1&n=3",
    "Bn?n=3",
];

/// A parsed catalog id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub params: BTreeMap<String, usize>,
}

impl CatalogEntry {
    pub fn parse(src: &str) -> Result<Self> {
        let (id, query) = match src.split_once('?') {
            Some((id, q)) => (id, Some(q)),
            None => (src, None),
        };
        let mut params = BTreeMap::new();
        if let Some(q) = query {
            for pair in q.split('&').filter(|p| !p.is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| Error::Parameter(format!("expected key=value, got `{pair}`")))?;
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::Parameter(format!("`{k}` must be a natural number, got `{v}`")))?;
                params.insert(k.to_string(), v);
            }
        }
        let allowed: &[&str] = match id {
            "An" | "Bn" => &["n"],
            "phi" => &["k", "n"],
            "sec2.A" | "sec2.A-minus-a4" | "sec2.theta" | "sec2.B" | "sec2.phi" | "sec2.A-exp" | "sec2.C"
            | "sec2.C-mod-theta" => &[],
            _ => return Err(Error::UnknownCatalogId(src.to_string())),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parameter(format!("`{id}` takes no parameter `{k}`")));
        }
        Ok(CatalogEntry {
            id: id.to_string(),
            params,
        })
    }

    fn param(&self, key: &str, default: usize) -> usize {
        self.params.get(key).copied().unwrap_or(default)
    }

    pub fn build(&self) -> Result<CatalogObject> {
        Ok(match self.id.as_str() {
            "sec2.A" => CatalogObject::Algebra(build_section2_a()),
            "sec2.A-minus-a4" => CatalogObject::Algebra(build_a_minus_a4()),
            "sec2.theta" => CatalogObject::Partition {
                algebra: build_a_minus_a4(),
                partition: theta(),
            },
            "sec2.B" => CatalogObject::Algebra(build_theta_and_b()?.1),
            "sec2.phi" => CatalogObject::Formula(phi()),
            "sec2.A-exp" => CatalogObject::Algebra(build_a_expanded()?),
            "sec2.C" => CatalogObject::Algebra(build_c()?),
            "sec2.C-mod-theta" => CatalogObject::Algebra(build_c_mod_theta()?),
            "An" => CatalogObject::Algebra(build_an(self.param("n", 3))?),
            "Bn" => CatalogObject::Algebra(build_bn(self.param("n", 3))?),
            "phi" => CatalogObject::Formula(build_phi_kn(self.param("k", 1), self.param("n", 3))?),
            _ => unreachable!("validated in parse"),
        })
    }
}

/// What a catalog id denotes.
#[derive(Debug, Clone)]
pub enum CatalogObject {
    Algebra(FiniteAlgebra),
    Partition {
        algebra: FiniteAlgebra,
        partition: Partition,
    },
    Formula(OpDefinition),
}

impl CatalogObject {
    /// Serialized form: the algebra file format for algebras, JSON objects otherwise.
    pub fn to_json(&self) -> String {
        match self {
            CatalogObject::Algebra(a) => to_json(a),
            CatalogObject::Partition { algebra, partition } => {
                let v = json!({
                    "algebra": algebra.name(),
                    "blocks": partition,
                    "names": partition.display_with(algebra),
                });
                format!("{v}\n")
            }
            CatalogObject::Formula(def) => {
                let args: Vec<String> = def.args.iter().map(|&v| def.vars.name(v)).collect();
                let v = json!({
                    "args": args,
                    "formula": def.formula.display(&def.vars).to_string(),
                    "result": def.vars.name(def.result),
                    "symbol": def.symbol,
                });
                format!("{v}\n")
            }
        }
    }
}

/// Builds the object named by `id`.
pub fn build(id: &str) -> Result<CatalogObject> {
    CatalogEntry::parse(id)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_id_builds() {
        for id in CATALOG_IDS {
            build(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        }
    }

    #[test]
    fn bad_ids() {
        assert!(matches!(build("sec2.Z"), Err(Error::UnknownCatalogId(_))));
        assert!(matches!(build("An?m=3"), Err(Error::Parameter(_))));
        assert!(matches!(build("An?n=x"), Err(Error::Parameter(_))));
        assert!(build("An?n=6").is_err());
        assert!(build("phi?k=3&n=3").is_err());
    }

    #[test]
    fn building_is_deterministic() {
        for id in ["sec2.B", "sec2.theta", "phi?k=2&n=3", "An?n=2"] {
            assert_eq!(build(id).unwrap().to_json(), build(id).unwrap().to_json());
        }
    }
}
