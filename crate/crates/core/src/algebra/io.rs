use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// On-disk form of an algebra. Field order is alphabetical so that output has
/// sorted keys and saving a loaded file reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    pub name: String,
    pub operations: Vec<OperationFile>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationFile {
    pub arity: usize,
    pub symbol: String,
    pub table: Vec<usize>,
}

impl From<&FiniteAlgebra> for AlgebraFile {
    fn from(alg: &FiniteAlgebra) -> Self {
        AlgebraFile {
            elements: alg.element_names().map(<[String]>::to_vec),
            name: alg.name().to_string(),
            operations: alg
                .signature()
                .symbols()
                .iter()
                .zip(alg.tables())
                .map(|(s, t)| OperationFile {
                    arity: s.arity,
                    symbol: s.name.clone(),
                    table: t.clone(),
                })
                .collect(),
            size: alg.size(),
        }
    }
}

impl TryFrom<AlgebraFile> for FiniteAlgebra {
    type Error = Error;

    fn try_from(file: AlgebraFile) -> Result<Self> {
        let signature = Signature::new(file.operations.iter().map(|o| (o.symbol.clone(), o.arity)))?;
        let tables = file.operations.into_iter().map(|o| o.table).collect();
        let alg = FiniteAlgebra::new(file.name, signature, file.size, tables)?;
        match file.elements {
            Some(names) => alg.with_element_names(names),
            None => Ok(alg),
        }
    }
}

pub fn to_json(alg: &FiniteAlgebra) -> String {
    let mut s = serde_json::to_string(&AlgebraFile::from(alg)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json(src: &str) -> Result<FiniteAlgebra> {
    let file: AlgebraFile = serde_json::from_str(src).map_err(|e| Error::Format(e.to_string()))?;
    file.try_into()
}

pub fn load(path: impl AsRef<Path>) -> Result<FiniteAlgebra> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    from_json(&src)
}

pub fn save(alg: &FiniteAlgebra, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_json(alg)).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let src = r#"{"name":"C2","size":2,"elements":["0","1"],
            "operations":[{"symbol":"meet","arity":2,"table":[0,0,0,1]},{"symbol":"one","arity":0,"table":[1]}]}"#;
        let alg = from_json(src).unwrap();
        assert_eq!(alg.size(), 2);
        assert_eq!(alg.constant("one"), Some(1));
        assert_eq!(
            to_json(&alg),
            "{\"elements\":[\"0\",\"1\"],\"name\":\"C2\",\"operations\":[{\"arity\":2,\"symbol\":\"meet\",\"table\":[0,0,0,1]},{\"arity\":0,\"symbol\":\"one\",\"table\":[1]}],\"size\":2}\n"
        );
    }

    #[test]
    fn rejects_bad_tables() {
        let src = r#"{"name":"x","size":2,"operations":[{"symbol":"f","arity":1,"table":[0,5]}]}"#;
        assert!(matches!(from_json(src), Err(Error::TableValue { .. })));
        assert!(matches!(from_json("{"), Err(Error::Format(_))));
    }
}
