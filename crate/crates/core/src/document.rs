//! JSON input format for level 1 term modules.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "name": "optional label",
//!   "ring": { "variables": ["x", "y"] },
//!   "free_module": { "shifts": [0] },
//!   "generators": [ { "exponents": [2, 0], "basis": 0 } ]
//! }
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::{Term, TermModule};
use crate::monomial::Monomial;
use crate::ring::{GradedFreeModule, RingSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub variables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeModuleDoc {
    pub shifts: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub exponents: Vec<u32>,
    pub basis: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ring: RingDoc,
    pub free_module: FreeModuleDoc,
    pub generators: Vec<GeneratorDoc>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

impl ModuleDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Input(format!("malformed module document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Validate and build the minimalized level 1 module.
    pub fn to_module(&self) -> Result<TermModule> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Input(format!(
                "schema_version: expected {SCHEMA_VERSION}, found {}",
                self.schema_version
            )));
        }
        let ring = RingSpec::new(self.ring.variables.clone()).map_err(|e| field_error("ring.variables", e))?;
        let free = GradedFreeModule::new(ring, self.free_module.shifts.clone())
            .map_err(|e| field_error("free_module.shifts", e))?;
        let d = free.dimension();
        let rank = free.rank();
        if self.generators.is_empty() {
            return Err(Error::Input("generators: at least one generator is required".into()));
        }
        let mut terms = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if g.exponents.len() != d {
                return Err(Error::Input(format!(
                    "generators[{i}].exponents: expected {d} entries, found {}",
                    g.exponents.len()
                )));
            }
            if g.basis >= rank {
                return Err(Error::Input(format!(
                    "generators[{i}].basis: index {} out of range for rank {rank}",
                    g.basis
                )));
            }
            let degree: i64 = g.exponents.iter().map(|&a| a as i64).sum::<i64>() + free.shifts()[g.basis];
            if degree < 0 {
                return Err(Error::Input(format!(
                    "generators[{i}]: degree {degree} is negative; input modules must be generated in nonnegative degrees"
                )));
            }
            terms.push(Term::new(g.exponents.clone(), Monomial::unit(rank, g.basis)));
        }
        let module = TermModule::minimalize(Arc::new(free), 1, terms)?;
        if module.rank() != rank {
            return Err(Error::Input(format!(
                "generators: module has rank {} but the free module has rank {rank}; only embeddings with \
                 rank M = rank F are supported (no versal embeddings of larger rank)",
                module.rank()
            )));
        }
        Ok(module)
    }

    /// Document for a level 1 module, generators in canonical order.
    pub fn from_module(module: &TermModule, name: Option<String>) -> Result<Self> {
        if module.level() != 1 {
            return Err(Error::LevelMismatch { expected: 1, found: module.level() });
        }
        let generators = module
            .generators()
            .map(|t| GeneratorDoc {
                exponents: t.monomial.exponents().to_vec(),
                basis: t.basis.exponents().iter().position(|&a| a == 1).expect("level 1 basis"),
            })
            .collect();
        Ok(ModuleDocument {
            schema_version: SCHEMA_VERSION,
            name,
            ring: RingDoc { variables: module.ambient().ring().variables().to_vec() },
            free_module: FreeModuleDoc { shifts: module.ambient().shifts().to_vec() },
            generators,
        })
    }
}

fn field_error(field: &str, e: Error) -> Error {
    match e {
        Error::Input(msg) => Error::Input(format!("{field}: {msg}")),
        other => other,
    }
}

/// Parse a JSON document straight into a module.
pub fn parse_module(text: &str) -> Result<TermModule> {
    ModuleDocument::parse(text)?.to_module()
}

#[cfg(test)]
mod tests {
    use super::*;

    const X2_XY: &str = r#"{
        "schema_version": 1,
        "name": "x2-xy",
        "ring": {"variables": ["x", "y"]},
        "free_module": {"shifts": [0]},
        "generators": [{"exponents": [2, 0], "basis": 0}, {"exponents": [1, 1], "basis": 0}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let m = parse_module(X2_XY).unwrap();
        assert_eq!(m.num_generators(), 2);
        assert_eq!((m.min_generator_degree(), m.max_generator_degree()), (Some(2), Some(2)));
        let doc = ModuleDocument::from_module(&m, Some("x2-xy".into())).unwrap();
        assert_eq!(parse_module(&doc.to_json()).unwrap(), m);
    }

    #[test]
    fn shifted_document_records_offset() {
        let text = X2_XY.replace("[0]", "[-2]");
        let m = parse_module(&text).unwrap();
        assert_eq!(m.ambient().support_offset(), 2);
    }

    #[test]
    fn rejections_name_the_field() {
        let err = |t: &str| parse_module(t).unwrap_err().to_string();
        assert!(err(&X2_XY.replace("[0]", "[0, 0]")).contains("rank M = rank F"));
        assert!(err(&X2_XY.replace("[2, 0]", "[2, 0, 1]")).contains("generators[0].exponents"));
        assert!(err(&X2_XY.replace("\"basis\": 0}]", "\"basis\": 3}]")).contains("generators[1].basis"));
        assert!(err(&X2_XY.replace("[0]", "[-3]")).contains("negative"));
        assert!(err(r#"{"ring": {"variables": ["x","y"]}, "free_module": {"shifts": [0]}, "generators": []}"#)
            .contains("at least one generator"));
        assert!(err("{\n  \"ring\": 5\n}").contains("line 2"));
        assert!(err(&X2_XY.replace("\"name\"", "\"nmae\"")).contains("unknown field"));
    }
}
