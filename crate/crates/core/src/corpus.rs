//! Bundled example modules.

use crate::document::{FreeModuleDoc, GeneratorDoc, ModuleDocument, RingDoc, SCHEMA_VERSION};
use crate::error::Result;
use crate::module::TermModule;

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub description: &'static str,
    variables: &'static [&'static str],
    shifts: &'static [i64],
    /// `(exponents, basis index)`.
    generators: &'static [(&'static [u32], usize)],
}

impl CorpusEntry {
    pub fn document(&self) -> ModuleDocument {
        ModuleDocument {
            schema_version: SCHEMA_VERSION,
            name: Some(self.name.to_string()),
            ring: RingDoc { variables: self.variables.iter().map(|v| v.to_string()).collect() },
            free_module: FreeModuleDoc { shifts: self.shifts.to_vec() },
            generators: self
                .generators
                .iter()
                .map(|(e, b)| GeneratorDoc { exponents: e.to_vec(), basis: *b })
                .collect(),
        }
    }

    pub fn module(&self) -> Result<TermModule> {
        self.document().to_module()
    }
}

const XY: &[&str] = &["x", "y"];
const XYZ: &[&str] = &["x", "y", "z"];

pub const CORPUS: &[CorpusEntry] = &[
    CorpusEntry {
        name: "maximal-ideal",
        description: "(x, y) in k[x, y]",
        variables: XY,
        shifts: &[0],
        generators: &[(&[1, 0], 0), (&[0, 1], 0)],
    },
    CorpusEntry {
        name: "x2-xy",
        description: "(x^2, xy): saturation (x), epsilon 1",
        variables: XY,
        shifts: &[0],
        generators: &[(&[2, 0], 0), (&[1, 1], 0)],
    },
    CorpusEntry {
        name: "maximal-squared",
        description: "(x^2, xy, y^2) = (x, y)^2",
        variables: XY,
        shifts: &[0],
        generators: &[(&[2, 0], 0), (&[1, 1], 0), (&[0, 2], 0)],
    },
    CorpusEntry {
        name: "x2-y2",
        description: "(x^2, y^2), a reduction of (x, y)^2",
        variables: XY,
        shifts: &[0],
        generators: &[(&[2, 0], 0), (&[0, 2], 0)],
    },
    CorpusEntry {
        name: "x2-y3",
        description: "(x^2, y^3): two chambers with breakpoints 2 and 3",
        variables: XY,
        shifts: &[0],
        generators: &[(&[2, 0], 0), (&[0, 3], 0)],
    },
    CorpusEntry {
        name: "shifted-x2-xy",
        description: "(x^2, xy) in A(2): generators in degree 0, saturation reaches degree -1",
        variables: XY,
        shifts: &[-2],
        generators: &[(&[2, 0], 0), (&[1, 1], 0)],
    },
    CorpusEntry {
        name: "free-rank-one",
        description: "the free module A itself",
        variables: XY,
        shifts: &[0],
        generators: &[(&[0, 0], 0)],
    },
    CorpusEntry {
        name: "diagonal-rank-two",
        description: "x e1, y e2 in A^2",
        variables: XY,
        shifts: &[0, 0],
        generators: &[(&[1, 0], 0), (&[0, 1], 1)],
    },
    CorpusEntry {
        name: "mixed-rank-two",
        description: "x e1, y e1, y e2 in A + A(-1)",
        variables: XY,
        shifts: &[0, 1],
        generators: &[(&[1, 0], 0), (&[0, 1], 0), (&[0, 1], 1)],
    },
    CorpusEntry {
        name: "maximal-ideal-3",
        description: "(x, y, z) in k[x, y, z]",
        variables: XYZ,
        shifts: &[0],
        generators: &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)],
    },
    CorpusEntry {
        name: "xy-xz",
        description: "(xy, xz) in k[x, y, z]: saturation (x)",
        variables: XYZ,
        shifts: &[0],
        generators: &[(&[1, 1, 0], 0), (&[1, 0, 1], 0)],
    },
];

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}
