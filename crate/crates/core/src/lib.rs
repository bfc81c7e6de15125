//! Exact Rees powers, saturations, graded lengths, density functions and
//! multiplicities of term-generated graded modules over polynomial rings.

pub mod corpus;
pub mod density;
pub mod dependence;
pub mod document;
pub mod engine;
pub mod error;
pub mod exec;
pub mod finite_diff;
pub mod hilbert;
pub mod module;
pub mod monomial;
pub mod multiplicity;
pub mod poly;
pub mod rational;
pub mod ring;

pub use engine::Engine;
pub use error::{Error, Result};
pub use exec::Strategy;
pub use hilbert::{LengthCounter, LengthTable};
pub use module::{ComponentIdeal, ModuleKey, PowerCache, PowerKind, PowerStore, Term, TermModule};
pub use monomial::Monomial;
pub use ring::{GradedFreeModule, RingSpec};
