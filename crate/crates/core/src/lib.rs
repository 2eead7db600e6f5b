//! Cyclic products of groups, their Davis complexes and automorphisms.

pub mod algebraic;
pub mod aut;
pub mod davis;
pub mod diagrams;
pub mod error;
pub mod local;
pub mod reference;
pub mod report;
pub mod walls;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use local::{Elem, GroupKind, LocalElement, LocalGroup, LocalIso};
pub use report::{AuditReport, Violation};
pub use word::{format_word, GroupElement, ParabolicRef, Presentation, Syllable, VertexSet};

/// Schema tag written into every JSON document this crate produces.
pub const SCHEMA: &str = "cyclewall/1";
