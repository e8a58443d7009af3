//! AutomationML/CAEX 3.0 toolchain: parse engineering data into a typed
//! model, map it onto an RDF graph, and run queries and shape checks on the
//! result.
//!
//! The crate is organized as a pipeline:
//!
//! - [`parser`] reads CAEX XML into the [`caex`] document model and builds a
//!   [`parser::ResolverIndex`] for ID- and path-based references,
//! - [`mapping`] mints IRIs and lowers the document into an [`rdf::Graph`],
//!   then enriches it with derived semantics (types, subclassing, links,
//!   mirrors, facets, groups, inherited members, name mappings),
//! - [`query`] answers role-based selection and material-flow questions over
//!   the enriched graph,
//! - [`validation`] checks shape rules (cardinality and connection
//!   constraints) and structural well-formedness.

pub mod caex;
pub mod diagnostics;
pub mod mapping;
pub mod parser;
pub mod query;
pub mod rdf;
pub mod validation;
pub mod vocab;

pub use caex::{Document, ElementId, RefPath};
pub use diagnostics::{Code, Diagnostic, Location, Severity};
pub use mapping::{map_full, map_structure, MappingConfig, MappingError};
pub use parser::{index_document, parse_document, scan_document, ParseError, ResolverIndex};
pub use rdf::{iri_safe, Graph, Iri, Literal, Term, Triple};
pub use vocab::Vocabulary;
