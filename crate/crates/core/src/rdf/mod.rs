//! Minimal RDF data model with N-Triples, N-Quads and TriG serializers.

pub mod parse;
mod term;
pub mod vocab;
pub mod write;

pub use term::{mk_iri, BlankNode, Iri, Literal, LiteralKind, Quad, Subject, Term, TermError, Triple};
