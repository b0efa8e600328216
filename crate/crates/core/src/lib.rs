//! Conversion of NELL knowledge-base dumps into RDF.

pub mod belief;
pub mod candidate_source;
pub mod diagnostics;
pub mod fixtures;
pub mod ingest;
pub mod lexical;
pub mod namespaces;
pub mod ontology;
pub mod pipeline;
pub mod rdf;
pub mod reify;
pub mod prov;
