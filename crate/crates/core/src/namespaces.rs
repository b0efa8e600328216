//! IRI namespaces derived from the run's base IRI, and the path-segment
//! encoding used whenever a NELL token becomes part of an IRI.

use std::fmt::Write as _;

use thiserror::Error;

use crate::rdf::Iri;

pub const DEFAULT_BASE_IRI: &str = "http://nell2rdf.example/";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NamespaceError {
    #[error("base IRI {0:?} is not an absolute IRI")]
    NotAbsolute(String),
    #[error("base IRI {0:?} must not contain '#' or '?'")]
    HasFragmentOrQuery(String),
}

/// Every namespace the converter mints into, all rooted at one base IRI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespaces {
    pub base: Iri,
    /// NELL entities (`concept:city:paris` → `resource/city/paris`).
    pub resource: Iri,
    /// NELL categories and relations.
    pub ontology: Iri,
    /// The NELL2RDF vocabulary: provenance classes/properties and the
    /// NELL-specific ontology predicates.
    pub vocab: Iri,
    pub belief: Iri,
    pub graph: Iri,
    pub context: Iri,
    pub execution: Iri,
    pub dataset: Iri,
}

impl Namespaces {
    pub fn new(base: &str) -> Result<Self, NamespaceError> {
        if base.contains('#') || base.contains('?') {
            return Err(NamespaceError::HasFragmentOrQuery(base.to_owned()));
        }
        let mut b = Iri::new(base)
            .map_err(|_| NamespaceError::NotAbsolute(base.to_owned()))?
            .into_string();
        if !b.ends_with('/') {
            b.push('/');
        }
        let base = Iri::new(&b).expect("validated above");
        Ok(Namespaces {
            resource: base.join("resource/"),
            ontology: base.join("ontology/"),
            vocab: base.join("prov/ontology/"),
            belief: base.join("belief/"),
            graph: base.join("graph/"),
            context: base.join("context/"),
            execution: base.join("execution/"),
            dataset: base.join("dataset/"),
            base,
        })
    }

    pub fn vocab_term(&self, local: &str) -> Iri {
        self.vocab.join(local)
    }

    /// IRI of a NELL category or relation. A leading `concept:` is
    /// stripped; remaining `:`-separated parts become path segments.
    pub fn ontology_term(&self, token: &str) -> Iri {
        let stripped = token.strip_prefix("concept:").unwrap_or(token);
        let mut path = String::with_capacity(stripped.len());
        push_segments(&mut path, stripped);
        self.ontology.join(&path)
    }
}

impl Default for Namespaces {
    fn default() -> Self {
        Namespaces::new(DEFAULT_BASE_IRI).expect("default base IRI is valid")
    }
}

/// Percent-encodes one path segment. Unreserved ASCII and non-control
/// non-ASCII characters pass through; everything else (including `/`,
/// `:`, `%` and `~`) is encoded, so joined segments decode unambiguously.
pub fn encode_segment(out: &mut String, segment: &str) {
    if segment == "." || segment == ".." {
        for _ in 0..segment.len() {
            out.push_str("%2E");
        }
        return;
    }
    let mut buf = [0u8; 4];
    for c in segment.chars() {
        let keep = c.is_ascii_alphanumeric() || matches!(c, '-' | '.' | '_') || (!c.is_ascii() && !c.is_control());
        if keep {
            out.push(c);
        } else {
            for b in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "%{b:02X}");
            }
        }
    }
}

/// Encodes `a:b:c` as `a/b/c`, each part through [`encode_segment`].
pub fn push_segments(out: &mut String, colon_path: &str) {
    for (i, seg) in colon_path.split(':').enumerate() {
        if i > 0 {
            out.push('/');
        }
        encode_segment(out, seg);
    }
}
