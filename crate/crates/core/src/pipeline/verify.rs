//! Cross-model consistency check.
//!
//! Each model file is de-reified back to its base statements. What remains
//! (auxiliary and provenance statements) has every attachment IRI replaced
//! by the model-independent belief IRI. The resulting sets must be equal
//! for all models.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ingest::open_input;
use crate::namespaces::Namespaces;
use crate::rdf::parse::{parse_nquads, parse_ntriples, parse_trig, Located, ParseError};
use crate::rdf::{Iri, Quad, Subject, Term, Triple};
use crate::reify::{dereify, mint_belief_id, MalformedEncoding, ModelId};

use super::Syntax;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: cannot tell the RDF syntax from the file name")]
    UnknownSyntax { path: PathBuf },
    #[error("{path}:{}: {source}", source.line)]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}:{line}: malformed {} encoding: {}", source.model, source.message)]
    Encoding {
        path: PathBuf,
        line: usize,
        source: MalformedEncoding,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub model: ModelId,
    pub path: PathBuf,
    pub quads: usize,
    pub base_statements: usize,
    pub canonical: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub left: ModelId,
    pub right: ModelId,
    /// Smallest canonical statement present in `left` only.
    pub only_left: Option<String>,
    pub only_right: Option<String>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} and {} differ", self.left, self.right)?;
        if let Some(s) = &self.only_left {
            write!(f, "; only in {}: {s}", self.left)?;
        }
        if let Some(s) = &self.only_right {
            write!(f, "; only in {}: {s}", self.right)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub models: Vec<ModelReport>,
    pub divergence: Option<Divergence>,
}

impl VerifyReport {
    pub fn consistent(&self) -> bool {
        self.divergence.is_none()
    }
}

pub fn read_quads(path: &Path) -> Result<Vec<Located>, VerifyError> {
    let syntax = Syntax::from_path(path).ok_or_else(|| VerifyError::UnknownSyntax { path: path.to_owned() })?;
    let reader = open_input(path).map_err(|source| VerifyError::Io {
        path: path.to_owned(),
        source,
    })?;
    let parsed = match syntax {
        Syntax::NTriples => parse_ntriples(reader),
        Syntax::NQuads => parse_nquads(reader),
        Syntax::Trig => parse_trig(reader),
    };
    parsed.map_err(|source| VerifyError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Canonical statement set of one model's output.
pub fn canonicalize(
    located: &[Located],
    model: ModelId,
    ns: &Namespaces,
    path: &Path,
) -> Result<(BTreeSet<String>, usize), VerifyError> {
    let quads: Vec<Quad> = located.iter().map(|l| l.quad.clone()).collect();
    let d = dereify(&quads, model, ns).map_err(|source| VerifyError::Encoding {
        path: path.to_owned(),
        line: located.get(source.index).map_or(0, |l| l.line),
        source,
    })?;
    let mut rename: HashMap<&Iri, Iri> = HashMap::with_capacity(d.statements.len());
    let mut bases: BTreeSet<&Triple> = BTreeSet::new();
    let base_triples: Vec<Triple> = d.statements.iter().map(|r| r.base.to_triple()).collect();
    let mut out = BTreeSet::new();
    for (r, t) in d.statements.iter().zip(&base_triples) {
        let id = mint_belief_id(&r.base, ns);
        out.insert(format!("BASE {t}"));
        rename.insert(&r.attachment, id);
        bases.insert(t);
    }
    let map_iri = |i: &Iri| rename.get(i).cloned().unwrap_or_else(|| i.clone());
    for (i, q) in quads.iter().enumerate() {
        if d.encoding.contains(&i) || (q.graph.is_none() && bases.contains(&q.triple)) {
            continue;
        }
        let t = &q.triple;
        let subject = match &t.subject {
            Subject::Iri(s) => Subject::Iri(map_iri(s)),
            b => b.clone(),
        };
        let object = match &t.object {
            Term::Iri(o) => Term::Iri(map_iri(o)),
            o => o.clone(),
        };
        let graph = q.graph.as_ref().map(map_iri);
        out.insert(Triple::new(subject, t.predicate.clone(), object).in_graph(graph).to_string());
    }
    Ok((out, d.statements.len()))
}

/// Checks that every listed file encodes the same beliefs and metadata.
pub fn verify_cross_model(files: &[(ModelId, PathBuf)], ns: &Namespaces) -> Result<VerifyReport, VerifyError> {
    let mut models = Vec::with_capacity(files.len());
    for (model, path) in files {
        let located = read_quads(path)?;
        let (canonical, base_statements) = canonicalize(&located, *model, ns, path)?;
        models.push(ModelReport {
            model: *model,
            path: path.clone(),
            quads: located.len(),
            base_statements,
            canonical,
        });
    }
    let divergence = models.split_first().and_then(|(first, rest)| {
        rest.iter().find(|m| m.canonical != first.canonical).map(|m| Divergence {
            left: first.model,
            right: m.model,
            only_left: first.canonical.difference(&m.canonical).next().cloned(),
            only_right: m.canonical.difference(&first.canonical).next().cloned(),
        })
    });
    Ok(VerifyReport { models, divergence })
}
