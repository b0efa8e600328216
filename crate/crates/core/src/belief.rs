//! Base statement and auxiliary triples for one belief row.
//!
//! The object of the base statement is chosen as follows (first match):
//!
//! | condition                                   | object                           |
//! |---------------------------------------------|----------------------------------|
//! | relation has a datatype range               | literal typed with that datatype |
//! | relation is `generalizations`               | ontology class IRI of the value  |
//! | value starts with `concept:`                | entity IRI of the value          |
//! | otherwise                                   | `xsd:string` literal             |
//!
//! Literal values lose one pair of surrounding double quotes if present.

use std::fmt;

use thiserror::Error;

use crate::candidate_source::is_generalization;
use crate::ingest::NellBelief;
use crate::lexical::Decimal;
use crate::namespaces::{encode_segment, push_segments, Namespaces};
use crate::ontology::OntologyIndex;
use crate::rdf::vocab::{rdf, rdfs, skos, xsd};
use crate::rdf::{Iri, Literal, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BeliefError {
    #[error("empty entity token")]
    EmptyToken,
}

/// The (subject, predicate, object) a belief asserts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseStatement {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl BaseStatement {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        BaseStatement {
            subject,
            predicate,
            object: object.into(),
        }
    }

    pub fn to_triple(&self) -> Triple {
        Triple::new(self.subject.clone(), self.predicate.clone(), self.object.clone())
    }
}

impl fmt::Display for BaseStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// IRI for a NELL entity token under `ns.resource`.
///
/// `concept:a:b` becomes `resource/a/b` with each part percent-encoded.
/// Any other token becomes `resource/~<encoded token>`; encoded segments
/// never contain a raw `~` or `/`, so the mapping is injective.
pub fn mint_entity_iri(token: &str, ns: &Namespaces) -> Result<Iri, BeliefError> {
    let mut path = String::with_capacity(token.len() + 1);
    match token.strip_prefix("concept:") {
        Some("") => return Err(BeliefError::EmptyToken),
        Some(rest) => push_segments(&mut path, rest),
        None if token.is_empty() => return Err(BeliefError::EmptyToken),
        None => {
            path.push('~');
            encode_segment(&mut path, token);
        }
    }
    Ok(ns.resource.join(&path))
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"')
        .and_then(|r| r.strip_suffix('"'))
        .unwrap_or(v)
}

fn typed_value(v: &str, datatype: &Iri) -> Literal {
    let v = unquote(v);
    if datatype.as_str() == xsd::DECIMAL {
        if let Ok(d) = v.parse::<Decimal>() {
            return Literal::typed(d.to_string(), datatype.clone());
        }
    }
    Literal::typed(v, datatype.clone())
}

/// Object term for a belief value, per the decision table above.
pub fn belief_object(relation: &str, value: &str, index: &OntologyIndex, ns: &Namespaces) -> Result<Term, BeliefError> {
    if let Some(dt) = index.datatype_range(relation) {
        return Ok(typed_value(value, dt).into());
    }
    if is_generalization(relation) {
        if value.is_empty() || value == "concept:" {
            return Err(BeliefError::EmptyToken);
        }
        return Ok(ns.ontology_term(value).into());
    }
    if value.starts_with("concept:") {
        return mint_entity_iri(value, ns).map(Term::Iri);
    }
    Ok(Literal::string(unquote(value)).into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslatedBelief {
    pub base: BaseStatement,
    pub auxiliary: Vec<Triple>,
    /// Value-side entries (fields 8, 10, 12) that could not be attached
    /// because the object is a literal.
    pub dropped: Vec<String>,
}

pub fn translate_belief(b: &NellBelief, index: &OntologyIndex, ns: &Namespaces) -> Result<TranslatedBelief, BeliefError> {
    let subject = mint_entity_iri(&b.entity, ns)?;
    let predicate = ns.ontology_term(&b.relation);
    let object = belief_object(&b.relation, &b.value, index, ns)?;

    let mut aux = Vec::with_capacity(
        b.entity_labels.len() + b.value_labels.len() + 2 + b.entity_categories.len() + b.value_categories.len(),
    );
    let mut dropped = Vec::new();
    let mut describe = |node: Option<&Iri>, side: &str, labels: &[String], best: &Option<String>, cats: &[String]| {
        let Some(node) = node else {
            let n = labels.len() + usize::from(best.is_some()) + cats.len();
            if n > 0 {
                dropped.push(format!("{n} {side} label/category entries dropped: object is a literal"));
            }
            return;
        };
        for l in labels {
            aux.push(Triple::new(node.clone(), rdfs::label(), Literal::string(l.as_str())));
        }
        if let Some(l) = best {
            aux.push(Triple::new(node.clone(), skos::pref_label(), Literal::string(l.as_str())));
        }
        for c in cats {
            aux.push(Triple::new(node.clone(), rdf::type_(), ns.ontology_term(c)));
        }
    };
    describe(
        Some(&subject),
        "entity",
        &b.entity_labels,
        &b.entity_best_label,
        &b.entity_categories,
    );
    describe(
        object.as_iri(),
        "value",
        &b.value_labels,
        &b.value_best_label,
        &b.value_categories,
    );
    Ok(TranslatedBelief {
        base: BaseStatement::new(subject, predicate, object),
        auxiliary: aux,
        dropped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entity_iris() {
        let ns = Namespaces::default();
        assert_eq!(
            mint_entity_iri("concept:city:paris", &ns).unwrap().as_str(),
            "http://nell2rdf.example/resource/city/paris"
        );
        assert_eq!(
            mint_entity_iri("concept:city:saint étienne", &ns).unwrap().as_str(),
            "http://nell2rdf.example/resource/city/saint%20étienne"
        );
        assert_eq!(
            mint_entity_iri("paris", &ns).unwrap().as_str(),
            "http://nell2rdf.example/resource/~paris"
        );
        assert_eq!(mint_entity_iri("", &ns), Err(BeliefError::EmptyToken));
        assert_eq!(mint_entity_iri("concept:", &ns), Err(BeliefError::EmptyToken));
    }

    #[test]
    fn objects_follow_decision_table() {
        let ns = Namespaces::default();
        let rows = [crate::ingest::parse_ontology_line("concept:hasofficialwebsite\trange\txsd:anyURI").unwrap()];
        let index = OntologyIndex::build(&rows);
        let o = belief_object("concept:hasofficialwebsite", "\"http://paris.fr\"", &index, &ns).unwrap();
        assert_eq!(o, Literal::typed("http://paris.fr", xsd::any_uri()).into());
        let o = belief_object("generalizations", "concept:city", &index, &ns).unwrap();
        assert_eq!(o.as_iri().unwrap().as_str(), "http://nell2rdf.example/ontology/city");
        let o = belief_object("concept:locatedin", "concept:country:france", &index, &ns).unwrap();
        assert_eq!(o.as_iri().unwrap().as_str(), "http://nell2rdf.example/resource/country/france");
        let o = belief_object("concept:haslabel", "\"Paris\"", &index, &ns).unwrap();
        assert_eq!(o, Literal::string("Paris").into());
    }
}
