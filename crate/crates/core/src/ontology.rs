//! Translation of NELL ontology rows into RDFS/OWL.
//!
//! Translation is two-pass: [`OntologyIndex::build`] first records which
//! subjects are categories or relations (needed by `mutexpredicates`) and
//! which relations have a datatype range (needed for belief objects);
//! rows are then translated independently against the frozen index.

use std::collections::{HashMap, HashSet};

use crate::ingest::{OntologyAssertion, OntologyPredicate};
use crate::namespaces::Namespaces;
use crate::rdf::vocab::{owl, rdf, rdfs, xsd};
use crate::rdf::{Iri, Literal, Term, Triple};

/// Vocabulary-namespace names for NELL predicates without a standard
/// RDFS/OWL counterpart.
pub const CUSTOM_PREDICATES: [(OntologyPredicate, &str); 8] = [
    (OntologyPredicate::Antisymmetric, "antisymmetric"),
    (OntologyPredicate::DomainWithinRange, "domainWithinRange"),
    (OntologyPredicate::HumanFormat, "humanFormat"),
    (OntologyPredicate::InstanceType, "instanceType"),
    (OntologyPredicate::Populate, "populate"),
    (OntologyPredicate::RangeWithinDomain, "rangeWithinDomain"),
    (OntologyPredicate::Visible, "visible"),
    (OntologyPredicate::MemberOfSets, "memberOfSets"),
];

fn custom(ns: &Namespaces, p: OntologyPredicate) -> Iri {
    let local = CUSTOM_PREDICATES
        .iter()
        .find(|(q, _)| *q == p)
        .map(|(_, l)| *l)
        .expect("predicate has a custom IRI");
    ns.vocab_term(local)
}

fn key(token: &str) -> &str {
    token.strip_prefix("concept:").unwrap_or(token)
}

/// Maps `xsd:foo` or a full XSD IRI to a datatype IRI.
pub fn datatype_iri(token: &str) -> Option<Iri> {
    let t = token.trim();
    let local = t.strip_prefix("xsd:").or_else(|| t.strip_prefix(xsd::NS))?;
    (!local.is_empty()).then(|| Iri::new(format!("{}{local}", xsd::NS)).expect("xsd namespace is absolute"))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyIndex {
    classes: HashSet<String>,
    properties: HashSet<String>,
    datatype_ranges: HashMap<String, Iri>,
}

impl OntologyIndex {
    pub fn build<'a>(assertions: impl IntoIterator<Item = &'a OntologyAssertion>) -> Self {
        let mut index = OntologyIndex::default();
        for a in assertions {
            match a.predicate {
                OntologyPredicate::MemberOfSets => match a.object.trim() {
                    "rtwcategory" => {
                        index.classes.insert(key(&a.subject).to_owned());
                    }
                    "rtwrelation" => {
                        index.properties.insert(key(&a.subject).to_owned());
                    }
                    _ => {}
                },
                OntologyPredicate::Range => {
                    if let Some(dt) = datatype_iri(&a.object) {
                        index.datatype_ranges.insert(key(&a.subject).to_owned(), dt);
                    }
                }
                _ => {}
            }
        }
        index
    }

    pub fn is_class(&self, token: &str) -> bool {
        self.classes.contains(key(token))
    }

    pub fn is_property(&self, token: &str) -> bool {
        self.properties.contains(key(token))
    }

    /// The datatype a relation's values take, if its range is a datatype.
    pub fn datatype_range(&self, relation: &str) -> Option<&Iri> {
        self.datatype_ranges.get(key(relation))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Translation {
    pub triples: Vec<Triple>,
    pub diagnostics: Vec<String>,
}

fn boolean(v: &str) -> Option<&'static str> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "1" => Some("true"),
        "false" | "0" => Some("false"),
        _ => None,
    }
}

pub fn translate_ontology_assertion(a: &OntologyAssertion, index: &OntologyIndex, ns: &Namespaces) -> Translation {
    let mut out = Translation::default();
    let s = ns.ontology_term(&a.subject);
    let class = |t: &str| Term::Iri(ns.ontology_term(t.trim()));
    let mut emit = |p: Iri, o: Term| out.triples.push(Triple::new(s.clone(), p, o));
    let mut diagnostics = Vec::new();
    match a.predicate {
        OntologyPredicate::Antireflexive => match boolean(&a.object) {
            Some("true") => emit(rdf::type_(), owl::irreflexive_property().into()),
            _ => diagnostics.push(format!("antireflexive {:?} on {}: only \"true\" translates", a.object, a.subject)),
        },
        OntologyPredicate::Antisymmetric
        | OntologyPredicate::DomainWithinRange
        | OntologyPredicate::Populate
        | OntologyPredicate::RangeWithinDomain
        | OntologyPredicate::Visible => match boolean(&a.object) {
            Some(b) => emit(custom(ns, a.predicate), Literal::typed(b, xsd::boolean()).into()),
            None => diagnostics.push(format!("{} value {:?} is not a boolean", a.predicate, a.object)),
        },
        OntologyPredicate::Description => {
            emit(rdfs::comment(), Literal::lang(a.object.as_str(), "en").expect("en is a valid tag").into())
        }
        OntologyPredicate::Domain => emit(rdfs::domain(), class(&a.object)),
        OntologyPredicate::Generalizations => emit(rdfs::sub_class_of(), class(&a.object)),
        OntologyPredicate::HumanFormat => emit(
            custom(ns, a.predicate),
            Literal::typed(a.object.as_str(), xsd::string()).into(),
        ),
        OntologyPredicate::InstanceType => {
            let o = match Iri::new(a.object.trim()) {
                Ok(iri) if !a.object.starts_with("concept:") => iri.into(),
                _ => class(&a.object),
            };
            emit(custom(ns, a.predicate), o)
        }
        OntologyPredicate::Inverse => emit(owl::inverse_of(), class(&a.object)),
        OntologyPredicate::MemberOfSets => match a.object.trim() {
            "rtwcategory" => emit(rdf::type_(), rdfs::class().into()),
            "rtwrelation" => emit(rdf::type_(), rdf::property().into()),
            other => {
                emit(custom(ns, a.predicate), class(other));
                diagnostics.push(format!("memberofsets {other:?} on {} is neither rtwcategory nor rtwrelation", a.subject));
            }
        },
        OntologyPredicate::MutexPredicates => {
            if index.is_class(&a.subject) {
                emit(owl::disjoint_with(), class(&a.object))
            } else if index.is_property(&a.subject) {
                emit(owl::property_disjoint_with(), class(&a.object))
            } else {
                diagnostics.push(format!(
                    "mutexpredicates on {}: subject is neither a category nor a relation",
                    a.subject
                ))
            }
        }
        OntologyPredicate::NrOfValues => {
            if a.object.trim() == "1" {
                emit(rdf::type_(), owl::functional_property().into())
            }
        }
        OntologyPredicate::Range => {
            let o = match datatype_iri(&a.object) {
                Some(dt) => dt.into(),
                None => class(&a.object),
            };
            emit(rdfs::range(), o)
        }
    }
    out.diagnostics = diagnostics;
    out
}
