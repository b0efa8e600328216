//! VoID/DCAT description of the produced dump files.

use crate::ingest::BeliefKind;
use crate::namespaces::{encode_segment, Namespaces};
use crate::rdf::vocab::{dcat, dcterms, rdf, void, xsd};
use crate::rdf::{Iri, Literal, Triple};
use crate::reify::ModelId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub file_name: String,
    pub kind: BeliefKind,
    pub model: ModelId,
    /// IANA media type IRI.
    pub media_type: String,
    pub statements: u64,
}

/// A `void:Dataset`/`dcat:Dataset` node with one `dcat:Distribution` per
/// file.
pub fn emit_dataset_metadata(ns: &Namespaces, distributions: &[Distribution]) -> Vec<Triple> {
    let dataset = ns.dataset.join("nellrdf");
    let a = rdf::type_;
    let mut out = vec![
        Triple::new(dataset.clone(), a(), void::dataset()),
        Triple::new(dataset.clone(), a(), dcat::dataset()),
        Triple::new(dataset.clone(), dcterms::title(), Literal::string("NELL2RDF")),
    ];
    let total: u64 = distributions.iter().map(|d| d.statements).sum();
    out.push(Triple::new(dataset.clone(), void::triples(), integer(total)));
    out.push(Triple::new(dataset.clone(), void::vocabulary(), ns.vocab.clone()));
    for d in distributions {
        let mut local = String::from("distribution/");
        encode_segment(&mut local, &d.file_name);
        let node = ns.dataset.join(&local);
        out.push(Triple::new(dataset.clone(), dcat::distribution(), node.clone()));
        out.push(Triple::new(node.clone(), a(), dcat::distribution_class()));
        out.push(Triple::new(node.clone(), dcterms::title(), Literal::string(d.file_name.as_str())));
        out.push(Triple::new(
            node.clone(),
            dcat::media_type(),
            Iri::new(&d.media_type).expect("media type IRIs are absolute"),
        ));
        out.push(Triple::new(node.clone(), void::triples(), integer(d.statements)));
        out.push(Triple::new(
            node.clone(),
            ns.vocab_term("reificationModel"),
            Literal::string(d.model.name()),
        ));
        out.push(Triple::new(node, ns.vocab_term("beliefKind"), Literal::string(d.kind.as_str())));
    }
    out
}

fn integer(n: u64) -> Literal {
    Literal::typed(n.to_string(), xsd::integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::media_types;

    fn dist(kind: BeliefKind, model: ModelId, media: &str, n: u64) -> Distribution {
        Distribution {
            file_name: format!("nellrdf.{}.{}", kind.as_str(), model.name()),
            kind,
            model,
            media_type: media.into(),
            statements: n,
        }
    }

    #[test]
    fn triple_count_and_media_type() {
        let ns = Namespaces::default();
        let out = emit_dataset_metadata(&ns, &[dist(BeliefKind::Promoted, ModelId::NamedGraphs, media_types::N_QUADS, 5000)]);
        let dataset = ns.dataset.join("nellrdf");
        assert!(out.contains(&Triple::new(dataset, void::triples(), integer(5000))));
        assert!(out
            .iter()
            .any(|t| t.predicate == dcat::media_type() && t.object.as_iri().unwrap().as_str() == media_types::N_QUADS));
    }

    #[test]
    fn one_distribution_per_file() {
        let ns = Namespaces::default();
        let out = emit_dataset_metadata(
            &ns,
            &[
                dist(BeliefKind::Promoted, ModelId::RdfReification, media_types::N_TRIPLES, 1),
                dist(BeliefKind::Candidate, ModelId::RdfReification, media_types::N_TRIPLES, 2),
            ],
        );
        let n = out
            .iter()
            .filter(|t| t.object.as_iri() == Some(&dcat::distribution_class()))
            .count();
        assert_eq!(n, 2);
    }
}
