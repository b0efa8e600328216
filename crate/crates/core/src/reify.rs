//! The five statement-reification models.
//!
//! Every model gives a belief one attachment IRI, and all of them derive it
//! from the same content hash of the base statement, so the same belief
//! gets the same hash under every model; only the namespace differs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::belief::BaseStatement;
use crate::ingest::BeliefKind;
use crate::namespaces::Namespaces;
use crate::rdf::vocab::{ndfluents, rdf};
use crate::rdf::{Iri, Quad, Subject, Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    RdfReification,
    NAry,
    NamedGraphs,
    SingletonProperty,
    NdFluents,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [
        ModelId::RdfReification,
        ModelId::NAry,
        ModelId::NamedGraphs,
        ModelId::SingletonProperty,
        ModelId::NdFluents,
    ];

    /// Command-line and file-name identifier.
    pub fn name(self) -> &'static str {
        match self {
            ModelId::RdfReification => "reification",
            ModelId::NAry => "nary",
            ModelId::NamedGraphs => "ngraphs",
            ModelId::SingletonProperty => "singleton",
            ModelId::NdFluents => "ndfluents",
        }
    }

    pub fn uses_quads(self) -> bool {
        self == ModelId::NamedGraphs
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown model {0:?} (expected reification, nary, ngraphs, singleton or ndfluents)")]
pub struct UnknownModel(pub String);

impl FromStr for ModelId {
    type Err = UnknownModel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownModel(s.to_owned()))
    }
}

/// 128-bit truncated SHA-256 of a statement's canonical N-Triples line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BeliefHash(pub [u8; 16]);

impl BeliefHash {
    pub fn of(s: &BaseStatement) -> Self {
        BeliefHash::of_bytes(s.to_string().as_bytes())
    }

    pub fn of_bytes(bytes: &[u8]) -> Self {
        let digest = Sha256::digest(bytes);
        let mut out = [0u8; 16];
        out.copy_from_slice(&digest[..16]);
        BeliefHash(out)
    }

    pub fn hex(&self) -> String {
        let mut s = String::with_capacity(32);
        for b in self.0 {
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

impl fmt::Display for BeliefHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// `belief/<hash>`: the hash covers `"<s> <p> <o> ."` with no newline.
pub fn mint_belief_id(s: &BaseStatement, ns: &Namespaces) -> Iri {
    ns.belief.join(&BeliefHash::of(s).hex())
}

fn nary_statement(p: &Iri) -> Iri {
    p.join("/statement")
}

fn nary_value(p: &Iri) -> Iri {
    p.join("/value")
}

/// The attachment IRI of a belief with hash `h` under `model`.
pub fn attachment_iri(model: ModelId, predicate: &Iri, h: &BeliefHash, ns: &Namespaces) -> Iri {
    let hex = h.hex();
    match model {
        ModelId::RdfReification | ModelId::NAry => ns.belief.join(&hex),
        ModelId::NamedGraphs => ns.graph.join(&hex),
        ModelId::SingletonProperty => predicate.join(&format!("#{hex}")),
        ModelId::NdFluents => ns.context.join(&hex),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReifiedStatement {
    pub base: BaseStatement,
    pub model: ModelId,
    pub hash: BeliefHash,
    pub attachment: Iri,
    /// The model's encoding of the statement; never empty.
    pub statement_quads: Vec<Quad>,
    /// The plain base triple, when the belief is asserted.
    pub asserted: Option<Triple>,
}

#[derive(Debug, Clone)]
pub struct Reifier {
    pub ns: Namespaces,
    /// Also assert candidate base triples (RDF reification and n-ary only).
    pub assert_candidates: bool,
}

impl Reifier {
    pub fn new(ns: Namespaces) -> Self {
        Reifier {
            ns,
            assert_candidates: false,
        }
    }

    pub fn reify(&self, s: &BaseStatement, model: ModelId, kind: BeliefKind) -> ReifiedStatement {
        let hash = BeliefHash::of(s);
        let att = attachment_iri(model, &s.predicate, &hash, &self.ns);
        let q = |sub: &Iri, p: Iri, o: Term| Quad::default_graph(Triple::new(sub.clone(), p, o));
        let statement_quads = match model {
            ModelId::RdfReification => vec![
                q(&att, rdf::type_(), rdf::statement().into()),
                q(&att, rdf::subject(), s.subject.clone().into()),
                q(&att, rdf::predicate(), s.predicate.clone().into()),
                q(&att, rdf::object(), s.object.clone()),
            ],
            ModelId::NAry => vec![
                q(&s.subject, nary_statement(&s.predicate), att.clone().into()),
                q(&att, nary_value(&s.predicate), s.object.clone()),
            ],
            ModelId::NamedGraphs => vec![s.to_triple().in_graph(Some(att.clone()))],
            ModelId::SingletonProperty => vec![
                q(&s.subject, att.clone(), s.object.clone()),
                q(&att, rdf::singleton_property_of(), s.predicate.clone().into()),
            ],
            ModelId::NdFluents => {
                let s_c = att.join("/subject");
                let mut v = Vec::with_capacity(5);
                let object = match &s.object {
                    Term::Iri(o) => {
                        let o_c = att.join("/object");
                        v.push(q(&o_c, ndfluents::contextual_part_of(), o.clone().into()));
                        v.push(q(&o_c, ndfluents::contextual_extent(), att.clone().into()));
                        Term::Iri(o_c)
                    }
                    other => other.clone(),
                };
                v.insert(0, q(&s_c, s.predicate.clone(), object));
                v.insert(1, q(&s_c, ndfluents::contextual_part_of(), s.subject.clone().into()));
                v.insert(2, q(&s_c, ndfluents::contextual_extent(), att.clone().into()));
                v
            }
        };
        let asserts = matches!(model, ModelId::RdfReification | ModelId::NAry)
            && (kind == BeliefKind::Promoted || self.assert_candidates);
        ReifiedStatement {
            base: s.clone(),
            model,
            hash,
            attachment: att,
            statement_quads,
            asserted: asserts.then(|| s.to_triple()),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed {model} encoding at statement {index}: {message}")]
pub struct MalformedEncoding {
    pub model: ModelId,
    /// Position in the input of the offending statement.
    pub index: usize,
    pub message: String,
}

/// A statement recovered by [`dereify`], with its attachment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Recovered {
    pub base: BaseStatement,
    pub attachment: Iri,
}

/// Result of [`dereify`]: the recovered statements, and the input positions
/// of every quad that belonged to a statement encoding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dereified {
    pub statements: Vec<Recovered>,
    pub encoding: BTreeSet<usize>,
}

fn iri_subject(t: &Triple) -> Option<&Iri> {
    match &t.subject {
        Subject::Iri(i) => Some(i),
        Subject::BlankNode(_) => None,
    }
}

/// Recovers base statements from a whole model output. Other triples
/// (metadata, labels, asserted base triples) are left alone. Duplicate
/// quads are ignored.
pub fn dereify(quads: &[Quad], model: ModelId, ns: &Namespaces) -> Result<Dereified, MalformedEncoding> {
    let mut seen = BTreeMap::new();
    let mut unique: Vec<(usize, &Quad)> = Vec::with_capacity(quads.len());
    for (i, q) in quads.iter().enumerate() {
        if seen.insert(q, i).is_none() {
            unique.push((i, q));
        }
    }
    let bad = |index: usize, message: String| MalformedEncoding { model, index, message };
    let mut out = Dereified::default();
    match model {
        ModelId::RdfReification => {
            let mut nodes: BTreeMap<&Iri, [Vec<(usize, &Term)>; 4]> = BTreeMap::new();
            for &(i, q) in &unique {
                let t = &q.triple;
                let Some(s) = iri_subject(t) else { continue };
                let slot = match t.predicate.as_str() {
                    rdf::TYPE if t.object.as_iri().map(Iri::as_str) == Some(rdf::STATEMENT) => 0,
                    rdf::SUBJECT => 1,
                    rdf::PREDICATE => 2,
                    rdf::OBJECT => 3,
                    _ => continue,
                };
                nodes.entry(s).or_default()[slot].push((i, &t.object));
            }
            for (node, parts) in nodes {
                let first = parts.iter().flatten().map(|(i, _)| *i).min().expect("non-empty");
                let names = ["rdf:type rdf:Statement", "rdf:subject", "rdf:predicate", "rdf:object"];
                for (k, p) in parts.iter().enumerate() {
                    if p.len() != 1 {
                        return Err(bad(first, format!("{node} has {} {} triples", p.len(), names[k])));
                    }
                }
                let subject = match parts[1][0].1 {
                    Term::Iri(i) => i.clone(),
                    _ => return Err(bad(parts[1][0].0, format!("{node}: rdf:subject is not an IRI"))),
                };
                let predicate = match parts[2][0].1 {
                    Term::Iri(i) => i.clone(),
                    _ => return Err(bad(parts[2][0].0, format!("{node}: rdf:predicate is not an IRI"))),
                };
                out.encoding.extend(parts.iter().flatten().map(|(i, _)| *i));
                out.statements.push(Recovered {
                    base: BaseStatement::new(subject, predicate, parts[3][0].1.clone()),
                    attachment: node.clone(),
                });
            }
        }
        ModelId::NAry => {
            // (s, p/statement, b) with b in the belief namespace
            let mut links: BTreeMap<&Iri, Vec<(usize, &Iri, Iri)>> = BTreeMap::new();
            let mut values: BTreeMap<(&Iri, &str), Vec<(usize, &Term)>> = BTreeMap::new();
            for &(i, q) in &unique {
                let t = &q.triple;
                if let (Some(s), Some(p)) = (iri_subject(t), t.predicate.as_str().strip_suffix("/statement")) {
                    if let Some(b) = t.object.as_iri().filter(|b| b.as_str().starts_with(ns.belief.as_str())) {
                        links.entry(b).or_default().push((i, s, Iri::new(p).expect("prefix of an IRI")));
                        continue;
                    }
                }
                if let Some(s) = iri_subject(t) {
                    if let Some(p) = t.predicate.as_str().strip_suffix("/value") {
                        values.entry((s, p)).or_default().push((i, &t.object));
                    }
                }
            }
            for (b, ls) in links {
                if ls.len() != 1 {
                    return Err(bad(ls[0].0, format!("{b} is the n-ary node of {} statements", ls.len())));
                }
                let (li, s, p) = &ls[0];
                let vs = values.get(&(b, p.as_str())).map(Vec::as_slice).unwrap_or_default();
                if vs.len() != 1 {
                    return Err(bad(*li, format!("{b} has {} {p}/value triples", vs.len())));
                }
                out.encoding.insert(*li);
                out.encoding.insert(vs[0].0);
                out.statements.push(Recovered {
                    base: BaseStatement::new((*s).clone(), p.clone(), vs[0].1.clone()),
                    attachment: b.clone(),
                });
            }
        }
        ModelId::NamedGraphs => {
            for &(i, q) in &unique {
                let Some(g) = &q.graph else { continue };
                let Some(s) = iri_subject(&q.triple) else {
                    return Err(bad(i, "statement subject is not an IRI".into()));
                };
                out.encoding.insert(i);
                out.statements.push(Recovered {
                    base: BaseStatement::new(s.clone(), q.triple.predicate.clone(), q.triple.object.clone()),
                    attachment: g.clone(),
                });
            }
        }
        ModelId::SingletonProperty => {
            let mut singletons: BTreeMap<&Iri, Vec<(usize, &Iri)>> = BTreeMap::new();
            for &(i, q) in &unique {
                let t = &q.triple;
                if t.predicate.as_str() == rdf::SINGLETON_PROPERTY_OF {
                    match (iri_subject(t), t.object.as_iri()) {
                        (Some(p1), Some(p)) => singletons.entry(p1).or_default().push((i, p)),
                        _ => return Err(bad(i, "singletonPropertyOf between non-IRIs".into())),
                    }
                }
            }
            let mut uses: BTreeMap<&Iri, Vec<(usize, &Triple)>> = BTreeMap::new();
            for &(i, q) in &unique {
                if singletons.contains_key(&q.triple.predicate) {
                    uses.entry(&q.triple.predicate).or_default().push((i, &q.triple));
                }
            }
            for (p1, ps) in singletons {
                if ps.len() != 1 {
                    return Err(bad(ps[0].0, format!("{p1} is a singleton of {} properties", ps.len())));
                }
                let us = uses.get(p1).map(Vec::as_slice).unwrap_or_default();
                if us.len() != 1 {
                    return Err(bad(ps[0].0, format!("singleton property {p1} is used {} times", us.len())));
                }
                let (ui, t) = us[0];
                let Some(s) = iri_subject(t) else {
                    return Err(bad(ui, "statement subject is not an IRI".into()));
                };
                out.encoding.insert(ps[0].0);
                out.encoding.insert(ui);
                out.statements.push(Recovered {
                    base: BaseStatement::new(s.clone(), ps[0].1.clone(), t.object.clone()),
                    attachment: p1.clone(),
                });
            }
        }
        ModelId::NdFluents => {
            let mut extent: BTreeMap<&Iri, Vec<(usize, &Iri)>> = BTreeMap::new();
            let mut part_of: BTreeMap<&Iri, Vec<(usize, &Term)>> = BTreeMap::new();
            for &(i, q) in &unique {
                let t = &q.triple;
                let Some(s) = iri_subject(t) else { continue };
                match t.predicate.as_str() {
                    ndfluents::CONTEXTUAL_EXTENT => match t.object.as_iri() {
                        Some(c) => extent.entry(s).or_default().push((i, c)),
                        None => return Err(bad(i, "contextualExtent object is not an IRI".into())),
                    },
                    ndfluents::CONTEXTUAL_PART_OF => part_of.entry(s).or_default().push((i, &t.object)),
                    _ => {}
                }
            }
            let mut fluents_of: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
            for (f, cs) in &extent {
                if cs.len() != 1 {
                    return Err(bad(cs[0].0, format!("fluent {f} has {} contexts", cs.len())));
                }
                match part_of.get(f).map(Vec::as_slice).unwrap_or_default() {
                    [_] => {}
                    ps => return Err(bad(cs[0].0, format!("fluent {f} is part of {} resources", ps.len()))),
                }
                fluents_of.entry(cs[0].1).or_default().push(f);
            }
            let mut statements: BTreeMap<&Iri, Vec<(usize, &Triple)>> = BTreeMap::new();
            for &(i, q) in &unique {
                let t = &q.triple;
                let Some(s) = iri_subject(t) else { continue };
                let structural = matches!(
                    t.predicate.as_str(),
                    ndfluents::CONTEXTUAL_EXTENT | ndfluents::CONTEXTUAL_PART_OF
                );
                if !structural && extent.contains_key(s) {
                    statements.entry(extent[s][0].1).or_default().push((i, t));
                }
            }
            for (c, fluents) in fluents_of {
                let st = statements.get(c).map(Vec::as_slice).unwrap_or_default();
                if st.len() != 1 {
                    let at = extent[fluents[0]][0].0;
                    return Err(bad(at, format!("context {c} has {} contextual statements", st.len())));
                }
                let (si, t) = st[0];
                let original = |f: &Iri| part_of[f][0].1.clone();
                let s_c = iri_subject(t).expect("checked above");
                let Term::Iri(subject) = original(s_c) else {
                    return Err(bad(si, format!("{s_c} is part of a literal")));
                };
                let object = match &t.object {
                    Term::Iri(o) if extent.get(o).is_some_and(|cs| cs[0].1 == c) => original(o),
                    other => other.clone(),
                };
                let expected = if object.is_literal() { 1 } else { 2 };
                if fluents.len() != expected {
                    return Err(bad(si, format!("context {c} has {} fluents", fluents.len())));
                }
                out.encoding.insert(si);
                for f in &fluents {
                    out.encoding.insert(extent[*f][0].0);
                    out.encoding.insert(part_of[*f][0].0);
                }
                out.statements.push(Recovered {
                    base: BaseStatement::new(subject, t.predicate.clone(), object),
                    attachment: c.clone(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    fn paris() -> (Namespaces, BaseStatement) {
        let ns = Namespaces::default();
        let s = BaseStatement::new(
            ns.resource.join("city/paris"),
            ns.ontology_term("locatedin"),
            ns.resource.join("country/france"),
        );
        (ns, s)
    }

    #[test]
    fn counts_per_model() {
        let (ns, s) = paris();
        let r = Reifier::new(ns.clone());
        let count = |m, k| {
            let x = r.reify(&s, m, k);
            x.statement_quads.len() + usize::from(x.asserted.is_some())
        };
        assert_eq!(count(ModelId::RdfReification, BeliefKind::Promoted), 5);
        assert_eq!(count(ModelId::RdfReification, BeliefKind::Candidate), 4);
        assert_eq!(count(ModelId::NAry, BeliefKind::Promoted), 3);
        assert_eq!(count(ModelId::NamedGraphs, BeliefKind::Candidate), 1);
        assert_eq!(count(ModelId::SingletonProperty, BeliefKind::Promoted), 2);
        assert_eq!(count(ModelId::NdFluents, BeliefKind::Promoted), 5);
        let lit = BaseStatement::new(s.subject.clone(), ns.ontology_term("label"), Literal::string("Paris"));
        assert_eq!(r.reify(&lit, ModelId::NdFluents, BeliefKind::Candidate).statement_quads.len(), 3);
        let ng = r.reify(&s, ModelId::NamedGraphs, BeliefKind::Candidate);
        assert!(ng.statement_quads.iter().all(|q| q.graph.is_some()));
    }

    #[test]
    fn attachments_share_the_hash() {
        let (ns, s) = paris();
        let r = Reifier::new(ns.clone());
        let h = BeliefHash::of(&s).hex();
        assert_eq!(h.len(), 32);
        for m in ModelId::ALL {
            assert!(r.reify(&s, m, BeliefKind::Promoted).attachment.as_str().ends_with(&h));
        }
        assert_eq!(mint_belief_id(&s, &ns), r.reify(&s, ModelId::NAry, BeliefKind::Promoted).attachment);
    }

    #[test]
    fn round_trip_each_model() {
        let (ns, s) = paris();
        let r = Reifier::new(ns.clone());
        for m in ModelId::ALL {
            let x = r.reify(&s, m, BeliefKind::Promoted);
            let mut quads = x.statement_quads.clone();
            quads.extend(x.asserted.clone().map(Quad::from));
            let d = dereify(&quads, m, &ns).unwrap();
            assert_eq!(
                d.statements,
                vec![Recovered {
                    base: s.clone(),
                    attachment: x.attachment.clone()
                }],
                "{m}"
            );
            assert_eq!(d.encoding.len(), x.statement_quads.len());
        }
    }

    #[test]
    fn missing_rdf_object_is_malformed() {
        let (ns, s) = paris();
        let x = Reifier::new(ns.clone()).reify(&s, ModelId::RdfReification, BeliefKind::Candidate);
        let quads: Vec<Quad> = x
            .statement_quads
            .into_iter()
            .filter(|q| q.triple.predicate.as_str() != rdf::OBJECT)
            .collect();
        let err = dereify(&quads, ModelId::RdfReification, &ns).unwrap_err();
        assert!(err.message.contains("rdf:object"), "{err}");
    }

    #[test]
    fn model_names_parse() {
        for m in ModelId::ALL {
            assert_eq!(m.name().parse::<ModelId>().unwrap(), m);
        }
        assert!("rdf".parse::<ModelId>().is_err());
    }
}
