//! Provenance metadata: the vocabulary T-Box and the per-belief A-Box.
//!
//! Every intermediate node gets a minted IRI below its execution node
//! (`/token`, `/pattern/0`, `/path/1/list/2`, ...). Execution IRIs hash
//! the belief hash, component, iteration and record index, so they do not
//! depend on the reification model.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::candidate_source::{ComponentExecution, ComponentId, ComponentPayload, Token};
use crate::ingest::{BeliefKind, OntologyPredicate};
use crate::lexical::Decimal;
use crate::namespaces::Namespaces;
use crate::ontology::CUSTOM_PREDICATES;
use crate::rdf::vocab::{owl, prov, rdf, rdfs, xsd};
use crate::rdf::{Iri, Literal, Term, Triple};
use crate::reify::BeliefHash;

/// Term declared in the T-Box; `Vocab` locals live in the vocabulary
/// namespace, `Ext` are absolute IRIs.
#[derive(Debug, Clone, Copy)]
enum T {
    Vocab(&'static str),
    Ext(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Datatype,
    Object,
}

struct PropertyDecl {
    local: &'static str,
    kind: Kind,
    parent: Option<&'static str>,
    domain: Option<&'static str>,
    range: T,
}

const fn dp(local: &'static str, domain: &'static str, range: &'static str) -> PropertyDecl {
    PropertyDecl {
        local,
        kind: Kind::Datatype,
        parent: None,
        domain: Some(domain),
        range: T::Ext(range),
    }
}

const fn op(local: &'static str, domain: &'static str, range: &'static str) -> PropertyDecl {
    PropertyDecl {
        local,
        kind: Kind::Object,
        parent: None,
        domain: Some(domain),
        range: T::Vocab(range),
    }
}

const EXEC: &str = "ComponentExecution";

const CLASSES: &[(&str, T)] = &[
    ("Belief", T::Ext(prov::ENTITY)),
    ("PromotedBelief", T::Vocab("Belief")),
    ("CandidateBelief", T::Vocab("Belief")),
    (EXEC, T::Ext(prov::ACTIVITY)),
    ("Component", T::Ext(prov::SOFTWARE_AGENT)),
    ("Token", T::Ext(owl::THING)),
    ("RelationToken", T::Vocab("Token")),
    ("GeneralizationToken", T::Vocab("Token")),
    ("GeoToken", T::Vocab("Token")),
    ("MorphologicalPatternScoreTriple", T::Ext(owl::THING)),
    ("PatternNbOfOccurrencesPair", T::Ext(owl::THING)),
    ("NameLatLongTriple", T::Ext(owl::THING)),
    ("TextUrlPair", T::Ext(owl::THING)),
    ("Path", T::Ext(owl::THING)),
    ("DirectionOfPath", T::Ext(owl::THING)),
    ("RuleScoresTuple", T::Ext(owl::THING)),
    ("Rule", T::Ext(owl::THING)),
    ("Predicate", T::Ext(owl::THING)),
];

const PROPERTIES: &[PropertyDecl] = &[
    PropertyDecl {
        local: "generatedBy",
        kind: Kind::Object,
        parent: Some(prov::WAS_GENERATED_BY),
        domain: Some("Belief"),
        range: T::Vocab(EXEC),
    },
    PropertyDecl {
        local: "associatedWith",
        kind: Kind::Object,
        parent: Some(prov::WAS_ASSOCIATED_WITH),
        domain: Some(EXEC),
        range: T::Vocab("Component"),
    },
    dp("iterationOfPromotion", "PromotedBelief", xsd::INTEGER),
    dp("probabilityOfBelief", "PromotedBelief", xsd::DECIMAL),
    dp("iteration", EXEC, xsd::INTEGER),
    dp("probability", EXEC, xsd::DECIMAL),
    op("hasToken", EXEC, "Token"),
    dp("source", EXEC, xsd::STRING),
    dp("atTime", EXEC, xsd::DATE_TIME),
    dp("componentAlias", EXEC, xsd::STRING),
    dp("tokenEntity", "Token", xsd::STRING),
    dp("relationValue", "RelationToken", xsd::STRING),
    dp("generalizationValue", "GeneralizationToken", xsd::STRING),
    // GeoToken and NameLatLongTriple share the coordinate properties
    PropertyDecl {
        local: "latitudeValue",
        kind: Kind::Datatype,
        parent: None,
        domain: None,
        range: T::Ext(xsd::DECIMAL),
    },
    PropertyDecl {
        local: "longitudeValue",
        kind: Kind::Datatype,
        parent: None,
        domain: None,
        range: T::Ext(xsd::DECIMAL),
    },
    dp("freebaseDate", "AliasMatcherExecution", xsd::DATE),
    op("morphologicalPattern", "CMCExecution", "MorphologicalPatternScoreTriple"),
    dp("morphologicalPatternName", "MorphologicalPatternScoreTriple", xsd::STRING),
    dp("morphologicalPatternValue", "MorphologicalPatternScoreTriple", xsd::STRING),
    dp("morphologicalPatternScore", "MorphologicalPatternScoreTriple", xsd::DECIMAL),
    op("patternOccurrences", "CPLExecution", "PatternNbOfOccurrencesPair"),
    dp("textualPattern", "PatternNbOfOccurrencesPair", xsd::STRING),
    dp("nbOfOccurrences", "PatternNbOfOccurrencesPair", xsd::NON_NEGATIVE_INTEGER),
    dp("oldBug", "KbManipulationExecution", xsd::STRING),
    op("location", "LatLongExecution", "NameLatLongTriple"),
    dp("name", "NameLatLongTriple", rdf::LANG_STRING),
    dp("promotedEntity", "MBLExecution", xsd::STRING),
    dp("promotedEntityCategory", "MBLExecution", xsd::STRING),
    dp("promotedRelation", "MBLExecution", xsd::STRING),
    dp("promotedValue", "MBLExecution", xsd::STRING),
    dp("promotedValueCategory", "MBLExecution", xsd::STRING),
    op("textUrl", "OEExecution", "TextUrlPair"),
    dp("text", "TextUrlPair", rdf::LANG_STRING),
    // shared by OE pairs and SEAL executions
    PropertyDecl {
        local: "url",
        kind: Kind::Datatype,
        parent: None,
        domain: None,
        range: T::Ext(xsd::ANY_URI),
    },
    dp("ontologyModification", "OntologyModifierExecution", xsd::STRING),
    dp("modificationKind", "OntologyModifierExecution", xsd::STRING),
    op("relationPath", "PRAExecution", "Path"),
    op("direction", "Path", "DirectionOfPath"),
    dp("score", "Path", xsd::DECIMAL),
    PropertyDecl {
        local: "listOfRelations",
        kind: Kind::Object,
        parent: None,
        domain: Some("Path"),
        range: T::Ext(rdf::LIST),
    },
    op("ruleScores", "RLExecution", "RuleScoresTuple"),
    op("rule", "RuleScoresTuple", "Rule"),
    dp("accuracy", "RuleScoresTuple", xsd::DECIMAL),
    dp("nbCorrect", "RuleScoresTuple", xsd::NON_NEGATIVE_INTEGER),
    dp("nbIncorrect", "RuleScoresTuple", xsd::NON_NEGATIVE_INTEGER),
    dp("nbUnknown", "RuleScoresTuple", xsd::NON_NEGATIVE_INTEGER),
    dp("variable", "Rule", xsd::STRING),
    dp("valueOfVariable", "Rule", xsd::STRING),
    op("predicate", "Rule", "Predicate"),
    dp("predicateName", "Predicate", xsd::STRING),
    dp("firstVariable", "Predicate", xsd::STRING),
    dp("secondVariable", "Predicate", xsd::STRING),
    dp("sentence", "SemparseExecution", xsd::STRING),
    dp("user", "SpreadsheetEditsExecution", xsd::STRING),
    dp("entity", "SpreadsheetEditsExecution", xsd::STRING),
    dp("relation", "SpreadsheetEditsExecution", xsd::STRING),
    dp("value", "SpreadsheetEditsExecution", xsd::STRING),
    dp("action", "SpreadsheetEditsExecution", xsd::STRING),
    dp("file", "SpreadsheetEditsExecution", xsd::STRING),
    // dataset description
    PropertyDecl {
        local: "reificationModel",
        kind: Kind::Datatype,
        parent: None,
        domain: None,
        range: T::Ext(xsd::STRING),
    },
    PropertyDecl {
        local: "beliefKind",
        kind: Kind::Datatype,
        parent: None,
        domain: None,
        range: T::Ext(xsd::STRING),
    },
];

pub const DIRECTIONS: [&str; 2] = ["forward", "backward"];

/// Class of one component's executions, e.g. `CPLExecution`.
pub fn execution_class_local(c: ComponentId) -> String {
    format!("{}Execution", c.name())
}

/// IRIs of the provenance vocabulary under one namespace set.
#[derive(Debug, Clone)]
pub struct ProvVocabulary {
    ns: Namespaces,
}

impl ProvVocabulary {
    pub fn new(ns: Namespaces) -> Self {
        ProvVocabulary { ns }
    }

    pub fn namespaces(&self) -> &Namespaces {
        &self.ns
    }

    pub fn term(&self, local: &str) -> Iri {
        self.ns.vocab_term(local)
    }

    fn t(&self, t: T) -> Iri {
        match t {
            T::Vocab(l) => self.term(l),
            T::Ext(iri) => Iri::new(iri).expect("vocabulary IRIs are absolute"),
        }
    }

    pub fn component(&self, c: ComponentId) -> Iri {
        self.term(c.name())
    }

    pub fn execution_class(&self, c: ComponentId) -> Iri {
        self.term(&execution_class_local(c))
    }

    /// The full T-Box.
    pub fn emit_ontology(&self) -> Vec<Triple> {
        let mut out = Vec::new();
        let a = rdf::type_;
        out.push(Triple::new(self.ns.vocab.clone(), a(), owl::ontology()));
        for (local, parent) in CLASSES {
            let c = self.term(local);
            out.push(Triple::new(c.clone(), a(), owl::class()));
            out.push(Triple::new(c, rdfs::sub_class_of(), self.t(*parent)));
        }
        let alias = self.term("ComponentIteration");
        out.push(Triple::new(alias.clone(), a(), owl::class()));
        out.push(Triple::new(alias, owl::equivalent_class(), self.term(EXEC)));
        for c in ComponentId::ALL {
            let class = self.execution_class(c);
            out.push(Triple::new(class.clone(), a(), owl::class()));
            out.push(Triple::new(class, rdfs::sub_class_of(), self.term(EXEC)));
        }
        for p in PROPERTIES {
            let iri = self.term(p.local);
            let kind = match p.kind {
                Kind::Datatype => owl::datatype_property(),
                Kind::Object => owl::object_property(),
            };
            out.push(Triple::new(iri.clone(), a(), kind));
            if let Some(parent) = p.parent {
                out.push(Triple::new(iri.clone(), rdfs::sub_property_of(), self.t(T::Ext(parent))));
            }
            if let Some(d) = p.domain {
                out.push(Triple::new(iri.clone(), rdfs::domain(), self.term(d)));
            }
            out.push(Triple::new(iri, rdfs::range(), self.t(p.range)));
        }
        for (pred, local) in CUSTOM_PREDICATES {
            let iri = self.term(local);
            let (kind, range) = match pred {
                OntologyPredicate::InstanceType | OntologyPredicate::MemberOfSets => (owl::object_property(), None),
                OntologyPredicate::HumanFormat => (owl::datatype_property(), Some(xsd::string())),
                _ => (owl::datatype_property(), Some(xsd::boolean())),
            };
            out.push(Triple::new(iri.clone(), a(), kind));
            if let Some(r) = range {
                out.push(Triple::new(iri, rdfs::range(), r));
            }
        }
        for c in ComponentId::ALL {
            let iri = self.component(c);
            out.push(Triple::new(iri.clone(), a(), self.term("Component")));
            out.push(Triple::new(iri, rdfs::label(), Literal::string(c.name())));
        }
        for d in DIRECTIONS {
            out.push(Triple::new(self.term(d), a(), self.term("DirectionOfPath")));
        }
        out
    }

    /// Types the attachment as a promoted or candidate belief; promoted
    /// beliefs also get their promotion iteration and score.
    pub fn emit_belief_node(&self, attachment: &Iri, kind: BeliefKind, promotion: Option<(u64, &Decimal)>) -> Vec<Triple> {
        let class = match kind {
            BeliefKind::Promoted => "PromotedBelief",
            BeliefKind::Candidate => "CandidateBelief",
        };
        let mut out = vec![Triple::new(attachment.clone(), rdf::type_(), self.term(class))];
        if let (BeliefKind::Promoted, Some((it, p))) = (kind, promotion) {
            out.push(Triple::new(
                attachment.clone(),
                self.term("iterationOfPromotion"),
                integer(it),
            ));
            out.push(Triple::new(attachment.clone(), self.term("probabilityOfBelief"), decimal(p)));
        }
        out
    }

    pub fn execution_iri(&self, belief: &BeliefHash, e: &ComponentExecution, index: usize) -> Iri {
        let mut h = Sha256::new();
        h.update(belief.hex().as_bytes());
        h.update(b"|");
        h.update(e.component.name().as_bytes());
        h.update(b"|");
        match e.iteration {
            Some(i) => h.update(i.to_string().as_bytes()),
            None => h.update(b"-"),
        }
        h.update(b"|");
        h.update(index.to_string().as_bytes());
        let digest = h.finalize();
        let mut hex = String::with_capacity(32);
        for b in &digest[..16] {
            let _ = write!(hex, "{b:02x}");
        }
        self.ns.execution.join(&hex)
    }

    pub fn emit_token(&self, exec: &Iri, t: &Token, out: &mut Vec<Triple>) {
        let node = exec.join("/token");
        out.push(Triple::new(exec.clone(), self.term("hasToken"), node.clone()));
        let class = match t {
            Token::Relation { .. } => "RelationToken",
            Token::Generalization { .. } => "GeneralizationToken",
            Token::Geo { .. } => "GeoToken",
        };
        out.push(Triple::new(node.clone(), rdf::type_(), self.term(class)));
        out.push(Triple::new(node.clone(), self.term("tokenEntity"), string(t.entity())));
        match t {
            Token::Relation { relation_value, .. } => {
                out.push(Triple::new(node, self.term("relationValue"), string(relation_value)))
            }
            Token::Generalization {
                generalization_value, ..
            } => out.push(Triple::new(node, self.term("generalizationValue"), string(generalization_value))),
            Token::Geo {
                latitude, longitude, ..
            } => {
                out.push(Triple::new(node.clone(), self.term("latitudeValue"), decimal(latitude)));
                out.push(Triple::new(node, self.term("longitudeValue"), decimal(longitude)));
            }
        }
    }

    /// All triples for one execution, anchored at `attachment`.
    pub fn emit_execution(
        &self,
        attachment: &Iri,
        belief: &BeliefHash,
        e: &ComponentExecution,
        index: usize,
        out: &mut Vec<Triple>,
    ) {
        let x = self.execution_iri(belief, e, index);
        out.push(Triple::new(attachment.clone(), self.term("generatedBy"), x.clone()));
        out.push(Triple::new(x.clone(), rdf::type_(), self.execution_class(e.component)));
        out.push(Triple::new(x.clone(), self.term("associatedWith"), self.component(e.component)));
        if let Some(i) = e.iteration {
            out.push(Triple::new(x.clone(), self.term("iteration"), integer(i)));
        }
        if let Some(p) = &e.probability {
            out.push(Triple::new(x.clone(), self.term("probability"), decimal(p)));
        }
        out.push(Triple::new(
            x.clone(),
            self.term("atTime"),
            Literal::typed(e.time.to_string(), xsd::date_time()),
        ));
        out.push(Triple::new(x.clone(), self.term("source"), string(&e.source)));
        if let Some(alias) = &e.alias {
            out.push(Triple::new(x.clone(), self.term("componentAlias"), string(alias)));
        }
        self.emit_token(&x, &e.token, out);
        self.emit_payload(&x, &e.payload, out);
    }

    fn emit_payload(&self, x: &Iri, payload: &ComponentPayload, out: &mut Vec<Triple>) {
        let v = |l: &str| self.term(l);
        let node = |kind: &str, class: &str, link: &str, n: usize, out: &mut Vec<Triple>| {
            let iri = x.join(&format!("/{kind}/{n}"));
            out.push(Triple::new(x.clone(), v(link), iri.clone()));
            out.push(Triple::new(iri.clone(), rdf::type_(), v(class)));
            iri
        };
        match payload {
            ComponentPayload::AliasMatcher { freebase_date } => out.push(Triple::new(
                x.clone(),
                v("freebaseDate"),
                Literal::typed(freebase_date.to_string(), xsd::date()),
            )),
            ComponentPayload::Cmc { patterns } => {
                for (n, m) in patterns.iter().enumerate() {
                    let p = node("morph", "MorphologicalPatternScoreTriple", "morphologicalPattern", n, out);
                    out.push(Triple::new(p.clone(), v("morphologicalPatternName"), string(&m.name)));
                    out.push(Triple::new(p.clone(), v("morphologicalPatternValue"), string(&m.value)));
                    out.push(Triple::new(p, v("morphologicalPatternScore"), decimal(&m.score)));
                }
            }
            ComponentPayload::Cpl { patterns } => {
                for (n, po) in patterns.iter().enumerate() {
                    let p = node("pattern", "PatternNbOfOccurrencesPair", "patternOccurrences", n, out);
                    out.push(Triple::new(p.clone(), v("textualPattern"), string(&po.pattern)));
                    out.push(Triple::new(
                        p,
                        v("nbOfOccurrences"),
                        Literal::typed(po.occurrences.to_string(), xsd::non_negative_integer()),
                    ));
                }
            }
            ComponentPayload::KbManipulation { old_bug } => {
                out.push(Triple::new(x.clone(), v("oldBug"), string(old_bug)))
            }
            ComponentPayload::LatLong { locations } => {
                for (n, l) in locations.iter().enumerate() {
                    let p = node("location", "NameLatLongTriple", "location", n, out);
                    out.push(Triple::new(p.clone(), v("name"), english(&l.name)));
                    out.push(Triple::new(p.clone(), v("latitudeValue"), decimal(&l.latitude)));
                    out.push(Triple::new(p, v("longitudeValue"), decimal(&l.longitude)));
                }
            }
            ComponentPayload::Le => {}
            ComponentPayload::Mbl(m) => {
                let fields = [
                    ("promotedEntity", Some(&m.promoted_entity)),
                    ("promotedEntityCategory", Some(&m.promoted_entity_category)),
                    ("promotedRelation", m.promoted_relation.as_ref()),
                    ("promotedValue", m.promoted_value.as_ref()),
                    ("promotedValueCategory", m.promoted_value_category.as_ref()),
                ];
                for (p, val) in fields {
                    if let Some(val) = val {
                        out.push(Triple::new(x.clone(), v(p), string(val)));
                    }
                }
            }
            ComponentPayload::Oe { pairs } => {
                for (n, tu) in pairs.iter().enumerate() {
                    let p = node("textUrl", "TextUrlPair", "textUrl", n, out);
                    out.push(Triple::new(p.clone(), v("text"), english(&tu.text)));
                    out.push(Triple::new(p, v("url"), Literal::typed(tu.url.as_str(), xsd::any_uri())));
                }
            }
            ComponentPayload::OntologyModifier { modification, kind } => {
                out.push(Triple::new(x.clone(), v("ontologyModification"), string(modification)));
                out.push(Triple::new(x.clone(), v("modificationKind"), string(kind.as_str())));
            }
            ComponentPayload::Pra { paths } => {
                for (n, path) in paths.iter().enumerate() {
                    let p = node("path", "Path", "relationPath", n, out);
                    out.push(Triple::new(p.clone(), v("direction"), v(path.direction.as_str())));
                    out.push(Triple::new(p.clone(), v("score"), decimal(&path.score)));
                    let cells: Vec<Iri> = (0..path.relations.len())
                        .map(|m| p.join(&format!("/list/{m}")))
                        .collect();
                    let head: Term = cells.first().cloned().map_or(rdf::nil().into(), Term::Iri);
                    out.push(Triple::new(p.clone(), v("listOfRelations"), head));
                    for (m, rel) in path.relations.iter().enumerate() {
                        out.push(Triple::new(cells[m].clone(), rdf::first(), string(rel)));
                        let rest: Term = cells.get(m + 1).cloned().map_or(rdf::nil().into(), Term::Iri);
                        out.push(Triple::new(cells[m].clone(), rdf::rest(), rest));
                    }
                }
            }
            ComponentPayload::Rl { rule_scores: rs } => {
                let t = x.join("/ruleScores");
                out.push(Triple::new(x.clone(), v("ruleScores"), t.clone()));
                out.push(Triple::new(t.clone(), rdf::type_(), v("RuleScoresTuple")));
                let rule = x.join("/rule");
                out.push(Triple::new(t.clone(), v("rule"), rule.clone()));
                out.push(Triple::new(t.clone(), v("accuracy"), decimal(&rs.accuracy)));
                for (p, n) in [
                    ("nbCorrect", rs.nb_correct),
                    ("nbIncorrect", rs.nb_incorrect),
                    ("nbUnknown", rs.nb_unknown),
                ] {
                    out.push(Triple::new(
                        t.clone(),
                        v(p),
                        Literal::typed(n.to_string(), xsd::non_negative_integer()),
                    ));
                }
                out.push(Triple::new(rule.clone(), rdf::type_(), v("Rule")));
                for var in &rs.rule.variables {
                    out.push(Triple::new(rule.clone(), v("variable"), string(&var.variable)));
                    out.push(Triple::new(rule.clone(), v("valueOfVariable"), string(&var.value)));
                }
                for (n, pr) in rs.rule.predicates.iter().enumerate() {
                    let p = rule.join(&format!("/predicate/{n}"));
                    out.push(Triple::new(rule.clone(), v("predicate"), p.clone()));
                    out.push(Triple::new(p.clone(), rdf::type_(), v("Predicate")));
                    out.push(Triple::new(p.clone(), v("predicateName"), string(&pr.name)));
                    out.push(Triple::new(p.clone(), v("firstVariable"), string(&pr.first_variable)));
                    out.push(Triple::new(p, v("secondVariable"), string(&pr.second_variable)));
                }
            }
            ComponentPayload::Seal { url } => out.push(Triple::new(
                x.clone(),
                v("url"),
                Literal::typed(url.as_str(), xsd::any_uri()),
            )),
            ComponentPayload::Semparse { sentence } => {
                out.push(Triple::new(x.clone(), v("sentence"), string(sentence)))
            }
            ComponentPayload::SpreadsheetEdits(s) => {
                for (p, val) in [
                    ("user", &s.user),
                    ("entity", &s.entity),
                    ("relation", &s.relation),
                    ("value", &s.value),
                    ("action", &s.action),
                    ("file", &s.file),
                ] {
                    out.push(Triple::new(x.clone(), v(p), string(val)));
                }
            }
        }
    }
}

fn string(s: &str) -> Literal {
    Literal::string(s)
}

fn english(s: &str) -> Literal {
    Literal::lang(s, "en").expect("en is a valid language tag")
}

fn integer(n: u64) -> Literal {
    Literal::typed(n.to_string(), xsd::integer())
}

fn decimal(d: &Decimal) -> Literal {
    Literal::typed(d.as_str(), xsd::decimal())
}
