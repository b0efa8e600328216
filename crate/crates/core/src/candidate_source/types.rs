use std::fmt;

use crate::lexical::{Date, Decimal, Timestamp};

/// The fourteen NELL components that leave provenance records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentId {
    AliasMatcher,
    Cmc,
    Cpl,
    KbManipulation,
    LatLong,
    Le,
    Mbl,
    Oe,
    OntologyModifier,
    Pra,
    Rl,
    Seal,
    Semparse,
    SpreadsheetEdits,
}

impl ComponentId {
    pub const ALL: [ComponentId; 14] = [
        ComponentId::AliasMatcher,
        ComponentId::Cmc,
        ComponentId::Cpl,
        ComponentId::KbManipulation,
        ComponentId::LatLong,
        ComponentId::Le,
        ComponentId::Mbl,
        ComponentId::Oe,
        ComponentId::OntologyModifier,
        ComponentId::Pra,
        ComponentId::Rl,
        ComponentId::Seal,
        ComponentId::Semparse,
        ComponentId::SpreadsheetEdits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComponentId::AliasMatcher => "AliasMatcher",
            ComponentId::Cmc => "CMC",
            ComponentId::Cpl => "CPL",
            ComponentId::KbManipulation => "KbManipulation",
            ComponentId::LatLong => "LatLong",
            ComponentId::Le => "LE",
            ComponentId::Mbl => "MBL",
            ComponentId::Oe => "OE",
            ComponentId::OntologyModifier => "OntologyModifier",
            ComponentId::Pra => "PRA",
            ComponentId::Rl => "RL",
            ComponentId::Seal => "SEAL",
            ComponentId::Semparse => "Semparse",
            ComponentId::SpreadsheetEdits => "SpreadsheetEdits",
        }
    }

    /// Resolves a record name, folding historical names and MBL aliases
    /// into their component. The second value is the original name when it
    /// differs from the canonical one.
    pub fn resolve(name: &str) -> Option<(ComponentId, Option<String>)> {
        let canonical = ComponentId::ALL.iter().copied().find(|c| c.name() == name);
        if let Some(c) = canonical {
            return Some((c, None));
        }
        let id = match name {
            "CPL1" | "CPL2" => ComponentId::Cpl,
            "CSEAL" => ComponentId::Seal,
            "CML" => ComponentId::Cmc,
            "ErrorBasedIntegrator" | "KnowledgeIntegrator" | "Knowledge Integrator" | "EntityResolverCleanup" => {
                ComponentId::Mbl
            }
            _ => return None,
        };
        Some((id, Some(name.to_owned())))
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The tuple a component execution reasoned about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Relation {
        entity: String,
        relation_value: String,
    },
    Generalization {
        entity: String,
        generalization_value: String,
    },
    Geo {
        entity: String,
        latitude: Decimal,
        longitude: Decimal,
    },
}

impl Token {
    pub fn entity(&self) -> &str {
        match self {
            Token::Relation { entity, .. } | Token::Generalization { entity, .. } | Token::Geo { entity, .. } => entity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphPattern {
    pub name: String,
    pub value: String,
    pub score: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOcc {
    pub pattern: String,
    pub occurrences: u64,
}

/// A location; `name` is emitted as an `@en` literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeoLocation {
    pub name: String,
    pub latitude: Decimal,
    pub longitude: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextUrl {
    pub text: String,
    pub url: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPath {
    pub direction: Direction,
    pub score: Decimal,
    /// Order is significant.
    pub relations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVariable {
    pub variable: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulePredicate {
    pub name: String,
    pub first_variable: String,
    pub second_variable: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HornRule {
    pub variables: Vec<RuleVariable>,
    pub predicates: Vec<RulePredicate>,
}

impl HornRule {
    /// Variables used by a predicate but never bound in `variables`.
    pub fn free_variables(&self) -> Vec<&str> {
        let mut free: Vec<&str> = Vec::new();
        for p in &self.predicates {
            for v in [&p.first_variable, &p.second_variable] {
                let bound = self.variables.iter().any(|b| &b.variable == v);
                if !bound && !free.contains(&v.as_str()) {
                    free.push(v);
                }
            }
        }
        free
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleScores {
    pub rule: HornRule,
    pub accuracy: Decimal,
    pub nb_correct: u64,
    pub nb_incorrect: u64,
    pub nb_unknown: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModificationKind {
    Category,
    Relation,
}

impl ModificationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModificationKind::Category => "category",
            ModificationKind::Relation => "relation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MblPayload {
    pub promoted_entity: String,
    pub promoted_entity_category: String,
    pub promoted_relation: Option<String>,
    pub promoted_value: Option<String>,
    pub promoted_value_category: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadsheetEdit {
    pub user: String,
    pub entity: String,
    pub relation: String,
    pub value: String,
    pub action: String,
    pub file: String,
}

/// Component-specific data decoded from a record's `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentPayload {
    AliasMatcher { freebase_date: Date },
    Cmc { patterns: Vec<MorphPattern> },
    Cpl { patterns: Vec<PatternOcc> },
    KbManipulation { old_bug: String },
    LatLong { locations: Vec<GeoLocation> },
    Le,
    Mbl(MblPayload),
    Oe { pairs: Vec<TextUrl> },
    OntologyModifier { modification: String, kind: ModificationKind },
    Pra { paths: Vec<RelationPath> },
    Rl { rule_scores: RuleScores },
    Seal { url: String },
    Semparse { sentence: String },
    SpreadsheetEdits(SpreadsheetEdit),
}

impl ComponentPayload {
    pub fn component(&self) -> ComponentId {
        match self {
            ComponentPayload::AliasMatcher { .. } => ComponentId::AliasMatcher,
            ComponentPayload::Cmc { .. } => ComponentId::Cmc,
            ComponentPayload::Cpl { .. } => ComponentId::Cpl,
            ComponentPayload::KbManipulation { .. } => ComponentId::KbManipulation,
            ComponentPayload::LatLong { .. } => ComponentId::LatLong,
            ComponentPayload::Le => ComponentId::Le,
            ComponentPayload::Mbl(_) => ComponentId::Mbl,
            ComponentPayload::Oe { .. } => ComponentId::Oe,
            ComponentPayload::OntologyModifier { .. } => ComponentId::OntologyModifier,
            ComponentPayload::Pra { .. } => ComponentId::Pra,
            ComponentPayload::Rl { .. } => ComponentId::Rl,
            ComponentPayload::Seal { .. } => ComponentId::Seal,
            ComponentPayload::Semparse { .. } => ComponentId::Semparse,
            ComponentPayload::SpreadsheetEdits(_) => ComponentId::SpreadsheetEdits,
        }
    }
}

/// One component's activity contributing to a belief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentExecution {
    pub component: ComponentId,
    /// Original record name when it was a historical name or alias.
    pub alias: Option<String>,
    /// Absent only on promoted rows whose record does not state it.
    pub iteration: Option<u64>,
    pub probability: Option<Decimal>,
    pub time: Timestamp,
    pub token: Token,
    /// The record's source text, verbatim.
    pub source: String,
    pub payload: ComponentPayload,
}
