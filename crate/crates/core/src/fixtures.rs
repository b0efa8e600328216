//! Seeded synthetic NELL dumps for tests and benchmarks.
//!
//! Every belief row has its own entity, so base statements never repeat.
//! Component records cycle through all fourteen components.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::candidate_source::{
    render_candidate_source, render_source, ComponentExecution, ComponentId, ComponentPayload, Direction, GeoLocation,
    HornRule, MblPayload, ModificationKind, MorphPattern, PatternOcc, RelationPath, RulePredicate, RuleScores,
    RuleVariable, SpreadsheetEdit, TextUrl, Token,
};
use crate::ingest::{BeliefKind, Dialect};
use crate::lexical::{Date, Decimal, Timestamp};

pub const ONTOLOGY_FILE: &str = "ontology.tsv";
pub const PROMOTED_FILE: &str = "promoted.tsv";
pub const CANDIDATES_FILE: &str = "candidates.tsv";

pub const BELIEF_HEADER: &str = "Entity\tRelation\tValue\tIteration of Promotion\tProbability\tSource\t\
Entity literalStrings\tValue literalStrings\tBest Entity literalString\tBest Value literalString\t\
Categories for Entity\tCategories for Value\tCandidate Source";

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureConfig {
    pub beliefs: usize,
    pub seed: u64,
    /// Share of promoted rows given a probability below the promotion
    /// threshold.
    pub low_confidence: f64,
}

impl FixtureConfig {
    pub fn new(beliefs: usize, seed: u64) -> Self {
        FixtureConfig {
            beliefs,
            seed,
            low_confidence: 0.02,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BeliefFileSummary {
    pub rows: u64,
    pub records: u64,
    pub low_confidence: u64,
    pub records_by_component: [u64; 14],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixturePaths {
    pub ontology: PathBuf,
    pub promoted: PathBuf,
    pub candidates: PathBuf,
}

struct Relation {
    name: &'static str,
    domain: &'static str,
    range: &'static str,
}

const CATEGORIES: [(&str, &str); 9] = [
    ("location", "everypromotedthing"),
    ("city", "location"),
    ("country", "location"),
    ("person", "everypromotedthing"),
    ("athlete", "person"),
    ("sportsteam", "organization"),
    ("organization", "everypromotedthing"),
    ("company", "organization"),
    ("product", "everypromotedthing"),
];

const RELATIONS: [Relation; 6] = [
    Relation {
        name: "generalizations",
        domain: "everypromotedthing",
        range: "everypromotedthing",
    },
    Relation {
        name: "citylocatedincountry",
        domain: "city",
        range: "country",
    },
    Relation {
        name: "athleteplaysforteam",
        domain: "athlete",
        range: "sportsteam",
    },
    Relation {
        name: "companyproduces",
        domain: "company",
        range: "product",
    },
    Relation {
        name: "citypopulation",
        domain: "city",
        range: "xsd:integer",
    },
    Relation {
        name: "personnickname",
        domain: "person",
        range: "",
    },
];

/// The ontology file: every category and relation, using all sixteen
/// predicates.
pub fn ontology_tsv() -> String {
    let mut out = String::from("Entity\tRelation\tValue\n");
    let mut row = |s: &str, p: &str, o: &str| {
        out.push_str(s);
        out.push('\t');
        out.push_str(p);
        out.push('\t');
        out.push_str(o);
        out.push('\n');
    };
    for (c, parent) in CATEGORIES {
        let s = format!("concept:{c}");
        row(&s, "memberofsets", "rtwcategory");
        row(&s, "generalizations", &format!("concept:{parent}"));
        row(&s, "description", &format!("Things that are a {c}"));
        row(&s, "visible", "true");
        row(&s, "populate", "true");
        row(&s, "instancetype", "concept:everypromotedthing");
    }
    row("concept:everypromotedthing", "memberofsets", "rtwcategory");
    row("concept:everypromotedthing", "description", "Root of the category hierarchy");
    row("concept:generalizations", "memberofsets", "rtwrelation");
    row("concept:city", "mutexpredicates", "concept:country");
    row("concept:person", "mutexpredicates", "concept:organization");
    for r in &RELATIONS[1..] {
        let s = format!("concept:{}", r.name);
        row(&s, "memberofsets", "rtwrelation");
        row(&s, "domain", &format!("concept:{}", r.domain));
        if r.range.starts_with("xsd:") {
            row(&s, "range", r.range);
        } else if !r.range.is_empty() {
            row(&s, "range", &format!("concept:{}", r.range));
        }
        row(&s, "antireflexive", "true");
        row(&s, "antisymmetric", "false");
        row(&s, "humanformat", &format!("arg1 {} arg2", r.name));
        row(&s, "domainwithinrange", "false");
        row(&s, "rangewithindomain", "false");
        row(&s, "visible", "true");
        row(&s, "populate", "true");
    }
    row("concept:citylocatedincountry", "nrofvalues", "1");
    row("concept:athleteplaysforteam", "nrofvalues", "any");
    row("concept:athleteplaysforteam", "inverse", "concept:teamhasathlete");
    row("concept:citylocatedincountry", "mutexpredicates", "concept:athleteplaysforteam");
    row("concept:teamhasathlete", "memberofsets", "rtwrelation");
    row("concept:teamhasathlete", "domain", "concept:sportsteam");
    row("concept:teamhasathlete", "range", "concept:athlete");
    out
}

fn seconds_since_epoch(rng: &mut ChaCha8Rng) -> Timestamp {
    let start = DateTime::from_timestamp(1_262_304_000, 0).expect("valid epoch");
    Timestamp(start + Duration::seconds(rng.gen_range(0..300_000_000)))
}

fn decimal(rng: &mut ChaCha8Rng, lo: i64, hi: i64, places: u32) -> Decimal {
    let scale = 10i64.pow(places);
    let v = rng.gen_range(lo * scale..=hi * scale);
    let sign = if v < 0 { "-" } else { "" };
    let a = v.unsigned_abs();
    let s = scale as u64;
    format!("{sign}{}.{:0width$}", a / s, a % s, width = places as usize)
        .parse()
        .expect("formatted decimal")
}

fn probability(rng: &mut ChaCha8Rng, lo_thousandths: u32, hi_thousandths: u32) -> Decimal {
    let v = rng.gen_range(lo_thousandths..=hi_thousandths);
    format!("{}.{:03}", v / 1000, v % 1000).parse().expect("formatted decimal")
}

const NAMES: [&str; 8] = ["Paris", "São Paulo", "Zürich", "Kraków", "Reykjavík", "Québec", "Malmö", "Łódź"];

fn payload(c: ComponentId, rng: &mut ChaCha8Rng, i: usize, entity: &str, value: &str) -> ComponentPayload {
    match c {
        ComponentId::AliasMatcher => ComponentPayload::AliasMatcher {
            freebase_date: Date(
                NaiveDate::from_ymd_opt(2009 + (i % 6) as i32, 1 + (i % 12) as u32, 1 + (i % 28) as u32)
                    .expect("valid date"),
            ),
        },
        ComponentId::Cmc => ComponentPayload::Cmc {
            patterns: (0..rng.gen_range(1..=3))
                .map(|k| MorphPattern {
                    name: ["SUFFIX", "PREFIX", "PosTag"][k % 3].to_owned(),
                    value: format!("{}={}", ["ity", "new", "NNP"][k % 3], k),
                    score: decimal(rng, -3, 3, 4),
                })
                .collect(),
        },
        ComponentId::Cpl => ComponentPayload::Cpl {
            patterns: vec![
                PatternOcc {
                    pattern: "arg1 is the capital of arg2".to_owned(),
                    occurrences: rng.gen_range(1..50),
                },
                PatternOcc {
                    pattern: "arg1 is a city located in arg2".to_owned(),
                    occurrences: rng.gen_range(1..50),
                },
            ],
        },
        ComponentId::KbManipulation => ComponentPayload::KbManipulation {
            old_bug: format!("Old bug fix #{i}: \"{entity}\" merged"),
        },
        ComponentId::LatLong => ComponentPayload::LatLong {
            locations: (0..rng.gen_range(1..=2))
                .map(|k| GeoLocation {
                    name: format!("{}, {k}", NAMES[(i + k) % NAMES.len()]),
                    latitude: decimal(rng, -89, 89, 4),
                    longitude: decimal(rng, -179, 179, 4),
                })
                .collect(),
        },
        ComponentId::Le => ComponentPayload::Le,
        ComponentId::Mbl => ComponentPayload::Mbl(MblPayload {
            promoted_entity: entity.to_owned(),
            promoted_entity_category: "concept:everypromotedthing".to_owned(),
            promoted_relation: i.is_multiple_of(2).then(|| "concept:generalizations".to_owned()),
            promoted_value: i.is_multiple_of(2).then(|| value.to_owned()),
            promoted_value_category: i.is_multiple_of(4).then(|| "concept:location".to_owned()),
        }),
        ComponentId::Oe => ComponentPayload::Oe {
            pairs: (0..rng.gen_range(1..=2))
                .map(|k| TextUrl {
                    text: format!("{entity} is listed, with \"quotes\" and a tab\there ({k})"),
                    url: format!("http://example.org/page?id={i}&k={k}"),
                })
                .collect(),
        },
        ComponentId::OntologyModifier => ComponentPayload::OntologyModifier {
            modification: format!("added {value} to {entity}"),
            kind: if i.is_multiple_of(2) {
                ModificationKind::Category
            } else {
                ModificationKind::Relation
            },
        },
        ComponentId::Pra => ComponentPayload::Pra {
            paths: (0..rng.gen_range(1..=2))
                .map(|k| RelationPath {
                    direction: if k % 2 == 0 {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    },
                    score: decimal(rng, 0, 1, 5),
                    relations: vec!["concept:citylocatedinstate".to_owned(), "concept:statelocatedincountry".to_owned()],
                })
                .collect(),
        },
        ComponentId::Rl => ComponentPayload::Rl {
            rule_scores: RuleScores {
                rule: HornRule {
                    variables: vec![
                        RuleVariable {
                            variable: "x".to_owned(),
                            value: entity.to_owned(),
                        },
                        RuleVariable {
                            variable: "y".to_owned(),
                            value: value.to_owned(),
                        },
                    ]
                    .into_iter()
                    .chain((!i.is_multiple_of(10)).then(|| RuleVariable {
                        variable: "z".to_owned(),
                        value: format!("concept:stateorprovince:s{i}"),
                    }))
                    .collect(),
                    predicates: vec![
                        RulePredicate {
                            name: "concept:citylocatedinstate".to_owned(),
                            first_variable: "x".to_owned(),
                            second_variable: "z".to_owned(),
                        },
                        RulePredicate {
                            name: "concept:statelocatedincountry".to_owned(),
                            first_variable: "z".to_owned(),
                            second_variable: "y".to_owned(),
                        },
                    ],
                },
                accuracy: probability(rng, 0, 1000),
                nb_correct: rng.gen_range(0..100),
                nb_incorrect: rng.gen_range(0..20),
                nb_unknown: rng.gen_range(0..50),
            },
        },
        ComponentId::Seal => ComponentPayload::Seal {
            url: format!("http://example.org/list?q={i},{}", rng.gen_range(0..1000)),
        },
        ComponentId::Semparse => ComponentPayload::Semparse {
            sentence: format!("{entity} was mentioned here.\nA second line, with \"quotes\" and ünïcode."),
        },
        ComponentId::SpreadsheetEdits => ComponentPayload::SpreadsheetEdits(SpreadsheetEdit {
            user: format!("editor{}", i % 7),
            entity: entity.to_owned(),
            relation: "concept:generalizations".to_owned(),
            value: value.to_owned(),
            action: if i.is_multiple_of(3) { "-" } else { "+" }.to_owned(),
            file: format!("edits_{}.csv", i % 5),
        }),
    }
}

/// Generates belief rows for one dump file.
pub struct BeliefGenerator {
    rng: ChaCha8Rng,
    kind: BeliefKind,
    low_confidence: f64,
    next: usize,
    cursor: usize,
}

impl BeliefGenerator {
    pub fn new(kind: BeliefKind, seed: u64, low_confidence: f64) -> Self {
        let stream = match kind {
            BeliefKind::Promoted => 1,
            BeliefKind::Candidate => 2,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        BeliefGenerator {
            rng,
            kind,
            low_confidence,
            next: 0,
            cursor: 0,
        }
    }

    pub fn next_row(&mut self, summary: &mut BeliefFileSummary) -> String {
        let i = self.next;
        self.next += 1;
        let rng = &mut self.rng;
        let relation = &RELATIONS[i % RELATIONS.len()];
        let tag = match self.kind {
            BeliefKind::Promoted => 'p',
            BeliefKind::Candidate => 'c',
        };
        let entity_cat = if relation.name == "generalizations" {
            CATEGORIES[i % CATEGORIES.len()].0
        } else {
            relation.domain
        };
        let entity = format!("concept:{entity_cat}:{tag}{i}_{}", NAMES[i % NAMES.len()].to_lowercase().replace(' ', "_"));
        let (value, value_cat) = match relation.range {
            "everypromotedthing" => (format!("concept:{entity_cat}"), None),
            "xsd:integer" => (rng.gen_range(1_000..10_000_000).to_string(), None),
            "" => (format!("\"Nick {i}, the \"\"{}\"\"\"", NAMES[i % NAMES.len()]), None),
            r => (format!("concept:{r}:{tag}v{i}"), Some(r)),
        };

        let n_records = rng.gen_range(1..=3);
        let iteration = rng.gen_range(100..1100u64);
        let mut execs = Vec::with_capacity(n_records);
        for k in 0..n_records {
            let c = ComponentId::ALL[self.cursor % 14];
            summary.records_by_component[self.cursor % 14] += 1;
            self.cursor += 1;
            let token = if c == ComponentId::LatLong {
                Token::Geo {
                    entity: entity.clone(),
                    latitude: decimal(rng, -89, 89, 2),
                    longitude: decimal(rng, -179, 179, 2),
                }
            } else if relation.name == "generalizations" {
                Token::Generalization {
                    entity: entity.clone(),
                    generalization_value: value.clone(),
                }
            } else {
                Token::Relation {
                    entity: entity.clone(),
                    relation_value: value.clone(),
                }
            };
            let payload = payload(c, rng, i + k, &entity, &value);
            let alias = match (c, i % 11) {
                (ComponentId::Cpl, 0) => Some("CPL1".to_owned()),
                (ComponentId::Mbl, 3) => Some("Knowledge Integrator".to_owned()),
                _ => None,
            };
            execs.push(ComponentExecution {
                component: c,
                alias,
                iteration: Some(iteration.saturating_sub(k as u64 * 7)),
                probability: Some(probability(rng, 500, 1000)),
                time: seconds_since_epoch(rng),
                token,
                source: render_source(&payload),
                payload,
            });
        }
        summary.rows += 1;
        summary.records += n_records as u64;

        let (iter_field, prob_field, field13) = match self.kind {
            BeliefKind::Promoted => {
                let low = rng.gen_bool(self.low_confidence);
                summary.low_confidence += u64::from(low);
                let p = if low {
                    probability(rng, 500, 899)
                } else {
                    probability(rng, 900, 1000)
                };
                if i % 5 == 4 {
                    for e in &mut execs {
                        e.iteration = None;
                        e.probability = None;
                    }
                }
                (iteration.to_string(), p.to_string(), render_candidate_source(&execs, true))
            }
            BeliefKind::Candidate => {
                let its: Vec<String> = execs.iter().map(|e| e.iteration.unwrap_or_default().to_string()).collect();
                let ps: Vec<String> = execs
                    .iter()
                    .map(|e| e.probability.as_ref().map(Decimal::to_string).unwrap_or_default())
                    .collect();
                (
                    format!("[{}]", its.join(",")),
                    format!("[{}]", ps.join(",")),
                    render_candidate_source(&execs, false),
                )
            }
        };
        let summary_field = execs
            .iter()
            .map(|e| format!("{}-Iter:{}", e.component, e.iteration.unwrap_or(iteration)))
            .collect::<Vec<_>>()
            .join(" ");

        let d = Dialect::FIXTURE;
        let place = NAMES[i % NAMES.len()];
        let entity_labels = vec![
            format!("{place} {i}"),
            format!("{place}, \"the {i}\""),
            format!("{}-{i}", place.to_uppercase()),
        ];
        let value_labels: Vec<String> = if value_cat.is_some() {
            vec![format!("value {i}"), format!("Valeur n°{i}")]
        } else {
            Vec::new()
        };
        let best_value = value_labels.first().cloned().unwrap_or_default();
        let entity_categories = format!("concept:{entity_cat} concept:everypromotedthing");
        let value_categories = value_cat.map(|c| format!("concept:{c}")).unwrap_or_default();

        let fields = [
            entity.as_str(),
            &format!("concept:{}", relation.name),
            &value,
            &iter_field,
            &prob_field,
            &summary_field,
            &d.join_labels(&entity_labels),
            &d.join_labels(&value_labels),
            &entity_labels[0],
            &best_value,
            &entity_categories,
            &value_categories,
            &field13,
        ];
        fields.join("\t")
    }
}

/// Streams `n` belief rows, preceded by the header line.
pub fn write_beliefs<W: Write>(
    out: W,
    kind: BeliefKind,
    n: usize,
    seed: u64,
    low_confidence: f64,
) -> io::Result<BeliefFileSummary> {
    let mut out = BufWriter::with_capacity(1 << 20, out);
    let mut generator = BeliefGenerator::new(kind, seed, low_confidence);
    let mut summary = BeliefFileSummary::default();
    writeln!(out, "{BELIEF_HEADER}")?;
    for _ in 0..n {
        let row = generator.next_row(&mut summary);
        out.write_all(row.as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(summary)
}

/// Writes the ontology, promoted and candidate files into `dir`.
pub fn generate(dir: &Path, cfg: &FixtureConfig) -> io::Result<FixturePaths> {
    std::fs::create_dir_all(dir)?;
    let paths = FixturePaths {
        ontology: dir.join(ONTOLOGY_FILE),
        promoted: dir.join(PROMOTED_FILE),
        candidates: dir.join(CANDIDATES_FILE),
    };
    std::fs::write(&paths.ontology, ontology_tsv())?;
    write_beliefs(File::create(&paths.promoted)?, BeliefKind::Promoted, cfg.beliefs, cfg.seed, cfg.low_confidence)?;
    write_beliefs(File::create(&paths.candidates)?, BeliefKind::Candidate, cfg.beliefs, cfg.seed, 0.0)?;
    Ok(paths)
}
