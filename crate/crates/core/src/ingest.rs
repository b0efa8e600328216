//! Line-oriented readers for the NELL ontology and belief dumps.
//!
//! Intra-field list syntax is not standardised across dumps, so it is
//! isolated in [`Dialect`]. [`Dialect::FIXTURE`] is the syntax produced by
//! the fixture generator:
//!
//! | field                  | separator | notes                               |
//! |------------------------|-----------|-------------------------------------|
//! | 4, 5 (candidate lists) | `,`       | surrounding `[...]` optional        |
//! | 7, 8 (labels)          | `,`       | `"..."` quoting, `""` for a quote   |
//! | 11, 12 (categories)    | ` `       | empty pieces ignored                |

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use thiserror::Error;

use crate::candidate_source::{count_records, SourceError};
use crate::lexical::Decimal;

pub const BELIEF_FIELDS: usize = 13;
pub const ONTOLOGY_FIELDS: usize = 3;

/// Promoted beliefs are expected to score at least this much.
pub const PROMOTION_THRESHOLD: &str = "0.9";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeliefKind {
    Promoted,
    Candidate,
}

impl BeliefKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BeliefKind::Promoted => "promoted",
            BeliefKind::Candidate => "candidates",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("expected {expected} tab-separated fields, found {found}")]
    WrongFieldCount { expected: usize, found: usize },
    #[error("unknown ontology predicate {0:?}")]
    UnknownPredicate(String),
    #[error("iteration {0:?} is not a non-negative integer")]
    NonIntegerIteration(String),
    #[error("probability {0:?} is not a decimal in [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("{records} component records, {iterations} iterations, {probabilities} probabilities")]
    IterationProbabilityArityMismatch {
        records: usize,
        iterations: usize,
        probabilities: usize,
    },
    #[error("field {field}: {message}")]
    MalformedList { field: usize, message: String },
    #[error("candidate source: {0}")]
    CandidateSource(#[from] SourceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OntologyPredicate {
    Antireflexive,
    Antisymmetric,
    Description,
    Domain,
    DomainWithinRange,
    Generalizations,
    HumanFormat,
    InstanceType,
    Inverse,
    MemberOfSets,
    MutexPredicates,
    NrOfValues,
    Populate,
    Range,
    RangeWithinDomain,
    Visible,
}

impl OntologyPredicate {
    pub const ALL: [OntologyPredicate; 16] = [
        OntologyPredicate::Antireflexive,
        OntologyPredicate::Antisymmetric,
        OntologyPredicate::Description,
        OntologyPredicate::Domain,
        OntologyPredicate::DomainWithinRange,
        OntologyPredicate::Generalizations,
        OntologyPredicate::HumanFormat,
        OntologyPredicate::InstanceType,
        OntologyPredicate::Inverse,
        OntologyPredicate::MemberOfSets,
        OntologyPredicate::MutexPredicates,
        OntologyPredicate::NrOfValues,
        OntologyPredicate::Populate,
        OntologyPredicate::Range,
        OntologyPredicate::RangeWithinDomain,
        OntologyPredicate::Visible,
    ];

    /// The token as it appears in the dump.
    pub fn token(self) -> &'static str {
        match self {
            OntologyPredicate::Antireflexive => "antireflexive",
            OntologyPredicate::Antisymmetric => "antisymmetric",
            OntologyPredicate::Description => "description",
            OntologyPredicate::Domain => "domain",
            OntologyPredicate::DomainWithinRange => "domainwithinrange",
            OntologyPredicate::Generalizations => "generalizations",
            OntologyPredicate::HumanFormat => "humanformat",
            OntologyPredicate::InstanceType => "instancetype",
            OntologyPredicate::Inverse => "inverse",
            OntologyPredicate::MemberOfSets => "memberofsets",
            OntologyPredicate::MutexPredicates => "mutexpredicates",
            OntologyPredicate::NrOfValues => "nrofvalues",
            OntologyPredicate::Populate => "populate",
            OntologyPredicate::Range => "range",
            OntologyPredicate::RangeWithinDomain => "rangewithindomain",
            OntologyPredicate::Visible => "visible",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        let lower = token.trim().to_ascii_lowercase();
        OntologyPredicate::ALL.into_iter().find(|p| p.token() == lower)
    }
}

impl fmt::Display for OntologyPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyAssertion {
    pub subject: String,
    pub predicate: OntologyPredicate,
    pub object: String,
}

/// Iteration and probability columns, validated per kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scores {
    Promoted { iteration: u64, probability: Decimal },
    /// One entry per component record in field 13.
    Candidate {
        iterations: Vec<u64>,
        probabilities: Vec<Decimal>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NellBelief {
    pub entity: String,
    pub relation: String,
    pub value: String,
    pub scores: Scores,
    /// Field 6, kept verbatim and never interpreted.
    pub source_summary: String,
    pub entity_labels: Vec<String>,
    pub value_labels: Vec<String>,
    pub entity_best_label: Option<String>,
    pub value_best_label: Option<String>,
    pub entity_categories: Vec<String>,
    pub value_categories: Vec<String>,
    pub candidate_source: String,
}

impl NellBelief {
    pub fn kind(&self) -> BeliefKind {
        match self.scores {
            Scores::Promoted { .. } => BeliefKind::Promoted,
            Scores::Candidate { .. } => BeliefKind::Candidate,
        }
    }

    /// Promoted beliefs scoring under [`PROMOTION_THRESHOLD`].
    pub fn below_promotion_threshold(&self) -> bool {
        match &self.scores {
            Scores::Promoted { probability, .. } => {
                let threshold: Decimal = PROMOTION_THRESHOLD.parse().expect("threshold is a decimal");
                probability.numeric_cmp(&threshold).is_lt()
            }
            Scores::Candidate { .. } => false,
        }
    }
}

/// Intra-field list syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dialect {
    pub score_separator: char,
    pub label_separator: char,
    pub label_quote: char,
    pub category_separator: char,
}

impl Dialect {
    pub const FIXTURE: Dialect = Dialect {
        score_separator: ',',
        label_separator: ',',
        label_quote: '"',
        category_separator: ' ',
    };

    pub fn split_labels(&self, field: &str) -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        if field.is_empty() {
            return Ok(out);
        }
        let mut chars = field.chars().peekable();
        loop {
            let mut label = String::new();
            if chars.peek() == Some(&self.label_quote) {
                chars.next();
                loop {
                    match chars.next() {
                        None => return Err("unterminated quoted label".into()),
                        Some(c) if c == self.label_quote => {
                            if chars.peek() == Some(&self.label_quote) {
                                chars.next();
                                label.push(c);
                            } else {
                                break;
                            }
                        }
                        Some(c) => label.push(c),
                    }
                }
                match chars.next() {
                    None => {
                        out.push(label);
                        return Ok(out);
                    }
                    Some(c) if c == self.label_separator => {}
                    Some(c) => return Err(format!("unexpected {c:?} after quoted label")),
                }
            } else {
                loop {
                    match chars.next() {
                        None => {
                            out.push(label);
                            return Ok(out);
                        }
                        Some(c) if c == self.label_separator => break,
                        Some(c) => label.push(c),
                    }
                }
            }
            out.push(label);
        }
    }

    pub fn join_labels(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for (i, l) in labels.iter().enumerate() {
            if i > 0 {
                out.push(self.label_separator);
            }
            let quote = l.is_empty() || l.contains([self.label_separator, self.label_quote]);
            if quote {
                out.push(self.label_quote);
                for c in l.chars() {
                    if c == self.label_quote {
                        out.push(c);
                    }
                    out.push(c);
                }
                out.push(self.label_quote);
            } else {
                out.push_str(l);
            }
        }
        out
    }

    pub fn split_categories(&self, field: &str) -> Vec<String> {
        field
            .split(self.category_separator)
            .filter(|c| !c.is_empty())
            .map(str::to_owned)
            .collect()
    }

    fn split_scores<'a>(&self, field: &'a str) -> Vec<&'a str> {
        let t = field.trim();
        let t = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() {
            return Vec::new();
        }
        t.split(self.score_separator).map(str::trim).collect()
    }
}

/// Splits a line on tabs. `split_fields(l).join("\t") == l` always holds.
pub fn split_fields(line: &str) -> Vec<&str> {
    line.split('\t').collect()
}

pub fn is_header(line: &str) -> bool {
    line.starts_with("Entity\tRelation")
}

pub fn parse_ontology_line(line: &str) -> Result<OntologyAssertion, IngestError> {
    let fields = split_fields(line);
    if fields.len() != ONTOLOGY_FIELDS {
        return Err(IngestError::WrongFieldCount {
            expected: ONTOLOGY_FIELDS,
            found: fields.len(),
        });
    }
    let predicate =
        OntologyPredicate::from_token(fields[1]).ok_or_else(|| IngestError::UnknownPredicate(fields[1].to_owned()))?;
    Ok(OntologyAssertion {
        subject: fields[0].to_owned(),
        predicate,
        object: fields[2].to_owned(),
    })
}

fn iteration(s: &str) -> Result<u64, IngestError> {
    s.trim()
        .parse()
        .map_err(|_| IngestError::NonIntegerIteration(s.to_owned()))
}

fn probability(s: &str) -> Result<Decimal, IngestError> {
    s.parse::<Decimal>()
        .ok()
        .filter(Decimal::is_probability)
        .ok_or_else(|| IngestError::ProbabilityOutOfRange(s.to_owned()))
}

fn optional(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_owned())
}

pub fn parse_belief_line(line: &str, kind: BeliefKind) -> Result<NellBelief, IngestError> {
    parse_belief_line_with(line, kind, &Dialect::FIXTURE)
}

pub fn parse_belief_line_with(line: &str, kind: BeliefKind, dialect: &Dialect) -> Result<NellBelief, IngestError> {
    let f = split_fields(line);
    if f.len() != BELIEF_FIELDS {
        return Err(IngestError::WrongFieldCount {
            expected: BELIEF_FIELDS,
            found: f.len(),
        });
    }
    let scores = match kind {
        BeliefKind::Promoted => Scores::Promoted {
            iteration: iteration(f[3])?,
            probability: probability(f[4])?,
        },
        BeliefKind::Candidate => {
            let iterations = dialect
                .split_scores(f[3])
                .into_iter()
                .map(iteration)
                .collect::<Result<Vec<_>, _>>()?;
            let probabilities = dialect
                .split_scores(f[4])
                .into_iter()
                .map(probability)
                .collect::<Result<Vec<_>, _>>()?;
            let records = count_records(f[12])?;
            if iterations.len() != records || probabilities.len() != records {
                return Err(IngestError::IterationProbabilityArityMismatch {
                    records,
                    iterations: iterations.len(),
                    probabilities: probabilities.len(),
                });
            }
            Scores::Candidate {
                iterations,
                probabilities,
            }
        }
    };
    let labels = |field: usize| {
        dialect
            .split_labels(f[field - 1])
            .map_err(|message| IngestError::MalformedList { field, message })
    };
    Ok(NellBelief {
        entity: f[0].to_owned(),
        relation: f[1].to_owned(),
        value: f[2].to_owned(),
        scores,
        source_summary: f[5].to_owned(),
        entity_labels: labels(7)?,
        value_labels: labels(8)?,
        entity_best_label: optional(f[8]),
        value_best_label: optional(f[9]),
        entity_categories: dialect.split_categories(f[10]),
        value_categories: dialect.split_categories(f[11]),
        candidate_source: f[12].to_owned(),
    })
}

/// Opens a dump, transparently decompressing gzip (detected by magic bytes).
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let mut file = BufReader::with_capacity(1 << 16, File::open(path)?);
    let gzip = file.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    Ok(if gzip {
        Box::new(BufReader::with_capacity(1 << 16, MultiGzDecoder::new(file)))
    } else {
        Box::new(file)
    })
}

/// Reads from any source, decompressing gzip when the magic bytes match.
pub fn wrap_reader<R: Read + Send + 'static>(r: R) -> io::Result<Box<dyn BufRead + Send>> {
    let mut r = BufReader::with_capacity(1 << 16, r);
    let gzip = r.fill_buf()?.starts_with(&[0x1f, 0x8b]);
    Ok(if gzip {
        Box::new(BufReader::with_capacity(1 << 16, MultiGzDecoder::new(r)))
    } else {
        Box::new(r)
    })
}

/// Data lines of a dump with 1-based line numbers. Line endings (LF or
/// CRLF) are stripped; blank and header lines are skipped.
pub struct DataLines<R> {
    reader: R,
    line_no: usize,
    buf: String,
}

impl<R: BufRead> DataLines<R> {
    pub fn new(reader: R) -> Self {
        DataLines {
            reader,
            line_no: 0,
            buf: String::new(),
        }
    }

    /// Reads up to `max` data lines.
    pub fn next_chunk(&mut self, max: usize) -> io::Result<Vec<(usize, String)>> {
        let mut chunk = Vec::with_capacity(max);
        while chunk.len() < max {
            match self.next() {
                Some(r) => chunk.push(r?),
                None => break,
            }
        }
        Ok(chunk)
    }
}

impl<R: BufRead> Iterator for DataLines<R> {
    type Item = io::Result<(usize, String)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
            self.line_no += 1;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() || is_header(line) {
                continue;
            }
            return Some(Ok((self.line_no, line.to_owned())));
        }
    }
}
