//! Parser for the Candidate Source column (field 13): the list of
//! component records that explain how a belief was produced.
//!
//! Grammar (see `docs/field13-grammar.ebnf`):
//!
//! ```text
//! field13 = "" | "[" [ record { "," record } ] "]"
//! record  = name { "," key "=" value }
//! key     = "iteration" | "prob" | "time" | "token" | "source"
//! ```
//!
//! `name` resolution and `source` decoding are table-driven; see
//! [`ComponentId::resolve`] and the `schema` module.

mod render;
mod schema;
mod types;

use thiserror::Error;

use crate::lexical::{Decimal, Timestamp};

pub use render::{render_candidate_source, render_record, render_source, render_token};
pub use types::*;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SourceError {
    #[error("grammar error at offset {offset}: expected {expected}")]
    Grammar { offset: usize, expected: String },
    #[error("token error at offset {offset}: {source}")]
    Token { offset: usize, source: TokenShapeError },
    #[error("{component} source at offset {offset}: {message}")]
    Payload {
        component: ComponentId,
        offset: usize,
        message: String,
    },
    #[error("{records} component records but {iterations} iterations and {probabilities} probabilities")]
    Arity {
        records: usize,
        iterations: usize,
        probabilities: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("token shape error: {0}")]
pub struct TokenShapeError(pub String);

/// Non-fatal findings while parsing field 13.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceDiagnostic {
    /// The record was skipped.
    UnknownComponent { index: usize, name: String },
    /// An RL rule uses a variable it never binds.
    FreeRuleVariable { index: usize, variable: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedSource {
    pub executions: Vec<ComponentExecution>,
    pub diagnostics: Vec<SourceDiagnostic>,
}

/// A record split out of field 13 before any component-specific decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
struct RawRecord<'a> {
    offset: usize,
    name: &'a str,
    iteration: Option<(u64, usize)>,
    prob: Option<(Decimal, usize)>,
    time: Option<(&'a str, usize)>,
    token: Option<(&'a str, usize)>,
    source: Option<(String, usize)>,
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn fail<T>(&self, expected: &str) -> Result<T, SourceError> {
        Err(SourceError::Grammar {
            offset: self.pos,
            expected: expected.to_owned(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_spaces(&mut self) {
        let trimmed = self.rest().trim_start_matches(' ');
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    /// Byte length of the run of characters satisfying `pred`.
    fn run(&self, pred: impl Fn(char) -> bool) -> usize {
        self.rest().find(|c: char| !pred(c)).unwrap_or(self.rest().len())
    }

    /// If the upcoming text is `key =`, returns the key and its length
    /// including the `=`.
    fn lookahead_key(&self) -> Option<(&'a str, usize)> {
        let rest = self.rest();
        let trimmed = rest.trim_start_matches(' ');
        let lead = rest.len() - trimmed.len();
        let len = trimmed.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(trimmed.len());
        if len == 0 {
            return None;
        }
        let after = trimmed[len..].trim_start_matches(' ');
        after.starts_with('=').then(|| {
            let consumed = rest.len() - after.len() + 1;
            (&trimmed[..len], consumed.max(lead + len + 1))
        })
    }

    fn quoted(&mut self) -> Result<String, SourceError> {
        if !self.eat('"') {
            return self.fail("'\"'");
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                return self.fail("closing '\"'");
            };
            self.pos += c.len_utf8();
            match c {
                '"' => return Ok(out),
                '\\' => {
                    let e = self.peek();
                    match e {
                        Some('"') => out.push('"'),
                        Some('\\') => out.push('\\'),
                        Some('n') => out.push('\n'),
                        Some('t') => out.push('\t'),
                        Some('r') => out.push('\r'),
                        _ => return self.fail("one of \\\" \\\\ \\n \\t \\r"),
                    }
                    self.pos += 1;
                }
                c => out.push(c),
            }
        }
    }

    /// Scans a parenthesised token, returning its raw text (parens included).
    fn token_span(&mut self) -> Result<&'a str, SourceError> {
        let start = self.pos;
        if !self.eat('(') {
            return self.fail("'('");
        }
        loop {
            match self.peek() {
                None => return self.fail("')'"),
                Some(')') => {
                    self.pos += 1;
                    return Ok(&self.src[start..self.pos]);
                }
                Some('"') => {
                    self.quoted()?;
                }
                Some(c) => self.pos += c.len_utf8(),
            }
        }
    }

    fn record(&mut self) -> Result<RawRecord<'a>, SourceError> {
        self.skip_spaces();
        let offset = self.pos;
        let len = self.run(|c| !matches!(c, ',' | ']' | '[' | '"' | '=' | '(' | ')'));
        let name = self.rest()[..len].trim();
        if name.is_empty() {
            return self.fail("component name");
        }
        self.pos += len;
        let mut rec = RawRecord {
            offset,
            name,
            iteration: None,
            prob: None,
            time: None,
            token: None,
            source: None,
        };
        loop {
            self.skip_spaces();
            if self.peek() != Some(',') {
                break;
            }
            let comma = self.pos;
            self.pos += 1;
            let Some((key, consumed)) = self.lookahead_key() else {
                // the comma starts the next record
                self.pos = comma;
                break;
            };
            self.pos += consumed;
            self.skip_spaces();
            let at = self.pos;
            let duplicate = match key {
                "iteration" => {
                    let len = self.run(|c| c.is_ascii_digit());
                    let Ok(n) = self.rest()[..len].parse::<u64>() else {
                        return self.fail("non-negative integer iteration");
                    };
                    self.pos += len;
                    rec.iteration.replace((n, at)).is_some()
                }
                "prob" => {
                    let len = self.run(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+'));
                    let Ok(d) = self.rest()[..len].parse::<Decimal>() else {
                        return self.fail("decimal probability");
                    };
                    if !d.is_probability() {
                        return self.fail("probability in [0, 1]");
                    }
                    self.pos += len;
                    rec.prob.replace((d, at)).is_some()
                }
                "time" => {
                    let len = self.run(|c| !matches!(c, ',' | ']'));
                    let t = self.rest()[..len].trim_end();
                    if t.is_empty() {
                        return self.fail("timestamp");
                    }
                    self.pos += len;
                    rec.time.replace((t, at)).is_some()
                }
                "token" => {
                    let span = self.token_span()?;
                    rec.token.replace((span, at)).is_some()
                }
                "source" => {
                    let s = self.quoted()?;
                    rec.source.replace((s, at)).is_some()
                }
                _ => {
                    self.pos = at;
                    return self.fail("one of iteration, prob, time, token, source");
                }
            };
            if duplicate {
                self.pos = at;
                return self.fail(&format!("at most one {key}="));
            }
        }
        Ok(rec)
    }

    fn records(&mut self) -> Result<Vec<RawRecord<'a>>, SourceError> {
        self.skip_spaces();
        if self.rest().is_empty() {
            return Ok(Vec::new());
        }
        if !self.eat('[') {
            return self.fail("'['");
        }
        let mut out = Vec::new();
        self.skip_spaces();
        if !self.eat(']') {
            loop {
                out.push(self.record()?);
                self.skip_spaces();
                if self.eat(']') {
                    break;
                }
                if !self.eat(',') {
                    return self.fail("',' or ']'");
                }
            }
        }
        self.skip_spaces();
        if !self.rest().is_empty() {
            return self.fail("end of field");
        }
        Ok(out)
    }
}

fn split_records(field13: &str) -> Result<Vec<RawRecord<'_>>, SourceError> {
    Scanner { src: field13, pos: 0 }.records()
}

/// Number of component records in field 13 (unknown components included).
pub fn count_records(field13: &str) -> Result<usize, SourceError> {
    split_records(field13).map(|r| r.len())
}

fn split_token_parts(inner: &str) -> Result<Vec<String>, TokenShapeError> {
    let mut parts = Vec::new();
    let mut s = Scanner { src: inner, pos: 0 };
    loop {
        s.skip_spaces();
        let part = if s.peek() == Some('"') {
            let q = s.quoted().map_err(|e| TokenShapeError(e.to_string()))?;
            s.skip_spaces();
            q
        } else {
            let len = s.run(|c| !matches!(c, ',' | '"' | '(' | ')'));
            let p = s.rest()[..len].trim().to_owned();
            s.pos += len;
            p
        };
        if part.is_empty() {
            return Err(TokenShapeError("empty token part".into()));
        }
        parts.push(part);
        match s.peek() {
            None => return Ok(parts),
            Some(',') => s.pos += 1,
            Some(c) => return Err(TokenShapeError(format!("unexpected {c:?} in token"))),
        }
    }
}

/// Parses a parenthesised token such as `(Paris,France)`.
///
/// LatLong records carry `(entity,latitude,longitude)`; every other
/// component carries a pair, read as a generalization when the belief's
/// relation is `generalizations` and as a relation otherwise.
pub fn parse_token(s: &str, component: ComponentId, relation: &str) -> Result<Token, TokenShapeError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| TokenShapeError(format!("token must be parenthesised: {s:?}")))?;
    let mut parts = split_token_parts(inner)?;
    if component == ComponentId::LatLong {
        if parts.len() != 3 {
            return Err(TokenShapeError(format!(
                "LatLong token needs entity, latitude and longitude, found {} parts",
                parts.len()
            )));
        }
        let latitude = schema::latitude(&parts[1]).map_err(TokenShapeError)?;
        let longitude = schema::longitude(&parts[2]).map_err(TokenShapeError)?;
        return Ok(Token::Geo {
            entity: parts.swap_remove(0),
            latitude,
            longitude,
        });
    }
    if parts.len() != 2 {
        return Err(TokenShapeError(format!(
            "{component} token needs two parts, found {}",
            parts.len()
        )));
    }
    let value = parts.pop().expect("two parts");
    let entity = parts.pop().expect("two parts");
    Ok(if is_generalization(relation) {
        Token::Generalization {
            entity,
            generalization_value: value,
        }
    } else {
        Token::Relation {
            entity,
            relation_value: value,
        }
    })
}

pub(crate) fn is_generalization(relation: &str) -> bool {
    relation == "generalizations" || relation == "concept:generalizations"
}

/// Parses field 13 into component executions, in record order.
///
/// For candidate rows `iterations` and `probabilities` are the parsed
/// fields 4 and 5 and must have one entry per record; a record may repeat
/// its own `iteration=`/`prob=` only if the values agree. For promoted
/// rows both slices are empty and each record supplies its own values,
/// if any.
/// `relation` is the belief's relation (field 2), used to type tokens.
pub fn parse_candidate_source(
    field13: &str,
    iterations: &[u64],
    probabilities: &[Decimal],
    relation: &str,
) -> Result<ParsedSource, SourceError> {
    let records = split_records(field13)?;
    let aligned = !iterations.is_empty() || !probabilities.is_empty();
    if aligned && (iterations.len() != records.len() || probabilities.len() != records.len()) {
        return Err(SourceError::Arity {
            records: records.len(),
            iterations: iterations.len(),
            probabilities: probabilities.len(),
        });
    }
    let mut parsed = ParsedSource::default();
    for (index, rec) in records.into_iter().enumerate() {
        let Some((component, alias)) = ComponentId::resolve(rec.name) else {
            parsed.diagnostics.push(SourceDiagnostic::UnknownComponent {
                index,
                name: rec.name.to_owned(),
            });
            continue;
        };
        let grammar = |offset: usize, expected: &str| SourceError::Grammar {
            offset,
            expected: expected.to_owned(),
        };
        let iteration = match (aligned.then(|| iterations[index]), rec.iteration) {
            (Some(list), Some((own, at))) if list != own => {
                return Err(grammar(at, "iteration matching field 4"));
            }
            (list, own) => list.or(own.map(|(n, _)| n)),
        };
        let probability = match (aligned.then(|| &probabilities[index]), rec.prob) {
            (Some(list), Some((own, at))) if *list != own => {
                return Err(grammar(at, "prob matching field 5"));
            }
            (list, own) => list.cloned().or(own.map(|(d, _)| d)),
        };
        let (time_text, time_at) = rec.time.ok_or_else(|| grammar(rec.offset, "time="))?;
        let time: Timestamp = time_text.parse().map_err(|_| grammar(time_at, "xsd:dateTime timestamp"))?;
        let (token_text, token_at) = rec.token.ok_or_else(|| grammar(rec.offset, "token="))?;
        let token = parse_token(token_text, component, relation).map_err(|source| SourceError::Token {
            offset: token_at,
            source,
        })?;
        let (source, source_at) = rec.source.ok_or_else(|| grammar(rec.offset, "source="))?;
        let payload = schema::decode(component, &source).map_err(|message| SourceError::Payload {
            component,
            offset: source_at,
            message,
        })?;
        if let ComponentPayload::Rl { rule_scores } = &payload {
            for v in rule_scores.rule.free_variables() {
                parsed.diagnostics.push(SourceDiagnostic::FreeRuleVariable {
                    index,
                    variable: v.to_owned(),
                });
            }
        }
        parsed.executions.push(ComponentExecution {
            component,
            alias,
            iteration,
            probability,
            time,
            token,
            source,
            payload,
        });
    }
    Ok(parsed)
}
