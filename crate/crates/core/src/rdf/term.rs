use std::fmt;

use thiserror::Error;

use super::vocab::{rdf, xsd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("invalid IRI {0:?}: expected an absolute IRI with a scheme")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
}

/// An absolute IRI. Construction goes through [`Iri::new`], which
/// percent-encodes characters that N-Triples forbids inside `<...>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(s: impl AsRef<str>) -> Result<Self, TermError> {
        let s = s.as_ref();
        if !has_scheme(s) {
            return Err(TermError::InvalidIri(s.to_owned()));
        }
        Ok(Iri(percent_encode_disallowed(s)))
    }

    /// For compile-time vocabulary constants that are known to be valid.
    pub(crate) fn from_static(s: &'static str) -> Self {
        debug_assert!(has_scheme(s));
        Iri(s.to_owned())
    }

    /// Appends an already-encoded suffix. The result is still absolute.
    pub fn join(&self, suffix: &str) -> Iri {
        let mut s = String::with_capacity(self.0.len() + suffix.len());
        s.push_str(&self.0);
        s.push_str(suffix);
        Iri(percent_encode_disallowed_owned(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

fn has_scheme(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

fn is_disallowed_in_iri(c: char) -> bool {
    c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

fn percent_encode_disallowed(s: &str) -> String {
    if !s.chars().any(is_disallowed_in_iri) {
        return s.to_owned();
    }
    let mut out = String::with_capacity(s.len() + 8);
    push_encoded(&mut out, s);
    out
}

fn percent_encode_disallowed_owned(s: String) -> String {
    if !s.chars().any(is_disallowed_in_iri) {
        return s;
    }
    let mut out = String::with_capacity(s.len() + 8);
    push_encoded(&mut out, &s);
    out
}

fn push_encoded(out: &mut String, s: &str) {
    let mut buf = [0u8; 4];
    for c in s.chars() {
        if is_disallowed_in_iri(c) {
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        } else {
            out.push(c);
        }
    }
}

/// Builds an IRI term, percent-encoding characters that cannot appear in
/// an N-Triples IRI reference. Encoding is idempotent since `%` is kept.
pub fn mk_iri(s: &str) -> Result<Term, TermError> {
    Iri::new(s).map(Term::Iri)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(TermError::InvalidBlankNode(label));
        }
        Ok(BlankNode(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LiteralKind {
    Typed(Iri),
    /// Language-tagged; the datatype is implicitly `rdf:langString`.
    Lang(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    kind: LiteralKind,
}

impl Literal {
    /// A plain string, datatype `xsd:string`.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal::typed(lexical, xsd::string())
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Typed(datatype),
        }
    }

    pub fn lang(lexical: impl Into<String>, tag: &str) -> Result<Self, TermError> {
        let valid = !tag.is_empty()
            && tag.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && if i == 0 {
                        part.chars().all(|c| c.is_ascii_alphabetic())
                    } else {
                        part.chars().all(|c| c.is_ascii_alphanumeric())
                    }
            });
        if !valid {
            return Err(TermError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Literal {
            lexical: lexical.into(),
            kind: LiteralKind::Lang(tag.to_ascii_lowercase()),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn kind(&self) -> &LiteralKind {
        &self.kind
    }

    pub fn datatype(&self) -> Iri {
        match &self.kind {
            LiteralKind::Typed(dt) => dt.clone(),
            LiteralKind::Lang(_) => rdf::lang_string(),
        }
    }

    pub fn language(&self) -> Option<&str> {
        match &self.kind {
            LiteralKind::Lang(tag) => Some(tag),
            LiteralKind::Typed(_) => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        write_escaped(f, &self.lexical)?;
        f.write_str("\"")?;
        match &self.kind {
            LiteralKind::Lang(tag) => write!(f, "@{tag}"),
            LiteralKind::Typed(dt) if dt.as_str() == xsd::STRING => Ok(()),
            LiteralKind::Typed(dt) => write!(f, "^^{dt}"),
        }
    }
}

/// N-Triples string escaping: `\"`, `\\`, `\n`, `\r`, `\t`, and `\uXXXX`
/// for the remaining control characters below U+0020.
fn write_escaped(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    let mut start = 0;
    for (i, c) in s.char_indices() {
        let esc: Option<&str> = match c {
            '"' => Some("\\\""),
            '\\' => Some("\\\\"),
            '\n' => Some("\\n"),
            '\r' => Some("\\r"),
            '\t' => Some("\\t"),
            c if c < ' ' => None,
            _ => continue,
        };
        f.write_str(&s[start..i])?;
        match esc {
            Some(e) => f.write_str(e)?,
            None => write!(f, "\\u{:04X}", c as u32)?,
        }
        start = i + c.len_utf8();
    }
    f.write_str(&s[start..])
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

/// Subject position: IRI or blank node, never a literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Iri(Iri),
    BlankNode(BlankNode),
}

impl Subject {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Subject::Iri(iri) => Some(iri),
            Subject::BlankNode(_) => None,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Iri(iri) => iri.fmt(f),
            Subject::BlankNode(b) => b.fmt(f),
        }
    }
}

impl From<Iri> for Subject {
    fn from(iri: Iri) -> Self {
        Subject::Iri(iri)
    }
}

impl From<BlankNode> for Subject {
    fn from(b: BlankNode) -> Self {
        Subject::BlankNode(b)
    }
}

impl From<Subject> for Term {
    fn from(s: Subject) -> Self {
        match s {
            Subject::Iri(iri) => Term::Iri(iri),
            Subject::BlankNode(b) => Term::BlankNode(b),
        }
    }
}

impl TryFrom<Term> for Subject {
    type Error = Term;

    fn try_from(t: Term) -> Result<Self, Term> {
        match t {
            Term::Iri(iri) => Ok(Subject::Iri(iri)),
            Term::BlankNode(b) => Ok(Subject::BlankNode(b)),
            other => Err(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Subject,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Subject>, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }

    pub fn in_graph(self, graph: Option<Iri>) -> Quad {
        Quad { triple: self, graph }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

/// A triple plus its graph; `None` is the default graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub triple: Triple,
    pub graph: Option<Iri>,
}

impl Quad {
    pub fn default_graph(triple: Triple) -> Self {
        Quad { triple, graph: None }
    }
}

impl From<Triple> for Quad {
    fn from(t: Triple) -> Self {
        Quad::default_graph(t)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.triple;
        match &self.graph {
            Some(g) => write!(f, "{} {} {} {} .", t.subject, t.predicate, t.object, g),
            None => t.fmt(f),
        }
    }
}
