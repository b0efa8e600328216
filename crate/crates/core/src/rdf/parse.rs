//! Line-oriented reader for the N-Triples, N-Quads and TriG documents this
//! crate writes. It covers the statement-per-line subset: full TriG or
//! Turtle syntax (prefixes, property lists, collections) is not accepted.

use std::io::BufRead;

use thiserror::Error;

use super::{BlankNode, Iri, Literal, Quad, Subject, Term, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed statement together with the 1-based line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub quad: Quad,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        let r = self.rest();
        r.is_empty() || r.starts_with('#')
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        if !self.eat('<') {
            return self.err("expected '<'");
        }
        let rest = self.rest();
        let Some(end) = rest.find('>') else {
            return self.err("unterminated IRI");
        };
        let raw = &rest[..end];
        if raw.chars().any(|c| c <= ' ' || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')) {
            return self.err("character not allowed in IRI");
        }
        let iri = match Iri::new(raw) {
            Ok(iri) => iri,
            Err(e) => return self.err(e.to_string()),
        };
        self.pos += end + 1;
        Ok(iri)
    }

    fn blank(&mut self) -> Result<BlankNode, ParseError> {
        // caller has checked the "_:" prefix
        self.pos += 2;
        let rest = self.rest();
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let label = &rest[..len];
        self.pos += len;
        BlankNode::new(label).or_else(|e| self.err(e.to_string()))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        self.pos += 1; // opening quote
        let mut lexical = String::new();
        loop {
            let Some(c) = self.peek() else {
                return self.err("unterminated string literal");
            };
            self.pos += c.len_utf8();
            match c {
                '"' => break,
                '\\' => {
                    let Some(e) = self.peek() else {
                        return self.err("dangling escape");
                    };
                    self.pos += 1;
                    match e {
                        't' => lexical.push('\t'),
                        'b' => lexical.push('\u{8}'),
                        'n' => lexical.push('\n'),
                        'r' => lexical.push('\r'),
                        'f' => lexical.push('\u{c}'),
                        '"' => lexical.push('"'),
                        '\'' => lexical.push('\''),
                        '\\' => lexical.push('\\'),
                        'u' | 'U' => {
                            let n = if e == 'u' { 4 } else { 8 };
                            let hex = self.rest().get(..n).unwrap_or("");
                            let Some(ch) = u32::from_str_radix(hex, 16)
                                .ok()
                                .filter(|_| hex.len() == n)
                                .and_then(char::from_u32)
                            else {
                                return self.err("invalid \\u escape");
                            };
                            lexical.push(ch);
                            self.pos += n;
                        }
                        _ => return self.err(format!("unknown escape \\{e}")),
                    }
                }
                '\n' | '\r' => return self.err("raw line break in literal"),
                c => lexical.push(c),
            }
        }
        if self.eat('@') {
            let rest = self.rest();
            let len = rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(rest.len());
            let tag = &rest[..len];
            self.pos += len;
            Literal::lang(lexical, tag).or_else(|e| self.err(e.to_string()))
        } else if self.rest().starts_with("^^") {
            self.pos += 2;
            let dt = self.iri()?;
            Ok(Literal::typed(lexical, dt))
        } else {
            Ok(Literal::string(lexical))
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('<') => self.iri().map(Term::Iri),
            Some('"') => self.literal().map(Term::Literal),
            Some('_') if self.rest().starts_with("_:") => self.blank().map(Term::BlankNode),
            _ => self.err("expected a term"),
        }
    }

    fn statement(&mut self, allow_graph: bool) -> Result<Quad, ParseError> {
        let subject = match self.term()? {
            Term::Literal(_) => return self.err("literal in subject position"),
            t => Subject::try_from(t).expect("non-literal"),
        };
        self.skip_ws();
        let predicate = self.iri()?;
        self.skip_ws();
        let object = self.term()?;
        self.skip_ws();
        let graph = if allow_graph && self.peek() == Some('<') {
            let g = self.iri()?;
            self.skip_ws();
            Some(g)
        } else {
            None
        };
        if !self.eat('.') {
            return self.err("expected '.'");
        }
        self.skip_ws();
        if !self.at_end() {
            return self.err("trailing content after '.'");
        }
        Ok(Quad {
            triple: Triple {
                subject,
                predicate,
                object,
            },
            graph,
        })
    }
}

fn trim_line(line: &str) -> &str {
    line.trim_end_matches(['\n', '\r'])
}

/// Parses a single N-Quads (or N-Triples) line. Blank and comment lines
/// yield `None`.
pub fn parse_nquads_line(line: &str, line_no: usize) -> Result<Option<Quad>, ParseError> {
    let mut c = Cursor {
        src: trim_line(line),
        pos: 0,
        line: line_no,
    };
    c.skip_ws();
    if c.at_end() {
        return Ok(None);
    }
    c.statement(true).map(Some)
}

/// Parses a single N-Triples line; a graph term is an error.
pub fn parse_ntriples_line(line: &str, line_no: usize) -> Result<Option<Triple>, ParseError> {
    let mut c = Cursor {
        src: trim_line(line),
        pos: 0,
        line: line_no,
    };
    c.skip_ws();
    if c.at_end() {
        return Ok(None);
    }
    c.statement(false).map(|q| Some(q.triple))
}

pub fn parse_nquads<R: BufRead>(reader: R) -> Result<Vec<Located>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ParseError {
            line: i + 1,
            column: 0,
            message: e.to_string(),
        })?;
        if let Some(quad) = parse_nquads_line(&line, i + 1)? {
            out.push(Located { line: i + 1, quad });
        }
    }
    Ok(out)
}

pub fn parse_ntriples<R: BufRead>(reader: R) -> Result<Vec<Located>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ParseError {
            line: i + 1,
            column: 0,
            message: e.to_string(),
        })?;
        if let Some(t) = parse_ntriples_line(&line, i + 1)? {
            out.push(Located {
                line: i + 1,
                quad: Quad::default_graph(t),
            });
        }
    }
    Ok(out)
}

/// Parses TriG written one statement per line, with `<g> {`, `{` and `}`
/// on lines of their own.
pub fn parse_trig<R: BufRead>(reader: R) -> Result<Vec<Located>, ParseError> {
    let mut out = Vec::new();
    let mut graph: Option<Option<Iri>> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| ParseError {
            line: line_no,
            column: 0,
            message: e.to_string(),
        })?;
        let mut c = Cursor {
            src: trim_line(&line),
            pos: 0,
            line: line_no,
        };
        c.skip_ws();
        if c.at_end() {
            continue;
        }
        match (&graph, c.peek()) {
            (Some(_), Some('}')) => {
                c.pos += 1;
                c.skip_ws();
                if !c.at_end() {
                    return c.err("trailing content after '}'");
                }
                graph = None;
            }
            (None, Some('{')) => {
                c.pos += 1;
                c.skip_ws();
                if !c.at_end() {
                    return c.err("expected line break after '{'");
                }
                graph = Some(None);
            }
            (None, Some('<')) => {
                let g = c.iri()?;
                c.skip_ws();
                if !c.eat('{') {
                    return c.err("expected '{' after graph name");
                }
                c.skip_ws();
                if !c.at_end() {
                    return c.err("expected line break after '{'");
                }
                graph = Some(Some(g));
            }
            (Some(g), _) => {
                let g = g.clone();
                let q = c.statement(false)?;
                out.push(Located {
                    line: line_no,
                    quad: q.triple.in_graph(g),
                });
            }
            (None, _) => return c.err("statement outside of a graph block"),
        }
    }
    if graph.is_some() {
        return Err(ParseError {
            line: 0,
            column: 0,
            message: "unterminated graph block".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::xsd;
    use crate::rdf::write::{serialize_quads, QuadFormat};

    #[test]
    fn parses_typed_and_lang_literals() {
        let q = parse_nquads_line(
            r#"<http://s> <http://p> "0.99"^^<http://www.w3.org/2001/XMLSchema#decimal> <http://g> ."#,
            1,
        )
        .unwrap()
        .unwrap();
        assert_eq!(q.triple.object, Term::Literal(Literal::typed("0.99", xsd::decimal())));
        assert_eq!(q.graph.unwrap().as_str(), "http://g");

        let t = parse_ntriples_line(r#"<http://s> <http://p> "x\tyé"@en ."#, 1)
            .unwrap()
            .unwrap();
        assert_eq!(t.object, Term::Literal(Literal::lang("x\tyé", "en").unwrap()));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_ntriples_line("<http://s> <http://p> <http://o>", 1).is_err());
        assert!(parse_ntriples_line("\"lit\" <http://p> <http://o> .", 1).is_err());
        assert!(parse_ntriples_line("<http://s> <http://p> <http://o> <http://g> .", 1).is_err());
        assert!(parse_ntriples_line("<s> <http://p> <http://o> .", 1).is_err());
        assert!(parse_ntriples_line("<http://s> <http://p> \"abc .", 1).is_err());
    }

    #[test]
    fn skips_blank_and_comment_lines() {
        assert_eq!(parse_nquads_line("", 1).unwrap(), None);
        assert_eq!(parse_nquads_line("   # hi", 1).unwrap(), None);
        assert_eq!(parse_nquads_line("\r\n", 1).unwrap(), None);
    }

    #[test]
    fn trig_round_trip() {
        let s = Iri::new("http://s").unwrap();
        let p = Iri::new("http://p").unwrap();
        let quads = vec![
            Triple::new(s.clone(), p.clone(), Literal::string("a")).in_graph(Some(Iri::new("http://g").unwrap())),
            Quad::default_graph(Triple::new(s.clone(), p.clone(), Literal::string("b"))),
        ];
        let mut out = Vec::new();
        serialize_quads(&quads, QuadFormat::Trig, &mut out).unwrap();
        let parsed: Vec<Quad> = parse_trig(&out[..]).unwrap().into_iter().map(|l| l.quad).collect();
        assert_eq!(parsed, quads);
    }
}
