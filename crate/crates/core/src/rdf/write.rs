//! N-Triples, N-Quads and TriG writers.
//!
//! All writers emit UTF-8 with LF line endings, one statement per line.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Seek, SeekFrom, Write};

use super::{Iri, Quad, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadFormat {
    NQuads,
    Trig,
}

/// Appends one N-Triples line for `t` to `buf`.
pub fn push_triple_line(buf: &mut String, t: &Triple) {
    let _ = writeln!(buf, "{t}");
}

/// Appends one N-Quads line; default-graph quads omit the graph term.
pub fn push_quad_line(buf: &mut String, q: &Quad) {
    let _ = writeln!(buf, "{q}");
}

pub fn serialize_triples<'a, W: Write>(
    triples: impl IntoIterator<Item = &'a Triple>,
    out: &mut W,
) -> io::Result<()> {
    let mut line = String::with_capacity(256);
    for t in triples {
        line.clear();
        push_triple_line(&mut line, t);
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Serializes quads. For TriG, statements are grouped per graph and the
/// groups are written in order of first appearance of their graph.
pub fn serialize_quads<'a, W: Write>(
    quads: impl IntoIterator<Item = &'a Quad>,
    format: QuadFormat,
    out: &mut W,
) -> io::Result<()> {
    match format {
        QuadFormat::NQuads => {
            let mut line = String::with_capacity(256);
            for q in quads {
                line.clear();
                push_quad_line(&mut line, q);
                out.write_all(line.as_bytes())?;
            }
            Ok(())
        }
        QuadFormat::Trig => {
            let mut groups: Vec<(Option<&Iri>, Vec<&Triple>)> = Vec::new();
            let mut index: std::collections::HashMap<Option<&Iri>, usize> = Default::default();
            for q in quads {
                let key = q.graph.as_ref();
                let slot = *index.entry(key).or_insert_with(|| {
                    groups.push((key, Vec::new()));
                    groups.len() - 1
                });
                groups[slot].1.push(&q.triple);
            }
            for (graph, triples) in groups {
                write_trig_open(out, graph)?;
                serialize_triples(triples, out)?;
                out.write_all(b"}\n")?;
            }
            Ok(())
        }
    }
}

fn write_trig_open<W: Write>(out: &mut W, graph: Option<&Iri>) -> io::Result<()> {
    match graph {
        Some(g) => writeln!(out, "{g} {{"),
        None => out.write_all(b"{\n"),
    }
}

/// Streaming TriG writer with bounded memory.
///
/// Default-graph triples are written into a single `{ ... }` block at the
/// top of the document; named-graph statements are spooled to a temporary
/// file and appended on [`StreamingTrigWriter::finish`]. Consecutive
/// statements in the same named graph share one block.
pub struct StreamingTrigWriter<W: Write> {
    out: W,
    spool: BufWriter<File>,
    current: Option<Iri>,
    default_open: bool,
}

impl<W: Write> StreamingTrigWriter<W> {
    pub fn new(out: W) -> io::Result<Self> {
        Ok(StreamingTrigWriter {
            out,
            spool: BufWriter::new(tempfile::tempfile()?),
            current: None,
            default_open: false,
        })
    }

    pub fn write_quad(&mut self, q: &Quad) -> io::Result<()> {
        match &q.graph {
            None => {
                if !self.default_open {
                    self.out.write_all(b"{\n")?;
                    self.default_open = true;
                }
                writeln!(self.out, "{}", q.triple)
            }
            Some(g) => {
                if self.current.as_ref() != Some(g) {
                    if self.current.is_some() {
                        self.spool.write_all(b"}\n")?;
                    }
                    writeln!(self.spool, "{g} {{")?;
                    self.current = Some(g.clone());
                }
                writeln!(self.spool, "{}", q.triple)
            }
        }
    }

    pub fn finish(mut self) -> io::Result<W> {
        if self.default_open {
            self.out.write_all(b"}\n")?;
        }
        if self.current.is_some() {
            self.spool.write_all(b"}\n")?;
        }
        let mut spool = self.spool.into_inner().map_err(|e| e.into_error())?;
        spool.seek(SeekFrom::Start(0))?;
        io::copy(&mut BufReader::new(spool), &mut self.out)?;
        Ok(self.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::vocab::xsd;
    use crate::rdf::Literal;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o))
    }

    #[test]
    fn ntriples_quote_escape() {
        let tr = Triple::new(
            iri("http://ex.org/s"),
            iri("http://ex.org/p"),
            Literal::string("a\"b"),
        );
        let mut out = Vec::new();
        serialize_triples([&tr], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "<http://ex.org/s> <http://ex.org/p> \"a\\\"b\" .\n"
        );
    }

    #[test]
    fn ntriples_typed_literal() {
        let tr = Triple::new(
            iri("http://ex.org/s"),
            iri("http://ex.org/p"),
            Literal::typed("0.99", xsd::decimal()),
        );
        assert_eq!(
            tr.to_string(),
            "<http://ex.org/s> <http://ex.org/p> \"0.99\"^^<http://www.w3.org/2001/XMLSchema#decimal> ."
        );
    }

    #[test]
    fn empty_stream_is_empty_output() {
        let mut out = Vec::new();
        serialize_triples(std::iter::empty(), &mut out).unwrap();
        assert!(out.is_empty());
        serialize_quads(std::iter::empty(), QuadFormat::Trig, &mut out).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn nquads_graph_and_default() {
        let named = t("http://s", "http://p", "http://o").in_graph(Some(iri("http://g")));
        let default = Quad::default_graph(t("http://s", "http://p", "http://o"));
        let mut out = Vec::new();
        serialize_quads([&named, &default], QuadFormat::NQuads, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "<http://s> <http://p> <http://o> <http://g> .\n<http://s> <http://p> <http://o> .\n"
        );
    }

    #[test]
    fn trig_groups_by_first_appearance() {
        let g = Some(iri("http://g"));
        let h = Some(iri("http://h"));
        let quads = [
            t("http://s1", "http://p", "http://o").in_graph(g.clone()),
            t("http://s2", "http://p", "http://o").in_graph(h.clone()),
            t("http://s3", "http://p", "http://o").in_graph(g.clone()),
        ];
        let mut out = Vec::new();
        serialize_quads(&quads, QuadFormat::Trig, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "<http://g> {\n<http://s1> <http://p> <http://o> .\n<http://s3> <http://p> <http://o> .\n}\n\
             <http://h> {\n<http://s2> <http://p> <http://o> .\n}\n"
        );
    }

    #[test]
    fn streaming_trig_puts_default_graph_first() {
        let g = Some(iri("http://g"));
        let quads = [
            t("http://s1", "http://p", "http://o").in_graph(g.clone()),
            Quad::default_graph(t("http://m", "http://p", "http://o")),
            t("http://s2", "http://p", "http://o").in_graph(g),
        ];
        let mut w = StreamingTrigWriter::new(Vec::new()).unwrap();
        for q in &quads {
            w.write_quad(q).unwrap();
        }
        let out = String::from_utf8(w.finish().unwrap()).unwrap();
        assert_eq!(
            out,
            "{\n<http://m> <http://p> <http://o> .\n}\n<http://g> {\n<http://s1> <http://p> <http://o> .\n\
             <http://s2> <http://p> <http://o> .\n}\n"
        );
    }
}
