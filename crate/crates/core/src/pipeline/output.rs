//! Output files: naming, optional gzip, and the per-format writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use flate2::write::GzEncoder;
use flate2::{Compression, GzBuilder};

use crate::ingest::BeliefKind;
use crate::rdf::vocab::media_types;
use crate::rdf::write::StreamingTrigWriter;
use crate::rdf::Quad;
use crate::reify::ModelId;

/// Fixed so that gzip output is reproducible.
pub const GZIP_LEVEL: u32 = 6;

pub const ONTOLOGY_FILE: &str = "nellrdf.ontology.nt";
pub const PROV_ONTOLOGY_FILE: &str = "nellrdf.prov-ontology.nt";
pub const STATS_FILE: &str = "stats.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    NTriples,
    NQuads,
    Trig,
}

impl Syntax {
    pub fn extension(self) -> &'static str {
        match self {
            Syntax::NTriples => "nt",
            Syntax::NQuads => "nq",
            Syntax::Trig => "trig",
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            Syntax::NTriples => media_types::N_TRIPLES,
            Syntax::NQuads => media_types::N_QUADS,
            Syntax::Trig => media_types::TRIG,
        }
    }

    /// Syntax of a file, judged by its extension (a trailing `.gz` is ignored).
    pub fn from_path(path: &Path) -> Option<Syntax> {
        let name = path.file_name()?.to_str()?;
        let name = name.strip_suffix(".gz").unwrap_or(name);
        match name.rsplit_once('.')?.1 {
            "nt" => Some(Syntax::NTriples),
            "nq" => Some(Syntax::NQuads),
            "trig" => Some(Syntax::Trig),
            _ => None,
        }
    }

    pub fn for_model(model: ModelId, trig: bool) -> Syntax {
        match (model.uses_quads(), trig) {
            (false, _) => Syntax::NTriples,
            (true, false) => Syntax::NQuads,
            (true, true) => Syntax::Trig,
        }
    }
}

/// `nellrdf.<promoted|candidates>.<model>.<ext>[.gz]`
pub fn belief_file_name(kind: BeliefKind, model: ModelId, syntax: Syntax, gzip: bool) -> String {
    let gz = if gzip { ".gz" } else { "" };
    format!("nellrdf.{}.{}.{}{gz}", kind.as_str(), model.name(), syntax.extension())
}

pub fn metadata_file_name(kind: BeliefKind) -> String {
    format!("nellrdf.{}.metadata.nt", kind.as_str())
}

/// A file, optionally gzip-compressed with a zero mtime and no file name.
pub enum OutFile {
    Plain(BufWriter<File>),
    Gzip(GzEncoder<BufWriter<File>>),
}

impl OutFile {
    pub fn create(path: &Path, gzip: bool) -> io::Result<OutFile> {
        let file = BufWriter::with_capacity(1 << 20, File::create(path)?);
        Ok(if gzip {
            OutFile::Gzip(GzBuilder::new().mtime(0).write(file, Compression::new(GZIP_LEVEL)))
        } else {
            OutFile::Plain(file)
        })
    }

    pub fn finish(self) -> io::Result<()> {
        let mut inner = match self {
            OutFile::Plain(w) => w,
            OutFile::Gzip(gz) => gz.finish()?,
        };
        inner.flush()?;
        inner.into_inner().map_err(|e| e.into_error())?.sync_all()
    }
}

impl Write for OutFile {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            OutFile::Plain(w) => w.write(buf),
            OutFile::Gzip(w) => w.write(buf),
        }
    }

    fn write_all(&mut self, buf: &[u8]) -> io::Result<()> {
        match self {
            OutFile::Plain(w) => w.write_all(buf),
            OutFile::Gzip(w) => w.write_all(buf),
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        match self {
            OutFile::Plain(w) => w.flush(),
            OutFile::Gzip(w) => w.flush(),
        }
    }
}

/// One model's belief output file.
pub enum ModelSink {
    Lines(OutFile),
    Trig(StreamingTrigWriter<OutFile>),
}

impl ModelSink {
    pub fn create(path: &Path, syntax: Syntax, gzip: bool) -> io::Result<ModelSink> {
        let out = OutFile::create(path, gzip)?;
        Ok(match syntax {
            Syntax::Trig => ModelSink::Trig(StreamingTrigWriter::new(out)?),
            Syntax::NTriples | Syntax::NQuads => ModelSink::Lines(out),
        })
    }

    pub fn write_lines(&mut self, text: &str) -> io::Result<()> {
        match self {
            ModelSink::Lines(out) => out.write_all(text.as_bytes()),
            ModelSink::Trig(_) => unreachable!("TriG sinks take quads"),
        }
    }

    pub fn write_quads(&mut self, quads: &[Quad]) -> io::Result<()> {
        match self {
            ModelSink::Trig(w) => quads.iter().try_for_each(|q| w.write_quad(q)),
            ModelSink::Lines(_) => unreachable!("line sinks take text"),
        }
    }

    pub fn finish(self) -> io::Result<()> {
        match self {
            ModelSink::Lines(out) => out.finish(),
            ModelSink::Trig(w) => w.finish()?.finish(),
        }
    }
}
