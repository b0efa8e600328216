//! End-to-end conversion: ingest, translate, reify, emit.
//!
//! Belief rows are read in chunks; each chunk is converted in parallel on a
//! bounded worker pool and written back in input order, so output bytes do
//! not depend on the worker count. A belief's statements are always written
//! together.

mod metadata;
mod output;
mod stats;
pub mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

pub use metadata::{emit_dataset_metadata, Distribution};
pub use output::{
    belief_file_name, metadata_file_name, OutFile, Syntax, GZIP_LEVEL, ONTOLOGY_FILE, PROV_ONTOLOGY_FILE, STATS_FILE,
};
pub use stats::{ModelStats, RunStats};

use crate::belief::{translate_belief, BeliefError, TranslatedBelief};
use crate::candidate_source::{parse_candidate_source, ParsedSource, SourceDiagnostic, SourceError};
use crate::diagnostics::{Diagnostic, DiagnosticKind, DiagnosticSink};
use crate::ingest::{
    open_input, parse_belief_line, parse_ontology_line, BeliefKind, DataLines, IngestError, NellBelief, Scores,
};
use crate::namespaces::{NamespaceError, Namespaces};
use crate::ontology::{translate_ontology_assertion, OntologyIndex};
use crate::prov::ProvVocabulary;
use crate::rdf::write::{push_quad_line, push_triple_line};
use crate::rdf::{Quad, Triple};
use crate::reify::{ModelId, ReifiedStatement, Reifier};
use output::ModelSink;

pub const DEFAULT_CHUNK_ROWS: usize = 4096;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub ontology: PathBuf,
    pub beliefs: PathBuf,
    pub kind: BeliefKind,
    pub models: Vec<ModelId>,
    pub base_iri: String,
    pub out_dir: PathBuf,
    /// Report zero wall time so that `stats.json` is reproducible too.
    pub deterministic: bool,
    pub gzip: bool,
    pub assert_candidates: bool,
    pub workers: usize,
    /// Write the named-graphs model as TriG instead of N-Quads.
    pub trig: bool,
    pub chunk_rows: usize,
}

impl RunConfig {
    pub fn new(ontology: impl Into<PathBuf>, beliefs: impl Into<PathBuf>, kind: BeliefKind, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            ontology: ontology.into(),
            beliefs: beliefs.into(),
            kind,
            models: ModelId::ALL.to_vec(),
            base_iri: crate::namespaces::DEFAULT_BASE_IRI.to_owned(),
            out_dir: out_dir.into(),
            deterministic: false,
            gzip: false,
            assert_candidates: false,
            workers: 1,
            trig: false,
            chunk_rows: DEFAULT_CHUNK_ROWS,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Namespace(#[from] NamespaceError),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RowError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Belief(#[from] BeliefError),
    #[error("candidate source: {0}")]
    Source(#[from] SourceError),
}

/// Everything one model writes for one belief.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelOutput {
    pub reified: ReifiedStatement,
    pub metadata: Vec<Triple>,
}

impl ModelOutput {
    /// Statements in output order: encoding, asserted triple, auxiliary
    /// triples, metadata.
    pub fn quads<'a>(&'a self, auxiliary: &'a [Triple]) -> impl Iterator<Item = Quad> + 'a {
        self.reified
            .statement_quads
            .iter()
            .cloned()
            .chain(self.reified.asserted.iter().cloned().map(Quad::from))
            .chain(auxiliary.iter().cloned().map(Quad::from))
            .chain(self.metadata.iter().cloned().map(Quad::from))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvertedBelief {
    pub belief: NellBelief,
    pub translated: TranslatedBelief,
    pub source: ParsedSource,
    pub models: Vec<ModelOutput>,
}

/// Converts parsed belief rows against a frozen ontology index.
#[derive(Debug, Clone)]
pub struct Converter {
    pub ns: Namespaces,
    pub index: OntologyIndex,
    pub reifier: Reifier,
    pub vocab: ProvVocabulary,
    pub models: Vec<ModelId>,
}

impl Converter {
    pub fn new(ns: Namespaces, index: OntologyIndex, models: Vec<ModelId>, assert_candidates: bool) -> Self {
        let mut reifier = Reifier::new(ns.clone());
        reifier.assert_candidates = assert_candidates;
        Converter {
            vocab: ProvVocabulary::new(ns.clone()),
            ns,
            index,
            reifier,
            models,
        }
    }

    pub fn convert_line(&self, line: &str, kind: BeliefKind) -> Result<ConvertedBelief, RowError> {
        let belief = parse_belief_line(line, kind)?;
        self.convert(belief)
    }

    pub fn convert(&self, belief: NellBelief) -> Result<ConvertedBelief, RowError> {
        let translated = translate_belief(&belief, &self.index, &self.ns)?;
        let (iterations, probabilities, promotion) = match &belief.scores {
            Scores::Promoted { iteration, probability } => (&[][..], &[][..], Some((*iteration, probability))),
            Scores::Candidate {
                iterations,
                probabilities,
            } => (&iterations[..], &probabilities[..], None),
        };
        let source = parse_candidate_source(&belief.candidate_source, iterations, probabilities, &belief.relation)?;
        let kind = belief.kind();
        let models = self
            .models
            .iter()
            .map(|&m| {
                let reified = self.reifier.reify(&translated.base, m, kind);
                let mut metadata = self.vocab.emit_belief_node(&reified.attachment, kind, promotion);
                for (i, e) in source.executions.iter().enumerate() {
                    self.vocab
                        .emit_execution(&reified.attachment, &reified.hash, e, i, &mut metadata);
                }
                ModelOutput { reified, metadata }
            })
            .collect();
        Ok(ConvertedBelief {
            belief,
            translated,
            source,
            models,
        })
    }
}

/// Serialized output of one row, per model, plus what the row contributes
/// to the run statistics.
struct RowOutcome {
    line: usize,
    result: Result<RowData, RowError>,
}

struct RowData {
    per_model: Vec<RowText>,
    counts: Vec<ModelStats>,
    iri_object: bool,
    components: Vec<usize>,
    diagnostics: Vec<Diagnostic>,
    promotion_warning: bool,
}

enum RowText {
    Lines(String),
    Quads(Vec<Quad>),
}

fn render_row(c: ConvertedBelief, syntaxes: &[Syntax], file: &str, line: usize) -> RowData {
    let aux = &c.translated.auxiliary;
    let mut per_model = Vec::with_capacity(c.models.len());
    let mut counts = Vec::with_capacity(c.models.len());
    for (m, syntax) in c.models.iter().zip(syntaxes) {
        let stats = ModelStats {
            encoding_statements: m.reified.statement_quads.len() as u64,
            asserted_triples: u64::from(m.reified.asserted.is_some()),
            auxiliary_triples: aux.len() as u64,
            metadata_triples: m.metadata.len() as u64,
            total_statements: (m.reified.statement_quads.len()
                + usize::from(m.reified.asserted.is_some())
                + aux.len()
                + m.metadata.len()) as u64,
            ..ModelStats::default()
        };
        counts.push(stats);
        per_model.push(match syntax {
            Syntax::Trig => RowText::Quads(m.quads(aux).collect()),
            Syntax::NTriples => {
                let mut s = String::with_capacity(256 * (aux.len() + m.metadata.len() + 6));
                for q in m.quads(aux) {
                    push_triple_line(&mut s, &q.triple);
                }
                RowText::Lines(s)
            }
            Syntax::NQuads => {
                let mut s = String::with_capacity(256 * (aux.len() + m.metadata.len() + 6));
                for q in m.quads(aux) {
                    push_quad_line(&mut s, &q);
                }
                RowText::Lines(s)
            }
        });
    }
    let mut diagnostics = Vec::new();
    for d in &c.source.diagnostics {
        let (kind, message) = match d {
            SourceDiagnostic::UnknownComponent { index, name } => (
                DiagnosticKind::UnknownComponent,
                format!("record {index}: unknown component {name:?} skipped"),
            ),
            SourceDiagnostic::FreeRuleVariable { index, variable } => (
                DiagnosticKind::FreeRuleVariable,
                format!("record {index}: rule variable {variable:?} is never bound"),
            ),
        };
        diagnostics.push(Diagnostic::new(kind, message).at(Some(file), line));
    }
    for d in &c.translated.dropped {
        diagnostics.push(Diagnostic::new(DiagnosticKind::DroppedAuxiliary, d.as_str()).at(Some(file), line));
    }
    let promotion_warning = c.belief.below_promotion_threshold();
    if promotion_warning {
        let p = match &c.belief.scores {
            Scores::Promoted { probability, .. } => probability.to_string(),
            Scores::Candidate { .. } => unreachable!("only promoted beliefs are checked"),
        };
        diagnostics.push(
            Diagnostic::new(
                DiagnosticKind::PromotionThresholdWarning,
                format!("promoted belief has probability {p}, below {}", crate::ingest::PROMOTION_THRESHOLD),
            )
            .at(Some(file), line),
        );
    }
    RowData {
        per_model,
        counts,
        iri_object: c.translated.base.object.as_iri().is_some(),
        components: c.source.executions.iter().map(|e| e.component as usize).collect(),
        diagnostics,
        promotion_warning,
    }
}

fn write_lines<'a>(path: &Path, triples: impl IntoIterator<Item = &'a Triple>) -> Result<u64, PipelineError> {
    let mut out = OutFile::create(path, false).map_err(io_err(path))?;
    let mut buf = String::new();
    let mut n = 0;
    for t in triples {
        push_triple_line(&mut buf, t);
        n += 1;
    }
    out.write_all(buf.as_bytes()).map_err(io_err(path))?;
    out.finish().map_err(io_err(path))?;
    Ok(n)
}

/// Reads and translates the ontology file. Returns the index, the
/// translated triples, and the number of diagnostics emitted.
pub fn load_ontology(
    path: &Path,
    ns: &Namespaces,
    sink: &DiagnosticSink,
) -> Result<(OntologyIndex, Vec<Triple>, u64), PipelineError> {
    let file = path.display().to_string();
    let mut assertions = Vec::new();
    let mut diagnostics = 0u64;
    let emit = |d: Diagnostic, n: &mut u64| -> Result<(), PipelineError> {
        *n += 1;
        sink.emit(&d).map_err(io_err(path))
    };
    for item in DataLines::new(open_input(path).map_err(io_err(path))?) {
        let (line_no, line) = item.map_err(io_err(path))?;
        match parse_ontology_line(&line) {
            Ok(a) => assertions.push((line_no, a)),
            Err(e) => emit(
                Diagnostic::new(DiagnosticKind::MalformedRow, e.to_string()).at(Some(&file), line_no),
                &mut diagnostics,
            )?,
        }
    }
    let index = OntologyIndex::build(assertions.iter().map(|(_, a)| a));
    let mut triples = Vec::new();
    for (line_no, a) in &assertions {
        let t = translate_ontology_assertion(a, &index, ns);
        triples.extend(t.triples);
        for m in t.diagnostics {
            emit(
                Diagnostic::new(DiagnosticKind::UnsupportedOntologyValue, m).at(Some(&file), *line_no),
                &mut diagnostics,
            )?;
        }
    }
    Ok((index, triples, diagnostics))
}

/// Runs one conversion. Row-level problems become diagnostics and skip
/// counts; only I/O and configuration errors are fatal.
pub fn run_convert(cfg: &RunConfig, sink: &DiagnosticSink) -> Result<RunStats, PipelineError> {
    let started = Instant::now();
    let ns = Namespaces::new(&cfg.base_iri)?;
    fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    let mut stats = RunStats::new(cfg.kind.as_str());

    let (index, ontology, ontology_diagnostics) = load_ontology(&cfg.ontology, &ns, sink)?;
    stats.diagnostics += ontology_diagnostics;
    let path = cfg.out_dir.join(ONTOLOGY_FILE);
    stats.ontology_triples = write_lines(&path, &ontology)?;
    let path = cfg.out_dir.join(PROV_ONTOLOGY_FILE);
    stats.prov_ontology_triples = write_lines(&path, &ProvVocabulary::new(ns.clone()).emit_ontology())?;

    let conv = Converter::new(ns.clone(), index, cfg.models.clone(), cfg.assert_candidates);
    let syntaxes: Vec<Syntax> = cfg.models.iter().map(|&m| Syntax::for_model(m, cfg.trig)).collect();
    let names: Vec<String> = cfg
        .models
        .iter()
        .zip(&syntaxes)
        .map(|(&m, &s)| belief_file_name(cfg.kind, m, s, cfg.gzip))
        .collect();
    let mut sinks = Vec::with_capacity(names.len());
    for (name, &syntax) in names.iter().zip(&syntaxes) {
        let path = cfg.out_dir.join(name);
        sinks.push(ModelSink::create(&path, syntax, cfg.gzip).map_err(io_err(&path))?);
    }
    let mut model_stats: Vec<ModelStats> = names
        .iter()
        .zip(&syntaxes)
        .map(|(name, s)| ModelStats {
            file: name.clone(),
            media_type: s.media_type().to_owned(),
            ..ModelStats::default()
        })
        .collect();
    let mut components = [0u64; 14];

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let file = cfg.beliefs.display().to_string();
    let mut lines = DataLines::new(open_input(&cfg.beliefs).map_err(io_err(&cfg.beliefs))?);
    loop {
        let chunk = lines.next_chunk(cfg.chunk_rows.max(1)).map_err(io_err(&cfg.beliefs))?;
        if chunk.is_empty() {
            break;
        }
        let outcomes: Vec<RowOutcome> = pool.install(|| {
            chunk
                .par_iter()
                .map(|(line_no, line)| RowOutcome {
                    line: *line_no,
                    result: conv
                        .convert_line(line, cfg.kind)
                        .map(|c| render_row(c, &syntaxes, &file, *line_no)),
                })
                .collect()
        });
        drop(chunk);
        for o in outcomes {
            stats.rows_read += 1;
            let row = match o.result {
                Ok(row) => row,
                Err(e) => {
                    stats.rows_skipped += 1;
                    stats.diagnostics += 1;
                    let d = Diagnostic::new(DiagnosticKind::MalformedRow, e.to_string()).at(Some(&file), o.line);
                    sink.emit(&d).map_err(io_err(Path::new("diagnostics")))?;
                    continue;
                }
            };
            stats.beliefs_converted += 1;
            stats.beliefs_with_iri_object += u64::from(row.iri_object);
            stats.promotion_warnings += u64::from(row.promotion_warning);
            for c in row.components {
                components[c] += 1;
            }
            for d in &row.diagnostics {
                stats.diagnostics += 1;
                sink.emit(d).map_err(io_err(Path::new("diagnostics")))?;
            }
            for (i, (text, counts)) in row.per_model.into_iter().zip(row.counts).enumerate() {
                let path = || cfg.out_dir.join(&names[i]);
                match text {
                    RowText::Lines(s) => sinks[i].write_lines(&s).map_err(|e| io_err(&path())(e))?,
                    RowText::Quads(q) => sinks[i].write_quads(&q).map_err(|e| io_err(&path())(e))?,
                }
                let ms = &mut model_stats[i];
                ms.encoding_statements += counts.encoding_statements;
                ms.asserted_triples += counts.asserted_triples;
                ms.auxiliary_triples += counts.auxiliary_triples;
                ms.metadata_triples += counts.metadata_triples;
                ms.total_statements += counts.total_statements;
                if syntaxes[i] == Syntax::NTriples {
                    stats.triples_emitted += counts.total_statements;
                } else {
                    stats.quads_emitted += counts.encoding_statements;
                    stats.triples_emitted += counts.total_statements - counts.encoding_statements;
                }
            }
        }
    }
    for (i, s) in sinks.into_iter().enumerate() {
        let path = cfg.out_dir.join(&names[i]);
        s.finish().map_err(io_err(&path))?;
    }
    sink.flush().map_err(io_err(Path::new("diagnostics")))?;

    for (c, n) in crate::candidate_source::ComponentId::ALL.iter().zip(components) {
        stats.executions_by_component.insert(c.name().to_owned(), n);
    }
    let distributions: Vec<Distribution> = cfg
        .models
        .iter()
        .zip(&model_stats)
        .map(|(&model, ms)| Distribution {
            file_name: ms.file.clone(),
            kind: cfg.kind,
            model,
            media_type: ms.media_type.clone(),
            statements: ms.total_statements,
        })
        .collect();
    let path = cfg.out_dir.join(metadata_file_name(cfg.kind));
    stats.dataset_metadata_triples = write_lines(&path, &emit_dataset_metadata(&ns, &distributions))?;
    for (m, ms) in cfg.models.iter().zip(model_stats) {
        stats.models.insert(m.name().to_owned(), ms);
    }
    stats.wall_time_ms = if cfg.deterministic {
        0
    } else {
        started.elapsed().as_millis() as u64
    };
    let path = cfg.out_dir.join(STATS_FILE);
    fs::write(&path, stats.to_json()).map_err(io_err(&path))?;
    Ok(stats)
}
