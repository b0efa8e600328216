use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nell2rdf::diagnostics::DiagnosticSink;
use nell2rdf::fixtures::{generate, FixtureConfig};
use nell2rdf::ingest::BeliefKind;
use nell2rdf::namespaces::{Namespaces, DEFAULT_BASE_IRI};
use nell2rdf::pipeline::verify::verify_cross_model;
use nell2rdf::pipeline::{run_convert, RunConfig, DEFAULT_CHUNK_ROWS};
use nell2rdf::reify::ModelId;

/// Converts NELL knowledge-base dumps into RDF.
#[derive(Parser)]
#[command(name = "nell2rdf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Promoted,
    #[value(alias = "candidates")]
    Candidate,
}

impl From<Kind> for BeliefKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Promoted => BeliefKind::Promoted,
            Kind::Candidate => BeliefKind::Candidate,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Convert an ontology file and one belief dump.
    Convert {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        beliefs: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// reification, nary, ngraphs, singleton, ndfluents or all. Repeatable.
        #[arg(long = "model", default_value = "all", value_delimiter = ',')]
        models: Vec<String>,
        #[arg(long, env = "NELL2RDF_BASE_IRI", default_value = DEFAULT_BASE_IRI)]
        base_iri: String,
        #[arg(long)]
        out: PathBuf,
        /// Zero wall time in stats.json so reruns are byte-identical.
        #[arg(long)]
        deterministic: bool,
        #[arg(long)]
        gzip: bool,
        /// Also assert candidate base triples under reification and n-ary.
        #[arg(long)]
        assert_candidates: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Write the named-graphs model as TriG.
        #[arg(long)]
        trig: bool,
        #[arg(long, default_value_t = DEFAULT_CHUNK_ROWS, hide = true)]
        chunk_rows: usize,
    },
    /// Check that several model outputs encode the same beliefs.
    Verify {
        /// MODEL:FILE, one per output.
        #[arg(long = "model", required = true)]
        files: Vec<String>,
        #[arg(long, env = "NELL2RDF_BASE_IRI", default_value = DEFAULT_BASE_IRI)]
        base_iri: String,
    },
    /// Write a synthetic ontology, promoted and candidate dump.
    GenFixtures {
        #[arg(long)]
        beliefs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Share of promoted rows below the promotion threshold.
        #[arg(long, default_value_t = 0.02)]
        low_confidence: f64,
    },
}

fn parse_models(list: &[String]) -> Result<Vec<ModelId>> {
    let mut out = Vec::new();
    for m in list {
        if m == "all" {
            out.extend(ModelId::ALL);
        } else {
            out.push(m.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Convert {
            ontology,
            beliefs,
            kind,
            models,
            base_iri,
            out,
            deterministic,
            gzip,
            assert_candidates,
            workers,
            trig,
            chunk_rows,
        } => {
            let mut cfg = RunConfig::new(ontology, beliefs, kind.into(), out);
            cfg.models = parse_models(&models)?;
            cfg.base_iri = base_iri;
            cfg.deterministic = deterministic;
            cfg.gzip = gzip;
            cfg.assert_candidates = assert_candidates;
            cfg.workers = workers;
            cfg.trig = trig;
            cfg.chunk_rows = chunk_rows;
            let sink = DiagnosticSink::stderr();
            let stats = run_convert(&cfg, &sink)?;
            eprintln!(
                "converted {} of {} rows ({} skipped, {} diagnostics) into {}",
                stats.beliefs_converted,
                stats.rows_read,
                stats.rows_skipped,
                stats.diagnostics,
                cfg.out_dir.display()
            );
            Ok(true)
        }
        Command::Verify { files, base_iri } => {
            let mut tagged = Vec::with_capacity(files.len());
            for f in &files {
                let Some((m, path)) = f.split_once(':') else {
                    bail!("expected MODEL:FILE, got {f:?}");
                };
                tagged.push((m.parse::<ModelId>()?, PathBuf::from(path)));
            }
            let ns = Namespaces::new(&base_iri)?;
            let report = verify_cross_model(&tagged, &ns)?;
            for m in &report.models {
                println!(
                    "{}\t{}\tquads={}\tbeliefs={}\tcanonical={}",
                    m.model,
                    m.path.display(),
                    m.quads,
                    m.base_statements,
                    m.canonical.len()
                );
            }
            match &report.divergence {
                None => println!("PASS: {} outputs agree", report.models.len()),
                Some(d) => println!("FAIL: {d}"),
            }
            Ok(report.consistent())
        }
        Command::GenFixtures {
            beliefs,
            seed,
            out,
            low_confidence,
        } => {
            if !(0.0..=1.0).contains(&low_confidence) {
                bail!("--low-confidence must be within [0, 1]");
            }
            let mut cfg = FixtureConfig::new(beliefs, seed);
            cfg.low_confidence = low_confidence;
            let paths = generate(&out, &cfg).with_context(|| format!("writing fixtures to {}", out.display()))?;
            for p in [&paths.ontology, &paths.promoted, &paths.candidates] {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
